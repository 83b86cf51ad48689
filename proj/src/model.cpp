#include "mti/model.hpp"

#include <cmath>
#include <stdexcept>

namespace mti {

void Problem::validate() const {
  if (!(epsilon > 0.0) || !(epsilon <= 1.0))
    throw std::invalid_argument("Problem: epsilon must lie in (0, 1]");
  if (!(alpha >= 0.0)) throw std::invalid_argument("Problem: alpha must be >= 0");
  if (!(horizon_T > 0.0)) throw std::invalid_argument("Problem: horizon_T must be > 0");
  if (const auto* gen = std::get_if<GeneralNonlinearity>(&nonlinearity)) {
    if (!gen->f || !gen->df_dy || !gen->df_dybar)
      throw std::invalid_argument("Problem: general nonlinearity needs f and both Wirtinger derivatives");
    if (gen->quadrature_nodes < 2)
      throw std::invalid_argument("Problem: quadrature_nodes must be >= 2");
  }
}

bool finite_state(const State& s) {
  return std::isfinite(s.y.real()) && std::isfinite(s.y.imag()) &&
         std::isfinite(s.ydot.real()) && std::isfinite(s.ydot.imag());
}

bool unstable_state(const State& s) {
  return !finite_state(s) || std::abs(s.y) > kInstabilityBound;
}

double energy(const Problem& problem, const State& state) {
  const auto* pw = std::get_if<PurePower>(&problem.nonlinearity);
  if (!pw)
    throw std::invalid_argument("energy: closed-form antiderivative only available for pure power nonlinearity");
  const double eps2 = problem.epsilon * problem.epsilon;
  const double rho = std::norm(state.y);
  const double F = pw->lambda * std::pow(rho, pw->p + 1) / (pw->p + 1);
  return eps2 * std::norm(state.ydot) + (problem.alpha + 1.0 / eps2) * rho + F;
}

ErrorPair error_pair(const State& exact, const State& numeric, double epsilon) {
  const double eps2 = epsilon * epsilon;
  return {std::abs(exact.y - numeric.y), eps2 * std::abs(exact.ydot - numeric.ydot)};
}

double error_energy(double epsilon, double alpha, Complex e, Complex edot) {
  const double eps2 = epsilon * epsilon;
  return eps2 * std::norm(edot) + (alpha + 1.0 / eps2) * std::norm(e);
}

std::optional<double> convergence_rate(double error_coarse, double error_fine) {
  if (!(error_coarse > 0.0) || !(error_fine > 0.0)) return std::nullopt;
  if (!std::isfinite(error_coarse) || !std::isfinite(error_fine)) return std::nullopt;
  return 0.5 * std::log2(error_coarse / error_fine);
}

}  // namespace mti
