/// Problem and state types for the oscillatory equation
///   eps^2 y'' + (alpha + 1/eps^2) y + f(y) = 0,   y(0) = phi1, y'(0) = phi2/eps^2,
/// together with the energy functional, error metrics and the convergence-rate
/// formula shared by every integrator and by the benchmark harness.
#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <variant>

namespace mti {

using Complex = std::complex<double>;

/// f(y) = g(|y|^2) y with g(rho) = lambda rho^p.
struct PurePower {
  double lambda = 1.0;
  int p = 1;
};

/// Gauge-invariant f given directly, with Wirtinger derivatives df/dy and
/// df/dybar supplied by the caller (f is not holomorphic in general, and the
/// integrators need d/ds f(y(s)) along a flow).
struct GeneralNonlinearity {
  std::function<Complex(Complex)> f;
  std::function<Complex(Complex)> df_dy;
  std::function<Complex(Complex)> df_dybar;
  int quadrature_nodes = 64;
  std::string name = "general";
};

using NonlinearitySpec = std::variant<PurePower, GeneralNonlinearity>;

struct Problem {
  double epsilon = 1.0;   // in (0, 1]
  double alpha = 0.0;     // >= 0
  NonlinearitySpec nonlinearity = PurePower{};
  Complex phi1{1.0, 0.0};
  Complex phi2{1.0, 0.0};
  double horizon_T = 1.0;  // > 0

  /// Throws std::invalid_argument when a field is out of range.
  void validate() const;
};

struct State {
  double t = 0.0;
  Complex y{0.0, 0.0};
  Complex ydot{0.0, 0.0};
};

/// |y_exact - y_num| and eps^2 |ydot_exact - ydot_num|.
struct ErrorPair {
  double e = 0.0;
  double edot_scaled = 0.0;
};

/// Any non-finite component, or |y| beyond this bound, tags a trajectory
/// "unstable" (the explicit methods blow up fast once past the stability
/// threshold, so the exact bound is immaterial).
inline constexpr double kInstabilityBound = 1e8;

bool finite_state(const State& s);
bool unstable_state(const State& s);

/// Total energy eps^2 |y'|^2 + (alpha + 1/eps^2) |y|^2 + F(|y|^2), with
/// F the antiderivative of g. Only available in closed form for PurePower;
/// throws std::invalid_argument for a general nonlinearity.
double energy(const Problem& problem, const State& state);

ErrorPair error_pair(const State& exact, const State& numeric, double epsilon);

/// eps^2 |edot|^2 + (alpha + 1/eps^2) |e|^2, the quadratic form used as an
/// error diagnostic; it dominates both |e|/eps and eps |edot|.
double error_energy(double epsilon, double alpha, Complex e, Complex edot);

/// 0.5 * log2(error_coarse / error_fine) for tau_fine = tau_coarse / 4.
/// nullopt when either error is zero or non-finite.
std::optional<double> convergence_rate(double error_coarse, double error_fine);

}  // namespace mti
