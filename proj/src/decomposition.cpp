#include "mti/decomposition.hpp"

#include "mti/nonlinearity.hpp"

namespace mti {

DecomposedState split(const Problem& problem, Complex y_n, Complex ydot_n, DecompositionMode mode) {
  const double eps2 = problem.epsilon * problem.epsilon;
  DecomposedState d;
  const Complex i{0.0, 1.0};
  const Complex ie2y = i * (eps2 * ydot_n);
  d.z_plus = 0.5 * (y_n - ie2y);
  d.z_minus = std::conj(0.5 * (y_n + ie2y));

  if (const auto* pw = std::get_if<PurePower>(&problem.nonlinearity)) {
    const auto [gp, gm] = g_pm(pw->lambda, pw->p, std::norm(d.z_plus), std::norm(d.z_minus));
    d.mu_plus = 0.5 * (gp + problem.alpha);
    d.mu_minus = 0.5 * (gm + problem.alpha);
    d.zdot_plus = i * d.mu_plus * d.z_plus;
    d.zdot_minus = i * d.mu_minus * d.z_minus;
    if (mode == DecompositionMode::MDFA)
      d.u0 = -(d.mu_plus * d.mu_plus) * d.z_plus - (d.mu_minus * d.mu_minus) * std::conj(d.z_minus);
  } else {
    const auto [fp, fm] = f_pm(problem.nonlinearity, d.z_plus, d.z_minus);
    d.zdot_plus = 0.5 * i * (problem.alpha * d.z_plus + fp);
    d.zdot_minus = 0.5 * i * (problem.alpha * d.z_minus + fm);
    if (mode == DecompositionMode::MDFA) {
      const auto [fp_dot, fm_dot] = flow_derivative_f_pm(problem.nonlinearity, d.z_plus, d.z_minus,
                                                         d.zdot_plus, d.zdot_minus);
      // u(0) = zddot+(0) + conj(zddot-(0)) with zddot from the z equation
      d.u0 = 0.5 * i *
             (problem.alpha * (d.zdot_plus - std::conj(d.zdot_minus)) + fp_dot - std::conj(fm_dot));
    }
  }
  d.r = {0.0, 0.0};
  d.rdot = -d.zdot_plus - std::conj(d.zdot_minus);
  return d;
}

State reconstruct(const DecomposedState& d, double t_next, const CoefficientSet& cs) {
  const double inv_eps2 = 1.0 / (cs.epsilon * cs.epsilon);
  const Complex i{0.0, 1.0};
  State s;
  s.t = t_next;
  const Complex zp_rot = cs.carrier.apply(d.z_plus);
  const Complex zm_rot = cs.carrier.apply(d.z_minus);
  s.y = zp_rot + std::conj(zm_rot) + d.r;
  const Complex vp = cs.carrier.apply(d.zdot_plus + i * inv_eps2 * d.z_plus);
  const Complex vm = cs.carrier.apply(d.zdot_minus + i * inv_eps2 * d.z_minus);
  s.ydot = vp + std::conj(vm) + d.rdot;
  return s;
}

}  // namespace mti
