#include "mti/steppers.hpp"

#include <cmath>
#include <stdexcept>

#include "mti/nonlinearity.hpp"

namespace mti {

namespace {

constexpr Complex kI{0.0, 1.0};

// e^{i x}; Taylor fast path for the tiny per-step phases of reference runs
// (|x| < 1e-3 keeps the truncation below 1e-28).
inline Complex unit_phase_small(double x) {
  if (std::abs(x) < 1e-3) {
    const double x2 = x * x;
    const double c = 1.0 - x2 * (0.5 - x2 * ((1.0 / 24.0) - x2 * (1.0 / 720.0)));
    const double s = x * (1.0 - x2 * ((1.0 / 6.0) - x2 * ((1.0 / 120.0) - x2 * (1.0 / 5040.0))));
    return {c, s};
  }
  return {std::cos(x), std::sin(x)};
}

struct GautschiSums {
  Complex r_part{0, 0};     // sum of p_k g_k + q_k gdot_k and conjugates
  Complex rdot_part{0, 0};  // same with pdot_k, qdot_k
};

// Accumulates the k = 1..p harmonic corrections of the remainder update.
GautschiSums gautschi_sums(const PurePower& pw, const CoefficientSet& cs, const DecomposedState& d) {
  GautschiSums out;
  for (int k = 1; k <= static_cast<int>(cs.gautschi.size()); ++k) {
    const GautschiWeights& w = cs.gautschi[k - 1];
    const Complex gk_p = g_k(pw.lambda, pw.p, k, d.z_plus, d.z_minus);
    const Complex gk_m = g_k(pw.lambda, pw.p, k, d.z_minus, d.z_plus);
    const Complex gd_p =
        flow_derivative_g_k(pw.lambda, pw.p, k, d.z_plus, d.z_minus, d.zdot_plus, d.zdot_minus);
    const Complex gd_m =
        flow_derivative_g_k(pw.lambda, pw.p, k, d.z_minus, d.z_plus, d.zdot_minus, d.zdot_plus);
    out.r_part += w.p * gk_p + w.q * gd_p + std::conj(w.p * gk_m + w.q * gd_m);
    out.rdot_part += w.pdot * gk_p + w.qdot * gd_p + std::conj(w.pdot * gk_m + w.qdot * gd_m);
  }
  return out;
}

}  // namespace

MtiVariant select_mti_variant(Method m, const NonlinearitySpec& spec) {
  const bool power = std::holds_alternative<PurePower>(spec);
  if (m == Method::MtiFa) return power ? MtiVariant::FaPower : MtiVariant::FaGeneral;
  if (m == Method::MtiF) return power ? MtiVariant::FPower : MtiVariant::FGeneral;
  throw std::invalid_argument("select_mti_variant: not a multiscale method");
}

MtiStepper::MtiStepper(const Problem& problem, double tau, MtiVariant variant)
    : problem_(problem), variant_(variant) {
  problem_.validate();
  const bool power_path = variant == MtiVariant::FaPower || variant == MtiVariant::FPower;
  if (power_path && !std::holds_alternative<PurePower>(problem_.nonlinearity))
    throw std::invalid_argument("MtiStepper: power variant requires a pure power nonlinearity");
  const auto* pw = std::get_if<PurePower>(&problem_.nonlinearity);
  const int depth = power_path && pw ? pw->p : 0;
  cs_ = make_coefficients(tau, problem_.epsilon, problem_.alpha, depth);
}

State MtiStepper::step(const State& s) const {
  switch (variant_) {
    case MtiVariant::FaPower: return step_fa_power(s);
    case MtiVariant::FPower: return step_f_power(s);
    case MtiVariant::FaGeneral: return step_fa_general(s);
    default: return step_f_general(s);
  }
}

State MtiStepper::step_fa_power(const State& s) const {
  const auto& pw = std::get<PurePower>(problem_.nonlinearity);
  const double tau = cs_.tau;
  const double inv_eps2 = 1.0 / (cs_.epsilon * cs_.epsilon);
  const DecomposedState d0 = split(problem_, s.y, s.ydot, DecompositionMode::MDFA);

  // exact phase flow of the z equations
  const Complex ph_p = unit_phase_small(d0.mu_plus * tau);
  const Complex ph_m = unit_phase_small(d0.mu_minus * tau);
  DecomposedState d1;
  d1.z_plus = ph_p * d0.z_plus;
  d1.z_minus = ph_m * d0.z_minus;
  d1.zdot_plus = kI * d0.mu_plus * d1.z_plus;
  d1.zdot_minus = kI * d0.mu_minus * d1.z_minus;
  const Complex zddot_p = -(d0.mu_plus * d0.mu_plus) * d1.z_plus;
  const Complex zddot_m = -(d0.mu_minus * d0.mu_minus) * d1.z_minus;

  // remainder via Gautschi weights and the trapezoidal u/h terms
  const GautschiSums sums = gautschi_sums(pw, cs_, d0);
  const Complex core = d0.rdot - 0.5 * tau * d0.u0;
  d1.r = cs_.sin_wt_over_w * core - sums.r_part;

  const Complex zp_rot = cs_.carrier.apply(d1.z_plus);
  const Complex zm_rot = cs_.carrier.apply(d1.z_minus);
  const Complex y_next = zp_rot + std::conj(zm_rot) + d1.r;
  const Complex u_next = cs_.carrier.apply(zddot_p) + std::conj(cs_.carrier.apply(zddot_m));
  const Complex w = y_next - d1.r;
  const Complex h_next = eval_g(pw, std::norm(y_next)) * y_next - eval_g(pw, std::norm(w)) * w;
  d1.rdot = -sums.rdot_part + cs_.apply_cos_wt(core) - 0.5 * tau * (h_next * inv_eps2 + u_next);

  State out;
  out.t = s.t + tau;
  out.y = y_next;
  out.ydot = cs_.carrier.apply(d1.zdot_plus + kI * inv_eps2 * d1.z_plus) +
             std::conj(cs_.carrier.apply(d1.zdot_minus + kI * inv_eps2 * d1.z_minus)) + d1.rdot;
  return out;
}

State MtiStepper::step_f_power(const State& s) const {
  const auto& pw = std::get<PurePower>(problem_.nonlinearity);
  const double tau = cs_.tau;
  const double eps2 = cs_.epsilon * cs_.epsilon;
  const double inv_eps2 = 1.0 / eps2;
  const DecomposedState d0 = split(problem_, s.y, s.ydot, DecompositionMode::MDF);

  const auto [fp0, fm0] = f_pm(problem_.nonlinearity, d0.z_plus, d0.z_minus);
  const auto [fdp0, fdm0] =
      flow_derivative_f_pm(problem_.nonlinearity, d0.z_plus, d0.z_minus, d0.zdot_plus, d0.zdot_minus);

  DecomposedState d1;
  d1.z_plus = cs_.apply_a(d0.z_plus) + cs_.apply_eb(d0.zdot_plus) - cs_.ab.c * fp0 - cs_.ab.d * fdp0;
  d1.z_minus =
      cs_.apply_a(d0.z_minus) + cs_.apply_eb(d0.zdot_minus) - cs_.ab.c * fm0 - cs_.ab.d * fdm0;
  d1.zdot_plus = cs_.ab.adot * d0.z_plus + cs_.apply_ebd(d0.zdot_plus) - cs_.ab.cdot * fp0 -
                 cs_.ab.ddot * fdp0;
  d1.zdot_minus = cs_.ab.adot * d0.z_minus + cs_.apply_ebd(d0.zdot_minus) - cs_.ab.cdot * fm0 -
                  cs_.ab.ddot * fdm0;

  // remainder update: same as the MDFA scheme but without the u terms
  const GautschiSums sums = gautschi_sums(pw, cs_, d0);
  d1.r = cs_.sin_wt_over_w * d0.rdot - sums.r_part;

  const Complex zp_rot = cs_.carrier.apply(d1.z_plus);
  const Complex zm_rot = cs_.carrier.apply(d1.z_minus);
  const Complex y_next = zp_rot + std::conj(zm_rot) + d1.r;
  const Complex w = y_next - d1.r;
  const Complex h_next = eval_g(pw, std::norm(y_next)) * y_next - eval_g(pw, std::norm(w)) * w;
  d1.rdot = cs_.apply_cos_wt(d0.rdot) - 0.5 * tau * inv_eps2 * h_next - sums.rdot_part;

  State out;
  out.t = s.t + tau;
  out.y = y_next;
  out.ydot = cs_.carrier.apply(d1.zdot_plus + kI * inv_eps2 * d1.z_plus) +
             std::conj(cs_.carrier.apply(d1.zdot_minus + kI * inv_eps2 * d1.z_minus)) + d1.rdot;
  return out;
}

State MtiStepper::step_fa_general(const State& s) const {
  const auto& spec = problem_.nonlinearity;
  const double tau = cs_.tau;
  const double alpha = cs_.alpha;
  const double inv_eps2 = 1.0 / (cs_.epsilon * cs_.epsilon);
  const DecomposedState d0 = split(problem_, s.y, s.ydot, DecompositionMode::MDFA);

  const auto [fp0, fm0] = f_pm(spec, d0.z_plus, d0.z_minus);
  const auto [fdp0, fdm0] = flow_derivative_f_pm(spec, d0.z_plus, d0.z_minus, d0.zdot_plus,
                                                 d0.zdot_minus);

  DecomposedState d1;
  d1.z_plus = cs_.exp_alpha_half.apply(d0.z_plus) + cs_.bg.beta1 * fp0 + cs_.bg.beta2 * fdp0;
  d1.z_minus = cs_.exp_alpha_half.apply(d0.z_minus) + cs_.bg.beta1 * fm0 + cs_.bg.beta2 * fdm0;

  const Complex fr0 = f_r(spec, d0.z_plus, d0.z_minus, {0.0, 0.0}, 0.0, cs_.epsilon);
  const Complex core = d0.rdot - 0.5 * tau * d0.u0;
  d1.r = cs_.sin_wt_over_w * core - cs_.bg.gamma1 * fr0;

  // zdot, zddot, u at s = tau, in dependency order
  const auto [fp1, fm1] = f_pm(spec, d1.z_plus, d1.z_minus);
  d1.zdot_plus = 0.5 * kI * (alpha * d1.z_plus + fp1);
  d1.zdot_minus = 0.5 * kI * (alpha * d1.z_minus + fm1);
  const auto [fdp1, fdm1] = flow_derivative_f_pm(spec, d1.z_plus, d1.z_minus, d1.zdot_plus,
                                                 d1.zdot_minus);
  const Complex zddot_p = 0.5 * kI * (alpha * d1.zdot_plus + fdp1);
  const Complex zddot_m = 0.5 * kI * (alpha * d1.zdot_minus + fdm1);
  const Complex u_next = cs_.carrier.apply(zddot_p) + std::conj(cs_.carrier.apply(zddot_m));

  const Complex fr1 = f_r(spec, d1.z_plus, d1.z_minus, d1.r, tau, cs_.epsilon);
  d1.rdot = cs_.apply_cos_wt(core) - 0.5 * tau * u_next - cs_.bg.gamma2 * fr0 - cs_.bg.gamma3 * fr1;

  State out;
  out.t = s.t + tau;
  out.y = cs_.carrier.apply(d1.z_plus) + std::conj(cs_.carrier.apply(d1.z_minus)) + d1.r;
  out.ydot = cs_.carrier.apply(d1.zdot_plus + kI * inv_eps2 * d1.z_plus) +
             std::conj(cs_.carrier.apply(d1.zdot_minus + kI * inv_eps2 * d1.z_minus)) + d1.rdot;
  return out;
}

State MtiStepper::step_f_general(const State& s) const {
  const auto& spec = problem_.nonlinearity;
  const double tau = cs_.tau;
  const double eps2 = cs_.epsilon * cs_.epsilon;
  const double inv_eps2 = 1.0 / eps2;
  const DecomposedState d0 = split(problem_, s.y, s.ydot, DecompositionMode::MDF);

  const auto [fp0, fm0] = f_pm(spec, d0.z_plus, d0.z_minus);
  const auto [fdp0, fdm0] = flow_derivative_f_pm(spec, d0.z_plus, d0.z_minus, d0.zdot_plus,
                                                 d0.zdot_minus);

  DecomposedState d1;
  d1.z_plus = cs_.apply_a(d0.z_plus) + cs_.apply_eb(d0.zdot_plus) - cs_.ab.c * fp0 - cs_.ab.d * fdp0;
  d1.z_minus =
      cs_.apply_a(d0.z_minus) + cs_.apply_eb(d0.zdot_minus) - cs_.ab.c * fm0 - cs_.ab.d * fdm0;
  d1.zdot_plus = cs_.ab.adot * d0.z_plus + cs_.apply_ebd(d0.zdot_plus) - cs_.ab.cdot * fp0 -
                 cs_.ab.ddot * fdp0;
  d1.zdot_minus = cs_.ab.adot * d0.z_minus + cs_.apply_ebd(d0.zdot_minus) - cs_.ab.cdot * fm0 -
                  cs_.ab.ddot * fdm0;

  const Complex fr0 = f_r(spec, d0.z_plus, d0.z_minus, {0.0, 0.0}, 0.0, cs_.epsilon);
  d1.r = cs_.sin_wt_over_w * d0.rdot - cs_.bg.gamma1 * fr0;
  const Complex fr1 = f_r(spec, d1.z_plus, d1.z_minus, d1.r, tau, cs_.epsilon);
  d1.rdot = cs_.apply_cos_wt(d0.rdot) - cs_.bg.gamma2 * fr0 - cs_.bg.gamma3 * fr1;

  State out;
  out.t = s.t + tau;
  out.y = cs_.carrier.apply(d1.z_plus) + std::conj(cs_.carrier.apply(d1.z_minus)) + d1.r;
  out.ydot = cs_.carrier.apply(d1.zdot_plus + kI * inv_eps2 * d1.z_plus) +
             std::conj(cs_.carrier.apply(d1.zdot_minus + kI * inv_eps2 * d1.z_minus)) + d1.rdot;
  return out;
}

RunOutcome run_mti(const Problem& problem, Method method, double tau, long n_steps,
                   std::span<const long> sample_indices) {
  return run_mti_variant(problem, select_mti_variant(method, problem.nonlinearity), tau, n_steps,
                         sample_indices);
}

RunOutcome run_mti_variant(const Problem& problem, MtiVariant variant, double tau, long n_steps,
                           std::span<const long> sample_indices) {
  const MtiStepper stepper(problem, tau, variant);
  RunOutcome out;
  State s{0.0, problem.phi1, problem.phi2 / (problem.epsilon * problem.epsilon)};
  size_t next_sample = 0;
  auto maybe_sample = [&](long n) {
    while (next_sample < sample_indices.size() && sample_indices[next_sample] == n) {
      out.samples.push_back(s);
      ++next_sample;
    }
  };
  maybe_sample(0);
  double max_norm = std::norm(s.y);
  constexpr double kBound2 = kInstabilityBound * kInstabilityBound;
  for (long n = 0; n < n_steps; ++n) {
    s = stepper.step(s);
    const double ny = std::norm(s.y);
    const double nv = std::norm(s.ydot);
    // NaN fails both comparisons, so one branch covers overflow and NaN
    if (!(ny <= kBound2) || !(nv >= 0.0)) {
      out.unstable = true;
      out.steps_done = n + 1;
      out.final_state = s;
      out.max_abs_y = std::sqrt(max_norm);
      return out;
    }
    if (ny > max_norm) max_norm = ny;
    maybe_sample(n + 1);
  }
  out.steps_done = n_steps;
  out.final_state = s;
  out.max_abs_y = std::sqrt(max_norm);
  return out;
}

}  // namespace mti
