#include "mti/classical.hpp"

#include <cmath>
#include <stdexcept>

#include "mti/coefficients.hpp"
#include "mti/nonlinearity.hpp"

namespace mti {

namespace {

const PurePower& power_of(const Problem& problem) {
  const auto* pw = std::get_if<PurePower>(&problem.nonlinearity);
  if (!pw)
    throw std::invalid_argument("classical integrators are defined for the pure power nonlinearity");
  return *pw;
}

bool bad(Complex y) { return !(std::norm(y) <= kInstabilityBound * kInstabilityBound); }

}  // namespace

double sinc(double rho) {
  if (std::abs(rho) < 1e-4) {
    const double r2 = rho * rho;
    return 1.0 - r2 / 6.0 + r2 * r2 / 120.0;
  }
  return std::sin(rho) / rho;
}

FilterSet make_filters(Method m, double rho) {
  FilterSet f;
  const double sc = sinc(rho);
  f.psi = sc * sc;
  f.phi = (m == Method::EwiF1) ? sc : 1.0;
  f.psi1 = sc;
  f.psi0 = std::cos(rho) * sc;
  return f;
}

TwoStepState first_step(const Problem& problem, double tau) {
  const PurePower& pw = power_of(problem);
  const double eps2 = problem.epsilon * problem.epsilon;
  const double w = omega(problem.epsilon, problem.alpha);
  const double cwt = std::cos(w * tau);
  const double swt = std::sin(w * tau);
  const Complex y0 = problem.phi1;
  const Complex ydot0 = problem.phi2 / eps2;
  const Complex f0 = eval_g(pw, std::norm(y0)) * y0;

  TwoStepState s;
  s.y_prev = y0;
  s.ydot_prev = ydot0;
  s.y_curr = cwt * problem.phi1 + swt / (eps2 * w) * problem.phi2 - tau * swt / (2.0 * eps2 * w) * f0;
  s.ydot_curr = -w * swt * y0 + cwt * ydot0 - swt / (eps2 * w) * f0;
  s.stabilizer = std::max(0.0, eval_g(pw, std::norm(y0)));
  s.n = 1;
  return s;
}

TwoStepState step_ewi_g(const Problem& problem, const TwoStepState& s, double tau) {
  const PurePower& pw = power_of(problem);
  const double eps2 = problem.epsilon * problem.epsilon;
  const double w = omega(problem.epsilon, problem.alpha);
  const double g_curr = eval_g(pw, std::norm(s.y_curr));
  const double stab = std::max(s.stabilizer, g_curr);
  const double wn = std::sqrt(1.0 + eps2 * (problem.alpha + stab)) / eps2;
  const double Gw = (1.0 - std::cos(wn * tau)) / (eps2 * wn * wn);
  const Complex G = Gw * (g_curr - stab) * s.y_curr;

  TwoStepState out;
  out.y_prev = s.y_curr;
  out.ydot_prev = s.ydot_curr;
  out.y_curr = -s.y_prev + 2.0 * std::cos(wn * tau) * s.y_curr - 2.0 * G;
  // the printed ydot recursion keeps the unstabilized omega
  out.ydot_curr = s.ydot_prev - 2.0 * w * std::sin(w * tau) * s.y_curr -
                  2.0 * std::sin(w * tau) / (eps2 * w) * g_curr * s.y_curr;
  out.stabilizer = stab;
  out.n = s.n + 1;
  return out;
}

TwoStepState step_ewi_d(const Problem& problem, const TwoStepState& s, double tau) {
  const PurePower& pw = power_of(problem);
  const double eps2 = problem.epsilon * problem.epsilon;
  const double w = omega(problem.epsilon, problem.alpha);
  const double swt = std::sin(w * tau);
  const double g_curr = eval_g(pw, std::norm(s.y_curr));
  const Complex D = tau * swt / (2.0 * eps2 * w) * g_curr * s.y_curr;

  TwoStepState out;
  out.y_prev = s.y_curr;
  out.ydot_prev = s.ydot_curr;
  out.y_curr = -s.y_prev + 2.0 * std::cos(w * tau) * s.y_curr - 2.0 * D;
  out.ydot_curr =
      s.ydot_prev - 2.0 * w * swt * s.y_curr - 2.0 * swt / (eps2 * w) * g_curr * s.y_curr;
  out.n = s.n + 1;
  return out;
}

TwoStepState step_ewi_filtered(const Problem& problem, const TwoStepState& s, double tau,
                               const FilterSet& filters) {
  const PurePower& pw = power_of(problem);
  const double eps2 = problem.epsilon * problem.epsilon;
  const double w = omega(problem.epsilon, problem.alpha);
  const double cwt = std::cos(w * tau);
  const double swt = std::sin(w * tau);
  auto force = [&](Complex y) {
    const Complex yf = filters.phi * y;
    return eval_g(pw, std::norm(yf)) * yf;
  };

  TwoStepState out;
  out.y_prev = s.y_curr;
  out.ydot_prev = s.ydot_curr;
  const Complex fn = force(s.y_curr);
  out.y_curr =
      cwt * s.y_curr + swt / w * s.ydot_curr - tau * tau / (2.0 * eps2) * filters.psi * fn;
  out.ydot_curr = -w * swt * s.y_curr + cwt * s.ydot_curr -
                  tau / (2.0 * eps2) * (filters.psi0 * fn + filters.psi1 * force(out.y_curr));
  out.n = s.n + 1;
  return out;
}

double cnfd_difference_quotient(const PurePower& pw, double rho1, double rho2) {
  if (std::abs(rho1 - rho2) < 1e-12 * (1.0 + rho1 + rho2))
    return eval_g(pw, 0.5 * (rho1 + rho2));
  return (antiderivative_F(pw, rho1) - antiderivative_F(pw, rho2)) / (rho1 - rho2);
}

FdStepResult step_cnfd(const Problem& problem, Complex y_prev, Complex y_curr, double tau) {
  const PurePower& pw = power_of(problem);
  const double eps2 = problem.epsilon * problem.epsilon;
  const double tau2 = tau * tau;
  // tau^2-multiplied form: A y^{n+1} = 2 eps^2 y^n - A y^{n-1} - tau^2 Fhat
  const double A = eps2 + 0.5 * tau2 * (problem.alpha + 1.0 / eps2);
  const Complex rhs0 = 2.0 * eps2 * y_curr - A * y_prev;
  const double rho_prev = std::norm(y_prev);

  auto iterate = [&](Complex y_next) {
    const Complex mid = 0.5 * (y_next + y_prev);
    const Complex fhat = cnfd_difference_quotient(pw, std::norm(y_next), rho_prev) * mid;
    return (rhs0 - tau2 * fhat) / A;
  };

  Complex y = 2.0 * y_curr - y_prev;  // explicit predictor
  double prev_res = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 200; ++it) {
    const Complex y_new = iterate(y);
    const double res = std::abs(y_new - y);
    if (!std::isfinite(res)) return {y_new, true};
    if (res <= 1e-14 * (1.0 + std::abs(y_new))) return {y_new, false};
    if (res > prev_res) {
      // damp when the plain iteration stops contracting
      y = y + 0.5 * (y_new - y);
    } else {
      y = y_new;
    }
    prev_res = res;
  }
  return {y, true};
}

Complex step_sifd(const Problem& problem, Complex y_prev, Complex y_curr, double tau) {
  const PurePower& pw = power_of(problem);
  const double eps2 = problem.epsilon * problem.epsilon;
  const double tau2 = tau * tau;
  const double A = eps2 + 0.5 * tau2 * (problem.alpha + 1.0 / eps2);
  return (2.0 * eps2 * y_curr - A * y_prev - tau2 * eval_g(pw, std::norm(y_curr)) * y_curr) / A;
}

Complex step_exfd(const Problem& problem, Complex y_prev, Complex y_curr, double tau) {
  const PurePower& pw = power_of(problem);
  const double eps2 = problem.epsilon * problem.epsilon;
  const double tau2 = tau * tau;
  return 2.0 * y_curr - y_prev -
         tau2 / eps2 *
             ((problem.alpha + 1.0 / eps2) * y_curr + eval_g(pw, std::norm(y_curr)) * y_curr);
}

double cnfd_discrete_energy(const Problem& problem, Complex y_curr, Complex y_next, double tau) {
  const PurePower& pw = power_of(problem);
  const double eps2 = problem.epsilon * problem.epsilon;
  const Complex dplus = (y_next - y_curr) / tau;
  return eps2 * std::norm(dplus) +
         (problem.alpha + 1.0 / eps2) * 0.5 * (std::norm(y_next) + std::norm(y_curr)) +
         0.5 * (antiderivative_F(pw, std::norm(y_next)) + antiderivative_F(pw, std::norm(y_curr)));
}

RunOutcome run_classical(const Problem& problem, Method method, double tau, long n_steps,
                         std::span<const long> sample_indices) {
  problem.validate();
  power_of(problem);
  RunOutcome out;
  const double eps2 = problem.epsilon * problem.epsilon;

  size_t next_sample = 0;
  State cur{0.0, problem.phi1, problem.phi2 / eps2};
  double max_norm = std::norm(cur.y);
  auto maybe_sample = [&](long n, const State& s) {
    while (next_sample < sample_indices.size() && sample_indices[next_sample] == n) {
      out.samples.push_back(s);
      ++next_sample;
    }
  };
  auto finish_unstable = [&](long n, const State& s) {
    out.unstable = true;
    out.steps_done = n;
    out.final_state = s;
    out.max_abs_y = std::sqrt(max_norm);
  };

  maybe_sample(0, cur);
  if (n_steps == 0) {
    out.final_state = cur;
    out.max_abs_y = std::abs(cur.y);
    return out;
  }

  const bool one_step = method == Method::EwiF1 || method == Method::EwiF2;
  if (one_step) {
    const FilterSet filters = make_filters(method, omega(problem.epsilon, problem.alpha) * tau);
    TwoStepState s;
    s.y_curr = cur.y;
    s.ydot_curr = cur.ydot;
    s.n = 0;
    for (long n = 0; n < n_steps; ++n) {
      s = step_ewi_filtered(problem, s, tau, filters);
      cur = {(n + 1) * tau, s.y_curr, s.ydot_curr};
      if (bad(cur.y) || !finite_state(cur)) return finish_unstable(n + 1, cur), out;
      max_norm = std::max(max_norm, std::norm(cur.y));
      maybe_sample(n + 1, cur);
    }
    out.steps_done = n_steps;
    out.final_state = cur;
    out.max_abs_y = std::sqrt(max_norm);
    return out;
  }

  const bool is_fd = method == Method::Cnfd || method == Method::Sifd || method == Method::Exfd;
  TwoStepState s = method == Method::EwiG
                       ? [&] {
                           // EWI-G starts with its own stabilized frequency
                           const PurePower& pw = power_of(problem);
                           const double a0 = std::max(0.0, eval_g(pw, std::norm(problem.phi1)));
                           const double w0 =
                               std::sqrt(1.0 + eps2 * (problem.alpha + a0)) / eps2;
                           const double G0w = (1.0 - std::cos(w0 * tau)) / (eps2 * w0 * w0);
                           const Complex f0 =
                               eval_g(pw, std::norm(problem.phi1)) * problem.phi1 - a0 * problem.phi1;
                           const double w = omega(problem.epsilon, problem.alpha);
                           TwoStepState t;
                           t.y_prev = problem.phi1;
                           t.ydot_prev = problem.phi2 / eps2;
                           t.y_curr = std::cos(w0 * tau) * problem.phi1 +
                                      std::sin(w0 * tau) / (eps2 * w0) * problem.phi2 - G0w * f0;
                           t.ydot_curr = -w * std::sin(w * tau) * t.y_prev +
                                         std::cos(w * tau) * t.ydot_prev -
                                         std::sin(w * tau) / (eps2 * w) *
                                             eval_g(pw, std::norm(problem.phi1)) * problem.phi1;
                           t.stabilizer = a0;
                           t.n = 1;
                           return t;
                         }()
                       : first_step(problem, tau);

  cur = {tau, s.y_curr, s.ydot_curr};
  if (bad(cur.y) || !finite_state(cur)) return finish_unstable(1, cur), out;
  max_norm = std::max(max_norm, std::norm(cur.y));
  maybe_sample(1, cur);

  for (long n = 1; n < n_steps; ++n) {
    if (is_fd) {
      Complex y_next;
      if (method == Method::Cnfd) {
        const FdStepResult r = step_cnfd(problem, s.y_prev, s.y_curr, tau);
        if (r.solver_failed) {
          out.solver_failed = true;
          out.steps_done = n + 1;
          out.final_state = {(n + 1) * tau, r.y_next, cur.ydot};
          out.max_abs_y = std::sqrt(max_norm);
          return out;
        }
        y_next = r.y_next;
      } else if (method == Method::Sifd) {
        y_next = step_sifd(problem, s.y_prev, s.y_curr, tau);
      } else {
        y_next = step_exfd(problem, s.y_prev, s.y_curr, tau);
      }
      s.y_prev = s.y_curr;
      s.y_curr = y_next;
      s.n = n + 1;
      // centered-difference ydot of the state at index n, available now
      cur = {(n + 1) * tau, s.y_curr, (s.y_curr - s.y_prev) / tau};
    } else if (method == Method::EwiG) {
      s = step_ewi_g(problem, s, tau);
      cur = {(n + 1) * tau, s.y_curr, s.ydot_curr};
    } else {
      s = step_ewi_d(problem, s, tau);
      cur = {(n + 1) * tau, s.y_curr, s.ydot_curr};
    }
    if (bad(cur.y) || !finite_state(cur)) return finish_unstable(n + 1, cur), out;
    max_norm = std::max(max_norm, std::norm(cur.y));
    maybe_sample(n + 1, cur);
  }

  if (is_fd) {
    // final ydot via the centered difference, one extra step
    Complex y_after;
    bool ok = true;
    if (method == Method::Cnfd) {
      const FdStepResult r = step_cnfd(problem, s.y_prev, s.y_curr, tau);
      y_after = r.y_next;
      ok = !r.solver_failed;
    } else if (method == Method::Sifd) {
      y_after = step_sifd(problem, s.y_prev, s.y_curr, tau);
    } else {
      y_after = step_exfd(problem, s.y_prev, s.y_curr, tau);
    }
    if (ok && std::isfinite(y_after.real()) && std::isfinite(y_after.imag()))
      cur.ydot = (y_after - s.y_prev) / (2.0 * tau);
    else
      cur.ydot = {std::numeric_limits<double>::quiet_NaN(), 0.0};
  }

  out.steps_done = n_steps;
  out.final_state = cur;
  out.max_abs_y = std::sqrt(max_norm);
  if (!out.samples.empty() && next_sample > 0 && sample_indices[next_sample - 1] == n_steps)
    out.samples.back() = cur;  // refresh the final sample with the recovered ydot
  return out;
}

RunOutcome run_trajectory(const Problem& problem, Method method, double tau, long n_steps,
                          std::span<const long> sample_indices) {
  if (is_mti(method)) return run_mti(problem, method, tau, n_steps, sample_indices);
  return run_classical(problem, method, tau, n_steps, sample_indices);
}

}  // namespace mti
