#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ld_power.hpp"
#include "mti/classical.hpp"
#include "mti/coefficients.hpp"
#include "mti/nonlinearity.hpp"

using namespace mti;

namespace {

Problem benchmark_problem(double eps) {
  Problem p;
  p.epsilon = eps;
  p.alpha = 2.0;
  p.nonlinearity = make_power(1.0, 1);
  p.phi1 = {1, 0};
  p.phi2 = {1, 0};
  p.horizon_T = 4.0;
  return p;
}

Problem linear_problem(double eps, double alpha) {
  Problem p = benchmark_problem(eps);
  p.alpha = alpha;
  p.nonlinearity = make_power(0.0, 1);
  return p;
}

State linear_solution(const Problem& p, double t) {
  const double eps2 = p.epsilon * p.epsilon;
  const double w = omega(p.epsilon, p.alpha);
  State s;
  s.t = t;
  s.y = std::cos(w * t) * p.phi1 + std::sin(w * t) / (eps2 * w) * p.phi2;
  s.ydot = -w * std::sin(w * t) * p.phi1 + std::cos(w * t) / eps2 * p.phi2;
  return s;
}

const State& reference_half() {
  static const State ref = [] {
    const double tau = std::ldexp(0.2, -16);
    return ldp::run_power_ld(benchmark_problem(0.5), true, tau, 20L << 16, {}).final_state;
  }();
  return ref;
}

}  // namespace

TEST_CASE("first step") {
  {
    // g == 0 and omega tau = 2pi: one full linear period
    Problem p = linear_problem(0.5, 2.0);
    const double tau = 2.0 * std::numbers::pi / omega(0.5, 2.0);
    const TwoStepState s = first_step(p, tau);
    CHECK(std::abs(s.y_curr - p.phi1) <= 1e-12);
  }
  {
    Problem p = benchmark_problem(0.5);
    p.phi1 = p.phi2 = {0, 0};
    const TwoStepState s = first_step(p, 0.2);
    CHECK(s.y_curr == Complex{0, 0});
    CHECK(s.ydot_curr == Complex{0, 0});
  }
  {
    // tau/1000-reference oracle on [0, tau]
    Problem p = benchmark_problem(0.5);
    const double tau = 0.2;
    const TwoStepState s = first_step(p, tau);
    const State fine = ldp::run_power_ld(p, true, tau / 1000.0, 1000, {}).final_state;
    const double err = std::abs(s.y_curr - fine.y);
    CHECK(err <= 10.0 * tau * tau / (0.5 * 0.5));
    CHECK(err <= 0.05);  // observed ~1e-3; the stated bound is generous
  }
}

TEST_CASE("exact linear propagation of the exponential integrators") {
  const Problem p = linear_problem(0.5, 2.0);
  const State exact = linear_solution(p, 4.0);
  for (Method m : {Method::EwiG, Method::EwiD, Method::EwiF1, Method::EwiF2}) {
    const RunOutcome out = run_classical(p, m, 0.2, 20);
    REQUIRE(!out.unstable);
    CHECK(std::abs(out.final_state.y - exact.y) <= 1e-10);
  }
}

TEST_CASE("paper table cells at eps=0.5, tau=0.2") {
  const Problem p = benchmark_problem(0.5);
  const State ref = reference_half();
  const struct {
    Method m;
    double expected;
  } cells[] = {{Method::EwiG, 1.09e-2}, {Method::EwiD, 1.02e-1}, {Method::EwiF1, 9.73e-1},
               {Method::EwiF2, 2.18e-1}, {Method::Cnfd, 3.24e-1}, {Method::Sifd, 7.61e-1},
               {Method::Exfd, 8.84e-1}};
  for (const auto& c : cells) {
    const RunOutcome out = run_classical(p, c.m, 0.2, 20);
    REQUIRE(!out.unstable);
    REQUIRE(!out.solver_failed);
    const double err = std::abs(out.final_state.y - ref.y);
    INFO(to_string(c.m));
    CHECK(err == doctest::Approx(c.expected).epsilon(0.10));
  }
}

TEST_CASE("leapfrog instability at tau beyond the eps^2 threshold") {
  const Problem p = benchmark_problem(0.25);
  const RunOutcome out = run_classical(p, Method::Exfd, 0.2, 20);
  CHECK(out.unstable);
  const RunOutcome ok = run_classical(p, Method::Exfd, 0.05, 80);
  CHECK(!ok.unstable);
}

TEST_CASE("conservative scheme keeps its discrete energy") {
  const Problem p = benchmark_problem(0.5);
  const double tau = 0.01;
  TwoStepState s = first_step(p, tau);
  const double e0 = cnfd_discrete_energy(p, s.y_prev, s.y_curr, tau);
  double worst = 0.0;
  for (long n = 1; n < 400; ++n) {
    const FdStepResult r = step_cnfd(p, s.y_prev, s.y_curr, tau);
    REQUIRE(!r.solver_failed);
    s.y_prev = s.y_curr;
    s.y_curr = r.y_next;
    worst = std::max(worst, std::abs(cnfd_discrete_energy(p, s.y_prev, s.y_curr, tau) - e0));
  }
  CHECK(worst / e0 <= 1e-10);
}

TEST_CASE("finite-difference schemes satisfy their residuals and time symmetry") {
  const Problem p = benchmark_problem(0.5);
  const PurePower& pw = std::get<PurePower>(p.nonlinearity);
  const double eps2 = 0.25;
  const double tau = 0.05;
  std::mt19937 rng(67);
  std::uniform_real_distribution<double> u(-1.2, 1.2);

  auto cnfd_residual = [&](Complex yp, Complex y0, Complex ym, double t) {
    const Complex fhat =
        cnfd_difference_quotient(pw, std::norm(yp), std::norm(ym)) * 0.5 * (yp + ym);
    return eps2 * (yp - 2.0 * y0 + ym) / (t * t) + (p.alpha + 1.0 / eps2) * 0.5 * (yp + ym) + fhat;
  };
  auto sifd_residual = [&](Complex yp, Complex y0, Complex ym, double t) {
    return eps2 * (yp - 2.0 * y0 + ym) / (t * t) + (p.alpha + 1.0 / eps2) * 0.5 * (yp + ym) +
           eval_g(pw, std::norm(y0)) * y0;
  };
  auto exfd_residual = [&](Complex yp, Complex y0, Complex ym, double t) {
    return eps2 * (yp - 2.0 * y0 + ym) / (t * t) + (p.alpha + 1.0 / eps2) * y0 +
           eval_g(pw, std::norm(y0)) * y0;
  };

  for (int it = 0; it < 25; ++it) {
    const Complex ym{u(rng), u(rng)}, y0{u(rng), u(rng)};
    {
      const FdStepResult r = step_cnfd(p, ym, y0, tau);
      REQUIRE(!r.solver_failed);
      CHECK(std::abs(cnfd_residual(r.y_next, y0, ym, tau)) <= 1e-9);
      // time symmetry: swapping y^{n+1} <-> y^{n-1} and tau <-> -tau
      CHECK(std::abs(cnfd_residual(r.y_next, y0, ym, tau) - cnfd_residual(ym, y0, r.y_next, -tau)) <=
            1e-12);
    }
    {
      const Complex yp = step_sifd(p, ym, y0, tau);
      CHECK(std::abs(sifd_residual(yp, y0, ym, tau)) <= 1e-10);
      CHECK(std::abs(sifd_residual(yp, y0, ym, tau) - sifd_residual(ym, y0, yp, -tau)) <= 1e-12);
    }
    {
      const Complex yp = step_exfd(p, ym, y0, tau);
      CHECK(std::abs(exfd_residual(yp, y0, ym, tau)) <= 1e-10);
      CHECK(std::abs(exfd_residual(yp, y0, ym, tau) - exfd_residual(ym, y0, yp, -tau)) <= 1e-12);
    }
  }
}

TEST_CASE("difference quotient degenerate limit") {
  const PurePower pw{1.0, 1};
  CHECK(cnfd_difference_quotient(pw, 2.0, 2.0) == doctest::Approx(2.0));           // g(mid)
  CHECK(cnfd_difference_quotient(pw, 2.0, 2.0 + 1e-15) == doctest::Approx(2.0));   // guarded
  CHECK(cnfd_difference_quotient(pw, 4.0, 2.0) == doctest::Approx(3.0));           // (F(4)-F(2))/2
  const PurePower pw2{2.0, 2};
  // F(rho) = 2 rho^3/3: quotient (rho1^3-rho2^3)/(rho1-rho2) * 2/3
  CHECK(cnfd_difference_quotient(pw2, 3.0, 1.0) == doctest::Approx(2.0 / 3.0 * 13.0));
}

TEST_CASE("filters") {
  CHECK(sinc(0.0) == 1.0);
  CHECK(sinc(1e-6) == doctest::Approx(1.0 - 1e-12 / 6.0).epsilon(1e-15));
  CHECK(sinc(std::numbers::pi) == doctest::Approx(0.0).epsilon(1e-15));
  const double rho = 1.3;
  for (Method m : {Method::EwiF1, Method::EwiF2}) {
    const FilterSet f = make_filters(m, rho);
    CHECK(f.psi == doctest::Approx(sinc(rho) * sinc(rho)));
    CHECK(f.psi1 == doctest::Approx(sinc(rho)));
    CHECK(f.psi0 == doctest::Approx(std::cos(rho) * sinc(rho)));
    // consistency relations of the shipped sets
    CHECK(f.psi0 == doctest::Approx(std::cos(rho) * f.psi1));
    CHECK(f.psi1 == doctest::Approx(f.psi / sinc(rho)));
  }
  CHECK(make_filters(Method::EwiF1, rho).phi == doctest::Approx(sinc(rho)));
  CHECK(make_filters(Method::EwiF2, rho).phi == 1.0);
  // psi1 stays finite at rho = m pi where psi/sinc is 0/0
  const FilterSet at_pi = make_filters(Method::EwiF1, std::numbers::pi);
  CHECK(std::isfinite(at_pi.psi1));
}

TEST_CASE("stabilizer is monotone nondecreasing") {
  Problem p = benchmark_problem(0.5);
  TwoStepState s = first_step(p, 0.2);
  double prev = s.stabilizer;
  for (int n = 1; n < 20; ++n) {
    s = step_ewi_g(p, s, 0.2);
    CHECK(s.stabilizer >= prev);
    prev = s.stabilizer;
  }
}

TEST_CASE("ewi error growth along a column as eps shrinks") {
  // tau = 0.2/2^10 fixed; EWI-D errors grow monotonically for j=0..4
  const double tau = std::ldexp(0.2, -10);
  const long n = 20L << 10;
  double prev = 0.0;
  for (int j = 0; j <= 4; ++j) {
    const double eps = std::ldexp(0.5, -j);
    const Problem p = benchmark_problem(eps);
    const State ref = ldp::run_power_ld(p, true, tau / 64.0, 64 * n, {}).final_state;
    const RunOutcome out = run_classical(p, Method::EwiD, tau, n);
    REQUIRE(!out.unstable);
    const double err = std::abs(out.final_state.y - ref.y);
    CHECK(err > prev);
    prev = err;
  }
}

TEST_CASE("tau=0 classical steps are identities") {
  const Problem p = benchmark_problem(0.5);
  const Complex y{0.7, -0.3}, ydot{1.1, 0.4};
  // one-step filtered methods
  for (Method m : {Method::EwiF1, Method::EwiF2}) {
    TwoStepState s;
    s.y_curr = y;
    s.ydot_curr = ydot;
    const TwoStepState out = step_ewi_filtered(p, s, 0.0, make_filters(m, 0.0));
    CHECK(out.y_curr == y);
    CHECK(out.ydot_curr == ydot);
  }
  // two-step recursions with equal history
  TwoStepState s;
  s.y_prev = s.y_curr = y;
  s.ydot_prev = s.ydot_curr = ydot;
  CHECK(step_ewi_g(p, s, 0.0).y_curr == y);
  CHECK(step_ewi_d(p, s, 0.0).y_curr == y);
  CHECK(step_sifd(p, y, y, 0.0) == y);
  CHECK(step_exfd(p, y, y, 0.0) == y);
  const FdStepResult r = step_cnfd(p, y, y, 0.0);
  CHECK(!r.solver_failed);
  CHECK(std::abs(r.y_next - y) <= 1e-15);
}
