#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mti/coefficients.hpp"
#include "mti/quadrature.hpp"

using namespace mti;

TEST_CASE("omega") {
  CHECK(omega(1.0, 0.0) == doctest::Approx(1.0));
  CHECK(omega(0.5, 2.0) == doctest::Approx(4.0 * std::sqrt(1.5)).epsilon(1e-15));
  CHECK(omega(0.25, 0.0) == doctest::Approx(16.0));
}

TEST_CASE("lambda_pm") {
  {
    auto [lp, lm] = lambda_pm(1.0, 0.0);
    CHECK(lp == doctest::Approx(-2.0));
    CHECK(lm == doctest::Approx(0.0));
  }
  {
    auto [lp, lm] = lambda_pm(0.5, 2.0);
    CHECK(lp == doctest::Approx(-8.8989794855663558).epsilon(1e-12));
    CHECK(lm == doctest::Approx(0.8989794855663558).epsilon(1e-12));
  }
  for (double eps : {1.0, 0.5, 0.1, 0.003}) {
    for (double alpha : {0.0, 2.0, 3.0, 7.5}) {
      auto [lp, lm] = lambda_pm(eps, alpha);
      const double eps2 = eps * eps;
      CHECK(lp * lm == doctest::Approx(-alpha / eps2).epsilon(1e-12));
      CHECK(lp + lm == doctest::Approx(-2.0 / eps2).epsilon(1e-12));
    }
  }
}

TEST_CASE("gautschi weights at tau=0") {
  for (int k : {1, 2, 3}) {
    const GautschiWeights g = gautschi_weights(k, 0.0, 0.5, 2.0);
    CHECK(g.p == Complex{0, 0});
    CHECK(g.q == Complex{0, 0});
    CHECK(g.pdot == Complex{0, 0});
    CHECK(g.qdot == Complex{0, 0});
  }
}

TEST_CASE("gautschi weights match their defining integrals") {
  const double tau = 0.05, eps = 0.5, alpha = 2.0;
  const long double eps2 = static_cast<long double>(eps) * eps;
  const long double w = std::sqrt(1.0L + eps2 * alpha) / eps2;
  const GautschiWeights g = gautschi_weights(1, tau, eps, alpha);
  auto cis = [](long double x) { return ComplexLD{std::cos(x), std::sin(x)}; };
  auto sink = [&](long double th) { return std::sin(w * (tau - th)) / (eps2 * w) * cis(3.0L * th / eps2); };
  auto cosk = [&](long double th) { return std::cos(w * (tau - th)) / eps2 * cis(3.0L * th / eps2); };
  const Complex p_q{static_cast<double>(integrate_ld(sink, 0, tau).value.real()),
                    static_cast<double>(integrate_ld(sink, 0, tau).value.imag())};
  CHECK(std::abs(g.p - p_q) <= 1e-12 * std::abs(p_q));
  const auto qv = integrate_ld([&](long double th) { return sink(th) * th; }, 0, tau).value;
  CHECK(std::abs(g.q - Complex{(double)qv.real(), (double)qv.imag()}) <= 1e-12 * std::abs(qv));
  const auto pdv = integrate_ld(cosk, 0, tau).value;
  CHECK(std::abs(g.pdot - Complex{(double)pdv.real(), (double)pdv.imag()}) <= 1e-12 * std::abs(pdv));
  const auto qdv = integrate_ld([&](long double th) { return cosk(th) * th; }, 0, tau).value;
  CHECK(std::abs(g.qdot - Complex{(double)qdv.real(), (double)qdv.imag()}) <= 1e-12 * std::abs(qdv));
}

TEST_CASE("gautschi magnitude bound") {
  // |p_k| <~ min(tau, eps^2 (1 + tau)) with a single modest constant
  for (double eps : {1.0, 0.5, 0.1, 0.01})
    for (double tau : {0.2, 0.01, 1e-4})
      for (double alpha : {0.0, 2.0, 3.0})
        for (int k : {1, 2, 3}) {
          const GautschiWeights g = gautschi_weights(k, tau, eps, alpha);
          const double bound = std::min(tau, eps * eps * (1.0 + tau));
          CHECK(std::abs(g.p) <= 10.0 * bound);
        }
}

TEST_CASE("ab weights kernel values at tau=0") {
  const ABWeights w = ab_weights(0.0, 0.5, 2.0);
  CHECK(w.a == Complex{1, 0});
  CHECK(w.b == Complex{0, 0});
  CHECK(w.adot == Complex{0, 0});
  CHECK(std::abs(w.bdot - Complex{4, 0}) <= 1e-14);  // 1/eps^2
  CHECK(w.c == Complex{0, 0});
  CHECK(w.d == Complex{0, 0});
  CHECK(w.cdot == Complex{0, 0});
  CHECK(w.ddot == Complex{0, 0});
}

TEST_CASE("a and b solve the homogeneous z equation") {
  // 2i zdot + eps^2 zddot + alpha z = 0, finite-difference second derivative
  const double eps = 0.5, alpha = 2.0, tau = 0.05;
  const double eps2 = eps * eps;
  const double d = 1e-5;
  const ABWeights mid = ab_weights(tau, eps, alpha);
  const ABWeights lo = ab_weights(tau - d, eps, alpha);
  const ABWeights hi = ab_weights(tau + d, eps, alpha);
  const Complex I{0, 1};
  {
    const Complex addot = (hi.a - 2.0 * mid.a + lo.a) / (d * d);
    const Complex res = 2.0 * I * mid.adot + eps2 * addot + alpha * mid.a;
    CHECK(std::abs(res) <= 1e-6);
  }
  {
    const Complex bddot = (hi.b - 2.0 * mid.b + lo.b) / (d * d);
    const Complex res = 2.0 * I * mid.bdot + eps2 * bddot + alpha * mid.b;
    CHECK(std::abs(res) <= 1e-5);  // |b| ~ 1/eps^2 scales the FD noise
  }
  // adot/bdot consistent with first differences
  CHECK(std::abs((hi.a - lo.a) / (2 * d) - mid.adot) <= 1e-8);
  CHECK(std::abs((hi.b - lo.b) / (2 * d) - mid.bdot) <= 1e-7);
}

TEST_CASE("c and d match their defining integrals") {
  const double tau = 0.05, eps = 0.5, alpha = 2.0;
  const ABWeights w = ab_weights(tau, eps, alpha);
  const long double eps2 = static_cast<long double>(eps) * eps;
  const long double s = std::sqrt(1.0L + eps2 * alpha);
  const long double lp = -(1.0L + s) / eps2;
  const long double lm = alpha / (1.0L + s);
  auto cis = [](long double x) { return ComplexLD{std::cos(x), std::sin(x)}; };
  auto b = [&](long double sv) { return ComplexLD{0, 1} * (cis(sv * lp) - cis(sv * lm)) / (2.0L * s); };
  const auto cv = integrate_ld([&](long double th) { return b(tau - th); }, 0, tau).value;
  const auto dv = integrate_ld([&](long double th) { return b(tau - th) * th; }, 0, tau).value;
  CHECK(std::abs(w.c - Complex{(double)cv.real(), (double)cv.imag()}) <= 1e-12 * std::abs(cv));
  CHECK(std::abs(w.d - Complex{(double)dv.real(), (double)dv.imag()}) <= 1e-12 * std::abs(dv));
  // exact kernel identity
  CHECK(w.ddot == w.c);
  CHECK(w.cdot == w.b);
}

TEST_CASE("beta gamma at tau=0 and bounds") {
  const BetaGamma z = beta_gamma(0.0, 0.5, 3.0);
  CHECK(z.beta1 == Complex{0, 0});
  CHECK(z.beta2 == Complex{0, 0});
  CHECK(z.gamma1 == 0.0);
  CHECK(z.gamma2 == 0.0);
  CHECK(z.gamma3 == 0.0);

  for (double eps : {1.0, 0.3, 0.05})
    for (double tau : {0.2, 1e-3}) {
      const BetaGamma bg = beta_gamma(tau, eps, 2.0);
      const double eps2 = eps * eps;
      const double w = omega(eps, 2.0);
      CHECK(bg.gamma1 >= 0.0);
      CHECK(bg.gamma1 <= 2.0 / (eps2 * w * w) * (1 + 1e-12));
    }
}

TEST_CASE("beta gamma alpha->0 limits") {
  const double tau = 0.05;
  const BetaGamma bg = beta_gamma(tau, 0.5, 0.0);
  CHECK(std::abs(bg.beta1 - Complex{0, tau / 2}) <= 1e-15);
  CHECK(std::abs(bg.beta2 - Complex{0, tau * tau / 4}) <= 1e-16);
}

TEST_CASE("beta gamma match their defining integrals") {
  const double tau = 0.05, eps = 0.5, alpha = 3.0;
  const BetaGamma bg = beta_gamma(tau, eps, alpha);
  const long double eps2 = static_cast<long double>(eps) * eps;
  const long double w = std::sqrt(1.0L + eps2 * alpha) / eps2;
  auto cis = [](long double x) { return ComplexLD{std::cos(x), std::sin(x)}; };
  auto bker = [&](long double sv) { return ComplexLD{0, 0.5L} * cis(alpha * (tau - sv) / 2.0L); };
  const auto b1 = integrate_ld(bker, 0, tau).value;
  const auto b2 = integrate_ld([&](long double sv) { return bker(sv) * sv; }, 0, tau).value;
  CHECK(std::abs(bg.beta1 - Complex{(double)b1.real(), (double)b1.imag()}) <= 1e-12 * std::abs(b1));
  CHECK(std::abs(bg.beta2 - Complex{(double)b2.real(), (double)b2.imag()}) <= 1e-12 * std::abs(b2));
  const auto g2 = integrate_ld(
      [&](long double th) { return ComplexLD{std::cos(w * (tau - th)) / eps2 * (tau - th) / tau, 0}; },
      0, tau).value;
  const auto g3 = integrate_ld(
      [&](long double th) { return ComplexLD{std::cos(w * (tau - th)) / eps2 * th / tau, 0}; }, 0,
      tau).value;
  CHECK(std::abs(bg.gamma2 - (double)g2.real()) <= 1e-12 * std::abs(g2));
  CHECK(std::abs(bg.gamma3 - (double)g3.real()) <= 1e-12 * std::abs(g3));
}

TEST_CASE("printed beta forms differ from the defining integrals by i/2") {
  for (double alpha : {2.0, 3.0, 0.7})
    for (double tau : {0.2, 0.05, 1e-3}) {
      const Complex f1 = beta1_printed_over_defining(tau, alpha);
      const Complex f2 = beta2_printed_over_defining(tau, alpha);
      CHECK(std::abs(f1 - Complex{0, 0.5}) <= 1e-10);
      CHECK(std::abs(f2 - Complex{0, 0.5}) <= 1e-10);
    }
}

TEST_CASE("near-resonance fallback") {
  // alpha*eps^2 -> (2k+1)^2 - 1 trips the guard; the quadrature fallback must
  // agree with the defining integral
  const double eps = 1.0, tau = 0.05;
  const double alpha = 8.0 + 1e-12;  // K=3: K^2 - (1 + alpha) ~ -1e-12
  const GautschiWeights g = gautschi_weights(1, tau, eps, alpha);
  CHECK(std::isfinite(g.p.real()));
  const long double w = std::sqrt(1.0L + static_cast<long double>(alpha));
  auto cis = [](long double x) { return ComplexLD{std::cos(x), std::sin(x)}; };
  const auto pv = integrate_ld(
      [&](long double th) { return std::sin(w * (tau - th)) / w * cis(3.0L * th); }, 0, tau).value;
  CHECK(std::abs(g.p - Complex{(double)pv.real(), (double)pv.imag()}) <= 1e-10 * std::abs(pv));
}

TEST_CASE("coefficient oracle on a reduced grid") {
  ValidationGrid grid;
  grid.epsilons = {1.0, 0.1};
  grid.taus = {0.2, 1e-4};
  grid.alphas = {0.0, 2.0};
  grid.ks = {1, 3};
  for (const auto& dev : validate_coefficients(grid)) {
    INFO(dev.name, " worst ", dev.max_rel_dev, " at tau=", dev.worst_tau, " eps=", dev.worst_epsilon);
    CHECK(dev.max_rel_dev <= 1e-10);
  }
}

TEST_CASE("coefficient set assembly") {
  const CoefficientSet cs = make_coefficients(0.05, 0.5, 2.0, 2);
  CHECK(cs.gautschi.size() == 2);
  CHECK(cs.omega == doctest::Approx(omega(0.5, 2.0)));
  CHECK(cs.cos_wt == doctest::Approx(std::cos(cs.omega * 0.05)).epsilon(1e-12));
  CHECK(cs.sin_wt_over_w == doctest::Approx(std::sin(cs.omega * 0.05) / cs.omega).epsilon(1e-12));
  // carrier is e^{i tau / eps^2}
  const double th = 0.05 / 0.25;
  CHECK(cs.carrier.hi.real() == doctest::Approx(std::cos(th)).epsilon(1e-14));
  CHECK(cs.carrier.hi.imag() == doctest::Approx(std::sin(th)).epsilon(1e-14));
  // a, eps^2 b agree with the ab weights
  CHECK(std::abs(cs.a_hi - cs.ab.a) <= 1e-15);
  CHECK(std::abs(cs.eb_hi - 0.25 * cs.ab.b) <= 1e-15);
}
