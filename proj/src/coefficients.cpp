#include "mti/coefficients.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kernel_phases.hpp"
#include "mti/quadrature.hpp"

namespace mti {

using detail::CLD;
using detail::chi_imag;
using detail::kernel_phases;
using detail::KernelPhases;
using detail::phi1_imag;
using detail::to_cld;
using detail::to_ld;

namespace {

Complex to_complex(CLD x) {
  return {static_cast<double>(x.real()), static_cast<double>(x.imag())};
}

GautschiWeights gautschi_closed(int k, double tau, double epsilon, const KernelPhases& ph) {
  const detail::GautschiDDC w = detail::gautschi_ddc(k, tau, epsilon, ph);
  auto to_cx = [](dd::DDC v) { return Complex{v.re.hi + v.re.lo, v.im.hi + v.im.lo}; };
  GautschiWeights g;
  g.p = to_cx(w.p);
  g.q = to_cx(w.q);
  g.pdot = to_cx(w.pdot);
  g.qdot = to_cx(w.qdot);
  return g;
}

GautschiWeights gautschi_quadrature(int k, double tau, double epsilon, double alpha) {
  const double eps2 = epsilon * epsilon;
  const double w = omega(epsilon, alpha);
  const double K = 2 * k + 1;
  const int hint = static_cast<int>((w * tau + K * tau / eps2) / std::numbers::pi) + 8;
  auto sin_kernel = [&](double th) {
    const double ph = K * th / eps2;
    return std::sin(w * (tau - th)) / (eps2 * w) * Complex{std::cos(ph), std::sin(ph)};
  };
  auto cos_kernel = [&](double th) {
    const double ph = K * th / eps2;
    return std::cos(w * (tau - th)) / eps2 * Complex{std::cos(ph), std::sin(ph)};
  };
  GautschiWeights g;
  g.p = integrate(sin_kernel, 0.0, tau, 1e-18, 1e-13, hint).value;
  g.q = integrate([&](double th) { return sin_kernel(th) * th; }, 0.0, tau, 1e-18, 1e-13, hint).value;
  g.pdot = integrate(cos_kernel, 0.0, tau, 1e-18, 1e-13, hint).value;
  g.qdot = integrate([&](double th) { return cos_kernel(th) * th; }, 0.0, tau, 1e-18, 1e-13, hint).value;
  return g;
}

}  // namespace

double omega(double epsilon, double alpha) {
  const double eps2 = epsilon * epsilon;
  return std::sqrt(1.0 + eps2 * alpha) / eps2;
}

std::pair<double, double> lambda_pm(double epsilon, double alpha) {
  const double eps2 = epsilon * epsilon;
  const double s = std::sqrt(1.0 + eps2 * alpha);
  // lambda_minus rationalized to stay exact as alpha -> 0
  return {-(1.0 + s) / eps2, alpha / (1.0 + s)};
}

GautschiWeights gautschi_weights(int k, double tau, double epsilon, double alpha) {
  if (k < 1) throw std::invalid_argument("gautschi_weights: k must be >= 1");
  const double K = 2.0 * k + 1.0;
  const double s2 = 1.0 + alpha * epsilon * epsilon;
  if (std::abs(K * K - s2) <= kResonanceGuard) return gautschi_quadrature(k, tau, epsilon, alpha);
  return gautschi_closed(k, tau, epsilon, kernel_phases(tau, epsilon, alpha));
}

ABWeights ab_weights(double tau, double epsilon, double alpha) {
  const KernelPhases ph = kernel_phases(tau, epsilon, alpha);
  const long double eps2 = static_cast<long double>(epsilon) * epsilon;
  const long double s = static_cast<long double>(ph.s.hi) + ph.s.lo;
  const CLD Ep = to_cld(ph.rot_p);
  const CLD Em = to_cld(ph.rot_m);
  const long double thp = static_cast<long double>(ph.theta_p.hi) + ph.theta_p.lo;
  const long double thm = static_cast<long double>(ph.theta_m.hi) + ph.theta_m.lo;
  const CLD i{0.0L, 1.0L};

  ABWeights w;
  // eps^2 (lambda_minus - lambda_plus) = 2 s
  const CLD a = ((1.0L + s) * Em - (1.0L - s) * Ep) / (2.0L * s);
  const CLD b = i * (Ep - Em) / (2.0L * s);
  const CLD adot = i * static_cast<long double>(alpha) * (Em - Ep) / (2.0L * s);
  const CLD bdot = ((1.0L + s) * Ep - (1.0L - s) * Em) / (2.0L * s * eps2);
  const CLD phi_p = phi1_imag(thp, Ep);
  const CLD phi_m = phi1_imag(thm, Em);
  const CLD chi_p = chi_imag(thp, Ep);
  const CLD chi_m = chi_imag(thm, Em);
  const long double t = tau;
  const CLD c = i * t * (phi_p - phi_m) / (2.0L * s);
  const CLD d = t * c - i * t * t * (chi_p - chi_m) / (2.0L * s);

  w.a = to_complex(a);
  w.b = to_complex(b);
  w.adot = to_complex(adot);
  w.bdot = to_complex(bdot);
  w.c = to_complex(c);
  w.d = to_complex(d);
  w.cdot = w.b;  // cdot(tau) = b(tau)
  w.ddot = w.c;  // ddot(tau) = c(tau), exact kernel identity
  return w;
}

BetaGamma beta_gamma(double tau, double epsilon, double alpha) {
  BetaGamma out;
  if (tau == 0.0) return out;
  const KernelPhases ph = kernel_phases(tau, epsilon, alpha);
  const long double eps2 = static_cast<long double>(epsilon) * epsilon;
  const long double s = static_cast<long double>(ph.s.hi) + ph.s.lo;

  // beta1 = (i/2) Int e^{i alpha (tau-s)/2} ds, beta2 the same against s
  const dd::DD theta_b = dd::div(dd::two_prod(alpha, tau), 2.0);
  const dd::Rotation rot_b = dd::rotation_from_angle(theta_b);
  const long double thb = static_cast<long double>(theta_b.hi) + theta_b.lo;
  const CLD Eb = to_cld(rot_b);
  const CLD i{0.0L, 1.0L};
  const long double t = tau;
  out.beta1 = to_complex(0.5L * i * t * phi1_imag(thb, Eb));
  out.beta2 = to_complex(0.5L * i * t * t * (phi1_imag(thb, Eb) - chi_imag(thb, Eb)));

  dd::DD swh, cwh;
  dd::sincos(dd::div(ph.theta_w, 2.0), swh, cwh);
  dd::DD sw, cw;
  dd::sincos(ph.theta_w, sw, cw);
  const long double sin_half = static_cast<long double>(swh.hi) + swh.lo;
  const long double sinwt = static_cast<long double>(sw.hi) + sw.lo;
  const long double wt = static_cast<long double>(ph.theta_w.hi) + ph.theta_w.lo;
  // 1 - cos(wt) = 2 sin^2(wt/2); eps^2 omega^2 = s^2/eps^2
  const long double one_m_cos = 2.0L * sin_half * sin_half;
  out.gamma1 = static_cast<double>(one_m_cos * eps2 / (s * s));
  out.gamma2 = static_cast<double>((wt * sinwt - one_m_cos) * eps2 / (s * s * t));
  out.gamma3 = static_cast<double>(one_m_cos * eps2 / (s * s * t));
  return out;
}

CoefficientSet make_coefficients(double tau, double epsilon, double alpha, int gautschi_depth) {
  CoefficientSet cs;
  cs.tau = tau;
  cs.epsilon = epsilon;
  cs.alpha = alpha;
  cs.omega = omega(epsilon, alpha);
  std::tie(cs.lambda_plus, cs.lambda_minus) = lambda_pm(epsilon, alpha);
  cs.gautschi.reserve(std::max(0, gautschi_depth));
  for (int k = 1; k <= gautschi_depth; ++k)
    cs.gautschi.push_back(gautschi_weights(k, tau, epsilon, alpha));
  cs.ab = ab_weights(tau, epsilon, alpha);
  cs.bg = beta_gamma(tau, epsilon, alpha);

  const KernelPhases ph = kernel_phases(tau, epsilon, alpha);
  dd::DD sw, cw;
  dd::sincos(ph.theta_w, sw, cw);
  cs.cos_wt = cw.hi;
  cs.cos_wt_lo = cw.lo;
  cs.sin_wt_over_w = static_cast<double>((static_cast<long double>(sw.hi) + sw.lo) /
                                         ((static_cast<long double>(ph.s.hi) + ph.s.lo) /
                                          (static_cast<long double>(epsilon) * epsilon)));
  cs.carrier = dd::rotation_from_angle(ph.u);
  cs.exp_alpha_half = dd::rotation_from_angle(dd::div(dd::two_prod(alpha, tau), 2.0));

  // a(tau) and eps^2 b(tau) split hi/lo: they multiply O(1) state each step
  const long double eps2 = static_cast<long double>(epsilon) * epsilon;
  const long double s = static_cast<long double>(ph.s.hi) + ph.s.lo;
  const CLD Ep = to_cld(ph.rot_p);
  const CLD Em = to_cld(ph.rot_m);
  const CLD i{0.0L, 1.0L};
  const CLD a = ((1.0L + s) * Em - (1.0L - s) * Ep) / (2.0L * s);
  const CLD eb = eps2 * i * (Ep - Em) / (2.0L * s);
  const CLD ebd = ((1.0L + s) * Ep - (1.0L - s) * Em) / (2.0L * s);
  cs.a_hi = to_complex(a);
  cs.a_lo = to_complex(a - CLD{cs.a_hi.real(), cs.a_hi.imag()});
  cs.eb_hi = to_complex(eb);
  cs.eb_lo = to_complex(eb - CLD{cs.eb_hi.real(), cs.eb_hi.imag()});
  cs.ebd_hi = to_complex(ebd);
  cs.ebd_lo = to_complex(ebd - CLD{cs.ebd_hi.real(), cs.ebd_hi.imag()});
  return cs;
}

std::vector<WeightDeviation> validate_coefficients(const ValidationGrid& grid) {
  std::vector<WeightDeviation> out;
  auto record = [&](const std::string& name, Complex closed, Complex quad, double tau, double eps,
                    double alpha, int k) {
    const double rel = std::abs(closed - quad) / std::max(std::abs(quad), 1e-300);
    for (auto& d : out)
      if (d.name == name) {
        if (rel > d.max_rel_dev) d = {name, rel, tau, eps, alpha, k};
        return;
      }
    out.push_back({name, rel, tau, eps, alpha, k});
  };

  using LD = long double;
  using CL = ComplexLD;
  auto to_cx = [](CL v) { return Complex{static_cast<double>(v.real()), static_cast<double>(v.imag())}; };

  for (double eps : grid.epsilons)
    for (double tau : grid.taus)
      for (double alpha : grid.alphas) {
        const LD eps2 = static_cast<LD>(eps) * eps;
        const LD s = std::sqrt(1.0L + eps2 * alpha);
        const LD w = s / eps2;
        const LD lp = -(1.0L + s) / eps2;
        const LD lm = alpha / (1.0L + s);
        const int whint = static_cast<int>(static_cast<double>(w) * tau / std::numbers::pi) + 8;
        auto cis = [](LD x) { return CL{std::cos(x), std::sin(x)}; };

        for (int k : grid.ks) {
          const GautschiWeights g = gautschi_weights(k, tau, eps, alpha);
          const LD K = 2 * k + 1;
          const int khint =
              static_cast<int>(2.0 * static_cast<double>(w + K / eps2) * tau / std::numbers::pi) + 8;
          auto sin_kernel = [&](LD th) { return std::sin(w * (tau - th)) / (eps2 * w) * cis(K * th / eps2); };
          auto cos_kernel = [&](LD th) { return std::cos(w * (tau - th)) / eps2 * cis(K * th / eps2); };
          record("p_k", g.p, to_cx(integrate_ld(sin_kernel, 0, tau, 1e-24L, 1e-15L, khint).value),
                 tau, eps, alpha, k);
          record("q_k", g.q,
                 to_cx(integrate_ld([&](LD th) { return sin_kernel(th) * th; }, 0, tau, 1e-26L,
                                    1e-15L, khint)
                           .value),
                 tau, eps, alpha, k);
          record("pdot_k", g.pdot,
                 to_cx(integrate_ld(cos_kernel, 0, tau, 1e-24L, 1e-15L, khint).value), tau, eps,
                 alpha, k);
          record("qdot_k", g.qdot,
                 to_cx(integrate_ld([&](LD th) { return cos_kernel(th) * th; }, 0, tau, 1e-26L,
                                    1e-15L, khint)
                           .value),
                 tau, eps, alpha, k);
        }

        const ABWeights ab = ab_weights(tau, eps, alpha);
        auto bker = [&](LD sarg) { return CL{0, 1} * (cis(sarg * lp) - cis(sarg * lm)) / (2.0L * s); };
        auto bdotker = [&](LD sarg) {
          // eps^2 (lambda+ - lambda-) = -2s
          return (lp * cis(sarg * lp) - lm * cis(sarg * lm)) / (-2.0L * s);
        };
        const int phint =
            static_cast<int>(static_cast<double>(-lp) * tau / std::numbers::pi) + 8;
        record("c", ab.c,
               to_cx(integrate_ld([&](LD th) { return bker(tau - th); }, 0, tau, 1e-24L, 1e-17L,
                                  phint)
                         .value),
               tau, eps, alpha, 0);
        record("d", ab.d,
               to_cx(integrate_ld([&](LD th) { return bker(tau - th) * th; }, 0, tau, 1e-26L,
                                  1e-17L, phint)
                         .value),
               tau, eps, alpha, 0);
        record("cdot", ab.cdot,
               to_cx(integrate_ld([&](LD th) { return bdotker(tau - th); }, 0, tau, 1e-24L, 1e-17L,
                                  phint)
                         .value),
               tau, eps, alpha, 0);
        record("ddot", ab.ddot,
               to_cx(integrate_ld([&](LD th) { return bdotker(tau - th) * th; }, 0, tau, 1e-26L,
                                  1e-17L, phint)
                         .value),
               tau, eps, alpha, 0);

        const BetaGamma bg = beta_gamma(tau, eps, alpha);
        auto beta_ker = [&](LD sarg) { return CL{0, 0.5L} * cis(alpha * (tau - sarg) / 2.0L); };
        record("beta1", bg.beta1, to_cx(integrate_ld(beta_ker, 0, tau, 1e-24L, 1e-17L, 4).value),
               tau, eps, alpha, 0);
        record("beta2", bg.beta2,
               to_cx(integrate_ld([&](LD sarg) { return beta_ker(sarg) * sarg; }, 0, tau, 1e-26L,
                                  1e-17L, 4)
                         .value),
               tau, eps, alpha, 0);
        record("gamma1", Complex{bg.gamma1, 0.0},
               to_cx(integrate_ld([&](LD th) { return CL{std::sin(w * (tau - th)) / (eps2 * w), 0}; },
                                  0, tau, 1e-24L, 1e-17L, whint)
                         .value),
               tau, eps, alpha, 0);
        record("gamma2", Complex{bg.gamma2, 0.0},
               to_cx(integrate_ld(
                         [&](LD th) { return CL{std::cos(w * (tau - th)) / eps2 * (tau - th) / tau, 0}; },
                         0, tau, 1e-24L, 1e-17L, whint)
                         .value),
               tau, eps, alpha, 0);
        record("gamma3", Complex{bg.gamma3, 0.0},
               to_cx(integrate_ld(
                         [&](LD th) { return CL{std::cos(w * (tau - th)) / eps2 * th / tau, 0}; }, 0,
                         tau, 1e-24L, 1e-17L, whint)
                         .value),
               tau, eps, alpha, 0);
      }
  return out;
}

Complex beta1_printed_over_defining(double tau, double alpha) {
  const Complex printed =
      Complex{0.0, 1.0} / (2.0 * alpha) * (std::exp(Complex{0.0, alpha * tau / 2.0}) - 1.0);
  return printed / beta_gamma(tau, 1.0, alpha).beta1;
}

Complex beta2_printed_over_defining(double tau, double alpha) {
  const Complex printed = (2.0 * std::exp(Complex{0.0, alpha * tau / 2.0}) -
                           Complex{0.0, alpha * tau} - 2.0) /
                          (2.0 * alpha * alpha);
  return printed / beta_gamma(tau, 1.0, alpha).beta2;
}

}  // namespace mti
