#include "ld_power.hpp"

#include <cmath>
#include <stdexcept>

#include "kernel_phases.hpp"
#include "mti/nonlinearity.hpp"

namespace mti::ldp {

namespace {

using detail::CLD;
using LD = long double;

LD pow_int(LD x, int n) {
  LD r = 1.0L;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

CLD pow_int(CLD x, int n) {
  CLD r{1.0L, 0.0L};
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

CLD cis_small(LD x) {
  if (std::abs(x) < 1e-3L) {
    const LD x2 = x * x;
    const LD c =
        1.0L - x2 * (0.5L - x2 * ((1.0L / 24.0L) - x2 * ((1.0L / 720.0L) - x2 / 40320.0L)));
    const LD s = x * (1.0L - x2 * ((1.0L / 6.0L) -
                                   x2 * ((1.0L / 120.0L) - x2 * ((1.0L / 5040.0L) - x2 / 362880.0L))));
    return {c, s};
  }
  return {std::cos(x), std::sin(x)};
}

// g_pm, its partials, g_k and the flow derivative of g_k, on long doubles.
struct GPair {
  LD gp, gm;
};

GPair g_pm_ld(double lambda, std::span<const IndexTriple> set, LD rp, LD rm) {
  LD gp = 0.0L, gm = 0.0L;
  for (const auto& t : set) {
    const LD common = pow_int(rp + rm, t.p1) * pow_int(rp * rm, t.p2);
    gp += common * pow_int(rm, t.p3);
    gm += common * pow_int(rp, t.p3);
  }
  return {lambda * gp, lambda * gm};
}

struct SkLD {
  LD value = 0.0L, dp = 0.0L, dm = 0.0L;
};

SkLD s_k_ld(std::span<const IndexTriple> set, LD rp, LD rm) {
  SkLD out;
  for (const auto& t : set) {
    const LD s = rp + rm;
    const LD a = pow_int(s, t.p1);
    const LD b = pow_int(rp, t.p2);
    const LD c = pow_int(rm, t.p2 + t.p3);
    out.value += a * b * c;
    const LD da = t.p1 > 0 ? t.p1 * pow_int(s, t.p1 - 1) : 0.0L;
    const LD db = t.p2 > 0 ? t.p2 * pow_int(rp, t.p2 - 1) : 0.0L;
    const int ce = t.p2 + t.p3;
    const LD dc = ce > 0 ? ce * pow_int(rm, ce - 1) : 0.0L;
    out.dp += da * b * c + a * db * c;
    out.dm += da * b * c + a * b * dc;
  }
  return out;
}

struct GkEval {
  CLD g, gdot;
};

GkEval g_k_eval(double lambda, int k, std::span<const IndexTriple> set, CLD zp, CLD zm, CLD zdp,
                CLD zdm, LD rp, LD rm, LD rp_dot, LD rm_dot) {
  const SkLD s = s_k_ld(set, rp, rm);
  const CLD zp_k = pow_int(zp, k);
  const CLD zm_km1 = k > 0 ? pow_int(zm, k - 1) : CLD{0.0L, 0.0L};
  const CLD mono = zp_k * zp * zm_km1 * zm;
  const CLD mono_dot = static_cast<LD>(k + 1) * zp_k * zdp * (zm_km1 * zm) +
                       (k > 0 ? static_cast<LD>(k) * (zp_k * zp) * zm_km1 * zdm : CLD{0.0L, 0.0L});
  const LD lam = lambda;
  return {lam * mono * s.value, lam * (mono_dot * s.value + mono * (s.dp * rp_dot + s.dm * rm_dot))};
}

struct GPartials {
  LD dp, dm;
};

GPartials g_plus_partials_ld(double lambda, std::span<const IndexTriple> set, LD rp, LD rm) {
  LD dp = 0.0L, dm = 0.0L;
  for (const auto& t : set) {
    const LD s = rp + rm;
    const LD prod = rp * rm;
    const LD s_p1 = pow_int(s, t.p1);
    const LD prod_p2 = pow_int(prod, t.p2);
    const LD rm_p3 = pow_int(rm, t.p3);
    const LD ds = t.p1 > 0 ? t.p1 * pow_int(s, t.p1 - 1) : 0.0L;
    const LD dprod = t.p2 > 0 ? t.p2 * pow_int(prod, t.p2 - 1) : 0.0L;
    const LD drm = t.p3 > 0 ? static_cast<LD>(t.p3) : 0.0L;
    dp += ds * prod_p2 * rm_p3 + s_p1 * dprod * rm * rm_p3;
    dm += ds * prod_p2 * rm_p3 + s_p1 * dprod * rp * rm_p3 + s_p1 * prod_p2 * drm;
  }
  return {lambda * dp, lambda * dm};
}

struct LdCoeffs {
  LD tau, eps2, inv_eps2, alpha, lambda;
  int p;
  CLD carrier;  // e^{i tau/eps^2}
  LD sin_wt_over_w, cos_wt;
  std::vector<CLD> pk, qk, pdk, qdk;
  std::vector<std::span<const IndexTriple>> sets;  // index k = 0..p
  // frequency-only variant kernels
  CLD a, eb, adot, ebd, c, d, cdot, ddot;
};

LdCoeffs build(const Problem& problem, double tau) {
  const auto* pw = std::get_if<PurePower>(&problem.nonlinearity);
  if (!pw) throw std::invalid_argument("run_power_ld: pure power nonlinearity required");
  LdCoeffs lc;
  lc.tau = tau;
  lc.eps2 = static_cast<LD>(problem.epsilon) * problem.epsilon;
  lc.inv_eps2 = 1.0L / lc.eps2;
  lc.alpha = problem.alpha;
  lc.lambda = pw->lambda;
  lc.p = pw->p;

  for (int k = 0; k <= lc.p; ++k) lc.sets.push_back(index_set_view(lc.p, k));
  const detail::KernelPhases ph = detail::kernel_phases(tau, problem.epsilon, problem.alpha);
  lc.carrier = detail::to_cld(dd::rotation_from_angle(ph.u));
  dd::DD sw, cw;
  dd::sincos(ph.theta_w, sw, cw);
  const LD s = detail::to_ld(ph.s);
  lc.sin_wt_over_w = detail::to_ld(sw) / (s * lc.inv_eps2);
  lc.cos_wt = detail::to_ld(cw);
  for (int k = 1; k <= lc.p; ++k) {
    const auto g = detail::gautschi_ddc(k, tau, problem.epsilon, ph);
    lc.pk.push_back(detail::to_cld(g.p));
    lc.qk.push_back(detail::to_cld(g.q));
    lc.pdk.push_back(detail::to_cld(g.pdot));
    lc.qdk.push_back(detail::to_cld(g.qdot));
  }

  const CLD Ep = detail::to_cld(ph.rot_p);
  const CLD Em = detail::to_cld(ph.rot_m);
  const CLD i{0.0L, 1.0L};
  lc.a = ((1.0L + s) * Em - (1.0L - s) * Ep) / (2.0L * s);
  lc.eb = lc.eps2 * i * (Ep - Em) / (2.0L * s);
  lc.adot = i * static_cast<LD>(problem.alpha) * (Em - Ep) / (2.0L * s);
  lc.ebd = ((1.0L + s) * Ep - (1.0L - s) * Em) / (2.0L * s);
  const CLD phi_p = detail::phi1_imag(detail::to_ld(ph.theta_p), Ep);
  const CLD phi_m = detail::phi1_imag(detail::to_ld(ph.theta_m), Em);
  const CLD chi_p = detail::chi_imag(detail::to_ld(ph.theta_p), Ep);
  const CLD chi_m = detail::chi_imag(detail::to_ld(ph.theta_m), Em);
  const LD t = tau;
  lc.c = i * t * (phi_p - phi_m) / (2.0L * s);
  lc.d = t * lc.c - i * t * t * (chi_p - chi_m) / (2.0L * s);
  lc.cdot = i * (Ep - Em) / (2.0L * s);  // = b(tau)
  lc.ddot = lc.c;
  return lc;
}

struct LState {
  CLD y, ydot;
};

LD eval_g(const LdCoeffs& lc, LD rho) { return lc.lambda * pow_int(rho, lc.p); }

LState step_power(const LdCoeffs& lc, bool mdfa, const LState& st) {
  const CLD i{0.0L, 1.0L};
  const CLD ie2y = i * (lc.eps2 * st.ydot);
  const CLD zp0 = 0.5L * (st.y - ie2y);
  const CLD zm0 = std::conj(0.5L * (st.y + ie2y));
  const LD rp = std::norm(zp0), rm = std::norm(zm0);
  const GPair g = g_pm_ld(lc.lambda, lc.sets[0], rp, rm);
  const LD mu_p = 0.5L * (g.gp + lc.alpha);
  const LD mu_m = 0.5L * (g.gm + lc.alpha);
  const CLD zdp0 = i * mu_p * zp0;
  const CLD zdm0 = i * mu_m * zm0;
  const CLD rdot0 = -zdp0 - std::conj(zdm0);

  CLD zp1, zm1, zdp1, zdm1, r1, core;
  CLD u0{0.0L, 0.0L}, zddp1{0.0L, 0.0L}, zddm1{0.0L, 0.0L};
  if (mdfa) {
    const CLD php = cis_small(mu_p * lc.tau);
    const CLD phm = cis_small(mu_m * lc.tau);
    zp1 = php * zp0;
    zm1 = phm * zm0;
    zdp1 = i * mu_p * zp1;
    zdm1 = i * mu_m * zm1;
    zddp1 = -(mu_p * mu_p) * zp1;
    zddm1 = -(mu_m * mu_m) * zm1;
    u0 = -(mu_p * mu_p) * zp0 - (mu_m * mu_m) * std::conj(zm0);
    core = rdot0 - 0.5L * lc.tau * u0;
  } else {
    const CLD fp0 = g.gp * zp0;
    const CLD fm0 = g.gm * zm0;
    const LD rp_dot = 2.0L * (std::conj(zp0) * zdp0).real();
    const LD rm_dot = 2.0L * (std::conj(zm0) * zdm0).real();
    const GPartials pp = g_plus_partials_ld(lc.lambda, lc.sets[0], rp, rm);
    const GPartials pm_sw = g_plus_partials_ld(lc.lambda, lc.sets[0], rm, rp);  // (dm, dp) of g-
    const CLD fdp0 = (pp.dp * rp_dot + pp.dm * rm_dot) * zp0 + g.gp * zdp0;
    const CLD fdm0 = (pm_sw.dm * rp_dot + pm_sw.dp * rm_dot) * zm0 + g.gm * zdm0;
    zp1 = lc.a * zp0 + lc.eb * zdp0 - lc.c * fp0 - lc.d * fdp0;
    zm1 = lc.a * zm0 + lc.eb * zdm0 - lc.c * fm0 - lc.d * fdm0;
    zdp1 = lc.adot * zp0 + lc.ebd * zdp0 - lc.cdot * fp0 - lc.ddot * fdp0;
    zdm1 = lc.adot * zm0 + lc.ebd * zdm0 - lc.cdot * fm0 - lc.ddot * fdm0;
    core = rdot0;
  }

  CLD sum_r{0.0L, 0.0L}, sum_rd{0.0L, 0.0L};
  {
    const LD rp_dot = 2.0L * (std::conj(zp0) * zdp0).real();
    const LD rm_dot = 2.0L * (std::conj(zm0) * zdm0).real();
    for (int k = 1; k <= lc.p; ++k) {
      const auto set = lc.sets[k];
      const GkEval ep = g_k_eval(lc.lambda, k, set, zp0, zm0, zdp0, zdm0, rp, rm, rp_dot, rm_dot);
      const GkEval em = g_k_eval(lc.lambda, k, set, zm0, zp0, zdm0, zdp0, rm, rp, rm_dot, rp_dot);
      sum_r += lc.pk[k - 1] * ep.g + lc.qk[k - 1] * ep.gdot +
               std::conj(lc.pk[k - 1] * em.g + lc.qk[k - 1] * em.gdot);
      sum_rd += lc.pdk[k - 1] * ep.g + lc.qdk[k - 1] * ep.gdot +
                std::conj(lc.pdk[k - 1] * em.g + lc.qdk[k - 1] * em.gdot);
    }
  }
  r1 = lc.sin_wt_over_w * core - sum_r;

  const CLD zp_rot = lc.carrier * zp1;
  const CLD zm_rot = lc.carrier * zm1;
  const CLD y1 = zp_rot + std::conj(zm_rot) + r1;
  const CLD w = y1 - r1;
  const CLD h1 = eval_g(lc, std::norm(y1)) * y1 - eval_g(lc, std::norm(w)) * w;
  CLD rdot1;
  if (mdfa) {
    const CLD u1 = lc.carrier * zddp1 + std::conj(lc.carrier * zddm1);
    rdot1 = -sum_rd + lc.cos_wt * core - 0.5L * lc.tau * (h1 * lc.inv_eps2 + u1);
  } else {
    rdot1 = lc.cos_wt * core - 0.5L * lc.tau * lc.inv_eps2 * h1 - sum_rd;
  }

  LState out;
  out.y = y1;
  out.ydot = lc.carrier * (zdp1 + i * lc.inv_eps2 * zp1) +
             std::conj(lc.carrier * (zdm1 + i * lc.inv_eps2 * zm1)) + rdot1;
  return out;
}

}  // namespace

Samples run_power_ld(const Problem& problem, bool mdfa, double tau, long n_steps,
                     std::span<const long> sample_indices) {
  const LdCoeffs lc = build(problem, tau);
  Samples out;
  LState st{CLD{problem.phi1.real(), problem.phi1.imag()},
            CLD{problem.phi2.real(), problem.phi2.imag()} / lc.eps2};
  size_t next = 0;
  auto record = [&](long n) {
    while (next < sample_indices.size() && sample_indices[next] == n) {
      out.samples.push_back(State{static_cast<double>(n) * tau,
                                  Complex{static_cast<double>(st.y.real()), static_cast<double>(st.y.imag())},
                                  Complex{static_cast<double>(st.ydot.real()),
                                          static_cast<double>(st.ydot.imag())}});
      ++next;
    }
  };
  record(0);
  constexpr LD kBound2 = static_cast<LD>(kInstabilityBound) * kInstabilityBound;
  for (long n = 0; n < n_steps; ++n) {
    st = step_power(lc, mdfa, st);
    const LD ny = std::norm(st.y);
    if (!(ny <= kBound2) || !(std::norm(st.ydot) >= 0.0L)) {
      out.unstable = true;
      break;
    }
    record(n + 1);
  }
  out.final_state = State{static_cast<double>(n_steps) * tau,
                          Complex{static_cast<double>(st.y.real()), static_cast<double>(st.y.imag())},
                          Complex{static_cast<double>(st.ydot.real()),
                                  static_cast<double>(st.ydot.imag())}};
  return out;
}

}  // namespace mti::ldp
