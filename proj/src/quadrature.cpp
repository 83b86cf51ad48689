#include "mti/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace mti {

namespace {

// Kronrod-15 abscissae on [-1, 1] (positive half) and weights; the embedded
// Gauss-7 rule uses the even-indexed abscissae.
constexpr long double kXgk[8] = {
    0.991455371120812639206854697526329L, 0.949107912342758524526189684047851L,
    0.864864423359769072789712788640926L, 0.741531185599394439863864773280788L,
    0.586087235467691130294144838258730L, 0.405845151377397166906606412076961L,
    0.207784955007898467600689403773245L, 0.000000000000000000000000000000000L};
constexpr long double kWgk[8] = {
    0.022935322010529224963732008058970L, 0.063092092629978553290700663189204L,
    0.104790010322250183839876322541518L, 0.140653259715525918745189590510238L,
    0.169004726639267902826583426598550L, 0.190350578064785409913256402421014L,
    0.204432940075298892414161999234649L, 0.209482141084727828012999174891714L};
constexpr long double kWg[4] = {
    0.129484966168869693270611432679082L, 0.279705391489276667901467771423780L,
    0.381830050505118944950369775488975L, 0.417959183673469387755102040816327L};

template <class Real, class Cplx, class Fn>
struct Adaptive {
  struct PanelEstimate {
    Cplx k15;
    Real err;
  };

  const Fn* f;
  Real abs_tol, rel_tol;
  long evals = 0;
  long max_evals = 4'000'000;
  bool converged = true;
  Real scale = 0;
  Real accepted_err = 0;

  PanelEstimate gk15(Real a, Real b) {
    const Real c = (a + b) / 2;
    const Real h = (b - a) / 2;
    Cplx fv[15];
    for (int i = 0; i < 7; ++i) {
      fv[i] = (*f)(c - h * static_cast<Real>(kXgk[i]));
      fv[14 - i] = (*f)(c + h * static_cast<Real>(kXgk[i]));
    }
    fv[7] = (*f)(c);
    evals += 15;
    Cplx k15{0, 0}, g7{0, 0};
    for (int i = 0; i < 7; ++i) k15 += static_cast<Real>(kWgk[i]) * (fv[i] + fv[14 - i]);
    k15 += static_cast<Real>(kWgk[7]) * fv[7];
    for (int i = 0; i < 3; ++i) g7 += static_cast<Real>(kWg[i]) * (fv[2 * i + 1] + fv[13 - 2 * i]);
    g7 += static_cast<Real>(kWg[3]) * fv[7];
    k15 *= h;
    g7 *= h;
    return {k15, std::abs(k15 - g7)};
  }

  Cplx refine(Real a, Real b, PanelEstimate est, int depth) {
    const Real tol = std::max(abs_tol * (b - a), rel_tol * scale * (b - a));
    if (est.err <= tol || depth >= 52 || evals > max_evals) {
      if (est.err > tol) converged = false;
      accepted_err += est.err;
      return est.k15;
    }
    const Real c = (a + b) / 2;
    PanelEstimate left = gk15(a, c);
    PanelEstimate right = gk15(c, b);
    return refine(a, c, left, depth + 1) + refine(c, b, right, depth + 1);
  }

  Cplx run(Real a, Real b, int panels_hint, Real& err_out) {
    const int n0 = std::max(1, panels_hint);
    std::vector<Real> edges(n0 + 1);
    for (int i = 0; i <= n0; ++i) edges[i] = a + (b - a) * i / n0;
    std::vector<PanelEstimate> first(n0);
    Real mag = 0;
    for (int i = 0; i < n0; ++i) {
      first[i] = gk15(edges[i], edges[i + 1]);
      mag += std::abs(first[i].k15);
    }
    scale = mag;
    abs_tol /= std::max<Real>(1e-300L, b - a);
    rel_tol /= std::max<Real>(1e-300L, b - a);
    Cplx total{0, 0};
    for (int i = 0; i < n0; ++i) total += refine(edges[i], edges[i + 1], first[i], 0);
    err_out = accepted_err;
    return total;
  }
};

}  // namespace

QuadratureResult integrate(const std::function<Complex(double)>& f, double a, double b,
                           double abs_tol, double rel_tol, int panels_hint) {
  QuadratureResult out;
  if (a == b) return out;
  Adaptive<double, Complex, std::function<Complex(double)>> ws;
  ws.f = &f;
  ws.abs_tol = abs_tol;
  ws.rel_tol = rel_tol;
  double err = 0.0;
  out.value = ws.run(a, b, panels_hint, err);
  out.error_estimate = err;
  out.evaluations = ws.evals;
  out.converged = ws.converged;
  return out;
}

QuadratureResultLD integrate_ld(const std::function<ComplexLD(long double)>& f, long double a,
                                long double b, long double abs_tol, long double rel_tol,
                                int panels_hint) {
  QuadratureResultLD out;
  if (a == b) return out;
  Adaptive<long double, ComplexLD, std::function<ComplexLD(long double)>> ws;
  ws.f = &f;
  ws.abs_tol = abs_tol;
  ws.rel_tol = rel_tol;
  long double err = 0.0L;
  out.value = ws.run(a, b, panels_hint, err);
  out.error_estimate = err;
  out.evaluations = ws.evals;
  out.converged = ws.converged;
  return out;
}

}  // namespace mti
