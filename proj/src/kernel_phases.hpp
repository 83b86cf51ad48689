// Internal: extended-precision phase bookkeeping shared by the coefficient
// builder and the long-double reference runner. Not installed.
#pragma once

#include <complex>

#include "mti/dd.hpp"

namespace mti::detail {

using CLD = std::complex<long double>;

inline CLD to_cld(const dd::Rotation& r) {
  return {static_cast<long double>(r.hi.real()) + r.lo.real(),
          static_cast<long double>(r.hi.imag()) + r.lo.imag()};
}

inline long double to_ld(dd::DD x) { return static_cast<long double>(x.hi) + x.lo; }

// tau/eps^2 as a double-double quotient (exact when eps^2 is a power of two).
inline dd::DD tau_over_eps2(double tau, double epsilon) {
  return dd::div(dd::DD{tau, 0.0}, dd::two_prod(epsilon, epsilon));
}

// sqrt(1 + alpha eps^2) in double-double.
inline dd::DD stab_root(double epsilon, double alpha) {
  return dd::sqrt(dd::add(dd::mul(dd::two_prod(epsilon, epsilon), alpha), 1.0));
}

struct KernelPhases {
  dd::DD u;        // tau/eps^2
  dd::DD s;        // sqrt(1 + alpha eps^2)
  dd::DD theta_w;  // omega tau = u * s
  dd::DD theta_p;  // tau * lambda_plus = -u (1 + s)
  dd::DD theta_m;  // tau * lambda_minus = alpha tau / (1 + s)
  dd::Rotation rot_w, rot_p, rot_m;
};

inline KernelPhases kernel_phases(double tau, double epsilon, double alpha) {
  KernelPhases k;
  k.u = tau_over_eps2(tau, epsilon);
  k.s = stab_root(epsilon, alpha);
  k.theta_w = dd::mul(k.u, k.s);
  k.theta_p = dd::mul(dd::mul(k.u, dd::add(k.s, 1.0)), -1.0);
  k.theta_m = dd::div(dd::two_prod(alpha, tau), dd::add(k.s, 1.0));
  k.rot_w = dd::rotation_from_angle(k.theta_w);
  k.rot_p = dd::rotation_from_angle(k.theta_p);
  k.rot_m = dd::rotation_from_angle(k.theta_m);
  return k;
}

// phi1(i th) = (e^{i th} - 1)/(i th), chi(i th) = (e^{i th}(i th - 1) + 1)/(i th)^2.
// E must be e^{i th} to matching accuracy.
inline CLD phi1_imag(long double th, CLD E) {
  const CLD x{0.0L, th};
  if (std::abs(th) < 0.5L) {
    CLD term{1.0L, 0.0L}, sum{1.0L, 0.0L};
    for (int n = 1; n < 24; ++n) {
      term *= x / static_cast<long double>(n + 1);
      sum += term;
      if (std::abs(term) < 1e-24L) break;
    }
    return sum;
  }
  return (E - CLD{1.0L, 0.0L}) / x;
}

inline CLD chi_imag(long double th, CLD E) {
  const CLD x{0.0L, th};
  if (std::abs(th) < 0.5L) {
    CLD pw{1.0L, 0.0L};
    CLD sum{0.5L, 0.0L};
    long double fact = 2.0L;
    for (int n = 1; n < 24; ++n) {
      pw *= x;
      fact *= (n + 2);
      sum += pw * static_cast<long double>(n + 1) / fact;
      if (std::abs(pw) / fact < 1e-24L) break;
    }
    return sum;
  }
  return (E * (x - CLD{1.0L, 0.0L}) + CLD{1.0L, 0.0L}) / (x * x);
}

// Gautschi weights evaluated in double-double; at omega*tau << 1 the
// numerators cancel to O((omega tau)^3) of the term size.
struct GautschiDDC {
  dd::DDC p, q, pdot, qdot;
};

GautschiDDC gautschi_ddc(int k, double tau, double epsilon, const KernelPhases& ph);

inline CLD to_cld(dd::DDC v) { return {to_ld(v.re), to_ld(v.im)}; }

}  // namespace mti::detail
