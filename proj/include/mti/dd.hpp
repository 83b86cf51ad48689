/// Double-double helpers for phase constants that are applied millions of
/// times per trajectory. A unit rotation stored as a plain double carries an
/// O(1e-16) bias that accumulates coherently over long runs; storing it as a
/// hi/lo pair keeps the bias below 1e-30 while the per-step cost stays at two
/// complex multiplies.
#pragma once

#include <cmath>
#include <complex>

namespace mti::dd {

struct DD {
  double hi = 0.0;
  double lo = 0.0;
};

inline DD two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  double err = (a - (s - bb)) + (b - bb);
  return {s, err};
}

inline DD quick_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}

inline DD two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline DD add(DD a, DD b) {
  DD s = two_sum(a.hi, b.hi);
  s.lo += a.lo + b.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline DD add(DD a, double b) { return add(a, DD{b, 0.0}); }

inline DD sub(DD a, DD b) { return add(a, DD{-b.hi, -b.lo}); }

inline DD mul(DD a, DD b) {
  DD p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, p.lo);
}

inline DD mul(DD a, double b) { return mul(a, DD{b, 0.0}); }

inline DD div(DD a, double b) {
  double q0 = a.hi / b;
  DD r = sub(a, two_prod(q0, b));
  double q1 = (r.hi + r.lo) / b;
  return quick_two_sum(q0, q1);
}

inline DD div(DD a, DD b) {
  double q0 = a.hi / b.hi;
  DD r = sub(a, mul(b, q0));
  double q1 = (r.hi + r.lo) / b.hi;
  return quick_two_sum(q0, q1);
}

inline DD from_prod(double a, double b) { return two_prod(a, b); }

inline DD sqrt(DD a) {
  double s0 = std::sqrt(a.hi);
  if (s0 == 0.0) return {0.0, 0.0};
  // one Newton step in double-double
  DD s0s0 = two_prod(s0, s0);
  DD r = sub(a, s0s0);
  double corr = (r.hi + r.lo) / (2.0 * s0);
  return quick_two_sum(s0, corr);
}

// 2*pi and pi/2 split into hi/lo parts.
inline constexpr double kTwoPiHi = 6.283185307179586476925286766559005768e+00;
inline constexpr double kTwoPiLo = 2.449293598294706414240560905866311248e-16;
inline constexpr double kHalfPiHi = 1.570796326794896619231321691639751442e+00;
inline constexpr double kHalfPiLo = 6.123233995736766035868820147291983121e-17;

// Reduce an angle to (-pi, pi] in double-double.
inline DD reduce_two_pi(DD theta) {
  double n = std::nearbyint(theta.hi / kTwoPiHi);
  if (n == 0.0) return theta;
  DD t = sub(theta, two_prod(n, kTwoPiHi));
  t = sub(t, two_prod(n, kTwoPiLo));
  return t;
}

namespace detail {

// Taylor series on |x| <= pi/4 + slack; terms to ~1e-35.
inline DD sin_taylor(DD x) {
  DD x2 = mul(x, x);
  DD term = x;
  DD sum = x;
  for (int j = 1; j <= 16; ++j) {
    term = mul(term, x2);
    term = div(term, -static_cast<double>(2 * j) * (2 * j + 1));
    sum = add(sum, term);
    if (std::abs(term.hi) < 1e-35) break;
  }
  return sum;
}

inline DD cos_taylor(DD x) {
  DD x2 = mul(x, x);
  DD term{1.0, 0.0};
  DD sum{1.0, 0.0};
  for (int j = 1; j <= 16; ++j) {
    term = mul(term, x2);
    term = div(term, -static_cast<double>(2 * j - 1) * (2 * j));
    sum = add(sum, term);
    if (std::abs(term.hi) < 1e-35) break;
  }
  return sum;
}

}  // namespace detail

// sin/cos of an arbitrary double-double angle.
inline void sincos(DD theta, DD& s, DD& c) {
  DD t = reduce_two_pi(theta);
  double m = std::nearbyint(t.hi / kHalfPiHi);
  t = sub(t, two_prod(m, kHalfPiHi));
  t = sub(t, two_prod(m, kHalfPiLo));
  DD st = detail::sin_taylor(t);
  DD ct = detail::cos_taylor(t);
  int q = static_cast<int>(m) & 3;
  if (q < 0) q += 4;
  switch (q) {
    case 0: s = st; c = ct; break;
    case 1: s = ct; c = DD{-st.hi, -st.lo}; break;
    case 2: s = DD{-st.hi, -st.lo}; c = DD{-ct.hi, -ct.lo}; break;
    default: s = DD{-ct.hi, -ct.lo}; c = st; break;
  }
}

// Complex arithmetic over double-double components; used once per
// trajectory to evaluate closed-form weights whose terms cancel far below
// double precision.
struct DDC {
  DD re, im;
};

inline DDC add(DDC a, DDC b) { return {add(a.re, b.re), add(a.im, b.im)}; }
inline DDC sub(DDC a, DDC b) { return {sub(a.re, b.re), sub(a.im, b.im)}; }
inline DDC mul(DDC a, DDC b) {
  return {sub(mul(a.re, b.re), mul(a.im, b.im)), add(mul(a.re, b.im), mul(a.im, b.re))};
}
inline DDC mul(DDC a, DD r) { return {mul(a.re, r), mul(a.im, r)}; }
inline DDC div(DDC a, DD r) { return {div(a.re, r), div(a.im, r)}; }
inline DDC muli(DDC a) { return {DD{-a.im.hi, -a.im.lo}, a.re}; }  // times i
inline DDC neg(DDC a) { return {DD{-a.re.hi, -a.re.lo}, DD{-a.im.hi, -a.im.lo}}; }

// A unit rotation e^{i*theta} kept as a hi/lo pair of complex doubles.
// apply() costs two complex multiplies and removes the coherent bias a
// single-double constant would reintroduce each step.
struct Rotation {
  std::complex<double> hi{1.0, 0.0};
  std::complex<double> lo{0.0, 0.0};

  std::complex<double> apply(std::complex<double> z) const { return hi * z + lo * z; }
  Rotation conj() const { return {std::conj(hi), std::conj(lo)}; }
};

inline Rotation rotation_from_angle(DD theta) {
  DD s, c;
  sincos(theta, s, c);
  Rotation r;
  r.hi = {c.hi, s.hi};
  r.lo = {c.lo, s.lo};
  return r;
}

}  // namespace mti::dd
