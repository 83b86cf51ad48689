#include "kernel_phases.hpp"

namespace mti::detail {

// Evaluated in double-double: at omega*tau << 1 the numerators cancel down to
// O((omega tau)^3) of their term size, far beyond double (and even long
// double) precision at the tau used by reference runs.
GautschiDDC gautschi_ddc(int k, double tau, double epsilon, const KernelPhases& ph) {
  using dd::DD;
  using dd::DDC;
  const double K = 2 * k + 1;
  const DD e2 = dd::two_prod(epsilon, epsilon);
  const DD s = ph.s;
  const DD s2 = dd::mul(s, s);  // = 1 + alpha eps^2
  const DD den = dd::sub(DD{K * K, 0.0}, s2);
  const DD s2pK2 = dd::add(s2, K * K);
  const DD wt = ph.theta_w;
  const dd::Rotation rK = dd::rotation_from_angle(dd::mul(ph.u, K));
  const DDC E{DD{rK.hi.real(), rK.lo.real()}, DD{rK.hi.imag(), rK.lo.imag()}};
  DD sw, cw;
  dd::sincos(ph.theta_w, sw, cw);
  const DDC coswt{cw, DD{}};
  const DDC sinwt{sw, DD{}};

  GautschiDDC g;
  // p = eps^2 (s cos + iK sin - s E) / (s den)
  {
    DDC num = dd::sub(dd::add(dd::mul(coswt, s), dd::muli(dd::mul(sinwt, DD{K, 0}))), dd::mul(E, s));
    g.p = dd::div(dd::div(dd::mul(num, e2), s), den);
  }
  // pdot = (iK cos - s sin - iK E) / den
  {
    DDC num = dd::sub(dd::sub(dd::muli(dd::mul(coswt, DD{K, 0})), dd::mul(sinwt, s)),
                      dd::muli(dd::mul(E, DD{K, 0})));
    g.pdot = dd::div(num, den);
  }
  // q = eps^4 / (s den^2) [ i 2Ks cos - (s^2+K^2) sin + (-den wt - i 2Ks) E ]
  {
    const DD twoKs = dd::mul(s, 2.0 * K);
    DDC ecoef = dd::sub(dd::neg(DDC{dd::mul(den, wt), DD{}}), dd::muli(DDC{twoKs, DD{}}));
    DDC num = dd::add(dd::sub(dd::muli(dd::mul(coswt, twoKs)), dd::mul(sinwt, s2pK2)),
                      dd::mul(E, ecoef));
    g.q = dd::div(dd::div(dd::div(dd::mul(dd::mul(num, e2), e2), s), den), den);
  }
  // qdot = [ -eps^2 (s^2+K^2) cos - i 2K eps^2 s sin + (-iK tau den + eps^2 (s^2+K^2)) E ] / den^2
  {
    const DD e2s2pK2 = dd::mul(s2pK2, e2);
    DDC ecoef = dd::add(dd::neg(dd::muli(DDC{dd::mul(den, dd::mul(DD{tau, 0}, K)), DD{}})),
                        DDC{e2s2pK2, DD{}});
    DDC num = dd::add(dd::sub(dd::neg(dd::mul(coswt, e2s2pK2)),
                              dd::muli(dd::mul(sinwt, dd::mul(dd::mul(s, e2), 2.0 * K)))),
                      dd::mul(E, ecoef));
    g.qdot = dd::div(dd::div(num, den), den);
  }
  return g;
}


}  // namespace mti::detail
