/// Adaptive Gauss-Kronrod (G7/K15) integration of complex-valued integrands.
/// Used as the independent oracle behind every closed-form quadrature weight
/// and as the fallback evaluation path near removable singularities.
#pragma once

#include <functional>

#include "mti/model.hpp"

namespace mti {

struct QuadratureResult {
  Complex value{0.0, 0.0};
  double error_estimate = 0.0;
  long evaluations = 0;
  bool converged = true;
};

/// Integrates f over [a, b] to roughly abs_tol + rel_tol * |integral|.
/// Bisects adaptively; panels_hint pre-splits the interval (useful when the
/// oscillation count is known up front).
QuadratureResult integrate(const std::function<Complex(double)>& f, double a, double b,
                           double abs_tol = 1e-15, double rel_tol = 1e-13, int panels_hint = 1);

using ComplexLD = std::complex<long double>;

struct QuadratureResultLD {
  ComplexLD value{0.0L, 0.0L};
  long double error_estimate = 0.0L;
  long evaluations = 0;
  bool converged = true;
};

/// Extended-precision variant used by the coefficient audit, where the
/// defining integrals cancel to ~1e-7 of the integrand mass and a double
/// accumulator would bottom out above the 1e-10 comparison tolerance.
QuadratureResultLD integrate_ld(const std::function<ComplexLD(long double)>& f, long double a,
                                long double b, long double abs_tol = 1e-22L,
                                long double rel_tol = 1e-17L, int panels_hint = 1);

}  // namespace mti
