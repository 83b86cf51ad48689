/// Per-step splitting of (y^n, ydot^n) into the multiscale variables
/// (z_pm, zdot_pm, r, rdot) and reconstruction of (y^{n+1}, ydot^{n+1}) from
/// their values at local time tau. The split is recomputed from the numerical
/// state at every step and never carried across steps.
#pragma once

#include "mti/coefficients.hpp"
#include "mti/model.hpp"

namespace mti {

enum class DecompositionMode { MDF, MDFA };

struct DecomposedState {
  Complex z_plus{0, 0}, z_minus{0, 0};
  Complex zdot_plus{0, 0}, zdot_minus{0, 0};
  Complex r{0, 0};     // zero immediately after a split
  Complex rdot{0, 0};
  double mu_plus = 0.0, mu_minus = 0.0;  // power case only
  Complex u0{0, 0};                      // MDFA only: u(0) = -mu^2 z terms
};

/// Well-prepared initial data: z_pm from (y, eps^2 ydot), zdot_pm from the
/// frozen first-order z equation, r = 0 and rdot balancing the ydot identity.
DecomposedState split(const Problem& problem, Complex y_n, Complex ydot_n, DecompositionMode mode);

/// y = e^{i tau/eps^2} z+ + e^{-i tau/eps^2} conj(z-) + r and the matching
/// ydot; the carrier rotation comes from the coefficient set so the phase is
/// consistent with the stepper that evolved d.
State reconstruct(const DecomposedState& d, double t_next, const CoefficientSet& cs);

}  // namespace mti
