/// Baseline integrators the multiscale methods are compared against: two
/// exponential wave integrators on three-term recursions (EWI-G stabilized
/// Gautschi, EWI-D Deuflhard), the mollified-impulse one-step pair
/// (EWI-F1/EWI-F2), and the finite-difference trio (CNFD, SIFD, EXFD).
/// All of them restrict to the pure power nonlinearity.
#pragma once

#include "mti/method.hpp"
#include "mti/model.hpp"
#include "mti/steppers.hpp"

namespace mti {

/// Two-step history carried by the recursion methods.
struct TwoStepState {
  Complex y_prev{0, 0}, y_curr{0, 0};
  Complex ydot_prev{0, 0}, ydot_curr{0, 0};
  double stabilizer = 0.0;  // EWI-G alpha^n, monotone nondecreasing
  long n = 0;               // index of y_curr
};

/// Filter functions of rho = omega*tau for the mollified impulse methods.
/// Both shipped sets share psi = sinc^2 and psi1 = sinc (the algebraic
/// simplification of psi/sinc that avoids 0/0 at rho = m*pi); they differ in
/// the inner filter phi.
struct FilterSet {
  double psi = 1.0, phi = 1.0, psi0 = 1.0, psi1 = 1.0;
};
FilterSet make_filters(Method m, double rho);  // EwiF1 or EwiF2

/// sinc(rho) = sin(rho)/rho with a series branch for tiny rho.
double sinc(double rho);

/// Shared starting rule: y^0 = phi1 and the trapezoidal exponential first
/// step for y^1 (the Taylor start is violently unstable for tau >> eps^2).
TwoStepState first_step(const Problem& problem, double tau);

TwoStepState step_ewi_g(const Problem& problem, const TwoStepState& s, double tau);
TwoStepState step_ewi_d(const Problem& problem, const TwoStepState& s, double tau);
TwoStepState step_ewi_filtered(const Problem& problem, const TwoStepState& s, double tau,
                               const FilterSet& filters);

struct FdStepResult {
  Complex y_next;
  bool solver_failed = false;
};
FdStepResult step_cnfd(const Problem& problem, Complex y_prev, Complex y_curr, double tau);
Complex step_sifd(const Problem& problem, Complex y_prev, Complex y_curr, double tau);
Complex step_exfd(const Problem& problem, Complex y_prev, Complex y_curr, double tau);

/// Difference quotient [F(rho1)-F(rho2)]/(rho1-rho2) with the analytic limit
/// g((rho1+rho2)/2) when the densities are too close to divide.
double cnfd_difference_quotient(const PurePower& pw, double rho1, double rho2);

/// Discrete energy conserved by CNFD.
double cnfd_discrete_energy(const Problem& problem, Complex y_curr, Complex y_next, double tau);

/// Runs n_steps of a classical method from the problem's initial data.
/// For the FD methods the final ydot is the centered difference
/// (y^{n+1} - y^{n-1})/(2 tau), which costs one extra step at the end.
RunOutcome run_classical(const Problem& problem, Method method, double tau, long n_steps,
                         std::span<const long> sample_indices = {});

/// Dispatches to run_mti or run_classical.
RunOutcome run_trajectory(const Problem& problem, Method method, double tau, long n_steps,
                          std::span<const long> sample_indices = {});

}  // namespace mti
