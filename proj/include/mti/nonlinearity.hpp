/// Nonlinearity algebra shared by the multiscale integrators.
///
/// For y(s) = e^{is/eps^2} z+ + e^{-is/eps^2} conj(z-) + r the gauge-invariant
/// forcing f(y) splits into the two eps^2-frequency components
///   f_pm(z+, z-) = (1/2pi) Int_0^{2pi} f(z_pm + e^{i theta} conj(z_mp)) dtheta
/// and a remainder f_r carrying every other harmonic. For the pure power
/// f = lambda |y|^{2p} y everything collapses to closed forms indexed by
///   <p1,p2,p3>_k = { p1 + 2 p2 + p3 = p - k, p3 in {0,1} }.
#pragma once

#include <span>
#include <utility>
#include <vector>

#include "mti/model.hpp"

namespace mti {

struct IndexTriple {
  int p1 = 0, p2 = 0, p3 = 0;
};

/// Exhaustive, duplicate-free enumeration of <p1,p2,p3>_k in lexicographic
/// order; empty when k > p.
std::vector<IndexTriple> index_set(int p, int k);

/// Same enumeration served from a static table; the per-step evaluators query
/// it and must not allocate.
std::span<const IndexTriple> index_set_view(int p, int k);

/// f(y) for either spec kind.
Complex eval_f(const NonlinearitySpec& spec, Complex y);

/// g(rho) = lambda rho^p and its antiderivative.
double eval_g(const PurePower& pw, double rho);
double antiderivative_F(const PurePower& pw, double rho);

/// Closed-form pair (g+, g-) with g+ using rho_minus^{p3} and g- symmetric.
std::pair<double, double> g_pm(double lambda, int p, double rho_plus, double rho_minus);

/// Partial derivatives (d/drho_plus, d/drho_minus) of g+ evaluated at
/// (rho_plus, rho_minus). g-'s partials follow by swapping the arguments.
std::pair<double, double> g_plus_partials(double lambda, int p, double rho_plus, double rho_minus);

/// Coefficient of e^{i(2k+1)s/eps^2} in g(|w|^2) w for the two-frequency wave
/// w = e^{is/eps^2} z+ + e^{-is/eps^2} conj(z-); zero when k > p.
Complex g_k(double lambda, int p, int k, Complex z_plus, Complex z_minus);

/// (f+, f-); closed form for PurePower, composite trapezoidal rule with
/// spec.quadrature_nodes points for General (spectrally accurate on the
/// periodic integrand).
std::pair<Complex, Complex> f_pm(const NonlinearitySpec& spec, Complex z_plus, Complex z_minus);

/// h(z+,z-,r;s) = g(|w+r|^2)(w+r) - g(|w|^2) w, identically zero at r = 0.
/// PurePower only; the general path works with f_r directly.
Complex h_remainder(const NonlinearitySpec& spec, Complex z_plus, Complex z_minus, Complex r,
                    double s, double epsilon);

/// Full-frequency remainder f(ansatz) - f+ e^{is/eps^2} - conj(f-) e^{-is/eps^2}.
Complex f_r(const NonlinearitySpec& spec, Complex z_plus, Complex z_minus, Complex r, double s,
            double epsilon);

/// d/ds [f_pm(z+(s), z-(s))] at the given (z, zdot): analytic chain rule for
/// PurePower, differentiation under the quadrature via the Wirtinger
/// derivatives for General.
std::pair<Complex, Complex> flow_derivative_f_pm(const NonlinearitySpec& spec, Complex z_plus,
                                                 Complex z_minus, Complex zdot_plus,
                                                 Complex zdot_minus);

/// d/ds [g_k(z+(s), z-(s))] at the given (z, zdot). The swapped-argument
/// derivative d/ds g_k(z-(s), z+(s)) is obtained by swapping both pairs.
Complex flow_derivative_g_k(double lambda, int p, int k, Complex z_plus, Complex z_minus,
                            Complex zdot_plus, Complex zdot_minus);

/// Largest change in f_pm when doubling the trapezoidal node count; a
/// spectral-accuracy audit for General specs (PurePower returns 0).
double quadrature_doubling_delta(const NonlinearitySpec& spec, Complex z_plus, Complex z_minus);

NonlinearitySpec make_power(double lambda, int p);

/// The pure power recast as a General spec with exact Wirtinger derivatives;
/// used to cross-validate the quadrature path against the closed forms.
NonlinearitySpec make_power_as_general(double lambda, int p, int nodes = 64);

/// f(y) = sin^2(|y|^2) y with analytic Wirtinger derivatives.
NonlinearitySpec make_sin2(int nodes = 64);

/// "power:lambda:p" or "sin2"; nullopt when unrecognized.
std::optional<NonlinearitySpec> parse_nonlinearity(const std::string& text);

std::string nonlinearity_name(const NonlinearitySpec& spec);

}  // namespace mti
