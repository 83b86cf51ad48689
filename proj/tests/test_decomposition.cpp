#include <doctest.h>

#include <cmath>
#include <random>

#include "mti/decomposition.hpp"
#include "mti/nonlinearity.hpp"

using namespace mti;

namespace {

Problem make_problem(double eps, double alpha, NonlinearitySpec spec) {
  Problem p;
  p.epsilon = eps;
  p.alpha = alpha;
  p.nonlinearity = std::move(spec);
  p.horizon_T = 1.0;
  return p;
}

}  // namespace

TEST_CASE("split formulas") {
  Problem p = make_problem(1.0, 0.0, make_power(1.0, 1));
  const DecomposedState d = split(p, {1, 0}, {1, 0}, DecompositionMode::MDF);
  CHECK(d.z_plus == Complex{0.5, -0.5});
  CHECK(d.z_minus == Complex{0.5, -0.5});
  CHECK(d.r == Complex{0, 0});

  const DecomposedState z = split(p, {0, 0}, {0, 0}, DecompositionMode::MDFA);
  CHECK(z.z_plus == Complex{0, 0});
  CHECK(z.zdot_plus == Complex{0, 0});
  CHECK(z.rdot == Complex{0, 0});
  CHECK(z.u0 == Complex{0, 0});
}

TEST_CASE("split mu example") {
  // power lambda=1, p=1, alpha=2, eps=0.5, y=1, ydot=1
  Problem p = make_problem(0.5, 2.0, make_power(1.0, 1));
  const DecomposedState d = split(p, {1, 0}, {1, 0}, DecompositionMode::MDFA);
  CHECK(std::norm(d.z_plus) == doctest::Approx(0.265625).epsilon(1e-15));
  CHECK(d.mu_plus == doctest::Approx(1.3984375).epsilon(1e-15));
  CHECK(d.mu_minus == doctest::Approx(1.3984375).epsilon(1e-15));
}

TEST_CASE("split consistency identities") {
  std::mt19937 rng(19);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (double eps : {1.0, 0.1, 1e-3})
    for (const auto& spec : {make_power(1.0, 1), make_sin2()})
      for (auto mode : {DecompositionMode::MDF, DecompositionMode::MDFA})
        for (int it = 0; it < 10; ++it) {
          Problem p = make_problem(eps, 2.0, spec);
          const Complex y{u(rng), u(rng)};
          const Complex ydot{u(rng) / (eps * eps), u(rng) / (eps * eps)};
          const DecomposedState d = split(p, y, ydot, mode);
          // z+ + conj(z-) = y
          CHECK(std::abs(d.z_plus + std::conj(d.z_minus) - y) <= 1e-14 * (1 + std::abs(y)));
          // (i/eps^2)(z+ - conj(z-)) + zdot+ + conj(zdot-) + rdot = ydot
          const Complex lhs = Complex{0, 1} / (eps * eps) * (d.z_plus - std::conj(d.z_minus)) +
                              d.zdot_plus + std::conj(d.zdot_minus) + d.rdot;
          CHECK(std::abs(lhs - ydot) <= 1e-12 * (1 + std::abs(ydot)));
          // |z_pm| <= (|y| + eps^2 |ydot|)/2
          const double bound = 0.5 * (std::abs(y) + eps * eps * std::abs(ydot)) * (1 + 1e-14);
          CHECK(std::abs(d.z_plus) <= bound);
          CHECK(std::abs(d.z_minus) <= bound);
        }
}

TEST_CASE("split-reconstruct round trip at tau=0") {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (double eps : {1.0, 0.1, 1e-3})
    for (const auto& spec : {make_power(1.0, 1), make_power(0.5, 3), make_sin2()})
      for (auto mode : {DecompositionMode::MDF, DecompositionMode::MDFA})
        for (int it = 0; it < 10; ++it) {
          Problem p = make_problem(eps, 2.0, spec);
          const Complex y{u(rng), u(rng)};
          const Complex ydot{u(rng) / (eps * eps), u(rng) / (eps * eps)};
          const DecomposedState d = split(p, y, ydot, mode);
          const CoefficientSet cs = make_coefficients(0.0, eps, p.alpha, 0);
          const State back = reconstruct(d, 0.0, cs);
          CHECK(std::abs(back.y - y) <= 4e-15 * (1 + std::abs(y)));
          CHECK(std::abs(back.ydot - ydot) <= 4e-15 * (1 + std::abs(ydot)));
        }
}

TEST_CASE("reconstruct zero and triangle bound") {
  const CoefficientSet cs = make_coefficients(0.1, 0.5, 2.0, 0);
  const State z = reconstruct(DecomposedState{}, 0.1, cs);
  CHECK(z.y == Complex{0, 0});
  CHECK(z.ydot == Complex{0, 0});

  std::mt19937 rng(37);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int it = 0; it < 50; ++it) {
    DecomposedState d;
    d.z_plus = {u(rng), u(rng)};
    d.z_minus = {u(rng), u(rng)};
    d.r = {u(rng), u(rng)};
    const State s = reconstruct(d, 0.1, cs);
    CHECK(std::abs(s.y) <=
          (std::abs(d.z_plus) + std::abs(d.z_minus) + std::abs(d.r)) * (1 + 1e-14));
  }
}
