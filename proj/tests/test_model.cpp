#include <doctest.h>

#include <cmath>
#include <random>

#include "mti/model.hpp"
#include "mti/nonlinearity.hpp"

using namespace mti;

namespace {

Problem make_problem(double eps, double alpha, NonlinearitySpec spec) {
  Problem p;
  p.epsilon = eps;
  p.alpha = alpha;
  p.nonlinearity = std::move(spec);
  p.horizon_T = 4.0;
  return p;
}

}  // namespace

TEST_CASE("energy closed form") {
  // eps=1, alpha=0, lambda=1, p=1, y=1, ydot=1: 1 + 1 + F(1)=1/2
  Problem p = make_problem(1.0, 0.0, make_power(1.0, 1));
  CHECK(energy(p, {0.0, {1, 0}, {1, 0}}) == doctest::Approx(2.5).epsilon(1e-14));

  CHECK(energy(p, {0.0, {0, 0}, {0, 0}}) == 0.0);

  Problem q = make_problem(0.5, 2.0, make_power(1.0, 1));
  CHECK(energy(q, {0.0, {1, 0}, {0, 0}}) == doctest::Approx(6.5).epsilon(1e-14));

  Problem gen = make_problem(0.5, 2.0, make_sin2());
  CHECK_THROWS_AS(energy(gen, {0.0, {1, 0}, {0, 0}}), std::invalid_argument);
}

TEST_CASE("energy matches initial-data expression") {
  // E(0) = |phi2|^2/eps^2 + (alpha + 1/eps^2)|phi1|^2 + F(|phi1|^2)
  Problem p = make_problem(0.5, 2.0, make_power(1.0, 1));
  p.phi1 = {1.0, 0.0};
  p.phi2 = {1.0, 0.0};
  const double eps2 = 0.25;
  const State s0{0.0, p.phi1, p.phi2 / eps2};
  const double expected = 1.0 / eps2 + (2.0 + 1.0 / eps2) + 0.5;
  CHECK(energy(p, s0) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("error pair") {
  State a{1.0, {1, 1}, {2, 0}};
  auto e = error_pair(a, a, 0.5);
  CHECK(e.e == 0.0);
  CHECK(e.edot_scaled == 0.0);

  State b = a;
  b.y += Complex{0, 1};
  e = error_pair(a, b, 0.5);
  CHECK(e.e == doctest::Approx(1.0));
  CHECK(e.edot_scaled == 0.0);

  State c = a;
  c.ydot += 4.0;
  e = error_pair(a, c, 0.5);
  CHECK(e.e == 0.0);
  CHECK(e.edot_scaled == doctest::Approx(1.0));
}

TEST_CASE("convergence rate") {
  CHECK(*convergence_rate(16.0, 1.0) == doctest::Approx(2.0));
  CHECK(*convergence_rate(4.0, 1.0) == doctest::Approx(1.0));
  CHECK(*convergence_rate(5.71e-1, 5.28e-2) == doctest::Approx(1.72).epsilon(0.005));
  CHECK(!convergence_rate(0.0, 1.0));
  CHECK(!convergence_rate(1.0, 0.0));
  CHECK(!convergence_rate(std::nan(""), 1.0));
  CHECK(!convergence_rate(1.0, std::numeric_limits<double>::infinity()));
}

TEST_CASE("error energy dominates the pair") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int it = 0; it < 200; ++it) {
    const double eps = std::exp(u(rng));
    const double eps_c = std::min(1.0, std::abs(eps) + 0.01);
    const double alpha = std::abs(u(rng));
    const Complex e{u(rng), u(rng)};
    const Complex edot{u(rng), u(rng)};
    const double E = error_energy(eps_c, alpha, e, edot);
    CHECK(std::abs(e) <= eps_c * std::sqrt(E) * (1 + 1e-12));
    CHECK(eps_c * eps_c * std::abs(edot) <= eps_c * std::sqrt(E) * (1 + 1e-12));
    CHECK(E >= 0.0);
  }
  CHECK(error_energy(0.5, 2.0, {0, 0}, {0, 0}) == 0.0);
}

TEST_CASE("instability flag") {
  CHECK(!unstable_state({0.0, {1, 0}, {1, 0}}));
  CHECK(unstable_state({0.0, {1.5e8, 0}, {0, 0}}));
  CHECK(unstable_state({0.0, {std::nan(""), 0}, {0, 0}}));
  CHECK(unstable_state({0.0, {0, 0}, {std::numeric_limits<double>::infinity(), 0}}));
}

TEST_CASE("problem validation") {
  Problem p = make_problem(0.5, 2.0, make_power(1.0, 1));
  CHECK_NOTHROW(p.validate());
  p.epsilon = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.epsilon = 1.5;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.epsilon = 0.5;
  p.alpha = -1.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.alpha = 0.0;
  p.horizon_T = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}
