#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <unistd.h>

#include "mti/coefficients.hpp"
#include "mti/model.hpp"
#include "mti/nonlinearity.hpp"
#include "mti/reference.hpp"

using namespace mti;

namespace {

Problem benchmark_problem(double eps) {
  Problem p;
  p.epsilon = eps;
  p.alpha = 2.0;
  p.nonlinearity = make_power(1.0, 1);
  p.phi1 = {1, 0};
  p.phi2 = {1, 0};
  p.horizon_T = 4.0;
  return p;
}

RefSettings fast_settings() {
  RefSettings s;
  s.tau_ref = 2e-5;  // keep unit-test references cheap
  s.richardson_tol = 1e-8;
  return s;
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("mtiref-test-" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("linear problem reference matches the closed form") {
  Problem p = benchmark_problem(0.5);
  p.nonlinearity = make_power(0.0, 1);
  RefSettings s = fast_settings();
  s.richardson_tol = 1e-9;
  const double times[1] = {4.0};
  const ReferenceSolution ref = generate_reference(p, times, s);
  const double w = omega(0.5, 2.0);
  const Complex exact = std::cos(w * ref.times[0]) * p.phi1 +
                        std::sin(w * ref.times[0]) / (0.25 * w) * p.phi2;
  CHECK(std::abs(ref.y[0] - exact) <= 1e-9);
  CHECK(ref.richardson_delta <= 1e-9);
}

TEST_CASE("time zero sample") {
  Problem p = benchmark_problem(0.5);
  const double times[1] = {0.0};
  RefSettings s = fast_settings();
  s.run_cross_checks = false;
  const ReferenceSolution ref = generate_reference(p, times, s);
  CHECK(ref.y[0] == p.phi1);
  CHECK(ref.ydot[0] == p.phi2 / 0.25);
}

TEST_CASE("dual-generator agreement at eps >= 0.05") {
  const Problem p = benchmark_problem(0.5);
  const double times[1] = {4.0};
  const ReferenceSolution ref = generate_reference(p, times, fast_settings());
  CHECK(ref.cross_path == "rk4");
  CHECK(ref.cross_deviation >= 0.0);
  CHECK(ref.cross_deviation <= 1e-7);

  const CrossValidationReport rep = cross_validate(ref, fast_settings());
  CHECK(rep.path == "rk4");
  CHECK(rep.max_deviation <= 1e-7);
}

TEST_CASE("small-eps cross check switches to the second scheme") {
  const Problem p = benchmark_problem(0.03125);
  const double times[1] = {4.0};
  RefSettings s = fast_settings();
  const ReferenceSolution ref = generate_reference(p, times, s);
  CHECK(ref.cross_path == "mti-f");
  CHECK(ref.cross_deviation <= 1e-8);
  const CrossValidationReport rep = cross_validate(ref, s);
  CHECK(rep.path.find("skipped") != std::string::npos);
}

TEST_CASE("determinism and cache round trip") {
  TempDir tmp;
  Problem p = benchmark_problem(0.25);
  const double times[2] = {2.0, 4.0};
  RefSettings s = fast_settings();
  s.run_cross_checks = false;
  s.cache_dir = tmp.path.string();

  const ReferenceSolution a = generate_reference(p, times, s);
  CHECK(!a.loaded_from_cache);
  const ReferenceSolution b = generate_reference(p, times, s);
  CHECK(b.loaded_from_cache);
  REQUIRE(a.y.size() == b.y.size());
  for (size_t i = 0; i < a.y.size(); ++i) {
    CHECK(a.y[i] == b.y[i]);  // bit-identical through the binary cache
    CHECK(a.ydot[i] == b.ydot[i]);
  }
  CHECK(a.fingerprint == b.fingerprint);
  CHECK(b.richardson_delta == a.richardson_delta);

  // text format round trip (17 significant digits reproduce doubles exactly)
  const std::string csv_path = (tmp.path / "export.csv").string();
  write_reference_file(a, csv_path);
  const ReferenceSolution c = read_reference_file(csv_path);
  REQUIRE(c.y.size() == a.y.size());
  for (size_t i = 0; i < a.y.size(); ++i) {
    CHECK(c.times[i] == a.times[i]);
    CHECK(c.y[i] == a.y[i]);
    CHECK(c.ydot[i] == a.ydot[i]);
  }
}

TEST_CASE("fingerprints distinguish the inputs") {
  const Problem p = benchmark_problem(0.5);
  const Problem q = benchmark_problem(0.25);
  const double times[1] = {4.0};
  RefSettings s = fast_settings();
  const auto fp = reference_fingerprint(p, times, s);
  CHECK(fp != reference_fingerprint(q, times, s));
  RefSettings s2 = s;
  s2.tau_ref = 1e-6;
  CHECK(fp != reference_fingerprint(p, times, s2));
  Problem gen = p;
  gen.nonlinearity = make_sin2();
  CHECK(fp != reference_fingerprint(gen, times, s));
  const double other_times[1] = {2.0};
  CHECK(fp != reference_fingerprint(p, other_times, s));
}

TEST_CASE("energy drift along the reference trajectory") {
  const Problem p = benchmark_problem(0.5);
  std::vector<double> times;
  for (int i = 0; i <= 8; ++i) times.push_back(i * 0.5);
  RefSettings s = fast_settings();
  s.run_cross_checks = false;
  const ReferenceSolution ref = generate_reference(p, times, s);
  const double e0 = energy(p, {0.0, ref.y[0], ref.ydot[0]});
  for (size_t i = 1; i < ref.times.size(); ++i) {
    const double e = energy(p, {ref.times[i], ref.y[i], ref.ydot[i]});
    CHECK(std::abs(e - e0) / e0 <= 1e-8);
  }
}

TEST_CASE("sample validation") {
  const Problem p = benchmark_problem(0.5);
  RefSettings s = fast_settings();
  {
    const double bad[2] = {4.0, 2.0};  // unsorted
    CHECK_THROWS_AS(generate_reference(p, bad, s), ReferenceError);
  }
  {
    const double bad[1] = {5.0};  // beyond T
    CHECK_THROWS_AS(generate_reference(p, bad, s), ReferenceError);
  }
}

TEST_CASE("refusal when the tolerance cannot be met in budget") {
  const Problem p = benchmark_problem(0.5);
  const double times[1] = {4.0};
  RefSettings s = fast_settings();
  s.tau_ref = 1e-3;
  s.richardson_tol = 1e-13;  // below what the budget allows
  s.max_refinements = 2;
  s.run_cross_checks = false;
  CHECK_THROWS_AS(generate_reference(p, times, s), ReferenceError);
}

TEST_CASE("general nonlinearity reference") {
  Problem p;
  p.epsilon = 1.0;
  p.alpha = 3.0;
  p.nonlinearity = make_sin2();
  p.phi1 = {1, 0};
  p.phi2 = {1, 0};
  p.horizon_T = 1.0;
  const double times[1] = {1.0};
  RefSettings s;
  s.tau_ref = 1e-4;
  s.richardson_tol = 1e-8;
  const ReferenceSolution ref = generate_reference(p, times, s);
  CHECK(ref.richardson_delta <= 1e-8);
  CHECK(ref.cross_path == "rk4");
  CHECK(ref.cross_deviation <= 1e-7);
}
