#include "mti/reference.hpp"

#include <algorithm>
#include <bit>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ld_power.hpp"
#include "mti/classical.hpp"
#include "mti/nonlinearity.hpp"
#include "mti/steppers.hpp"

namespace mti {

namespace {

static_assert(std::endian::native == std::endian::little,
              "binary reference cache assumes a little-endian host");

void fnv_mix(std::uint64_t& h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xff;
    h *= 1099511628211ULL;
  }
}

void fnv_mix(std::uint64_t& h, double v) { fnv_mix(h, std::bit_cast<std::uint64_t>(v)); }

void fnv_mix(std::uint64_t& h, const std::string& s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
}

struct Grid {
  int K = 0;                        // tau = tau_base / 2^K
  double tau = 0.0;
  long n_steps = 0;
  std::vector<long> indices;        // sample step indices, sorted
};

Grid make_grid(double tau_base, int K, std::span<const double> times) {
  Grid g;
  g.K = K;
  g.tau = std::ldexp(tau_base, -K);
  g.indices.resize(times.size());
  for (size_t i = 0; i < times.size(); ++i) g.indices[i] = std::llround(times[i] / g.tau);
  g.n_steps = g.indices.empty() ? 0 : g.indices.back();
  return g;
}

std::vector<State> run_samples(const Problem& problem, Method method, const Grid& g) {
  // pure power trajectories run on the extended-precision stepper: reference
  // step counts reach 1e8+, where a double state's rounding floor exceeds the
  // Richardson tolerance
  if (std::holds_alternative<PurePower>(problem.nonlinearity)) {
    ldp::Samples out = ldp::run_power_ld(problem, method == Method::MtiFa, g.tau, g.n_steps, g.indices);
    if (out.unstable)
      throw ReferenceError("reference trajectory unstable at tau = " + std::to_string(g.tau));
    if (out.samples.size() != g.indices.size())
      throw ReferenceError("reference sampling misaligned");
    return std::move(out.samples);
  }
  RunOutcome out = run_mti(problem, method, g.tau, g.n_steps, g.indices);
  if (out.unstable)
    throw ReferenceError("reference trajectory unstable at tau = " + std::to_string(g.tau));
  if (out.samples.size() != g.indices.size())
    throw ReferenceError("reference sampling misaligned");
  return std::move(out.samples);
}

double max_y_deviation(const std::vector<State>& a, const std::vector<State>& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i].y - b[i].y));
  return m;
}

std::string cache_path(const RefSettings& s, std::uint64_t fp) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "mtiref-%016" PRIx64, fp);
  return s.cache_dir + "/" + buf + (s.cache_as_csv ? ".csv" : ".bin");
}

}  // namespace

std::uint64_t reference_fingerprint(const Problem& problem, std::span<const double> sample_times,
                                    const RefSettings& settings) {
  std::uint64_t h = 1469598103934665603ULL;
  fnv_mix(h, problem.epsilon);
  fnv_mix(h, problem.alpha);
  fnv_mix(h, nonlinearity_name(problem.nonlinearity));
  if (const auto* gen = std::get_if<GeneralNonlinearity>(&problem.nonlinearity))
    fnv_mix(h, static_cast<std::uint64_t>(gen->quadrature_nodes));
  fnv_mix(h, problem.phi1.real());
  fnv_mix(h, problem.phi1.imag());
  fnv_mix(h, problem.phi2.real());
  fnv_mix(h, problem.phi2.imag());
  fnv_mix(h, problem.horizon_T);
  fnv_mix(h, settings.tau_ref);
  fnv_mix(h, settings.tau_base);
  fnv_mix(h, settings.richardson_tol);
  fnv_mix(h, static_cast<std::uint64_t>(sample_times.size()));
  for (double t : sample_times) fnv_mix(h, t);
  return h;
}

void write_reference_file(const ReferenceSolution& ref, const std::string& path) {
  const bool csv = path.size() > 4 && path.substr(path.size() - 4) == ".csv";
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, csv ? std::ios::out : std::ios::out | std::ios::binary);
    if (!out) throw ReferenceError("cannot write reference file: " + path);
    if (csv) {
      out.precision(17);
      for (size_t i = 0; i < ref.times.size(); ++i)
        out << ref.times[i] << ',' << ref.y[i].real() << ',' << ref.y[i].imag() << ','
            << ref.ydot[i].real() << ',' << ref.ydot[i].imag() << '\n';
    } else {
      for (size_t i = 0; i < ref.times.size(); ++i) {
        const double row[5] = {ref.times[i], ref.y[i].real(), ref.y[i].imag(), ref.ydot[i].real(),
                               ref.ydot[i].imag()};
        out.write(reinterpret_cast<const char*>(row), sizeof row);
      }
    }
  }
  std::filesystem::rename(tmp, path);

  std::ofstream meta(path + ".meta");
  meta.precision(17);
  meta << "fingerprint = " << ref.fingerprint << "\n"
       << "epsilon = " << ref.problem.epsilon << "\n"
       << "alpha = " << ref.problem.alpha << "\n"
       << "nonlinearity = " << nonlinearity_name(ref.problem.nonlinearity) << "\n"
       << "tau_ref = " << ref.tau_ref << "\n"
       << "generator = " << (ref.generator == RefGenerator::MtiFaFine ? "mti-fa-fine" : "rk4") << "\n"
       << "richardson_delta = " << ref.richardson_delta << "\n"
       << "cross_deviation = " << ref.cross_deviation << "\n"
       << "cross_path = " << ref.cross_path << "\n"
       << "rows = " << ref.times.size() << "\n";
}

ReferenceSolution read_reference_file(const std::string& path) {
  ReferenceSolution ref;
  const bool csv = path.size() > 4 && path.substr(path.size() - 4) == ".csv";
  std::ifstream in(path, csv ? std::ios::in : std::ios::in | std::ios::binary);
  if (!in) throw ReferenceError("cannot read reference file: " + path);
  if (csv) {
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      double row[5];
      if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &row[0], &row[1], &row[2], &row[3],
                      &row[4]) != 5)
        throw ReferenceError("malformed reference csv row: " + line);
      ref.times.push_back(row[0]);
      ref.y.emplace_back(row[1], row[2]);
      ref.ydot.emplace_back(row[3], row[4]);
    }
  } else {
    double row[5];
    while (in.read(reinterpret_cast<char*>(row), sizeof row)) {
      ref.times.push_back(row[0]);
      ref.y.emplace_back(row[1], row[2]);
      ref.ydot.emplace_back(row[3], row[4]);
    }
  }
  // optional sidecar with the audit fields
  std::ifstream meta(path + ".meta");
  std::string line;
  while (std::getline(meta, line)) {
    std::istringstream ls(line);
    std::string key, eq;
    ls >> key >> eq;
    if (key == "fingerprint") ls >> ref.fingerprint;
    else if (key == "tau_ref") ls >> ref.tau_ref;
    else if (key == "richardson_delta") ls >> ref.richardson_delta;
    else if (key == "cross_deviation") ls >> ref.cross_deviation;
    else if (key == "cross_path") ls >> ref.cross_path;
  }
  ref.loaded_from_cache = true;
  return ref;
}

void rk4_rescaled(const Problem& problem, std::span<const double> sample_times, double dt_factor,
                  std::vector<Complex>& y_out, std::vector<Complex>& ydot_out) {
  const double eps2 = problem.epsilon * problem.epsilon;
  const double lin = 1.0 + eps2 * problem.alpha;
  const NonlinearitySpec& spec = problem.nonlinearity;
  auto accel = [&](Complex u) { return -lin * u - eps2 * eval_f(spec, u); };

  Complex u = problem.phi1;
  Complex v = problem.phi2;  // dY/dsigma = eps^2 ydot
  double sigma = 0.0;
  y_out.clear();
  ydot_out.clear();
  for (double t : sample_times) {
    const double sigma_target = t / eps2;
    const double span = sigma_target - sigma;
    if (span > 0.0) {
      const long n = std::max<long>(1, std::llround(std::ceil(span / dt_factor)));
      const double h = span / n;
      for (long i = 0; i < n; ++i) {
        const Complex k1u = v, k1v = accel(u);
        const Complex k2u = v + 0.5 * h * k1v, k2v = accel(u + 0.5 * h * k1u);
        const Complex k3u = v + 0.5 * h * k2v, k3v = accel(u + 0.5 * h * k2u);
        const Complex k4u = v + h * k3v, k4v = accel(u + h * k3u);
        u += h / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        v += h / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
      }
      sigma = sigma_target;
    }
    y_out.push_back(u);
    ydot_out.push_back(v / eps2);
  }
}

ReferenceSolution generate_reference(const Problem& problem, std::span<const double> sample_times,
                                     const RefSettings& settings) {
  problem.validate();
  std::vector<double> times(sample_times.begin(), sample_times.end());
  if (!std::is_sorted(times.begin(), times.end()))
    throw ReferenceError("sample times must be sorted");
  for (double t : times)
    if (t < 0.0 || t > problem.horizon_T * (1.0 + 1e-12))
      throw ReferenceError("sample time outside [0, T]");

  const std::uint64_t fp = reference_fingerprint(problem, times, settings);
  if (!settings.cache_dir.empty()) {
    const std::string path = cache_path(settings, fp);
    if (std::filesystem::exists(path)) {
      ReferenceSolution ref = read_reference_file(path);
      if (ref.fingerprint == fp && ref.times.size() == times.size()) {
        ref.problem = problem;
        ref.generator = RefGenerator::MtiFaFine;
        return ref;
      }
    }
  }

  // snap the target resolution down to tau_base / 2^K
  int K = 0;
  while (std::ldexp(settings.tau_base, -K) > settings.tau_ref && K < 60) ++K;

  Grid grid = make_grid(settings.tau_base, K, times);
  std::vector<State> coarse = run_samples(problem, Method::MtiFa, grid);
  double delta = 0.0;
  bool met = false;
  for (int round = 0; round <= settings.max_refinements; ++round) {
    const Grid half = make_grid(settings.tau_base, grid.K + 1, times);
    const std::vector<State> fine = run_samples(problem, Method::MtiFa, half);
    delta = max_y_deviation(coarse, fine);
    if (settings.verbose)
      std::fprintf(stderr, "[reference] eps=%g K=%d tau=%.3e delta=%.3e\n", problem.epsilon,
                   grid.K, grid.tau, delta);
    if (delta <= settings.richardson_tol) {
      met = true;
      break;
    }
    // predict the level that meets the tolerance assuming delta ~ tau^2,
    // conservatively, and never jump more than 6 levels at once
    int jump = 1;
    const double factor = delta / (0.5 * settings.richardson_tol);
    if (factor > 1.0) jump = std::max(1, static_cast<int>(std::ceil(0.5 * std::log2(factor))));
    jump = std::min(jump, 6);
    if (grid.K + jump > K + settings.max_refinements)
      throw ReferenceError("Richardson check not met within max_refinements");
    if (jump == 1) {
      grid = half;
      coarse = fine;
    } else {
      grid = make_grid(settings.tau_base, grid.K + jump, times);
      coarse = run_samples(problem, Method::MtiFa, grid);
    }
  }
  if (!met) throw ReferenceError("Richardson check not met within max_refinements");

  ReferenceSolution ref;
  ref.problem = problem;
  ref.fingerprint = fp;
  ref.times = times;
  ref.generator = RefGenerator::MtiFaFine;
  ref.tau_ref = grid.tau;
  ref.richardson_delta = delta;
  for (const State& s : coarse) {
    ref.y.push_back(s.y);
    ref.ydot.push_back(s.ydot);
  }

  if (settings.run_cross_checks) {
    if (problem.epsilon >= settings.rk4_min_epsilon) {
      std::vector<Complex> y2, yd2;
      rk4_rescaled(problem, times, settings.rk4_dt_factor, y2, yd2);
      double dev = 0.0;
      for (size_t i = 0; i < times.size(); ++i) dev = std::max(dev, std::abs(ref.y[i] - y2[i]));
      ref.cross_deviation = dev;
      ref.cross_path = "rk4";
      if (dev > settings.cross_tol_rk4)
        throw ReferenceError("dual-generator disagreement " + std::to_string(dev));
    } else {
      const std::vector<State> other = run_samples(problem, Method::MtiF, grid);
      double dev = 0.0;
      for (size_t i = 0; i < times.size(); ++i)
        dev = std::max(dev, std::abs(ref.y[i] - other[i].y));
      ref.cross_deviation = dev;
      ref.cross_path = "mti-f";
      if (dev > settings.cross_tol_mtif)
        throw ReferenceError("mti-f cross-check disagreement " + std::to_string(dev));
    }
  }

  if (!settings.cache_dir.empty()) {
    std::filesystem::create_directories(settings.cache_dir);
    write_reference_file(ref, cache_path(settings, fp));
  }
  return ref;
}

CrossValidationReport cross_validate(const ReferenceSolution& ref, const RefSettings& settings) {
  CrossValidationReport rep;
  rep.richardson_delta = ref.richardson_delta;
  if (ref.problem.epsilon >= settings.rk4_min_epsilon) {
    std::vector<Complex> y2, yd2;
    rk4_rescaled(ref.problem, ref.times, settings.rk4_dt_factor, y2, yd2);
    double dev = 0.0;
    for (size_t i = 0; i < ref.times.size(); ++i) dev = std::max(dev, std::abs(ref.y[i] - y2[i]));
    rep.max_deviation = dev;
    rep.path = "rk4";
  } else {
    // same-cost second scheme at the delivered resolution
    int K = 0;
    while (std::ldexp(settings.tau_base, -K) > ref.tau_ref * (1.0 + 1e-12) && K < 60) ++K;
    const Grid grid = make_grid(settings.tau_base, K, ref.times);
    const std::vector<State> other = run_samples(ref.problem, Method::MtiF, grid);
    double dev = 0.0;
    for (size_t i = 0; i < ref.times.size(); ++i)
      dev = std::max(dev, std::abs(ref.y[i] - other[i].y));
    rep.max_deviation = dev;
    rep.path = "rk4 path skipped, Richardson only (mti-f agreement reported)";
  }
  return rep;
}

}  // namespace mti
