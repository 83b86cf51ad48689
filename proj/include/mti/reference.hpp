/// Generation, caching and cross-validation of the "exact" reference
/// solutions behind every error measurement.
///
/// A reference is a fine-step multiscale trajectory whose step is snapped to
/// tau_base / 2^K. The dyadic snapping makes every coarse grid time land
/// exactly on the reference grid (in exact arithmetic of step_index * tau),
/// which matters because |ydot| ~ 1/eps^2 turns even a 1e-16 relative time
/// misalignment into a visible error at small eps. The step is refined until
/// regenerating at half the step moves the sampled y by less than the
/// Richardson tolerance, and the result is cross-checked against an
/// independent integrator (classical RK4 on the rescaled equation for
/// eps >= 0.05, the second multiscale scheme below that).
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mti/model.hpp"

namespace mti {

enum class RefGenerator { MtiFaFine, Rk4Rescaled };

struct RefSettings {
  double tau_ref = 1e-6;         // target resolution; snapped to tau_base/2^K
  double tau_base = 0.2;         // dyadic base the sweeps and samples align to
  double richardson_tol = 1e-9;  // max |y_K - y_{K+1}| at the sample times
  int max_refinements = 24;
  bool run_cross_checks = true;
  double rk4_min_epsilon = 0.05;
  double rk4_dt_factor = 1e-4;   // RK4 time step = eps^2 * factor
  double cross_tol_rk4 = 1e-7;
  double cross_tol_mtif = 1e-8;
  std::string cache_dir;         // empty: no on-disk cache
  bool cache_as_csv = false;     // false: little-endian float64 rows
  bool verbose = false;          // progress notes on stderr
};

struct ReferenceSolution {
  Problem problem;
  std::uint64_t fingerprint = 0;
  std::vector<double> times;
  std::vector<Complex> y;
  std::vector<Complex> ydot;
  RefGenerator generator = RefGenerator::MtiFaFine;
  double tau_ref = 0.0;           // actual snapped step
  double richardson_delta = 0.0;  // measured halving change
  double cross_deviation = -1.0;  // max |y - y_other| over samples; -1 if skipped
  std::string cross_path;         // "rk4", "mti-f" or "skipped"
  bool loaded_from_cache = false;
};

struct ReferenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Hash of all problem fields and generator settings that determine the
/// samples bit-exactly.
std::uint64_t reference_fingerprint(const Problem& problem, std::span<const double> sample_times,
                                    const RefSettings& settings);

/// Deterministic given inputs; throws ReferenceError when the Richardson
/// check cannot be met within max_refinements or a cross-check fails.
ReferenceSolution generate_reference(const Problem& problem, std::span<const double> sample_times,
                                     const RefSettings& settings = {});

struct CrossValidationReport {
  double richardson_delta = 0.0;
  double max_deviation = -1.0;
  std::string path;  // "rk4" or "rk4 path skipped, Richardson only" (mti-f)
};

/// Re-runs the independent-generator comparison for an existing reference.
CrossValidationReport cross_validate(const ReferenceSolution& ref, const RefSettings& settings = {});

/// Classical 4th-order explicit integrator on the rescaled-time equation
/// Y'' = -(1+eps^2 alpha) Y - eps^2 f(Y); the independent generator.
/// Returns (y, ydot) at the requested times.
void rk4_rescaled(const Problem& problem, std::span<const double> sample_times, double dt_factor,
                  std::vector<Complex>& y_out, std::vector<Complex>& ydot_out);

/// Cache records: one row per sample, (t, Re y, Im y, Re ydot, Im ydot), as
/// little-endian float64 (.bin) or decimal text (.csv), chosen by extension.
void write_reference_file(const ReferenceSolution& ref, const std::string& path);
ReferenceSolution read_reference_file(const std::string& path);

}  // namespace mti
