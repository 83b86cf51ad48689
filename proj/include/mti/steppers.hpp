/// The two multiscale time integrators, each with a pure-power and a general
/// gauge-invariant path. One step maps State -> State through
/// split -> evolve -> reconstruct; a trajectory is a strict sequence of steps
/// over a fixed step size.
#pragma once

#include <span>
#include <vector>

#include "mti/coefficients.hpp"
#include "mti/decomposition.hpp"
#include "mti/method.hpp"
#include "mti/model.hpp"

namespace mti {

enum class MtiVariant { FaPower, FPower, FaGeneral, FGeneral };

/// Variant implied by the method and the problem's nonlinearity kind.
MtiVariant select_mti_variant(Method m, const NonlinearitySpec& spec);

class MtiStepper {
 public:
  MtiStepper(const Problem& problem, double tau, MtiVariant variant);

  /// One step; the returned state may be non-finite, callers check
  /// unstable_state() when propagating.
  State step(const State& s) const;

  const CoefficientSet& coefficients() const { return cs_; }
  MtiVariant variant() const { return variant_; }

 private:
  State step_fa_power(const State& s) const;
  State step_f_power(const State& s) const;
  State step_fa_general(const State& s) const;
  State step_f_general(const State& s) const;

  Problem problem_;
  MtiVariant variant_;
  CoefficientSet cs_;
};

struct RunOutcome {
  State final_state;
  bool unstable = false;
  bool solver_failed = false;  // classical CNFD only
  long steps_done = 0;
  double max_abs_y = 0.0;
  std::vector<State> samples;  // one per requested index, in order
};

/// Runs n_steps from t=0 with the problem's initial data, capturing the state
/// at each requested step index (0 = initial data). Stops early on
/// instability.
RunOutcome run_mti(const Problem& problem, Method method, double tau, long n_steps,
                   std::span<const long> sample_indices = {});

RunOutcome run_mti_variant(const Problem& problem, MtiVariant variant, double tau, long n_steps,
                           std::span<const long> sample_indices = {});

}  // namespace mti
