// Internal: long-double trajectory runner for the two multiscale integrators
// on pure power nonlinearities. Reference runs take 1e7..1e9 steps, where the
// ~1 ulp/step rounding of a double state accumulates past the Richardson
// tolerance; an 80-bit state keeps that floor near 1e-11. Mirrors the double
// steppers formula for formula (equivalence covered by tests).
#pragma once

#include <span>
#include <vector>

#include "mti/model.hpp"

namespace mti::ldp {

struct Samples {
  std::vector<State> samples;  // rounded to double at the requested indices
  State final_state;
  bool unstable = false;
};

/// mdfa = true runs the frequency-and-amplitude variant (exact z flow),
/// false the frequency-only variant (a/b/c/d kernels).
Samples run_power_ld(const Problem& problem, bool mdfa, double tau, long n_steps,
                     std::span<const long> sample_indices);

}  // namespace mti::ldp
