#pragma once

#include <cstdint>

#include "putraffic/types.hpp"

namespace putraffic {

// Draws a stationary sample path of the on/off process and reads it off at
// the plan's sample instants. The holding times themselves are simulated
// (alternating exponentials), not the two-point kernel, so the generator can
// serve as an independent oracle for transition_matrix(). Deterministic for
// a fixed seed.
SampleVector generate_samples(const TrafficParams& params, const SamplingPlan& plan,
                              std::uint64_t rng_seed);

// Flips each bit independently: 0->1 with probability p_f, 1->0 with
// probability p_m. Deterministic for a fixed seed.
SampleVector apply_sensing_errors(const SampleVector& samples, const SensingModel& model,
                                  std::uint64_t rng_seed);

}  // namespace putraffic
