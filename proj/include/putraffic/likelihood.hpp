#pragma once

#include <cstddef>

#include "putraffic/types.hpp"

namespace putraffic {

// Natural log of a discrete-outcome probability. Zero-probability
// configurations come back as -inf with the flag set instead of throwing, so
// optimizers can probe the boundary.
struct LogLikelihoodValue {
    double value = 0.0;
    bool underflowed = false;
};

// Largest N accepted by the brute-force noisy likelihood (2^N terms).
inline constexpr std::size_t kBruteForceCap = 14;

// Log-likelihood of a uniformly sampled vector through its transition
// counts: z1*log(u) + (1-z1)*log(1-u) + sum_k n_k * log Pr_k(t_c).
LogLikelihoodValue loglik_clean(const TransitionCounts& counts, const TrafficParams& params,
                                double t_c);

// Same quantity for an arbitrary plan; per-gap kernel factors. Routes
// through loglik_clean when the plan is uniform, so equal transition counts
// give bit-identical values.
LogLikelihoodValue loglik_clean_general(const SampleVector& samples, const TrafficParams& params);

// Sensing-error likelihood summed explicitly over all 2^N hidden sample
// vectors, in log-sum-exp form. Test oracle only; throws std::length_error
// above kBruteForceCap (use loglik_noisy_forward instead).
LogLikelihoodValue loglik_noisy_bruteforce(const SampleVector& samples,
                                           const TrafficParams& params,
                                           const SensingModel& model);

// O(N) evaluation of the same sum: a two-entry weight over the hidden state
// is pushed through the kernel and the per-sample emission factors, with
// per-step renormalization accumulated in log scale. Agrees with the brute
// force exactly in exact arithmetic.
LogLikelihoodValue loglik_noisy_forward(const SampleVector& samples, const TrafficParams& params,
                                        const SensingModel& model);

}  // namespace putraffic
