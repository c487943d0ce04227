#include "putraffic/simulate.hpp"

#include "putraffic/rng.hpp"

namespace putraffic {

SampleVector generate_samples(const TrafficParams& params, const SamplingPlan& plan,
                              std::uint64_t rng_seed) {
    SplitMix64 rng(rng_seed);
    const std::size_t n = plan.n_samples();
    std::vector<std::uint8_t> bits(n);

    // Stationary start; the residual holding time at t=0 is a fresh
    // exponential by memorylessness.
    int state = rng.next_bernoulli(params.u()) ? 1 : 0;
    auto rate = [&](int s) { return s == 0 ? params.lambda_f() : params.lambda_n(); };

    bits[0] = static_cast<std::uint8_t>(state);
    double next_switch = rng.next_exponential(rate(state));
    double now = 0.0;
    for (std::size_t i = 1; i < n; ++i) {
        now += plan.gaps()[i - 1];
        while (next_switch <= now) {
            state ^= 1;
            next_switch += rng.next_exponential(rate(state));
        }
        bits[i] = static_cast<std::uint8_t>(state);
    }
    return SampleVector(std::move(bits), plan);
}

SampleVector apply_sensing_errors(const SampleVector& samples, const SensingModel& model,
                                  std::uint64_t rng_seed) {
    if (model.is_perfect()) return samples;
    SplitMix64 rng(rng_seed);
    std::vector<std::uint8_t> bits(samples.bits);
    for (auto& b : bits) {
        double flip_p = b ? model.p_m : model.p_f;
        if (rng.next_bernoulli(flip_p)) b ^= 1;
    }
    return SampleVector(std::move(bits), samples.plan);
}

}  // namespace putraffic
