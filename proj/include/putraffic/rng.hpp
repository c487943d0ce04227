#pragma once

#include <cmath>
#include <cstdint>

namespace putraffic {

// Counter-based 64-bit generator (SplitMix64). State advances by a fixed
// increment and each output is a bijective mix of the counter, so streams
// can be derived cheaply and deterministically from (master_seed, index)
// without any warm-up.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool next_bernoulli(double p) { return next_double() < p; }

    // Exponential holding time with the given rate, by inversion.
    double next_exponential(double rate) { return -std::log1p(-next_double()) / rate; }

private:
    std::uint64_t state_;
};

// Finalizer used to decorrelate stream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Deterministic per-stream seed from (master_seed, stream_index). Streams
// derived this way are stable under any execution order, which is what makes
// parallel Monte Carlo runs reproducible.
inline std::uint64_t derive_stream_seed(std::uint64_t master_seed, std::uint64_t stream_index) {
    return mix64(master_seed ^ mix64(stream_index * 0x9E3779B97F4A7C15ull + 0x632BE59BD9B4E019ull));
}

}  // namespace putraffic
