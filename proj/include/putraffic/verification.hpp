#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace putraffic {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

// Closed-form Fisher elements against the enumeration/finite-difference
// oracle for n = 2..max_n on random interior points, plus the printed N=2
// base-case expressions.
CheckResult check_fisher_enumeration(std::size_t max_n, int points, std::uint64_t seed);

// Determinant identity and the CR closed forms against the matrix-inverse
// route (including the lambda_n bound via on/off relabeling).
CheckResult check_cr_route_identities(int points, std::uint64_t seed);

// Clean and noisy likelihoods sum to one over all 2^N observation vectors.
CheckResult check_likelihood_normalization(std::size_t max_n, std::uint64_t seed);

// Forward recursion against the brute-force hidden-state sum.
CheckResult check_forward_vs_bruteforce(int cases, std::size_t max_n, std::uint64_t seed);

// Averaging-MSE closed form against the exhaustive observation-vector sum
// and against the recursive route.
CheckResult check_mse_routes(std::size_t max_n, std::uint64_t seed);

// Asymptote values, finite-N convergence at large N, and the exact
// window-doubling identity.
CheckResult check_asymptotes(std::uint64_t seed);

// All of the above with default sizes (bounded by max_n where applicable).
std::vector<CheckResult> run_all_verifications(std::size_t max_n, std::uint64_t seed);

}  // namespace putraffic
