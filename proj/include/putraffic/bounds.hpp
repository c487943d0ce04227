#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "putraffic/types.hpp"

namespace putraffic {

// 2x2 Fisher information for the pair (u, lambda_f) under uniform sampling.
struct FisherInfo {
    double i11 = 0.0;  // -E[d^2 logL / du^2]
    double i12 = 0.0;  // -E[d^2 logL / du dlambda_f] (= i21)
    double i22 = 0.0;  // -E[d^2 logL / dlambda_f^2]
    std::size_t n = 0;
    double t_c = 0.0;

    double determinant() const { return i11 * i22 - i12 * i12; }
};

enum class BoundKind {
    cr_u_joint,
    cr_lf_joint,
    cr_ln_joint,
    cr_u_joint_limit,
    cr_lf_limit,
    cr_ln_limit,
    cr_u_known_lf_limit,
    mse_avg,
    mse_avg_uniform,
    mse_avg_uniform_limit,
};

struct BoundReport {
    double value = 0.0;
    BoundKind kind;
};

const char* bound_kind_name(BoundKind kind);

// Closed-form Fisher information elements. Requires n >= 2, t_c > 0 and a
// gap large enough that the kernel is not numerically degenerate.
FisherInfo fisher_matrix(const TrafficParams& params, double t_c, std::size_t n);

// Closed-form determinant of the Fisher matrix; agrees with
// FisherInfo::determinant() algebraically.
double fisher_determinant(const TrafficParams& params, double t_c, std::size_t n);

// Largest N accepted by fisher_by_enumeration (2^N terms).
inline constexpr std::size_t kFisherEnumerationCap = 8;

// Oracle route: enumerates all 2^n sample vectors, weights each by its exact
// probability, and takes central finite differences of the log-likelihood
// (relative step 1e-5, stencil evaluated in long double so differencing
// noise stays well below the comparison tolerances).
FisherInfo fisher_by_enumeration(const TrafficParams& params, double t_c, std::size_t n);

// Joint (u, lambda_f) CR bounds from the closed forms. The matrix-inverse
// route (diagonals of the reciprocal Fisher matrix) is kept as a test oracle.
std::pair<BoundReport, BoundReport> cr_bounds_joint_uf(const TrafficParams& params, double t_c,
                                                       std::size_t n);

// Joint (u, lambda_n): the u bound coincides with the joint-(u, lambda_f)
// one; the lambda_n bound mirrors the lambda_f form with the on/off roles
// exchanged.
std::pair<BoundReport, BoundReport> cr_bounds_joint_un(const TrafficParams& params, double t_c,
                                                       std::size_t n);

// Scalar CR bounds when the other parameter is known a priori: reciprocal of
// the matching diagonal Fisher element.
double cr_bound_u_known_lf(const TrafficParams& params, double t_c, std::size_t n);
double cr_bound_lf_known_u(const TrafficParams& params, double t_c, std::size_t n);

// Large-N limits at a fixed observation window: joint u bound, joint
// lambda_f and lambda_n bounds, and the known-lambda_f u bound. The last
// equals the joint limit with the window doubled.
std::vector<BoundReport> cr_asymptotes(const TrafficParams& params, double t_total);

// MSE of the bias-corrected averaging estimator. Uniform plans use the
// closed geometric form; general plans use the pair-correlation double sum.
BoundReport mse_avg(const TrafficParams& params, const SamplingPlan& plan,
                    const SensingModel& model);

// Large-N limit of the uniform-sampling averaging MSE.
BoundReport mse_avg_uniform_limit(const TrafficParams& params, double t_total);

// Independent recursive route to the same MSE (base case N=2, then one
// sample at a time via the suffix correlation sum).
BoundReport mse_avg_recursive_check(const TrafficParams& params, const SamplingPlan& plan,
                                    const SensingModel& model);

}  // namespace putraffic
