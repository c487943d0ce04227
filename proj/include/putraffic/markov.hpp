#pragma once

#include "putraffic/types.hpp"

namespace putraffic {

// Two-state occupancy kernel over an elapsed time t:
//   Pr_00(t) = 1 - u + u*exp(-lambda_f*t/u)      Pr_01(t) = 1 - Pr_00(t)
//   Pr_11(t) = u + (1-u)*exp(-lambda_f*t/u)      Pr_10(t) = 1 - Pr_11(t)
// The off-diagonal entries are computed as complements so each row sums to
// 1.0 exactly.
struct TransitionMatrix {
    double p00;
    double p01;
    double p10;
    double p11;

    double operator()(int from_state, int to_state) const {
        return from_state == 0 ? (to_state == 0 ? p00 : p01)
                               : (to_state == 0 ? p10 : p11);
    }
};

// Requires t >= 0.
TransitionMatrix transition_matrix(const TrafficParams& params, double t);

double transition_prob(const TrafficParams& params, int from_state, int to_state, double t);

}  // namespace putraffic
