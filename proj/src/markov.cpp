#include "putraffic/markov.hpp"

#include <cmath>
#include <stdexcept>

namespace putraffic {

TransitionMatrix transition_matrix(const TrafficParams& params, double t) {
    if (!(t >= 0.0)) throw std::domain_error("elapsed time must be non-negative");
    // Exponent evaluated first; underflow of exp to 0 is the stationary limit.
    double decay = std::exp(-params.kernel_rate() * t);
    double u = params.u();
    TransitionMatrix m;
    m.p00 = (1.0 - u) + u * decay;
    m.p01 = 1.0 - m.p00;
    m.p11 = u + (1.0 - u) * decay;
    m.p10 = 1.0 - m.p11;
    return m;
}

double transition_prob(const TrafficParams& params, int from_state, int to_state, double t) {
    if ((from_state & ~1) != 0 || (to_state & ~1) != 0)
        throw std::domain_error("states must be 0 or 1");
    return transition_matrix(params, t)(from_state, to_state);
}

}  // namespace putraffic
