#include "putraffic/types.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace putraffic {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

TrafficParams::TrafficParams(double u, double lambda_f, double lambda_n)
    : u_(u), lambda_f_(lambda_f), lambda_n_(lambda_n) {}

TrafficParams TrafficParams::from_duty_and_departure(double u, double lambda_f) {
    require(std::isfinite(u) && u > 0.0 && u < 1.0, "duty cycle must lie in (0, 1)");
    require(std::isfinite(lambda_f) && lambda_f > 0.0, "lambda_f must be positive");
    return TrafficParams(u, lambda_f, lambda_f * (1.0 - u) / u);
}

TrafficParams TrafficParams::from_duty_and_arrival(double u, double lambda_n) {
    require(std::isfinite(u) && u > 0.0 && u < 1.0, "duty cycle must lie in (0, 1)");
    require(std::isfinite(lambda_n) && lambda_n > 0.0, "lambda_n must be positive");
    return TrafficParams(u, u * lambda_n / (1.0 - u), lambda_n);
}

TrafficParams TrafficParams::from_rates(double lambda_f, double lambda_n) {
    require(std::isfinite(lambda_f) && lambda_f > 0.0, "lambda_f must be positive");
    require(std::isfinite(lambda_n) && lambda_n > 0.0, "lambda_n must be positive");
    return TrafficParams(lambda_f / (lambda_f + lambda_n), lambda_f, lambda_n);
}

SamplingPlan::SamplingPlan(std::vector<double> inter_sample_times)
    : gaps_(std::move(inter_sample_times)) {
    // An empty gap list is the degenerate single-sample plan.
    double total = 0.0;
    bool uniform = true;
    for (double g : gaps_) {
        require(std::isfinite(g) && g > 0.0, "inter-sample times must be positive");
        total += g;
        uniform = uniform && g == gaps_.front();
    }
    t_total_ = total;
    uniform_ = uniform;
}

SamplingPlan SamplingPlan::uniform(double t_total, std::size_t n_samples) {
    require(std::isfinite(t_total) && t_total > 0.0, "observation window must be positive");
    require(n_samples >= 2, "a sampling plan needs at least two samples");
    double gap = t_total / static_cast<double>(n_samples - 1);
    return SamplingPlan(std::vector<double>(n_samples - 1, gap));
}

SensingModel::SensingModel(double pf, double pm) : p_f(pf), p_m(pm) {
    require(std::isfinite(pf) && pf >= 0.0 && pf < 1.0, "p_f must lie in [0, 1)");
    require(std::isfinite(pm) && pm >= 0.0 && pm < 1.0, "p_m must lie in [0, 1)");
    require(pf + pm < 1.0, "p_f + p_m must be below 1");
}

SampleVector::SampleVector(std::vector<std::uint8_t> bits_in, SamplingPlan plan_in)
    : bits(std::move(bits_in)), plan(std::move(plan_in)) {
    require(bits.size() == plan.n_samples(), "sample count must match the plan");
    for (std::uint8_t b : bits) require(b <= 1, "samples must be 0 or 1");
}

TransitionCounts count_transitions(const SampleVector& samples) {
    if (samples.size() < 2) throw std::domain_error("transition counts need at least two samples");
    TransitionCounts c;
    c.z1 = samples.bits.front();
    for (std::size_t i = 0; i + 1 < samples.bits.size(); ++i) {
        int a = samples.bits[i];
        int b = samples.bits[i + 1];
        if (a == 0) {
            (b == 0 ? c.n0 : c.n1) += 1;
        } else {
            (b == 0 ? c.n2 : c.n3) += 1;
        }
    }
    return c;
}

}  // namespace putraffic
