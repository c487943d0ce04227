#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace putraffic {

// Traffic parameters of an exponential on/off source: duty cycle u, mean
// departure rate lambda_f (reciprocal of the mean off-time) and mean arrival
// rate lambda_n (reciprocal of the mean on-time). The three are coupled by
// u = lambda_f / (lambda_f + lambda_n), so any two determine the third.
class TrafficParams {
public:
    static TrafficParams from_duty_and_departure(double u, double lambda_f);
    static TrafficParams from_duty_and_arrival(double u, double lambda_n);
    static TrafficParams from_rates(double lambda_f, double lambda_n);

    double u() const { return u_; }
    double lambda_f() const { return lambda_f_; }
    double lambda_n() const { return lambda_n_; }

    // lambda_f / u, the decay rate of the two-state kernel (= lambda_f + lambda_n).
    double kernel_rate() const { return lambda_f_ / u_; }

private:
    TrafficParams(double u, double lambda_f, double lambda_n);

    double u_;
    double lambda_f_;
    double lambda_n_;
};

// Sampling schedule: N sample instants described by the N-1 inter-sample
// gaps. A plan built by uniform() has every gap equal to t_total/(N-1)
// bit-for-bit.
class SamplingPlan {
public:
    explicit SamplingPlan(std::vector<double> inter_sample_times);

    static SamplingPlan uniform(double t_total, std::size_t n_samples);

    std::size_t n_samples() const { return gaps_.size() + 1; }
    double t_total() const { return t_total_; }
    const std::vector<double>& gaps() const { return gaps_; }
    bool is_uniform() const { return uniform_; }

private:
    std::vector<double> gaps_;
    double t_total_;
    bool uniform_;
};

// Binary sensing channel: an idle sample is reported busy with probability
// p_f (false alarm), a busy sample reported idle with probability p_m
// (mis-detection). p_f + p_m < 1 keeps the averaging bias correction
// well-defined.
struct SensingModel {
    double p_f = 0.0;
    double p_m = 0.0;

    SensingModel() = default;
    SensingModel(double pf, double pm);

    bool is_perfect() const { return p_f == 0.0 && p_m == 0.0; }
};

// A vector of binary occupancy samples together with the plan that produced
// it. bits.size() must equal plan.n_samples().
struct SampleVector {
    std::vector<std::uint8_t> bits;
    SamplingPlan plan;

    SampleVector(std::vector<std::uint8_t> bits_in, SamplingPlan plan_in);

    std::size_t size() const { return bits.size(); }
};

// Sufficient statistics of a sample vector under uniform sampling: the first
// sample and the number of 0->0, 0->1, 1->0 and 1->1 transitions.
struct TransitionCounts {
    int z1 = 0;
    long n0 = 0;
    long n1 = 0;
    long n2 = 0;
    long n3 = 0;

    long total() const { return n0 + n1 + n2 + n3; }
};

// Requires at least two samples.
TransitionCounts count_transitions(const SampleVector& samples);

}  // namespace putraffic
