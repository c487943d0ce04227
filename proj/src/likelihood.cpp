#include "putraffic/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "putraffic/markov.hpp"

namespace putraffic {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double first_sample_logprob(int z1, const TrafficParams& params) {
    return z1 ? std::log(params.u()) : std::log1p(-params.u());
}

}  // namespace

LogLikelihoodValue loglik_clean(const TransitionCounts& counts, const TrafficParams& params,
                                double t_c) {
    if (!(t_c > 0.0)) throw std::domain_error("inter-sample time must be positive");
    TransitionMatrix m = transition_matrix(params, t_c);
    double ll = first_sample_logprob(counts.z1, params);
    const struct {
        long n;
        double pr;
    } terms[4] = {{counts.n0, m.p00}, {counts.n1, m.p01}, {counts.n2, m.p10}, {counts.n3, m.p11}};
    for (const auto& t : terms) {
        if (t.n == 0) continue;
        if (t.pr <= 0.0) return {kNegInf, true};
        ll += static_cast<double>(t.n) * std::log(t.pr);
    }
    return {ll, false};
}

LogLikelihoodValue loglik_clean_general(const SampleVector& samples,
                                        const TrafficParams& params) {
    const std::size_t n = samples.size();
    if (n >= 2 && samples.plan.is_uniform())
        return loglik_clean(count_transitions(samples), params, samples.plan.gaps().front());

    double ll = first_sample_logprob(samples.bits[0], params);
    double prev_gap = -1.0;
    TransitionMatrix m{};
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double gap = samples.plan.gaps()[i];
        if (gap != prev_gap) {
            m = transition_matrix(params, gap);
            prev_gap = gap;
        }
        double pr = m(samples.bits[i], samples.bits[i + 1]);
        if (pr <= 0.0) return {kNegInf, true};
        ll += std::log(pr);
    }
    return {ll, false};
}

LogLikelihoodValue loglik_noisy_bruteforce(const SampleVector& samples,
                                           const TrafficParams& params,
                                           const SensingModel& model) {
    const std::size_t n = samples.size();
    if (n > kBruteForceCap)
        throw std::length_error(
            "brute-force noisy likelihood is capped at N=14; use loglik_noisy_forward");

    // log emission factors; log(0) = -inf drops impossible hidden vectors.
    const double le[2][2] = {
        {std::log1p(-model.p_f), std::log(model.p_f)},  // hidden 0 -> observed {0,1}
        {std::log(model.p_m), std::log1p(-model.p_m)},  // hidden 1 -> observed {0,1}
    };

    SampleVector hidden = samples;
    std::vector<double> terms;
    terms.reserve(std::size_t{1} << n);
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        double emit = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            int h = static_cast<int>((mask >> i) & 1);
            hidden.bits[i] = static_cast<std::uint8_t>(h);
            emit += le[h][samples.bits[i]];
        }
        terms.push_back(loglik_clean_general(hidden, params).value + emit);
    }

    double peak = *std::max_element(terms.begin(), terms.end());
    if (peak == kNegInf) return {kNegInf, true};
    double acc = 0.0;
    for (double t : terms) acc += std::exp(t - peak);
    return {peak + std::log(acc), false};
}

LogLikelihoodValue loglik_noisy_forward(const SampleVector& samples, const TrafficParams& params,
                                        const SensingModel& model) {
    const std::size_t n = samples.size();
    // emission weight of observing bit z from each hidden state
    auto emit0 = [&](std::uint8_t z) { return z ? model.p_f : 1.0 - model.p_f; };
    auto emit1 = [&](std::uint8_t z) { return z ? 1.0 - model.p_m : model.p_m; };

    double w0 = (1.0 - params.u()) * emit0(samples.bits[0]);
    double w1 = params.u() * emit1(samples.bits[0]);
    double log_scale = 0.0;
    double norm = w0 + w1;
    if (norm <= 0.0) return {kNegInf, true};
    w0 /= norm;
    w1 /= norm;
    log_scale += std::log(norm);

    double prev_gap = -1.0;
    TransitionMatrix m{};
    for (std::size_t i = 1; i < n; ++i) {
        double gap = samples.plan.gaps()[i - 1];
        if (gap != prev_gap) {
            m = transition_matrix(params, gap);
            prev_gap = gap;
        }
        double v0 = w0 * m.p00 + w1 * m.p10;
        double v1 = w0 * m.p01 + w1 * m.p11;
        w0 = v0 * emit0(samples.bits[i]);
        w1 = v1 * emit1(samples.bits[i]);
        norm = w0 + w1;
        if (norm <= 0.0) return {kNegInf, true};
        w0 /= norm;
        w1 /= norm;
        log_scale += std::log(norm);
    }
    return {log_scale, false};
}

}  // namespace putraffic
