#include "putraffic/verification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <vector>

#include "putraffic/bounds.hpp"
#include "putraffic/likelihood.hpp"
#include "putraffic/markov.hpp"
#include "putraffic/rng.hpp"
#include "putraffic/types.hpp"

namespace putraffic {

namespace {

double uniform_in(SplitMix64& rng, double lo, double hi) {
    return lo + (hi - lo) * rng.next_double();
}

// Interior parameter point with a non-degenerate kernel over gap t_c.
struct RandomPoint {
    TrafficParams params;
    double t_c;
};

RandomPoint random_point(SplitMix64& rng) {
    double u = uniform_in(rng, 0.05, 0.95);
    double t_c = uniform_in(rng, 0.25, 2.0);
    double decay_exponent = uniform_in(rng, 0.1, 4.0);  // lambda_f * t_c / u
    return {TrafficParams::from_duty_and_departure(u, decay_exponent * u / t_c), t_c};
}

SamplingPlan random_plan(SplitMix64& rng, std::size_t n, bool uniform) {
    if (uniform) return SamplingPlan::uniform(uniform_in(rng, 0.5, 3.0) * double(n - 1), n);
    std::vector<double> gaps(n - 1);
    for (auto& g : gaps) g = uniform_in(rng, 0.2, 2.0);
    return SamplingPlan(std::move(gaps));
}

SensingModel random_model(SplitMix64& rng, bool allow_perfect) {
    if (allow_perfect && rng.next_bernoulli(0.25)) return SensingModel(0.0, 0.0);
    return SensingModel(uniform_in(rng, 0.0, 0.3), uniform_in(rng, 0.0, 0.3));
}

double rel_err(double got, double want, double scale_floor = 0.0) {
    double denom = std::max(std::abs(want), scale_floor);
    if (denom == 0.0) return std::abs(got - want);
    return std::abs(got - want) / denom;
}

std::string format_worst(double worst, double tol) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "worst rel err %.3g (tolerance %.1g)", worst, tol);
    return buf;
}

void set_bits(SampleVector& v, std::size_t mask) {
    for (std::size_t i = 0; i < v.bits.size(); ++i)
        v.bits[i] = static_cast<std::uint8_t>((mask >> i) & 1);
}

}  // namespace

CheckResult check_fisher_enumeration(std::size_t max_n, int points, std::uint64_t seed) {
    max_n = std::min<std::size_t>(max_n, kFisherEnumerationCap);
    SplitMix64 rng(seed);
    double worst = 0.0;
    const double tol = 1e-5;

    for (int p = 0; p < points; ++p) {
        RandomPoint pt = random_point(rng);
        for (std::size_t n = 2; n <= max_n; ++n) {
            FisherInfo closed = fisher_matrix(pt.params, pt.t_c, n);
            FisherInfo oracle = fisher_by_enumeration(pt.params, pt.t_c, n);
            double scale = std::max({std::abs(oracle.i11), std::abs(oracle.i12),
                                     std::abs(oracle.i22)}) *
                           1e-6;
            worst = std::max(worst, rel_err(closed.i11, oracle.i11, scale));
            worst = std::max(worst, rel_err(closed.i12, oracle.i12, scale));
            worst = std::max(worst, rel_err(closed.i22, oracle.i22, scale));
        }

        // printed N=2 base-case expressions
        const double u = pt.params.u();
        const double lf = pt.params.lambda_f();
        const double tc = pt.t_c;
        TransitionMatrix m = transition_matrix(pt.params, tc);
        const double g = std::exp(-pt.params.kernel_rate() * tc);
        double base_i11 =
            (lf * tc * (1.0 - u) * (1.0 + g) + (4.0 * u * u - 2.0 * u) * (1.0 - g)) /
                (u * u * m.p01 * m.p00 * m.p11) * g * g * lf * tc -
            (2.0 * m.p10 * u * (2.0 * g - 1.0) + g * (g - 2.0)) /
                (u * (1.0 - u) * m.p00 * m.p11);
        double base_i12 = tc * g * g * (m.p01 * (1.0 - 2.0 * u) - tc * lf * (1.0 - u) * (1.0 + g)) /
                          (u * m.p01 * m.p11 * m.p00);
        FisherInfo oracle2 = fisher_by_enumeration(pt.params, tc, 2);
        worst = std::max(worst, rel_err(base_i11, oracle2.i11));
        worst = std::max(worst, rel_err(base_i12, oracle2.i12));
    }
    return {"fisher closed forms vs enumeration oracle", worst < tol, format_worst(worst, tol)};
}

CheckResult check_cr_route_identities(int points, std::uint64_t seed) {
    SplitMix64 rng(seed);
    double worst = 0.0;
    const double tol = 1e-8;

    for (int p = 0; p < points; ++p) {
        RandomPoint pt = random_point(rng);
        std::size_t n = 2 + static_cast<std::size_t>(rng.next_u64() % 60);

        FisherInfo info = fisher_matrix(pt.params, pt.t_c, n);
        double det_direct = info.determinant();
        worst = std::max(worst, rel_err(fisher_determinant(pt.params, pt.t_c, n), det_direct));

        auto [v_u, v_lf] = cr_bounds_joint_uf(pt.params, pt.t_c, n);
        worst = std::max(worst, rel_err(v_u.value, info.i22 / det_direct));
        worst = std::max(worst, rel_err(v_lf.value, info.i11 / det_direct));

        // lambda_n bound against the matrix route with on/off roles exchanged
        auto [v_u2, v_ln] = cr_bounds_joint_un(pt.params, pt.t_c, n);
        TrafficParams swapped = TrafficParams::from_duty_and_departure(
            1.0 - pt.params.u(), pt.params.lambda_n());
        FisherInfo swapped_info = fisher_matrix(swapped, pt.t_c, n);
        worst = std::max(worst,
                         rel_err(v_ln.value, swapped_info.i11 / swapped_info.determinant()));
        worst = std::max(worst, rel_err(v_u2.value, v_u.value));
    }
    return {"determinant and CR bound route identities", worst < tol, format_worst(worst, tol)};
}

CheckResult check_likelihood_normalization(std::size_t max_n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    double worst = 0.0;
    const double tol = 1e-10;

    for (std::size_t n = 2; n <= max_n; ++n) {
        for (bool uniform : {true, false}) {
            RandomPoint pt = random_point(rng);
            SensingModel model = random_model(rng, false);
            SampleVector v(std::vector<std::uint8_t>(n, 0), random_plan(rng, n, uniform));

            double clean_sum = 0.0;
            double noisy_sum = 0.0;
            for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
                set_bits(v, mask);
                clean_sum += std::exp(loglik_clean_general(v, pt.params).value);
                noisy_sum += std::exp(loglik_noisy_forward(v, pt.params, model).value);
            }
            worst = std::max(worst, rel_err(clean_sum, 1.0));
            worst = std::max(worst, rel_err(noisy_sum, 1.0));
        }
    }
    return {"likelihood normalization over all observation vectors", worst < tol,
            format_worst(worst, tol)};
}

CheckResult check_forward_vs_bruteforce(int cases, std::size_t max_n, std::uint64_t seed) {
    max_n = std::min(max_n, kBruteForceCap);
    SplitMix64 rng(seed);
    double worst = 0.0;
    const double tol = 1e-10;

    for (int c = 0; c < cases; ++c) {
        std::size_t n = 2 + rng.next_u64() % (max_n - 1);
        RandomPoint pt = random_point(rng);
        SampleVector v(std::vector<std::uint8_t>(n, 0),
                       random_plan(rng, n, rng.next_bernoulli(0.5)));
        set_bits(v, rng.next_u64());
        SensingModel model = random_model(rng, true);

        LogLikelihoodValue fwd = loglik_noisy_forward(v, pt.params, model);
        LogLikelihoodValue brute = loglik_noisy_bruteforce(v, pt.params, model);
        if (fwd.underflowed != brute.underflowed) {
            worst = 1.0;
            continue;
        }
        if (!fwd.underflowed)
            worst = std::max(worst, std::abs(fwd.value - brute.value) /
                                        std::max({std::abs(fwd.value), std::abs(brute.value), 1.0}));
    }
    return {"forward recursion vs brute-force hidden-state sum", worst < tol,
            format_worst(worst, tol)};
}

CheckResult check_mse_routes(std::size_t max_n, std::uint64_t seed) {
    max_n = std::min<std::size_t>(max_n, 10);
    SplitMix64 rng(seed);
    double worst = 0.0;
    const double tol = 1e-10;

    // exhaustive observation-vector sum, n <= max_n
    for (std::size_t n = 2; n <= max_n; ++n) {
        RandomPoint pt = random_point(rng);
        SensingModel model = random_model(rng, true);
        SampleVector v(std::vector<std::uint8_t>(n, 0),
                       random_plan(rng, n, rng.next_bernoulli(0.5)));

        double denom = 1.0 - model.p_f - model.p_m;
        double second_moment = 0.0;
        for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
            set_bits(v, mask);
            double mean = 0.0;
            for (auto b : v.bits) mean += b;
            mean /= static_cast<double>(n);
            double stat = (mean - model.p_f) / denom;
            second_moment += stat * stat * std::exp(loglik_noisy_forward(v, pt.params, model).value);
        }
        double exhaustive = second_moment - pt.params.u() * pt.params.u();
        double closed = mse_avg(pt.params, v.plan, model).value;
        worst = std::max(worst, rel_err(closed, exhaustive));
    }

    // recursive route, larger n
    for (std::size_t n : {2ul, 3ul, 17ul, 64ul, 100ul}) {
        RandomPoint pt = random_point(rng);
        SensingModel model = random_model(rng, true);
        SamplingPlan plan = random_plan(rng, n, rng.next_bernoulli(0.5));
        double closed = mse_avg(pt.params, plan, model).value;
        double recursive = mse_avg_recursive_check(pt.params, plan, model).value;
        worst = std::max(worst, rel_err(recursive, closed));
    }
    return {"averaging MSE: closed form vs exhaustive sum vs recursion", worst < tol,
            format_worst(worst, tol)};
}

CheckResult check_asymptotes(std::uint64_t seed) {
    SplitMix64 rng(seed);
    double worst_value = 0.0;
    double worst_conv = 0.0;
    bool doubling_ok = true;

    // reference point u=0.3, lambda_f=0.9 1/s, T=50 s
    TrafficParams params = TrafficParams::from_duty_and_departure(0.3, 0.9);
    const double t_total = 50.0;
    auto limits = cr_asymptotes(params, t_total);
    worst_value = std::max(worst_value, rel_err(limits[0].value, 0.00276316));
    worst_value = std::max(worst_value, rel_err(limits[1].value, 0.0255451));
    worst_value =
        std::max(worst_value, rel_err(mse_avg_uniform_limit(params, t_total).value, 0.00278133));

    // finite-N convergence at N = 1e5 over the fixed window
    const std::size_t big_n = 100000;
    SamplingPlan big_plan = SamplingPlan::uniform(t_total, big_n);
    double t_c = big_plan.gaps().front();
    auto [v_u, v_lf] = cr_bounds_joint_uf(params, t_c, big_n);
    auto [v_u2, v_ln] = cr_bounds_joint_un(params, t_c, big_n);
    worst_conv = std::max(worst_conv, rel_err(v_u.value, limits[0].value));
    worst_conv = std::max(worst_conv, rel_err(v_lf.value, limits[1].value));
    worst_conv = std::max(worst_conv, rel_err(v_ln.value, limits[2].value));
    worst_conv = std::max(worst_conv,
                          rel_err(mse_avg(params, big_plan, SensingModel()).value,
                                  mse_avg_uniform_limit(params, t_total).value));
    (void)v_u2;

    // window-doubling identity, exact
    for (int i = 0; i < 25; ++i) {
        RandomPoint pt = random_point(rng);
        double t = uniform_in(rng, 1.0, 200.0);
        double joint_doubled = cr_asymptotes(pt.params, 2.0 * t)[0].value;
        double known = cr_asymptotes(pt.params, t)[3].value;
        doubling_ok = doubling_ok && joint_doubled == known;
    }

    bool pass = worst_value < 1e-5 && worst_conv < 0.01 && doubling_ok;
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "literals rel err %.2g (tol 1e-5), N=1e5 convergence %.3g (tol 0.01), "
                  "doubling identity %s",
                  worst_value, worst_conv, doubling_ok ? "exact" : "VIOLATED");
    return {"CR and averaging asymptotes", pass, buf};
}

std::vector<CheckResult> run_all_verifications(std::size_t max_n, std::uint64_t seed) {
    std::vector<CheckResult> results;
    results.push_back(check_fisher_enumeration(std::min<std::size_t>(max_n, 8), 50, seed));
    results.push_back(check_cr_route_identities(100, seed + 1));
    results.push_back(check_likelihood_normalization(std::min<std::size_t>(max_n, 10), seed + 2));
    results.push_back(check_forward_vs_bruteforce(200, std::min<std::size_t>(max_n, 12), seed + 3));
    results.push_back(check_mse_routes(std::min<std::size_t>(max_n, 10), seed + 4));
    results.push_back(check_asymptotes(seed + 5));
    return results;
}

}  // namespace putraffic
