#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "putraffic/bounds.hpp"
#include "putraffic/likelihood.hpp"
#include "putraffic/markov.hpp"
#include "putraffic/rng.hpp"

using namespace putraffic;

namespace {

TrafficParams random_params(SplitMix64& rng) {
    return TrafficParams::from_duty_and_departure(0.05 + 0.9 * rng.next_double(),
                                                  0.1 + 2.0 * rng.next_double());
}

// literal double-sum route to the averaging MSE, kept independent of the
// production code path
double mse_avg_literal(const TrafficParams& params, const SamplingPlan& plan,
                       const SensingModel& model) {
    const std::size_t n = plan.n_samples();
    const double u = params.u();
    double corr = 0.0;
    for (std::size_t i = 1; i <= n - 1; ++i) {       // lag
        for (std::size_t j = 1; j <= n - i; ++j) {   // start
            double prod = 1.0;
            for (std::size_t k = j; k <= i + j - 1; ++k)
                prod *= std::exp(-plan.gaps()[k - 1] * params.kernel_rate());
            corr += prod;
        }
    }
    double d = 1.0 - model.p_f - model.p_m;
    double nd = static_cast<double>(n);
    return 2.0 * u * (1.0 - u) / (nd * nd) * corr + u * (1.0 - u) / nd +
           (u * model.p_m * (1.0 - model.p_m) + (1.0 - u) * model.p_f * (1.0 - model.p_f)) /
               (nd * d * d);
}

}  // namespace

TEST_CASE("fisher i22: frozen two-sample value by independent arithmetic") {
    auto params = TrafficParams::from_duty_and_departure(0.3, 0.9);
    double g = std::exp(-3.0);
    double p00 = 0.7 + 0.3 * g;
    double p01 = 0.3 * (1.0 - g);
    double p11 = 0.3 + 0.7 * g;
    double expected = g * g * 0.7 * (1.0 + g) / (p01 * p00 * p11);
    auto info = fisher_matrix(params, 1.0, 2);
    CHECK(info.i22 == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("fisher off-diagonal is affine in the sample count") {
    auto params = TrafficParams::from_duty_and_departure(0.35, 0.8);
    double i12_2 = fisher_matrix(params, 0.7, 2).i12;
    double i12_3 = fisher_matrix(params, 0.7, 3).i12;
    double slope = i12_3 - i12_2;
    for (std::size_t n : {4, 7, 20, 101}) {
        double expected = i12_2 + slope * static_cast<double>(n - 2);
        CHECK(fisher_matrix(params, 0.7, n).i12 ==
              doctest::Approx(expected).epsilon(1e-14));
    }
}

TEST_CASE("fisher closed forms match the enumeration oracle") {
    SplitMix64 rng(51);
    for (int c = 0; c < 10; ++c) {
        // keep the kernel informative: decay exponent lambda_f*t_c/u in [0.1, 4]
        double u = 0.05 + 0.9 * rng.next_double();
        double t_c = 0.3 + 1.5 * rng.next_double();
        double exponent = 0.1 + 3.9 * rng.next_double();
        auto params = TrafficParams::from_duty_and_departure(u, exponent * u / t_c);
        for (std::size_t n = 2; n <= 8; ++n) {
            auto closed = fisher_matrix(params, t_c, n);
            auto oracle = fisher_by_enumeration(params, t_c, n);
            double scale =
                1e-6 * std::max({std::abs(oracle.i11), std::abs(oracle.i12), std::abs(oracle.i22)});
            CHECK(std::abs(closed.i11 - oracle.i11) <
                  1e-5 * std::max(std::abs(oracle.i11), scale));
            CHECK(std::abs(closed.i12 - oracle.i12) <
                  1e-5 * std::max(std::abs(oracle.i12), scale));
            CHECK(std::abs(closed.i22 - oracle.i22) <
                  1e-5 * std::max(std::abs(oracle.i22), scale));
        }
    }
    CHECK_THROWS_AS(fisher_by_enumeration(random_params(rng), 1.0, 9), std::length_error);
}

TEST_CASE("fisher matrix is symmetric positive semidefinite on a grid") {
    SplitMix64 rng(53);
    for (int c = 0; c < 100; ++c) {
        auto params = random_params(rng);
        double t_c = 0.2 + 2.0 * rng.next_double();
        std::size_t n = 2 + rng.next_u64() % 200;
        auto info = fisher_matrix(params, t_c, n);
        CHECK(info.i11 >= 0.0);
        CHECK(info.i22 >= 0.0);
        double scale = std::max({std::abs(info.i11), std::abs(info.i22), std::abs(info.i12)});
        CHECK(info.determinant() >= -1e-9 * scale * scale);
    }
}

TEST_CASE("determinant identity and CR route identity") {
    SplitMix64 rng(57);
    for (int c = 0; c < 100; ++c) {
        auto params = random_params(rng);
        double t_c = 0.2 + 2.0 * rng.next_double();
        std::size_t n = 2 + rng.next_u64() % 100;
        auto info = fisher_matrix(params, t_c, n);
        double det_direct = info.determinant();
        CHECK(fisher_determinant(params, t_c, n) ==
              doctest::Approx(det_direct).epsilon(1e-8));

        auto [v_u, v_lf] = cr_bounds_joint_uf(params, t_c, n);
        CHECK(v_u.value == doctest::Approx(info.i22 / det_direct).epsilon(1e-8));
        CHECK(v_lf.value == doctest::Approx(info.i11 / det_direct).epsilon(1e-8));
        CHECK(v_u.kind == BoundKind::cr_u_joint);
        CHECK(v_lf.kind == BoundKind::cr_lf_joint);
    }
}

TEST_CASE("joint u bound: frozen ten-sample value and monotonicity in N") {
    auto params = TrafficParams::from_duty_and_departure(0.3, 0.9);
    double g = std::exp(-3.0);
    double expected = 0.21 * (1.0 + g) / (10.0 * (1.0 - g) + 2.0 * g);
    auto v10 = cr_bounds_joint_uf(params, 1.0, 10).first.value;
    CHECK(v10 == doctest::Approx(expected).epsilon(1e-14));
    CHECK(v10 == doctest::Approx(0.0229600).epsilon(1e-5));

    double prev = cr_bounds_joint_uf(params, 1.0, 2).first.value;
    for (std::size_t n = 3; n <= 40; ++n) {
        double cur = cr_bounds_joint_uf(params, 1.0, n).first.value;
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("lambda_n bound mirrors the lambda_f bound under relabeling") {
    SplitMix64 rng(61);
    for (int c = 0; c < 50; ++c) {
        auto params = random_params(rng);
        double t_c = 0.2 + 2.0 * rng.next_double();
        std::size_t n = 2 + rng.next_u64() % 50;
        auto [v_u, v_ln] = cr_bounds_joint_un(params, t_c, n);
        CHECK(v_ln.value >= 0.0);
        CHECK(v_u.value == cr_bounds_joint_uf(params, t_c, n).first.value);

        auto swapped = TrafficParams::from_duty_and_departure(1.0 - params.u(), params.lambda_n());
        auto mirrored = cr_bounds_joint_uf(swapped, t_c, n).second.value;
        CHECK(v_ln.value == doctest::Approx(mirrored).epsilon(1e-12));
    }
}

TEST_CASE("lambda_n bound approaches its limit") {
    auto params = TrafficParams::from_duty_and_departure(0.3, 0.9);
    double t_total = 50.0;
    std::size_t n = 100000;
    double t_c = t_total / static_cast<double>(n - 1);
    double finite = cr_bounds_joint_un(params, t_c, n).second.value;
    double limit = cr_asymptotes(params, t_total)[2].value;
    CHECK(finite == doctest::Approx(limit).epsilon(0.01));
}

TEST_CASE("asymptote values at the reference point") {
    auto params = TrafficParams::from_duty_and_departure(0.3, 0.9);
    auto limits = cr_asymptotes(params, 50.0);
    REQUIRE(limits.size() == 4);
    CHECK(limits[0].value == doctest::Approx(0.21 / 76.0).epsilon(1e-14));
    CHECK(limits[0].value == doctest::Approx(0.00276316).epsilon(1e-5));
    CHECK(limits[1].value == doctest::Approx(0.9 * 45.3 / (50.0 * 0.7 * 45.6)).epsilon(1e-14));
    CHECK(limits[1].value == doctest::Approx(0.0255451).epsilon(1e-5));
    CHECK(limits[3].kind == BoundKind::cr_u_known_lf_limit);
}

TEST_CASE("known-parameter scalar bounds approach their limits") {
    auto params = TrafficParams::from_duty_and_departure(0.3, 0.9);
    double t_total = 100.0;
    std::size_t n = 100000;
    double t_c = t_total / static_cast<double>(n - 1);
    double finite = cr_bound_u_known_lf(params, t_c, n);
    double limit = cr_asymptotes(params, t_total)[3].value;
    CHECK(finite == doctest::Approx(limit).epsilon(0.01));
}

TEST_CASE("a priori knowledge of lambda_f acts like doubling the window") {
    SplitMix64 rng(63);
    for (int c = 0; c < 50; ++c) {
        auto params = random_params(rng);
        double t = 0.5 + 150.0 * rng.next_double();
        double joint_doubled = cr_asymptotes(params, 2.0 * t)[0].value;
        double known = cr_asymptotes(params, t)[3].value;
        CHECK(joint_doubled == known);
    }
}

TEST_CASE("averaging MSE: frozen two-sample values") {
    auto params = TrafficParams::from_duty_and_departure(0.3, 0.9);
    auto plan = SamplingPlan::uniform(1.0, 2);
    double g = std::exp(-3.0);

    double perfect = mse_avg(params, plan, SensingModel()).value;
    CHECK(perfect == doctest::Approx(0.21 * (1.0 + g) / 2.0).epsilon(1e-12));
    CHECK(perfect == doctest::Approx(0.1102276).epsilon(1e-6));

    double noisy = mse_avg(params, plan, SensingModel(0.05, 0.05)).value;
    CHECK(noisy == doctest::Approx(0.21 * (1.0 + g) / 2.0 + 0.05 * 0.95 / (2.0 * 0.81))
                       .epsilon(1e-12));
    CHECK(noisy == doctest::Approx(0.1395486).epsilon(1e-6));

    // the recursion's base case is the same two-sample expression
    CHECK(mse_avg_recursive_check(params, plan, SensingModel(0.05, 0.05)).value ==
          doctest::Approx(noisy).epsilon(1e-14));
}

TEST_CASE("averaging MSE: huge gaps leave only the binomial term") {
    auto params = TrafficParams::from_duty_and_departure(0.3, 0.9);
    auto plan = SamplingPlan::uniform(1e9, 11);
    CHECK(mse_avg(params, plan, SensingModel()).value ==
          doctest::Approx(0.21 / 11.0).epsilon(1e-12));
}

TEST_CASE("averaging MSE matches the literal double sum") {
    SplitMix64 rng(67);
    for (int c = 0; c < 30; ++c) {
        auto params = random_params(rng);
        std::size_t n = 2 + rng.next_u64() % 150;
        SamplingPlan plan = [&] {
            if (rng.next_bernoulli(0.5))
                return SamplingPlan::uniform((0.1 + 2.0 * rng.next_double()) * double(n - 1), n);
            std::vector<double> gaps(n - 1);
            for (auto& g : gaps) g = 0.1 + 2.0 * rng.next_double();
            return SamplingPlan(std::move(gaps));
        }();
        SensingModel model(0.3 * rng.next_double(), 0.3 * rng.next_double());
        double got = mse_avg(params, plan, model).value;
        double want = mse_avg_literal(params, plan, model);
        CHECK(got == doctest::Approx(want).epsilon(1e-11));
    }
}

TEST_CASE("averaging MSE limit: series switch and frozen value") {
    auto params = TrafficParams::from_duty_and_departure(0.3, 0.9);
    // frozen: eta = 150
    CHECK(mse_avg_uniform_limit(params, 50.0).value ==
          doctest::Approx(0.42 * (std::exp(-150.0) + 149.0) / 22500.0).epsilon(1e-14));
    CHECK(mse_avg_uniform_limit(params, 50.0).value ==
          doctest::Approx(0.00278133).epsilon(1e-5));

    // eta -> 0 recovers the one-sample variance
    CHECK(mse_avg_uniform_limit(params, 1e-9).value ==
          doctest::Approx(0.21).epsilon(1e-8));

    // continuity across the series threshold at eta = 1e-4
    double below = mse_avg_uniform_limit(params, 0.99e-4 / 3.0).value;
    double above = mse_avg_uniform_limit(params, 1.01e-4 / 3.0).value;
    CHECK(below == doctest::Approx(above).epsilon(1e-6));
}

TEST_CASE("uniform averaging MSE converges to its limit") {
    auto params = TrafficParams::from_duty_and_departure(0.3, 0.9);
    auto plan = SamplingPlan::uniform(50.0, 100000);
    double finite = mse_avg(params, plan, SensingModel()).value;
    double limit = mse_avg_uniform_limit(params, 50.0).value;
    CHECK(finite == doctest::Approx(limit).epsilon(1e-3));
}

TEST_CASE("recursive MSE route agrees with the closed form") {
    SplitMix64 rng(71);
    for (int c = 0; c < 30; ++c) {
        auto params = random_params(rng);
        std::size_t n = 2 + rng.next_u64() % 99;
        SamplingPlan plan = [&] {
            if (rng.next_bernoulli(0.5))
                return SamplingPlan::uniform((0.1 + 2.0 * rng.next_double()) * double(n - 1), n);
            std::vector<double> gaps(n - 1);
            for (auto& g : gaps) g = 0.1 + 2.0 * rng.next_double();
            return SamplingPlan(std::move(gaps));
        }();
        SensingModel model = rng.next_bernoulli(0.3)
                                 ? SensingModel()
                                 : SensingModel(0.3 * rng.next_double(), 0.3 * rng.next_double());
        double closed = mse_avg(params, plan, model).value;
        double recursive = mse_avg_recursive_check(params, plan, model).value;
        CHECK(std::abs(recursive - closed) <= 1e-10 * std::abs(closed));
    }
}

TEST_CASE("recursive MSE route agrees with the exhaustive noisy-weighted sum") {
    SplitMix64 rng(73);
    for (std::size_t n : {2, 4, 7, 10}) {
        auto params = random_params(rng);
        auto plan = SamplingPlan::uniform(0.8 * double(n - 1), n);
        SensingModel model(0.1, 0.07);

        double d = 1.0 - model.p_f - model.p_m;
        double second = 0.0;
        SampleVector v(std::vector<std::uint8_t>(n, 0), plan);
        for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
            for (std::size_t i = 0; i < n; ++i)
                v.bits[i] = static_cast<std::uint8_t>((mask >> i) & 1);
            double mean = 0.0;
            for (auto b : v.bits) mean += b;
            mean /= double(n);
            double stat = (mean - model.p_f) / d;
            second += stat * stat * std::exp(loglik_noisy_forward(v, params, model).value);
        }
        double exhaustive = second - params.u() * params.u();
        double recursive = mse_avg_recursive_check(params, plan, model).value;
        CHECK(recursive == doctest::Approx(exhaustive).epsilon(1e-10));
    }
}

TEST_CASE("sensing contribution to the averaging MSE decays as 1/N") {
    auto params = TrafficParams::from_duty_and_departure(0.4, 1.0);
    SensingModel model(0.08, 0.12);
    double reference = 0.0;
    for (std::size_t n : {2, 5, 20, 200}) {
        auto plan = SamplingPlan::uniform(double(n - 1), n);
        double with = mse_avg(params, plan, model).value;
        double without = mse_avg(params, plan, SensingModel()).value;
        double scaled = double(n) * (with - without);
        if (reference == 0.0) reference = scaled;
        CHECK(scaled == doctest::Approx(reference).epsilon(1e-12));
    }
}

TEST_CASE("degenerate requests throw") {
    auto params = TrafficParams::from_duty_and_departure(0.3, 0.9);
    CHECK_THROWS_AS(fisher_matrix(params, 1.0, 1), std::domain_error);
    CHECK_THROWS_AS(fisher_matrix(params, -1.0, 5), std::domain_error);
    CHECK_THROWS_AS(cr_bounds_joint_uf(params, 1.0, 1), std::domain_error);
    CHECK_THROWS_AS(cr_asymptotes(params, 0.0), std::domain_error);
    CHECK_THROWS_AS(mse_avg_recursive_check(params, SamplingPlan({}), SensingModel()),
                    std::domain_error);
}
