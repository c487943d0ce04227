#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "putraffic/markov.hpp"
#include "putraffic/rng.hpp"
#include "putraffic/types.hpp"

using namespace putraffic;

TEST_CASE("traffic params: any two of the three determine the third") {
    auto a = TrafficParams::from_duty_and_departure(0.3, 0.9);
    CHECK(a.lambda_n() == doctest::Approx(2.1).epsilon(1e-12));

    auto b = TrafficParams::from_duty_and_arrival(0.3, a.lambda_n());
    CHECK(b.lambda_f() == doctest::Approx(0.9).epsilon(1e-12));

    auto c = TrafficParams::from_rates(a.lambda_f(), a.lambda_n());
    CHECK(c.u() == doctest::Approx(0.3).epsilon(1e-12));

    // coupling holds on a grid
    SplitMix64 rng(7);
    for (int i = 0; i < 200; ++i) {
        double u = 0.01 + 0.98 * rng.next_double();
        double lf = 0.01 + 5.0 * rng.next_double();
        auto p = TrafficParams::from_duty_and_departure(u, lf);
        CHECK(std::abs(p.u() - p.lambda_f() / (p.lambda_f() + p.lambda_n())) <= 1e-12 * p.u());
    }
}

TEST_CASE("traffic params: rejects boundary and non-positive values") {
    CHECK_THROWS_AS(TrafficParams::from_duty_and_departure(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(TrafficParams::from_duty_and_departure(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(TrafficParams::from_duty_and_departure(0.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(TrafficParams::from_duty_and_arrival(0.5, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(TrafficParams::from_rates(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("uniform plan: every gap is exactly T/(N-1)") {
    auto plan = SamplingPlan::uniform(50.0, 1000);
    double expected = 50.0 / 999.0;
    for (double g : plan.gaps()) CHECK(g == expected);
    CHECK(plan.is_uniform());
    CHECK(plan.n_samples() == 1000);

    CHECK_THROWS_AS(SamplingPlan::uniform(0.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(SamplingPlan::uniform(1.0, 1), std::invalid_argument);
    CHECK_THROWS_AS(SamplingPlan({1.0, -0.5}), std::invalid_argument);
}

TEST_CASE("sensing model validation") {
    CHECK_NOTHROW(SensingModel(0.0, 0.0));
    CHECK_NOTHROW(SensingModel(0.4, 0.5));
    CHECK_THROWS_AS(SensingModel(0.5, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(SensingModel(-0.1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(SensingModel(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("sample vector length must match the plan") {
    auto plan = SamplingPlan::uniform(1.0, 3);
    CHECK_NOTHROW(SampleVector({0, 1, 1}, plan));
    CHECK_THROWS_AS(SampleVector({0, 1}, plan), std::invalid_argument);
    CHECK_THROWS_AS(SampleVector({0, 1, 2}, plan), std::invalid_argument);
}

TEST_CASE("transition counts by inspection") {
    auto plan5 = SamplingPlan::uniform(4.0, 5);
    auto c = count_transitions(SampleVector({0, 0, 1, 1, 0}, plan5));
    CHECK(c.z1 == 0);
    CHECK(c.n0 == 1);
    CHECK(c.n1 == 1);
    CHECK(c.n2 == 1);
    CHECK(c.n3 == 1);

    auto plan3 = SamplingPlan::uniform(2.0, 3);
    c = count_transitions(SampleVector({1, 1, 1}, plan3));
    CHECK(c.z1 == 1);
    CHECK(c.n3 == 2);
    CHECK(c.n0 + c.n1 + c.n2 == 0);

    auto plan4 = SamplingPlan::uniform(3.0, 4);
    c = count_transitions(SampleVector({0, 1, 0, 1}, plan4));
    CHECK(c.z1 == 0);
    CHECK(c.n1 == 2);
    CHECK(c.n2 == 1);
    CHECK(c.total() == 3);

    CHECK_THROWS_AS(count_transitions(SampleVector({1}, SamplingPlan({}))), std::domain_error);
}

TEST_CASE("kernel endpoints and the frozen interior value") {
    auto params = TrafficParams::from_duty_and_departure(0.3, 0.9);
    CHECK(transition_prob(params, 0, 0, 0.0) == 1.0);
    CHECK(transition_prob(params, 1, 1, 0.0) == 1.0);
    // stationary limit: the decay underflows to zero
    CHECK(transition_prob(params, 0, 0, 1e9) == 0.7);
    CHECK(transition_prob(params, 1, 1, 1e9) == 0.3);
    // independent arithmetic for Pr_00(1): 1 - u + u*e^{-lambda_f/u}
    double expected = 0.7 + 0.3 * std::exp(-3.0);
    CHECK(transition_prob(params, 0, 0, 1.0) == doctest::Approx(expected).epsilon(1e-15));
    CHECK(transition_prob(params, 0, 0, 1.0) == doctest::Approx(0.7149361205103592).epsilon(1e-12));

    CHECK_THROWS_AS(transition_prob(params, 0, 0, -1.0), std::domain_error);
    CHECK_THROWS_AS(transition_prob(params, 2, 0, 1.0), std::domain_error);
}

TEST_CASE("kernel rows sum to one bit-for-bit") {
    SplitMix64 rng(11);
    for (int i = 0; i < 500; ++i) {
        double u = 0.001 + 0.998 * rng.next_double();
        double lf = 1e-3 + 4.0 * rng.next_double();
        double t = rng.next_double() < 0.1 ? 0.0 : 5.0 * rng.next_double();
        auto m = transition_matrix(TrafficParams::from_duty_and_departure(u, lf), t);
        CHECK(m.p00 + m.p01 == 1.0);
        CHECK(m.p10 + m.p11 == 1.0);
        CHECK(m.p00 >= 0.0);
        CHECK(m.p10 >= 0.0);
    }
}

TEST_CASE("Chapman-Kolmogorov composition") {
    SplitMix64 rng(13);
    for (int i = 0; i < 100; ++i) {
        double u = 0.05 + 0.9 * rng.next_double();
        double lf = 0.05 + 2.0 * rng.next_double();
        auto params = TrafficParams::from_duty_and_departure(u, lf);
        double t1 = 0.05 + 2.0 * rng.next_double();
        double t2 = 0.05 + 2.0 * rng.next_double();
        auto a = transition_matrix(params, t1);
        auto b = transition_matrix(params, t2);
        auto c = transition_matrix(params, t1 + t2);
        CHECK(a.p00 * b.p00 + a.p01 * b.p10 == doctest::Approx(c.p00).epsilon(1e-12));
        CHECK(a.p00 * b.p01 + a.p01 * b.p11 == doctest::Approx(c.p01).epsilon(1e-12));
        CHECK(a.p10 * b.p00 + a.p11 * b.p10 == doctest::Approx(c.p10).epsilon(1e-12));
        CHECK(a.p10 * b.p01 + a.p11 * b.p11 == doctest::Approx(c.p11).epsilon(1e-12));
    }
}

TEST_CASE("detailed balance of the stationary chain") {
    SplitMix64 rng(17);
    for (int i = 0; i < 100; ++i) {
        double u = 0.05 + 0.9 * rng.next_double();
        double lf = 0.05 + 2.0 * rng.next_double();
        double t = 0.01 + 3.0 * rng.next_double();
        auto params = TrafficParams::from_duty_and_departure(u, lf);
        auto m = transition_matrix(params, t);
        CHECK(u * m.p10 == doctest::Approx((1.0 - u) * m.p01).epsilon(1e-12));
    }
}
