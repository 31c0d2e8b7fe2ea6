#include <doctest.h>

#include <cmath>
#include <random>

#include "errors.hpp"
#include "final_size.hpp"
#include "intervention.hpp"
#include "oracles.hpp"

using namespace sirw;

namespace {

const EpiState kOutbreak = outbreak_state(0.005);

EpiState state_at_tau_s(double r0, double tau_s) {
    const Trajectory traj = integrate(kOutbreak, ReproductionSchedule::constant(r0), tau_s);
    return traj.final_state();
}

} // namespace

TEST_CASE("goldilocks level for the reference outbreak") {
    const double r_g = goldilocks_r(2.5, kOutbreak, 2.0);
    CHECK(std::abs(r_g - 1.4157) <= 0.0005);

    // definitional residual: the final size from the switch state equals S*
    const EpiState at_start = state_at_tau_s(2.5, 2.0);
    CHECK(std::abs(final_size(r_g, at_start.s, at_start.i) - 0.4) <= 1e-6);

    // downward-scan oracle quantizes to 1e-4 just below the crossing
    const double scanned = sirw::test::goldilocks_scan(2.5, at_start.s, at_start.i);
    CHECK(r_g - scanned >= -1e-6);
    CHECK(r_g - scanned <= 1.01e-4);
}

TEST_CASE("goldilocks level decreases with the start time") {
    const double g1 = goldilocks_r(2.5, kOutbreak, 1.0);
    const double g2 = goldilocks_r(2.5, kOutbreak, 2.0);
    const double g3 = goldilocks_r(2.5, kOutbreak, 3.0);
    CHECK(g1 > g2);
    CHECK(g2 > g3);
    // earlier starts demand softer distancing, still below the baseline
    CHECK(g1 > 1.4157);
    CHECK(g1 < 2.5);
}

TEST_CASE("goldilocks preconditions") {
    CHECK_THROWS_AS(goldilocks_r(0.9, kOutbreak, 2.0), Error);
    CHECK_THROWS_AS(goldilocks_r(2.5, kOutbreak, -1.0), Error);
    // past the uncontrolled peak (tau_hat ~ 3.78)
    try {
        goldilocks_r(2.5, kOutbreak, 5.0);
        FAIL("expected precondition failure");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::invalid_argument);
    }
}

TEST_CASE("quasi-optimal policy synthesis") {
    const SingleIntervalPolicy policy = quasi_optimal_policy(2.5, kOutbreak, 2.0, 6.0);
    CHECK(policy.r0 == 2.5);
    CHECK(policy.tau_s == 2.0);
    CHECK(std::abs(policy.r_s - 1.4157) <= 0.0005);

    // tau_f = tau_s + 6 * (absolute infected-peak time of the switched run)
    const auto ref_state = sirw::test::rk4_schedule({0.9950, 0.0050, 0.0},
                                                    {{0.0, 2.5}, {2.0, policy.r_s}}, 2.0);
    const auto ref_peak = sirw::test::rk4_peak(ref_state, policy.r_s, 2.0, 40.0);
    CHECK(policy.tau_f == doctest::Approx(2.0 + 6.0 * ref_peak.tau_hat).epsilon(2e-3));

    const ScenarioReport report = classify_scenario(policy, kOutbreak);
    CHECK(report.scenario == ScenarioClass::QuasiOptimal);
    CHECK(std::abs(report.s_infinity - 0.4) < 0.01);

    // longer holds push the outcome closer to the threshold
    const SingleIntervalPolicy longer = quasi_optimal_policy(2.5, kOutbreak, 2.0, 10.0);
    const ScenarioReport longer_report = classify_scenario(longer, kOutbreak);
    CHECK(0.4 - longer_report.s_infinity < 0.4 - report.s_infinity);
    CHECK(longer_report.s_infinity < 0.4);

    CHECK_THROWS_AS(quasi_optimal_policy(2.5, kOutbreak, 2.0, 3.0), Error);
}

TEST_CASE("classification of the reference scenarios") {
    SUBCASE("quasi optimal") {
        const ScenarioReport report =
            classify_scenario(SingleIntervalPolicy{2.0, 21.6, 1.4157, 2.5}, kOutbreak);
        CHECK(report.scenario == ScenarioClass::QuasiOptimal);
        CHECK(std::abs(report.s_infinity - 0.3942) <= 0.005);
        CHECK_FALSE(report.second_wave.has_value());
        CHECK(std::abs(report.s_infinity - report.tail_s) <= 1e-3);
    }
    SUBCASE("soft long term") {
        const ScenarioReport report =
            classify_scenario(SingleIntervalPolicy{2.0, 21.6, 1.8, 2.5}, kOutbreak);
        CHECK(report.scenario == ScenarioClass::SoftLongTerm);
        CHECK(std::abs(report.s_infinity - 0.2453) <= 0.005);
        CHECK(report.s_at_tf < report.s_star);
        CHECK(std::abs(report.s_infinity - report.tail_s) <= 1e-3);
    }
    SUBCASE("strong long term with a second wave") {
        const ScenarioReport report =
            classify_scenario(SingleIntervalPolicy{2.0, 21.6, 0.85, 2.5}, kOutbreak);
        CHECK(report.scenario == ScenarioClass::StrongLongTerm);
        CHECK(std::abs(report.s_infinity - 0.1989) <= 0.005);
        CHECK(std::abs(report.s_at_tf - 0.70) <= 0.01);
        REQUIRE(report.second_wave.has_value());
        CHECK(report.second_wave->tau > 21.6);
        CHECK(report.second_wave->peak > 0.01);
        CHECK(std::abs(report.s_infinity - report.tail_s) <= 1e-3);
    }
    SUBCASE("short term sweep") {
        for (const double r_s : {1.05, 1.3, 1.55, 1.8}) {
            const ScenarioReport report =
                classify_scenario(SingleIntervalPolicy{2.0, 8.0, r_s, 2.5}, kOutbreak);
            CHECK(report.scenario == ScenarioClass::ShortTerm);
            CHECK(report.i_at_tf > 1e-3);
            CHECK(report.s_infinity < 0.3942);
            CHECK(std::abs(report.s_infinity - report.tail_s) <= 1e-3);
        }
    }
}

TEST_CASE("soft monotonicity: softer long-term distancing loses more susceptibles") {
    double prev = 1.0;
    for (const double r_s : {1.6, 1.8, 2.0}) {
        const ScenarioReport report =
            classify_scenario(SingleIntervalPolicy{2.0, 21.6, r_s, 2.5}, kOutbreak);
        CHECK(report.scenario == ScenarioClass::SoftLongTerm);
        CHECK(report.s_infinity < prev);
        prev = report.s_infinity;
    }
}

TEST_CASE("strong monotonicity: stronger distancing grows the second wave") {
    double prev_s_inf = 0.0;
    double prev_wave = 1.0;
    for (const double r_s : {0.7, 0.85, 1.0}) {
        const ScenarioReport report =
            classify_scenario(SingleIntervalPolicy{2.0, 21.6, r_s, 2.5}, kOutbreak);
        CHECK(report.scenario == ScenarioClass::StrongLongTerm);
        REQUIRE(report.second_wave.has_value());
        // ordered weakest-last: final size rises, wave peak falls
        CHECK(report.s_infinity > prev_s_inf);
        CHECK(report.second_wave->peak < prev_wave);
        prev_s_inf = report.s_infinity;
        prev_wave = report.second_wave->peak;
    }
}

TEST_CASE("upper bound check") {
    const UpperBoundCheck soft =
        upper_bound_check(SingleIntervalPolicy{2.0, 21.6, 1.8, 2.5}, kOutbreak);
    CHECK(soft.s_star == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(std::abs(soft.gap - 0.1547) <= 0.005);

    const SingleIntervalPolicy quasi = quasi_optimal_policy(2.5, kOutbreak, 2.0, 6.0);
    const UpperBoundCheck bound = upper_bound_check(quasi, kOutbreak);
    CHECK(bound.gap > 0.0);
    CHECK(bound.gap < 0.01);
}

TEST_CASE("every finite policy stays strictly below the threshold") {
    std::mt19937 rng(424242);
    std::uniform_real_distribution<double> rs_dist(0.5, 2.5);
    std::uniform_real_distribution<double> tau_s_dist(0.5, 3.5);
    std::uniform_real_distribution<double> span_dist(1.0, 60.0);

    const SingleIntervalPolicy quasi = quasi_optimal_policy(2.5, kOutbreak, 2.0, 6.0);
    const double quasi_s_inf = classify_scenario(quasi, kOutbreak).s_infinity;

    int violations = 0;
    for (int k = 0; k < 200; ++k) {
        const double tau_s = tau_s_dist(rng);
        SingleIntervalPolicy policy{tau_s, tau_s + span_dist(rng), rs_dist(rng), 2.5};
        const ScenarioReport report = classify_scenario(policy, kOutbreak);
        if (!(report.tail_s < report.s_star)) {
            ++violations;
        }
        CHECK(report.s_star - report.s_infinity > 0.0);
        CHECK(std::abs(report.s_infinity - report.tail_s) <= 1e-3);
        // interrupted transients land well short of the quasi-optimal outcome
        if (report.scenario == ScenarioClass::ShortTerm) {
            CHECK(report.s_infinity < quasi_s_inf);
        }
    }
    CHECK(violations == 0);
}

TEST_CASE("policy validation") {
    CHECK_THROWS_AS((SingleIntervalPolicy{2.0, 1.0, 1.5, 2.5}.validate_or_throw()), Error);
    CHECK_THROWS_AS((SingleIntervalPolicy{0.0, 10.0, 1.5, 2.5}.validate_or_throw()), Error);
    CHECK_THROWS_AS((SingleIntervalPolicy{2.0, 10.0, 2.6, 2.5}.validate_or_throw()), Error);
    CHECK_THROWS_AS((SingleIntervalPolicy{2.0, 10.0, 0.05, 2.5}.validate_or_throw()), Error);
    CHECK_NOTHROW((SingleIntervalPolicy{2.0, 10.0, 1.5, 2.5}.validate_or_throw()));
}
