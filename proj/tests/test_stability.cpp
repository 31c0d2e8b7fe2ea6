#include <doctest.h>

#include <cmath>

#include "errors.hpp"
#include "final_size.hpp"
#include "stability.hpp"

using namespace sirw;

TEST_CASE("equilibrium classification") {
    CHECK(equilibrium_class(EquilibriumPoint{0.4}, 2.5) == EquilibriumClass::Stable);
    CHECK(equilibrium_class(EquilibriumPoint{0.9}, 2.5) == EquilibriumClass::Unstable);
    CHECK(equilibrium_class(EquilibriumPoint{1.0}, 0.8) == EquilibriumClass::Stable);
    CHECK(equilibrium_class(EquilibriumPoint{0.39}, 2.5) == EquilibriumClass::Stable);
    CHECK_THROWS_AS(equilibrium_class(EquilibriumPoint{1.1}, 2.5), Error);
}

TEST_CASE("lyapunov function") {
    // zero exactly at the anchor equilibrium
    for (const double s_bar : {0.1, 0.4, 1.0}) {
        CHECK(lyapunov_v(EpiState{s_bar, 0.0, 1.0 - s_bar}, s_bar) == 0.0);
    }
    CHECK(lyapunov_v(EpiState{0.5, 0.1, 0.4}, 0.4) == doctest::Approx(0.11074).epsilon(1e-4));
    CHECK(lyapunov_v(EpiState{0.2, 0.0, 0.8}, 0.4) == doctest::Approx(0.07726).epsilon(1e-4));
    CHECK(lyapunov_v(EpiState{0.3, 0.2, 0.5}, 0.4) > 0.0);
    CHECK_THROWS_AS(lyapunov_v(EpiState{0.0, 0.5, 0.5}, 0.4), Error);
}

TEST_CASE("lyapunov derivative sign trichotomy") {
    CHECK(lyapunov_vdot(EpiState{0.5, 0.0, 0.5}, 0.7, 2.5) == 0.0);
    CHECK(lyapunov_vdot(EpiState{0.5, 0.1, 0.4}, 0.4, 2.5) == doctest::Approx(0.0).scale(1));
    CHECK(lyapunov_vdot(EpiState{0.5, 0.1, 0.4}, 0.3, 2.5) ==
          doctest::Approx(-0.025).epsilon(1e-12));
    for (const double r : {0.8, 1.5, 2.5}) {
        const double s_star = herd_immunity_threshold(r);
        for (double s_bar = 0.05; s_bar <= 1.0; s_bar += 0.05) {
            const double vdot = lyapunov_vdot(EpiState{0.6, 0.2, 0.2}, s_bar, r);
            if (s_bar < s_star - 1e-9) {
                CHECK(vdot < 0.0);
            } else if (s_bar > s_star + 1e-9) {
                CHECK(vdot > 0.0);
            }
        }
    }
}

TEST_CASE("lyapunov value decays along trajectories anchored at or below the threshold") {
    const Trajectory traj = integrate(outbreak_state(0.005),
                                      ReproductionSchedule::constant(2.5), 40.0);
    // anchored at S* the value is conserved, below it decays; both non-increasing
    for (const double s_bar : {0.3, 0.4}) {
        double prev = lyapunov_v(traj.samples().front().x, s_bar);
        for (const Sample& s : traj.samples()) {
            const double v = lyapunov_v(s.x, s_bar);
            CHECK(v <= prev + 1e-9);
            prev = v;
        }
    }
}

TEST_CASE("final-size level sets") {
    SUBCASE("level 0 degenerates to the threshold point") {
        const LevelCurve curve = final_size_level_set(2.5, 0.0, 100);
        REQUIRE(curve.points.size() == 1);
        CHECK(curve.points[0].first == doctest::Approx(0.4).epsilon(1e-15));
        CHECK(curve.points[0].second == 0.0);
    }
    SUBCASE("level 0.1 closes around (S*, 0)") {
        const LevelCurve curve = final_size_level_set(2.5, 0.1, 80);
        REQUIRE(curve.points.size() == 80);
        double min_s = 1.0, max_s = 0.0;
        for (const auto& [s, i] : curve.points) {
            CHECK(std::abs(final_size(2.5, s, i) - 0.3) <= LevelCurve::kCurveTol);
            CHECK(i >= 0.0);
            CHECK(s + i <= 1.0 + 1e-12);
            min_s = std::min(min_s, s);
            max_s = std::max(max_s, s);
        }
        CHECK(min_s < 0.4);
        CHECK(max_s > 0.4);
    }
    SUBCASE("unattainable levels raise empty_curve") {
        try {
            final_size_level_set(2.5, 0.4, 10);
            FAIL("expected empty_curve");
        } catch (const Error& e) {
            CHECK(e.code() == Errc::empty_curve);
        }
        CHECK_THROWS_AS(final_size_level_set(2.5, 1.0, 10), Error);
    }
    SUBCASE("subcritical r") {
        const LevelCurve curve = final_size_level_set(0.8, 0.2, 40);
        for (const auto& [s, i] : curve.points) {
            CHECK(std::abs(final_size(0.8, s, i) - 0.8) <= LevelCurve::kCurveTol);
        }
    }
}

TEST_CASE("phase portrait converges to the stable equilibrium set") {
    const auto starts = default_portrait_starts(12);
    REQUIRE(starts.size() == 12);
    for (const EpiState& x0 : starts) {
        CHECK(x0.i > 0.0);
        CHECK(x0.s > 0.0);
        CHECK(std::abs(x0.s + x0.i - 1.0) <= 1e-12);
    }
    const auto trajs = phase_portrait(ReproductionSchedule::constant(2.5), starts, 40.0);
    REQUIRE(trajs.size() == starts.size());
    for (const Trajectory& traj : trajs) {
        const EpiState end = traj.final_state();
        const double dist = std::hypot(std::max(0.0, end.s - 0.4), end.i);
        CHECK(dist <= 1e-3);
    }
}

TEST_CASE("phase portrait special starts") {
    // equilibrium start stays put
    const auto fixed = phase_portrait(ReproductionSchedule::constant(2.5),
                                      {EpiState{0.4, 0.0, 0.6}}, 10.0);
    CHECK(fixed[0].final_state().s == doctest::Approx(0.4).epsilon(1e-12));

    // interior start lands on its closed-form final size
    const auto run = phase_portrait(ReproductionSchedule::constant(2.5),
                                    {EpiState{0.9, 0.1, 0.0}}, 60.0);
    CHECK(std::abs(run[0].final_state().s - final_size(2.5, 0.9, 0.1)) <= 1e-4);
}

TEST_CASE("an arbitrarily small infection destabilizes rest states above the threshold") {
    const EpiState x0{0.9, 1e-6, 0.1 - 1e-6};
    const Trajectory traj = integrate(x0, ReproductionSchedule::constant(2.5), 80.0);
    CHECK(traj.final_state().s < 0.4 - 0.1);
}

TEST_CASE("final size is conserved along the flow") {
    const Trajectory baseline = integrate(outbreak_state(0.005),
                                          ReproductionSchedule::constant(2.5), 40.0);
    CHECK(sinfinity_drift(baseline, 2.5) <= 1e-6);

    const Trajectory rest = integrate(EpiState{0.4, 0.0, 0.6},
                                      ReproductionSchedule::constant(2.5), 10.0);
    CHECK(sinfinity_drift(rest, 2.5) == 0.0);

    // piecewise schedule: conserved segment by segment
    const auto sched = ReproductionSchedule::single_interval(2.5, 1.4157, 2.0, 21.6);
    const Trajectory policy_run = integrate(outbreak_state(0.005), sched, 60.0);
    CHECK(sinfinity_drift(policy_run, 2.5, 0.0, 2.0) <= 1e-6);
    CHECK(sinfinity_drift(policy_run, 1.4157, 2.0, 21.6) <= 1e-6);
    CHECK(sinfinity_drift(policy_run, 2.5, 21.6, 60.0) <= 1e-6);
}

TEST_CASE("level-set membership is invariant under the flow") {
    // start on the 0.1 level set of S* - S_inf and verify the value is held
    const LevelCurve curve = final_size_level_set(2.5, 0.1, 20);
    const auto& [s0, i0] = curve.points[curve.points.size() / 2];
    const EpiState x0{s0, i0, 1.0 - s0 - i0};
    const Trajectory traj = integrate(x0, ReproductionSchedule::constant(2.5), 30.0);
    for (const Sample& s : traj.samples()) {
        CHECK(std::abs((0.4 - final_size(2.5, s.x.s, s.x.i)) - 0.1) <= 1e-6 + 1e-8);
    }
}
