#include <doctest.h>

#include <cmath>
#include <random>

#include "errors.hpp"
#include "final_size.hpp"
#include "integrate.hpp"
#include "oracles.hpp"
#include "sir_model.hpp"

using namespace sirw;

TEST_CASE("herd immunity threshold") {
    CHECK(herd_immunity_threshold(2.5) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(herd_immunity_threshold(0.5) == 1.0);
    CHECK(herd_immunity_threshold(1.0) == 1.0);
    CHECK_THROWS_AS(herd_immunity_threshold(0.0), Error);
    CHECK_THROWS_AS(herd_immunity_threshold(-2.0), Error);
}

TEST_CASE("final size anchor values") {
    // i0 = 0 with s0 <= S* is a fixed point of the relation
    CHECK(final_size(2.5, 0.4, 0.0) == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(final_size(2.5, 0.0, 0.5) == 0.0);

    // outbreak query against the long-horizon reference integrator
    const auto tail = sirw::test::rk4_span({0.9950, 0.0050, 0.0}, 2.5, 0.0, 80.0);
    const double s_inf = final_size(2.5, 0.9950, 0.0050);
    CHECK(std::abs(s_inf - tail.s) <= 1e-4);
    CHECK(s_inf == doctest::Approx(0.1066231).epsilon(1e-4));
}

TEST_CASE("final size at the released soft-distancing state") {
    // state at the end of the soft window (r_s = 1.8 over [2, 21.6])
    const auto at_tf = sirw::test::rk4_schedule({0.9950, 0.0050, 0.0},
                                                {{0.0, 2.5}, {2.0, 1.8}}, 21.6);
    CHECK(std::abs(final_size(2.5, at_tf.s, at_tf.i) - 0.2453) <= 0.005);
}

TEST_CASE("query validation") {
    CHECK_THROWS_AS(final_size(0.0, 0.5, 0.1), Error);
    CHECK_THROWS_AS(final_size(2.5, -0.1, 0.1), Error);
    CHECK_THROWS_AS(final_size(2.5, 0.7, 0.5), Error);  // s0 + i0 > 1
    CHECK_THROWS_AS(final_size(2.5, 1.2, 0.0), Error);
}

TEST_CASE("upper bound and fixed-point residual on random queries") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> r_dist(0.05, 6.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 10000; ++k) {
        const double r = r_dist(rng);
        const double s0 = u(rng);
        const double i0 = u(rng) * (1.0 - s0);
        const double s_inf = final_size(r, s0, i0);
        CHECK(s_inf <= herd_immunity_threshold(r) + 1e-12);
        CHECK(s_inf >= 0.0);
        // transcendental relation s0 e^{-r(s0+i0)} = S_inf e^{-r S_inf}
        const double residual =
            std::abs(s0 * std::exp(-r * (s0 + i0)) - s_inf * std::exp(-r * s_inf));
        CHECK(residual <= 1e-10);
    }
}

TEST_CASE("monotonicity in the initial conditions") {
    constexpr double h = 1e-3;
    SUBCASE("decreasing in s0 above the threshold") {
        for (const double r : {1.5, 2.5}) {
            for (const double i0 : {0.01, 0.05}) {
                const double s_star = herd_immunity_threshold(r);
                double prev = final_size(r, s_star + h, i0);
                for (double s0 = s_star + 2 * h; s0 <= 1.0 - i0; s0 += h) {
                    const double cur = final_size(r, s0, i0);
                    CHECK(cur < prev);
                    prev = cur;
                }
            }
        }
    }
    SUBCASE("increasing in s0 below the threshold") {
        for (const double r : {1.5, 2.5}) {
            for (const double i0 : {0.01, 0.05}) {
                const double s_star = herd_immunity_threshold(r);
                double prev = final_size(r, h, i0);
                for (double s0 = 2 * h; s0 < s_star; s0 += h) {
                    const double cur = final_size(r, s0, i0);
                    CHECK(cur > prev);
                    prev = cur;
                }
            }
        }
    }
    SUBCASE("decreasing in i0") {
        for (const double s0 : {0.3, 0.7, 0.95}) {
            double prev = final_size(2.5, s0, 0.0);
            for (double i0 = h; i0 <= 1.0 - s0; i0 += h) {
                const double cur = final_size(2.5, s0, i0);
                CHECK(cur < prev);
                prev = cur;
            }
        }
    }
}

TEST_CASE("limits in r") {
    // large r wipes out the susceptibles
    CHECK(final_size(50.0, 0.9, 0.05) < 0.03);
    // vanishing r leaves them untouched
    const double s0 = 0.9;
    CHECK(std::abs(final_size(0.01, s0, 0.05) - s0) < 0.01 * s0 + 1e-3);
}

TEST_CASE("released equilibrium above the threshold maps to the paired root") {
    // the formula returns the post-outbreak root, not s0 itself
    const double paired = final_size(2.5, 0.9, 0.0);
    CHECK(paired < 0.4);
    const double residual =
        std::abs(0.9 * std::exp(-2.5 * 0.9) - paired * std::exp(-2.5 * paired));
    CHECK(residual <= 1e-12);
}

TEST_CASE("constrained optimum") {
    SUBCASE("delta = 0 attains the herd immunity threshold") {
        const FinalSizeOptimum opt = final_size_optimum(2.5, 0.0);
        CHECK(opt.s_op == doctest::Approx(0.4).epsilon(1e-15));
        CHECK(opt.i_op == 0.0);
        CHECK(opt.s_inf_op == doctest::Approx(0.4).epsilon(1e-12));
    }
    SUBCASE("subcritical branch reaches 1") {
        const FinalSizeOptimum opt = final_size_optimum(0.8, 0.0);
        CHECK(opt.s_op == 1.0);
        CHECK(opt.s_inf_op == doctest::Approx(1.0).epsilon(1e-9));
    }
    SUBCASE("positive delta: grid argmax lands on (S*, delta)") {
        const FinalSizeOptimum opt = final_size_optimum(2.5, 0.05);
        CHECK(opt.s_op == doctest::Approx(0.4).epsilon(1e-15));
        CHECK(opt.i_op == doctest::Approx(0.05).epsilon(1e-15));
        CHECK(opt.s_inf_op < 0.4);

        const int n = 400;
        double best = -1.0, best_s = 0.0, best_i = 0.0;
        for (int a = 0; a <= n; ++a) {
            const double s = static_cast<double>(a) / n;
            for (int b = 0; b <= n; ++b) {
                const double i = 0.05 + (1.0 - 0.05) * static_cast<double>(b) / n;
                if (s + i > 1.0) {
                    break;
                }
                const double v = final_size(2.5, s, i);
                if (v > best) {
                    best = v;
                    best_s = s;
                    best_i = i;
                }
            }
        }
        const double cell = 1.0 / n;
        CHECK(std::abs(best_s - opt.s_op) <= cell + 1e-12);
        CHECK(std::abs(best_i - opt.i_op) <= cell + 1e-12);
        CHECK(best <= opt.s_inf_op + 1e-12);
    }
    SUBCASE("argument validation") {
        CHECK_THROWS_AS(final_size_optimum(-1.0, 0.0), Error);
        CHECK_THROWS_AS(final_size_optimum(2.5, 1.5), Error);
    }
}

TEST_CASE("closed form matches long-horizon integration (spot checks)") {
    for (const double r : {1.6, 2.5}) {
        for (const double s0 : {0.65, 0.95}) {
            const double i0 = 0.05;
            const EpiState x0{s0, i0, 1.0 - s0 - i0};
            const Trajectory traj = integrate(x0, ReproductionSchedule::constant(r), 80.0);
            CHECK(std::abs(final_size(r, s0, i0) - traj.final_state().s) <= 1e-4);
        }
    }
}
