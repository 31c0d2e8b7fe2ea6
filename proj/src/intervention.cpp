#include "intervention.hpp"

#include <cmath>
#include <sstream>

#include "errors.hpp"
#include "final_size.hpp"

namespace sirw {

void SingleIntervalPolicy::validate_or_throw(double r_min) const {
    if (!(tau_s > 0.0) || !(tau_f > tau_s) || !std::isfinite(tau_f)) {
        std::ostringstream msg;
        msg << "policy: need 0 < tau_s < tau_f < infinity (tau_s = " << tau_s
            << ", tau_f = " << tau_f << ")";
        throw Error(Errc::invalid_argument, msg.str());
    }
    if (!(r0 > 0.0)) {
        throw Error(Errc::invalid_argument, "policy: r0 must be positive");
    }
    if (!(r_s >= r_min) || !(r_s <= r0)) {
        std::ostringstream msg;
        msg << "policy: r_s = " << r_s << " outside [" << r_min << ", r0 = " << r0 << "]";
        throw Error(Errc::invalid_argument, msg.str());
    }
}

ReproductionSchedule SingleIntervalPolicy::schedule() const {
    return ReproductionSchedule::single_interval(r0, r_s, tau_s, tau_f);
}

const char* to_string(ScenarioClass c) {
    switch (c) {
        case ScenarioClass::QuasiOptimal: return "quasi_optimal";
        case ScenarioClass::SoftLongTerm: return "soft_long_term";
        case ScenarioClass::StrongLongTerm: return "strong_long_term";
        case ScenarioClass::ShortTerm: return "short_term";
    }
    return "unknown";
}

double goldilocks_r(double r0, const EpiState& x0, double tau_s, double tol,
                    const IntegrationOptions& opts) {
    if (!(r0 > 1.0)) {
        throw Error(Errc::invalid_argument, "goldilocks_r: r0 must exceed 1");
    }
    if (!(tau_s > 0.0)) {
        throw Error(Errc::invalid_argument, "goldilocks_r: tau_s must be positive");
    }
    if (!(tol > 0.0)) {
        throw Error(Errc::invalid_argument, "goldilocks_r: tol must be positive");
    }
    x0.validate_or_throw("goldilocks_r");

    const double s_star = herd_immunity_threshold(r0);
    const Trajectory baseline = integrate(x0, ReproductionSchedule::constant(r0), tau_s, opts);
    const EpiState at_start = baseline.final_state();
    if (!(at_start.s * r0 > 1.0)) {
        std::ostringstream msg;
        msg << "goldilocks_r: tau_s = " << tau_s
            << " is at or past the uncontrolled infected peak (s(tau_s) = " << at_start.s << ")";
        throw Error(Errc::invalid_argument, msg.str());
    }

    // g is strictly decreasing on (1, r0): releasing less contagion leaves
    // more susceptibles.
    auto g = [&](double r) { return final_size(r, at_start.s, at_start.i) - s_star; };

    double lo = 1.0 + 1e-6;
    double hi = r0;
    if (!(g(lo) > 0.0) || !(g(hi) < 0.0)) {
        throw Error(Errc::no_solution,
                    "goldilocks_r: no distancing level in (1, r0] reaches the threshold");
    }
    double mid = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (std::abs(gm) <= tol || hi - lo < 1e-13) {
            return mid;
        }
        (gm > 0.0 ? lo : hi) = mid;
    }
    throw Error(Errc::no_solution, "goldilocks_r: bisection did not converge");
}

SingleIntervalPolicy quasi_optimal_policy(double r0, const EpiState& x0, double tau_s,
                                          double qss_multiplier, const IntegrationOptions& opts) {
    if (!(qss_multiplier >= 5.0)) {
        throw Error(Errc::invalid_argument, "quasi_optimal_policy: multiplier must be >= 5");
    }
    const double r_g = goldilocks_r(r0, x0, tau_s, 1e-6, opts);

    // Peak of the switched run (r0 until tau_s, r_g afterwards), measured
    // from the outbreak.
    ReproductionSchedule sched;
    sched.add_segment(0.0, r0);
    sched.add_segment(tau_s, r_g);
    double horizon = tau_s + 100.0;
    const Trajectory traj = integrate(x0, sched, horizon, opts);
    if (!traj.peak()) {
        throw Error(Errc::numeric_error, "quasi_optimal_policy: no infected peak found");
    }
    const double tau_hat = traj.peak()->tau;
    return SingleIntervalPolicy{tau_s, tau_s + qss_multiplier * tau_hat, r_g, r0};
}

ScenarioReport classify_scenario(const SingleIntervalPolicy& policy, const EpiState& x0,
                                 const ClassifyOptions& opts) {
    policy.validate_or_throw();
    x0.validate_or_throw("classify_scenario");

    ScenarioReport report;
    report.s_star = herd_immunity_threshold(policy.r0);

    // A release near the goldilocks level converges at rate 1 - r0 S_inf,
    // which can be arbitrarily slow; grow the horizon until the tail has
    // settled onto the closed-form final size (and the renewed peak, when
    // one is owed, has shown up).
    double span = opts.post_release_horizon;
    for (;;) {
        const Trajectory traj =
            integrate(x0, policy.schedule(), policy.tau_f + span, opts.integration);
        const EpiState at_tf = traj.state_at(policy.tau_f);

        report.s_at_tf = at_tf.s;
        report.i_at_tf = at_tf.i;
        report.s_infinity = final_size(policy.r0, at_tf.s, at_tf.i);
        report.tail_s = traj.final_state().s;
        report.second_wave.reset();

        if (at_tf.i >= opts.integration.i_qss_threshold) {
            report.scenario = ScenarioClass::ShortTerm;
        } else if (std::abs(at_tf.s - report.s_star) <= opts.qss_band) {
            report.scenario = ScenarioClass::QuasiOptimal;
        } else if (at_tf.s < report.s_star) {
            report.scenario = ScenarioClass::SoftLongTerm;
        } else {
            report.scenario = ScenarioClass::StrongLongTerm;
            for (const PeakEvent& p : traj.peaks()) {
                if (p.tau > policy.tau_f) {
                    report.second_wave = SecondWave{p.tau, p.i};
                    break;
                }
            }
        }

        const bool settled = std::abs(report.tail_s - report.s_infinity) <= 1e-4;
        const bool wave_found =
            report.scenario != ScenarioClass::StrongLongTerm || report.second_wave.has_value();
        if (settled && wave_found) {
            return report;
        }
        if (span >= opts.integration.horizon_cap) {
            throw Error(Errc::numeric_error,
                        "classify_scenario: release phase did not settle within the horizon cap");
        }
        span = std::min(4.0 * span, opts.integration.horizon_cap);
    }
}

UpperBoundCheck upper_bound_check(const SingleIntervalPolicy& policy, const EpiState& x0,
                                  const ClassifyOptions& opts) {
    const ScenarioReport report = classify_scenario(policy, x0, opts);
    return UpperBoundCheck{report.s_infinity, report.s_star, report.s_star - report.s_infinity};
}

} // namespace sirw
