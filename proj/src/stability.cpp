#include "stability.hpp"

#include <cmath>
#include <sstream>

#include "errors.hpp"
#include "final_size.hpp"

namespace sirw {

EquilibriumClass equilibrium_class(const EquilibriumPoint& p, double r) {
    if (!(p.s_bar >= 0.0 && p.s_bar <= 1.0)) {
        throw Error(Errc::invalid_argument, "equilibrium_class: s_bar must be in [0, 1]");
    }
    const double s_star = herd_immunity_threshold(r);
    return p.s_bar <= s_star ? EquilibriumClass::Stable : EquilibriumClass::Unstable;
}

double lyapunov_v(const EpiState& x, double s_bar) {
    if (!(s_bar > 0.0 && s_bar <= 1.0)) {
        throw Error(Errc::invalid_argument, "lyapunov_v: s_bar must be in (0, 1]");
    }
    if (!(x.s > 0.0)) {
        throw Error(Errc::domain_error, "lyapunov_v: singular at s = 0");
    }
    return x.s - s_bar - s_bar * std::log(x.s / s_bar) + x.i;
}

double lyapunov_vdot(const EpiState& x, double s_bar, double r) {
    if (!(r > 0.0)) {
        throw Error(Errc::invalid_argument, "lyapunov_vdot: r must be positive");
    }
    return x.i * (r * s_bar - 1.0);
}

namespace {

// Largest s for which the target final size is still attainable inside the
// simplex. Two candidate boundaries: the i = 0 edge (post-outbreak root
// crossing, r > 1 only) and the s + i = 1 edge.
double upper_s_limit(double r, double target) {
    const double s_star = herd_immunity_threshold(r);

    double limit = 1.0;
    if (r > 1.0 && final_size(r, 1.0, 0.0) < target) {
        double lo = s_star, hi = 1.0;
        for (int k = 0; k < 100; ++k) {
            const double m = 0.5 * (lo + hi);
            (final_size(r, m, 0.0) >= target ? lo : hi) = m;
        }
        limit = std::min(limit, lo);
    }
    if (final_size(r, 1.0, 0.0) >= target) {
        // The curve may exit through the s + i = 1 edge instead.
        auto edge = [&](double s) { return final_size(r, s, 1.0 - s); };
        if (edge(1.0) > target) {
            double lo = target, hi = 1.0;
            for (int k = 0; k < 100; ++k) {
                const double m = 0.5 * (lo + hi);
                (edge(m) <= target ? lo : hi) = m;
            }
            limit = std::min(limit, lo);
        }
    }
    return limit;
}

} // namespace

LevelCurve final_size_level_set(double r, double level, int n) {
    const double s_star = herd_immunity_threshold(r);
    if (n < 2) {
        throw Error(Errc::invalid_argument, "final_size_level_set: need n >= 2");
    }
    if (!(level >= 0.0) || level >= s_star) {
        std::ostringstream msg;
        msg << "final_size_level_set: level " << level << " is not attained in [0, S* = "
            << s_star << ")";
        throw Error(Errc::empty_curve, msg.str());
    }

    LevelCurve curve;
    curve.level = level;
    if (level == 0.0) {
        curve.points.emplace_back(s_star, 0.0);
        return curve;
    }

    const double target = s_star - level;
    const double s_lo = target;  // (target, 0) lies on the curve
    const double s_hi = upper_s_limit(r, target);

    for (int k = 0; k < n; ++k) {
        const double s = s_lo + (s_hi - s_lo) * static_cast<double>(k) / (n - 1);
        auto g = [&](double i) { return final_size(r, s, i) - target; };
        double lo = 0.0, hi = 1.0 - s;
        if (g(lo) < 0.0) {
            // Rounding pushed the root below i = 0 at the arc ends.
            curve.points.emplace_back(s, 0.0);
            continue;
        }
        if (g(hi) > 0.0) {
            curve.points.emplace_back(s, hi);
            continue;
        }
        for (int it = 0; it < 100; ++it) {
            const double m = 0.5 * (lo + hi);
            (g(m) >= 0.0 ? lo : hi) = m;
        }
        curve.points.emplace_back(s, 0.5 * (lo + hi));
    }
    return curve;
}

std::vector<EpiState> default_portrait_starts(int n) {
    if (n < 1) {
        throw Error(Errc::invalid_argument, "default_portrait_starts: need n >= 1");
    }
    std::vector<EpiState> starts;
    starts.reserve(n);
    for (int k = 1; k <= n; ++k) {
        const double s = static_cast<double>(k) / (n + 1);
        starts.push_back(EpiState{s, 1.0 - s, 0.0});
    }
    return starts;
}

std::vector<Trajectory> phase_portrait(const ReproductionSchedule& schedule,
                                       const std::vector<EpiState>& starts, double tau_end,
                                       const IntegrationOptions& opts) {
    std::vector<Trajectory> portraits;
    portraits.reserve(starts.size());
    for (const EpiState& x0 : starts) {
        portraits.push_back(integrate(x0, schedule, tau_end, opts));
    }
    return portraits;
}

double sinfinity_drift(const Trajectory& traj, double r) {
    if (traj.samples().empty()) {
        throw Error(Errc::invalid_argument, "sinfinity_drift: empty trajectory");
    }
    return sinfinity_drift(traj, r, traj.samples().front().tau, traj.samples().back().tau);
}

double sinfinity_drift(const Trajectory& traj, double r, double tau_lo, double tau_hi) {
    double reference = 0.0;
    bool have_reference = false;
    double drift = 0.0;
    for (const Sample& s : traj.samples()) {
        if (s.tau < tau_lo || s.tau > tau_hi) {
            continue;
        }
        const double value = final_size(r, s.x.s, s.x.i);
        if (!have_reference) {
            reference = value;
            have_reference = true;
        } else {
            drift = std::max(drift, std::abs(value - reference));
        }
    }
    if (!have_reference) {
        throw Error(Errc::invalid_argument, "sinfinity_drift: no samples in range");
    }
    return drift;
}

} // namespace sirw
