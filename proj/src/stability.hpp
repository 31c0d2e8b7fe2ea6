#ifndef SIRW_STABILITY_HPP
#define SIRW_STABILITY_HPP

#include <vector>

#include "integrate.hpp"
#include "sir_model.hpp"

namespace sirw {

// Equilibrium (s_bar, 0, 1 - s_bar).
struct EquilibriumPoint {
    double s_bar = 0.0;
};

enum class EquilibriumClass { Stable, Unstable };

// Stable iff s_bar <= S*(r); the complement (possible only for r > 1) is the
// unstable part of the equilibrium set.
EquilibriumClass equilibrium_class(const EquilibriumPoint& p, double r);

// V(x) = s - s_bar - s_bar ln(s / s_bar) + i. Positive definite around
// (s_bar, 0); rejects s = 0, where the logarithm is singular.
double lyapunov_v(const EpiState& x, double s_bar);

// dV/dtau along solutions: i (r s_bar - 1).
double lyapunov_vdot(const EpiState& x, double s_bar, double r);

struct LevelCurve {
    double level = 0.0;
    std::vector<std::pair<double, double>> points;  // (s, i)

    static constexpr double kCurveTol = 1e-8;
};

// Points on {(s, i) : S*(r) - S_inf(r, s, i) = level} inside the simplex,
// found per s-gridpoint by bisection in i. level = 0 degenerates to the
// single point (S*, 0); levels at or above S* are unattainable.
LevelCurve final_size_level_set(double r, double level, int n);

// Evenly spaced starting states on the s + i = 1 edge, endpoints excluded.
std::vector<EpiState> default_portrait_starts(int n);

// One trajectory per start under the given schedule.
std::vector<Trajectory> phase_portrait(const ReproductionSchedule& schedule,
                                       const std::vector<EpiState>& starts, double tau_end,
                                       const IntegrationOptions& opts = {});

// Max drift of S_inf(r, s, i) across the samples of a constant-r trajectory
// (optionally restricted to [tau_lo, tau_hi]); the exact flow conserves it.
double sinfinity_drift(const Trajectory& traj, double r);
double sinfinity_drift(const Trajectory& traj, double r, double tau_lo, double tau_hi);

} // namespace sirw

#endif
