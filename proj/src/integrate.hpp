#ifndef SIRW_INTEGRATE_HPP
#define SIRW_INTEGRATE_HPP

#include <optional>
#include <vector>

#include "sir_model.hpp"

namespace sirw {

struct IntegrationOptions {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    double max_step = 0.5;
    // Infected fraction regarded as "approximately zero" when deciding that a
    // quasi steady state has been reached.
    double i_qss_threshold = 1e-3;
    // Horizon cap for threshold-crossing searches (qss_time).
    double horizon_cap = 1e5;
};

struct PeakEvent {
    double tau = 0.0;
    double i = 0.0;
};

struct QssEvent {
    double tau = 0.0;
};

struct Sample {
    double tau = 0.0;
    EpiState x;
};

// Time-stamped solution of the SIR system under a reproduction schedule,
// with detected events. Samples are the accepted integrator steps; no step
// straddles a schedule breakpoint.
class Trajectory {
public:
    Trajectory() = default;
    Trajectory(ReproductionSchedule schedule, std::vector<Sample> samples);

    const std::vector<Sample>& samples() const { return samples_; }
    const ReproductionSchedule& schedule() const { return schedule_; }

    double final_tau() const;
    const EpiState& final_state() const;
    double r_at(double tau) const { return schedule_.r_at(tau); }

    // Cubic Hermite interpolation between the bracketing samples.
    EpiState state_at(double tau) const;

    // First local maximum of the infected fraction, all maxima, quasi-steady
    // flag, and maxima occurring after the flag.
    const std::optional<PeakEvent>& peak() const { return peak_; }
    const std::vector<PeakEvent>& peaks() const { return peaks_; }
    const std::optional<QssEvent>& qss() const { return qss_; }
    const std::vector<PeakEvent>& second_waves() const { return second_waves_; }

    void detect_events(double i_qss_threshold);

private:
    ReproductionSchedule schedule_;
    std::vector<Sample> samples_;
    std::optional<PeakEvent> peak_;
    std::vector<PeakEvent> peaks_;
    std::optional<QssEvent> qss_;
    std::vector<PeakEvent> second_waves_;
};

// Integrates the nondimensional SIR system from x0 over [0, tau_end] with an
// embedded Runge-Kutta 5(4) pair, restarting at every schedule breakpoint.
Trajectory integrate(const EpiState& x0, const ReproductionSchedule& schedule, double tau_end,
                     const IntegrationOptions& opts = {});

// First infected peak of a trajectory, or nullopt when the infected fraction
// is monotone non-increasing throughout.
std::optional<PeakEvent> peak_of_infected(const Trajectory& traj);

// Time to quasi steady state under constant r from x0: five peak times when a
// peak exists, otherwise the first time the infected fraction drops below
// opts.i_qss_threshold. Throws Errc::no_qss when the threshold is never
// crossed within opts.horizon_cap.
double qss_time(double r, const EpiState& x0, const IntegrationOptions& opts = {});

} // namespace sirw

#endif
