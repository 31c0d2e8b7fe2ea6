#include "integrate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace sirw {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

using Vec3 = std::array<double, 3>;

Vec3 rhs(const Vec3& y, double r) {
    const double flow = r * y[0] * y[1];
    return Vec3{-flow, flow - y[1], y[1]};
}

Vec3 axpy(const Vec3& y, double h, const Vec3& k) {
    return Vec3{y[0] + h * k[0], y[1] + h * k[1], y[2] + h * k[2]};
}

EpiState clamp01(const Vec3& y) {
    auto clip = [](double v) { return std::min(1.0, std::max(0.0, v)); };
    return EpiState{clip(y[0]), clip(y[1]), clip(y[2])};
}

double initial_step(const Vec3& y, const Vec3& f, double span, const IntegrationOptions& opts) {
    double dny = 0.0, dnf = 0.0;
    for (int d = 0; d < 3; ++d) {
        const double sk = opts.abs_tol + opts.rel_tol * std::abs(y[d]);
        dnf += (f[d] / sk) * (f[d] / sk);
        dny += (y[d] / sk) * (y[d] / sk);
    }
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
    return std::min({h, span, opts.max_step});
}

// Integrates one constant-r span [tau0, tau1], appending accepted samples
// (excluding the one at tau0, which the caller already recorded).
void integrate_segment(Vec3& y, double tau0, double tau1, double r,
                       const IntegrationOptions& opts, std::vector<Sample>& out) {
    constexpr double safety = 0.9, fac_min = 0.2, fac_max = 10.0;

    double tau = tau0;
    Vec3 k1 = rhs(y, r);
    double h = initial_step(y, k1, tau1 - tau0, opts);
    bool rejected = false;

    while (tau < tau1) {
        h = std::min(h, opts.max_step);
        bool last = false;
        if (tau + 1.01 * h >= tau1) {
            h = tau1 - tau;
            last = true;
        }
        if (!(h > std::abs(tau) * 1e-14 + 1e-300)) {
            std::ostringstream msg;
            msg << "integrate: step size underflow at tau = " << tau;
            throw Error(Errc::step_failure, msg.str());
        }

        const Vec3 k2 = rhs(axpy(y, h * a21, k1), r);
        Vec3 t = y;
        t = axpy(t, h * a31, k1);
        t = axpy(t, h * a32, k2);
        const Vec3 k3 = rhs(t, r);
        t = axpy(axpy(axpy(y, h * a41, k1), h * a42, k2), h * a43, k3);
        const Vec3 k4 = rhs(t, r);
        t = axpy(axpy(axpy(axpy(y, h * a51, k1), h * a52, k2), h * a53, k3), h * a54, k4);
        const Vec3 k5 = rhs(t, r);
        t = axpy(axpy(axpy(axpy(axpy(y, h * a61, k1), h * a62, k2), h * a63, k3), h * a64, k4),
                 h * a65, k5);
        const Vec3 k6 = rhs(t, r);
        Vec3 y1 = axpy(axpy(axpy(axpy(axpy(y, h * a71, k1), h * a73, k3), h * a74, k4),
                            h * a75, k5),
                       h * a76, k6);
        const Vec3 k7 = rhs(y1, r);

        double err = 0.0;
        for (int d = 0; d < 3; ++d) {
            const double ed = h * (e1 * k1[d] + e3 * k3[d] + e4 * k4[d] + e5 * k5[d] +
                                   e6 * k6[d] + e7 * k7[d]);
            const double sk = opts.abs_tol + opts.rel_tol * std::max(std::abs(y[d]), std::abs(y1[d]));
            err += (ed / sk) * (ed / sk);
        }
        err = std::sqrt(err / 3.0);

        if (err <= 1.0) {
            tau = last ? tau1 : tau + h;
            y = y1;
            k1 = k7; // first-same-as-last
            out.push_back(Sample{tau, clamp01(y)});
            double fac = safety * std::pow(std::max(err, 1e-10), -0.2);
            fac = std::min(rejected ? 1.0 : fac_max, std::max(fac_min, fac));
            h *= fac;
            rejected = false;
        } else {
            const double fac = std::max(fac_min, safety * std::pow(err, -0.2));
            h *= fac;
            rejected = true;
        }
    }
}

// Vertex of the parabola through three points; falls back to the middle
// point when the data is degenerate.
PeakEvent quadratic_peak(double t0, double y0, double t1, double y1, double t2, double y2) {
    const double d01 = t1 - t0;
    const double d12 = t1 - t2;
    const double num = d01 * d01 * (y1 - y2) - d12 * d12 * (y1 - y0);
    const double den = d01 * (y1 - y2) - d12 * (y1 - y0);
    if (std::abs(den) < 1e-300) {
        return PeakEvent{t1, y1};
    }
    double tv = t1 - 0.5 * num / den;
    tv = std::min(std::max(tv, std::min(t0, t2)), std::max(t0, t2));
    // Lagrange evaluation at the vertex.
    const double l0 = (tv - t1) * (tv - t2) / ((t0 - t1) * (t0 - t2));
    const double l1 = (tv - t0) * (tv - t2) / ((t1 - t0) * (t1 - t2));
    const double l2 = (tv - t0) * (tv - t1) / ((t2 - t0) * (t2 - t1));
    return PeakEvent{tv, y0 * l0 + y1 * l1 + y2 * l2};
}

} // namespace

Trajectory::Trajectory(ReproductionSchedule schedule, std::vector<Sample> samples)
    : schedule_(std::move(schedule)), samples_(std::move(samples)) {}

double Trajectory::final_tau() const {
    if (samples_.empty()) {
        throw Error(Errc::invalid_argument, "trajectory: empty");
    }
    return samples_.back().tau;
}

const EpiState& Trajectory::final_state() const {
    if (samples_.empty()) {
        throw Error(Errc::invalid_argument, "trajectory: empty");
    }
    return samples_.back().x;
}

EpiState Trajectory::state_at(double tau) const {
    if (samples_.empty()) {
        throw Error(Errc::invalid_argument, "trajectory: empty");
    }
    if (tau <= samples_.front().tau) {
        return samples_.front().x;
    }
    if (tau >= samples_.back().tau) {
        return samples_.back().x;
    }
    auto it = std::lower_bound(samples_.begin(), samples_.end(), tau,
                               [](const Sample& s, double t) { return s.tau < t; });
    const Sample& hi = *it;
    const Sample& lo = *(it - 1);
    if (hi.tau == tau) {
        return hi.x;
    }

    // r is constant across each inter-sample interval by construction.
    const double r = schedule_.r_at(0.5 * (lo.tau + hi.tau));
    const Derivatives f0 = derivatives(lo.x, r);
    const Derivatives f1 = derivatives(hi.x, r);
    const double h = hi.tau - lo.tau;
    const double u = (tau - lo.tau) / h;
    const double h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
    const double h10 = u * (1.0 - u) * (1.0 - u);
    const double h01 = u * u * (3.0 - 2.0 * u);
    const double h11 = u * u * (u - 1.0);
    auto hermite = [&](double y0, double d0, double y1, double d1) {
        return h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1;
    };
    return EpiState{hermite(lo.x.s, f0.ds, hi.x.s, f1.ds),
                    hermite(lo.x.i, f0.di, hi.x.i, f1.di),
                    hermite(lo.x.c, f0.dc, hi.x.c, f1.dc)};
}

void Trajectory::detect_events(double i_qss_threshold) {
    peak_.reset();
    peaks_.clear();
    qss_.reset();
    second_waves_.clear();
    if (samples_.size() < 2) {
        if (!samples_.empty() && samples_.front().x.i < i_qss_threshold) {
            qss_ = QssEvent{samples_.front().tau};
        }
        return;
    }

    const std::size_t n = samples_.size();
    // di at the left/right end of each inter-sample interval, using that
    // interval's reproduction number.
    std::vector<double> di_left(n - 1), di_right(n - 1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        const double r = schedule_.r_at(0.5 * (samples_[k].tau + samples_[k + 1].tau));
        di_left[k] = derivatives(samples_[k].x, r).di;
        di_right[k] = derivatives(samples_[k + 1].x, r).di;
    }

    for (std::size_t k = 0; k + 1 < n; ++k) {
        // Sign flip at the shared sample of two intervals: a schedule
        // breakpoint can turn a rising i into a falling one instantly.
        if (k > 0 && di_right[k - 1] > 0.0 && di_left[k] <= 0.0) {
            peaks_.push_back(PeakEvent{samples_[k].tau, samples_[k].x.i});
        }
        // Sign flip inside the interval: refine with a parabola through the
        // three samples around the higher endpoint.
        if (di_left[k] > 0.0 && di_right[k] <= 0.0) {
            std::size_t mid = (samples_[k].x.i >= samples_[k + 1].x.i) ? k : k + 1;
            if (mid == 0) {
                mid = 1;
            }
            if (mid + 1 >= n) {
                mid = n - 2;
            }
            peaks_.push_back(quadratic_peak(samples_[mid - 1].tau, samples_[mid - 1].x.i,
                                            samples_[mid].tau, samples_[mid].x.i,
                                            samples_[mid + 1].tau, samples_[mid + 1].x.i));
        }
    }
    if (!peaks_.empty()) {
        peak_ = peaks_.front();
    }

    for (const Sample& s : samples_) {
        if (s.x.i < i_qss_threshold) {
            qss_ = QssEvent{s.tau};
            break;
        }
    }
    if (qss_) {
        for (const PeakEvent& p : peaks_) {
            if (p.tau > qss_->tau) {
                second_waves_.push_back(p);
            }
        }
    }
}

Trajectory integrate(const EpiState& x0, const ReproductionSchedule& schedule, double tau_end,
                     const IntegrationOptions& opts) {
    x0.validate_or_throw("integrate");
    if (schedule.empty()) {
        throw Error(Errc::invalid_argument, "integrate: schedule is empty");
    }
    if (!(tau_end > 0.0) || !std::isfinite(tau_end)) {
        throw Error(Errc::invalid_argument, "integrate: horizon must be positive and finite");
    }
    if (!(opts.rel_tol > 0.0) || !(opts.abs_tol > 0.0) || !(opts.max_step > 0.0)) {
        throw Error(Errc::invalid_argument, "integrate: tolerances and max_step must be positive");
    }

    std::vector<Sample> samples;
    samples.push_back(Sample{0.0, x0});

    Vec3 y{x0.s, x0.i, x0.c};
    const auto& segs = schedule.segments();
    for (std::size_t j = 0; j < segs.size(); ++j) {
        const double seg_start = segs[j].tau_start;
        const double seg_end = (j + 1 < segs.size()) ? segs[j + 1].tau_start : tau_end;
        if (seg_start >= tau_end) {
            break;
        }
        const double stop = std::min(seg_end, tau_end);
        if (stop > seg_start) {
            integrate_segment(y, seg_start, stop, segs[j].r, opts, samples);
        }
    }

    Trajectory traj(schedule, std::move(samples));
    traj.detect_events(opts.i_qss_threshold);
    return traj;
}

std::optional<PeakEvent> peak_of_infected(const Trajectory& traj) {
    if (traj.samples().empty()) {
        throw Error(Errc::invalid_argument, "peak_of_infected: empty trajectory");
    }
    return traj.peak();
}

double qss_time(double r, const EpiState& x0, const IntegrationOptions& opts) {
    if (!(r > 0.0)) {
        throw Error(Errc::invalid_argument, "qss_time: reproduction number must be positive");
    }
    x0.validate_or_throw("qss_time");
    if (x0.i < opts.i_qss_threshold) {
        return 0.0;
    }

    const ReproductionSchedule sched = ReproductionSchedule::constant(r);
    double horizon = 100.0;
    while (horizon <= opts.horizon_cap) {
        const Trajectory traj = integrate(x0, sched, horizon, opts);
        if (x0.s * r > 1.0) {
            if (traj.peak()) {
                return 5.0 * traj.peak()->tau;
            }
        } else if (traj.qss()) {
            return traj.qss()->tau;
        }
        horizon *= 4.0;
    }
    throw Error(Errc::no_qss, "qss_time: no quasi steady state within horizon cap");
}

} // namespace sirw
