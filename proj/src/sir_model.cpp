#include "sir_model.hpp"

#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace sirw {

bool EpiState::valid() const {
    const double lo = -1e-12;
    const double hi = 1.0 + 1e-12;
    if (!(s >= lo && s <= hi) || !(i >= lo && i <= hi) || !(c >= lo && c <= hi)) {
        return false;
    }
    return std::abs(s + i + c - 1.0) <= kConservationTol;
}

void EpiState::validate_or_throw(const char* where) const {
    if (!valid()) {
        std::ostringstream msg;
        msg << where << ": state (" << s << ", " << i << ", " << c
            << ") is not on the unit simplex";
        throw Error(Errc::invalid_argument, msg.str());
    }
}

EpiState outbreak_state(double epsilon) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
        throw Error(Errc::invalid_argument, "outbreak_state: epsilon must be in [0, 1]");
    }
    return EpiState{1.0 - epsilon, epsilon, 0.0};
}

Derivatives derivatives(const EpiState& x, double r) {
    const double flow = r * x.s * x.i;
    return Derivatives{-flow, flow - x.i, x.i};
}

NondimensionalPoint nondimensionalize(const DimensionalParams& p, double t) {
    if (!(p.beta > 0.0) || !(p.gamma > 0.0)) {
        throw Error(Errc::invalid_argument, "nondimensionalize: beta and gamma must be positive");
    }
    if (t < 0.0) {
        throw Error(Errc::invalid_argument, "nondimensionalize: time must be nonnegative");
    }
    return NondimensionalPoint{p.beta / p.gamma, t * p.gamma};
}

ReproductionSchedule ReproductionSchedule::constant(double r) {
    ReproductionSchedule s;
    s.add_segment(0.0, r);
    return s;
}

ReproductionSchedule ReproductionSchedule::single_interval(double r0, double r_s, double tau_s,
                                                           double tau_f) {
    if (!(tau_s > 0.0) || !(tau_f > tau_s) || !std::isfinite(tau_f)) {
        throw Error(Errc::invalid_argument,
                    "single_interval: need 0 < tau_s < tau_f < infinity");
    }
    ReproductionSchedule s;
    s.add_segment(0.0, r0);
    s.add_segment(tau_s, r_s);
    s.add_segment(tau_f, r0);
    return s;
}

ReproductionSchedule::ReproductionSchedule(std::vector<Segment> segments)
    : segments_(std::move(segments)) {
    validate();
}

void ReproductionSchedule::add_segment(double tau_start, double r) {
    if (!(r > 0.0) || !std::isfinite(r)) {
        throw Error(Errc::invalid_argument, "schedule: reproduction number must be positive");
    }
    if (segments_.empty()) {
        if (tau_start != 0.0) {
            throw Error(Errc::invalid_argument, "schedule: first segment must start at tau = 0");
        }
    } else if (!(tau_start > segments_.back().tau_start)) {
        throw Error(Errc::invalid_argument, "schedule: segment starts must strictly increase");
    }
    segments_.push_back(Segment{tau_start, r});
}

void ReproductionSchedule::validate() const {
    if (segments_.empty()) {
        return;
    }
    if (segments_.front().tau_start != 0.0) {
        throw Error(Errc::invalid_argument, "schedule: first segment must start at tau = 0");
    }
    double prev = -1.0;
    for (const Segment& seg : segments_) {
        if (!(seg.r > 0.0) || !std::isfinite(seg.r)) {
            throw Error(Errc::invalid_argument, "schedule: reproduction number must be positive");
        }
        if (!(seg.tau_start > prev)) {
            throw Error(Errc::invalid_argument, "schedule: segment starts must strictly increase");
        }
        prev = seg.tau_start;
    }
}

double ReproductionSchedule::r_at(double tau) const {
    if (segments_.empty()) {
        throw Error(Errc::invalid_argument, "schedule: empty");
    }
    double r = segments_.front().r;
    for (const Segment& seg : segments_) {
        if (seg.tau_start <= tau) {
            r = seg.r;
        } else {
            break;
        }
    }
    return r;
}

} // namespace sirw
