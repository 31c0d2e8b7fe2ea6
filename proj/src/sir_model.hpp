#ifndef SIRW_SIR_MODEL_HPP
#define SIRW_SIR_MODEL_HPP

#include <vector>

namespace sirw {

// Point on the unit simplex: susceptible, infected, cumulative removed.
struct EpiState {
    double s = 0.0;
    double i = 0.0;
    double c = 0.0;

    // s + i + c must equal 1 within this tolerance.
    static constexpr double kConservationTol = 1e-9;

    bool valid() const;
    void validate_or_throw(const char* where) const;
};

// Outbreak convention: (1 - eps, eps, 0).
EpiState outbreak_state(double epsilon);

struct Derivatives {
    double ds = 0.0;
    double di = 0.0;
    double dc = 0.0;
};

// Right-hand side of the nondimensional SIR system at reproduction number r.
Derivatives derivatives(const EpiState& x, double r);

// Dimensional transmission/recovery rates (1/time-unit each).
struct DimensionalParams {
    double beta = 0.0;
    double gamma = 0.0;
};

// r = beta/gamma, tau = t * gamma.
struct NondimensionalPoint {
    double r = 0.0;
    double tau = 0.0;
};

NondimensionalPoint nondimensionalize(const DimensionalParams& p, double t);

// Piecewise-constant reproduction number R(tau). Segments are ordered by
// strictly increasing start time; the first starts at 0 and the last
// extends to infinity.
class ReproductionSchedule {
public:
    struct Segment {
        double tau_start;
        double r;
    };

    static ReproductionSchedule constant(double r);
    // R(0) outside [tau_s, tau_f), r_s inside.
    static ReproductionSchedule single_interval(double r0, double r_s, double tau_s, double tau_f);

    ReproductionSchedule() = default;
    explicit ReproductionSchedule(std::vector<Segment> segments);

    void add_segment(double tau_start, double r);

    double r_at(double tau) const;
    const std::vector<Segment>& segments() const { return segments_; }
    bool empty() const { return segments_.empty(); }

private:
    void validate() const;
    std::vector<Segment> segments_;
};

} // namespace sirw

#endif
