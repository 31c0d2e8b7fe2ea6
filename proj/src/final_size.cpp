#include "final_size.hpp"

#include <cmath>
#include <sstream>

#include "errors.hpp"
#include "lambert_w.hpp"

namespace sirw {

double herd_immunity_threshold(double r) {
    if (!(r > 0.0)) {
        throw Error(Errc::invalid_argument, "herd_immunity_threshold: r must be positive");
    }
    return std::min(1.0, 1.0 / r);
}

void FinalSizeQuery::validate_or_throw() const {
    if (!(r > 0.0) || !std::isfinite(r)) {
        throw Error(Errc::invalid_argument, "final_size: r must be positive and finite");
    }
    if (!(s0 >= 0.0 && s0 <= 1.0) || !(i0 >= 0.0 && i0 <= 1.0)) {
        std::ostringstream msg;
        msg << "final_size: fractions out of range (s0 = " << s0 << ", i0 = " << i0 << ")";
        throw Error(Errc::invalid_argument, msg.str());
    }
    if (s0 + i0 > 1.0 + 1e-9) {
        std::ostringstream msg;
        msg << "final_size: s0 + i0 = " << s0 + i0 << " exceeds 1";
        throw Error(Errc::invalid_argument, msg.str());
    }
}

double final_size(const FinalSizeQuery& q) {
    q.validate_or_throw();
    if (q.s0 == 0.0) {
        return 0.0;
    }
    const double z = -q.r * q.s0 * std::exp(-q.r * (q.s0 + q.i0));
    return -lambert_w0(z) / q.r;
}

double final_size(double r, double s0, double i0) {
    return final_size(FinalSizeQuery{r, s0, i0});
}

FinalSizeOptimum final_size_optimum(double r, double delta) {
    if (!(r > 0.0)) {
        throw Error(Errc::invalid_argument, "final_size_optimum: r must be positive");
    }
    if (!(delta >= 0.0 && delta <= 1.0)) {
        throw Error(Errc::invalid_argument, "final_size_optimum: delta must be in [0, 1]");
    }
    const double s_star = herd_immunity_threshold(r);
    const double z = -r * s_star * std::exp(-r * (s_star + delta));
    return FinalSizeOptimum{s_star, delta, -lambert_w0(z) / r};
}

} // namespace sirw
