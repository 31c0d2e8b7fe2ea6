#include "lambert_w.hpp"

#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace sirw {

namespace {

// Seed for Halley iteration near the branch point, in the variable
// p = sqrt(2 (e z + 1)). The series W0 = -1 + p - p^2/3 + 11 p^3/72 - ...
// is accurate enough to be returned directly when p is small; this also
// sidesteps the W' = 0 singularity that Halley hits at w = -1.
double branch_series(double p) {
    return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0))));
}

} // namespace

double lambert_w0(double z) {
    const double neg_inv_e = -std::exp(-1.0);

    if (std::isnan(z)) {
        throw Error(Errc::domain_error, "lambert_w0: argument is NaN");
    }
    if (z < neg_inv_e) {
        if (z < neg_inv_e - kLambertDomainTol) {
            std::ostringstream msg;
            msg << "lambert_w0: argument " << z << " below -1/e";
            throw Error(Errc::domain_error, msg.str());
        }
        z = neg_inv_e;
    }

    // Epidemic-side callers compute arguments that land on the branch point up
    // to rounding; a few-ulp band maps them to the exact branch value.
    if (z <= neg_inv_e + 1e-15) {
        return -1.0;
    }

    const double p = std::sqrt(std::max(0.0, 2.0 * (std::exp(1.0) * z + 1.0)));
    if (p < 1e-4) {
        return branch_series(p);
    }

    double w;
    if (z < -0.32) {
        w = branch_series(p);
    } else if (z < 0.3) {
        w = z / (1.0 + z);
    } else if (z < std::exp(1.0)) {
        w = std::log1p(z);
    } else {
        const double l1 = std::log(z);
        const double l2 = std::log(l1);
        w = l1 - l2 + l2 / l1;
    }

    // Halley iteration on f(w) = w e^w - z.
    bool converged = false;
    for (int iter = 0; iter < 50; ++iter) {
        const double ew = std::exp(w);
        const double f = w * ew - z;
        const double wp1 = w + 1.0;
        const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        const double dw = f / denom;
        w -= dw;
        if (std::abs(dw) <= 1e-14 * std::max(1.0, std::abs(w))) {
            converged = true;
            break;
        }
    }

    const double residual = std::abs(w * std::exp(w) - z);
    if (!converged && residual > 1e-12 * std::max(1.0, std::abs(z))) {
        std::ostringstream msg;
        msg << "lambert_w0: no convergence at z = " << z << " (residual " << residual << ")";
        throw Error(Errc::numeric_error, msg.str());
    }

    return w < -1.0 ? -1.0 : w;
}

} // namespace sirw
