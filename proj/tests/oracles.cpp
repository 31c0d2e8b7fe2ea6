#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

#include "final_size.hpp"

namespace sirw::test {

double w0_bisection(double z) {
    const double neg_inv_e = -std::exp(-1.0);
    if (z < neg_inv_e - 1e-12) {
        throw std::domain_error("w0_bisection: z below -1/e");
    }
    auto f = [z](double w) { return w * std::exp(w) - z; };
    double lo = -1.0;
    if (f(lo) >= 0.0) {
        return -1.0;
    }
    double hi = 1.0;
    while (f(hi) < 0.0) {
        hi *= 2.0;
    }
    for (int k = 0; k < 200; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) {
            break;
        }
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

struct Deriv {
    double ds, di, dc;
};

Deriv rhs(const Rk4State& x, double r) {
    const double flow = r * x.s * x.i;
    return Deriv{-flow, flow - x.i, x.i};
}

Rk4State step(const Rk4State& x, double r, double h) {
    const Deriv k1 = rhs(x, r);
    const Rk4State x2{x.s + 0.5 * h * k1.ds, x.i + 0.5 * h * k1.di, x.c + 0.5 * h * k1.dc};
    const Deriv k2 = rhs(x2, r);
    const Rk4State x3{x.s + 0.5 * h * k2.ds, x.i + 0.5 * h * k2.di, x.c + 0.5 * h * k2.dc};
    const Deriv k3 = rhs(x3, r);
    const Rk4State x4{x.s + h * k3.ds, x.i + h * k3.di, x.c + h * k3.dc};
    const Deriv k4 = rhs(x4, r);
    return Rk4State{x.s + h / 6.0 * (k1.ds + 2.0 * k2.ds + 2.0 * k3.ds + k4.ds),
                    x.i + h / 6.0 * (k1.di + 2.0 * k2.di + 2.0 * k3.di + k4.di),
                    x.c + h / 6.0 * (k1.dc + 2.0 * k2.dc + 2.0 * k3.dc + k4.dc)};
}

} // namespace

Rk4State rk4_span(Rk4State x, double r, double tau0, double tau1, double h) {
    const long n = std::lround(std::ceil((tau1 - tau0) / h));
    const double hh = (tau1 - tau0) / static_cast<double>(n);
    for (long k = 0; k < n; ++k) {
        x = step(x, r, hh);
    }
    return x;
}

Rk4State rk4_schedule(Rk4State x, const std::vector<std::pair<double, double>>& segments,
                      double tau_end, double h) {
    for (std::size_t j = 0; j < segments.size(); ++j) {
        const double start = segments[j].first;
        const double stop = (j + 1 < segments.size()) ? segments[j + 1].first : tau_end;
        if (start >= tau_end) {
            break;
        }
        x = rk4_span(x, segments[j].second, start, std::min(stop, tau_end), h);
    }
    return x;
}

Rk4Peak rk4_peak(Rk4State x, double r, double tau0, double tau1, double h) {
    const long n = std::lround(std::ceil((tau1 - tau0) / h));
    const double hh = (tau1 - tau0) / static_cast<double>(n);
    double tau = tau0;
    double prev_di = x.i * (r * x.s - 1.0);
    for (long k = 0; k < n; ++k) {
        x = step(x, r, hh);
        tau += hh;
        const double di = x.i * (r * x.s - 1.0);
        if (prev_di > 0.0 && di <= 0.0) {
            return Rk4Peak{tau, x.i};
        }
        prev_di = di;
    }
    return Rk4Peak{-1.0, 0.0};
}

double goldilocks_scan(double r0, double s_at_tau_s, double i_at_tau_s) {
    const double s_star = 1.0 / r0;
    double r = r0;
    double s_inf = final_size(r, s_at_tau_s, i_at_tau_s);
    while (s_inf <= s_star) {
        r -= 0.0001;
        if (r <= 1.0) {
            throw std::runtime_error("goldilocks_scan: no crossing above r = 1");
        }
        s_inf = final_size(r, s_at_tau_s, i_at_tau_s);
    }
    return r;
}

} // namespace sirw::test
