#ifndef SIRW_INTERVENTION_HPP
#define SIRW_INTERVENTION_HPP

#include <optional>

#include "integrate.hpp"
#include "sir_model.hpp"

namespace sirw {

// One social-distancing window: R(tau) = r0 outside [tau_s, tau_f), r_s inside.
struct SingleIntervalPolicy {
    double tau_s = 0.0;
    double tau_f = 0.0;
    double r_s = 0.0;
    double r0 = 0.0;

    static constexpr double kDefaultRMin = 0.1;

    void validate_or_throw(double r_min = kDefaultRMin) const;
    ReproductionSchedule schedule() const;
};

enum class ScenarioClass {
    QuasiOptimal,
    SoftLongTerm,
    StrongLongTerm,
    ShortTerm,
};

const char* to_string(ScenarioClass c);

struct SecondWave {
    double tau = 0.0;   // time of the renewed infected peak, after tau_f
    double peak = 0.0;  // infected fraction at that peak
};

struct ScenarioReport {
    ScenarioClass scenario = ScenarioClass::ShortTerm;
    double s_at_tf = 0.0;
    double i_at_tf = 0.0;
    double s_infinity = 0.0;  // closed form from the tau_f state
    double s_star = 0.0;
    double tail_s = 0.0;      // simulated susceptible fraction at the horizon end
    std::optional<SecondWave> second_wave;
};

struct ClassifyOptions {
    IntegrationOptions integration;
    // half-width of the |s(tau_f) - S*| band treated as quasi optimal
    double qss_band = 0.01;
    // how far past tau_f the release phase is simulated
    double post_release_horizon = 400.0;
};

// Distancing reproduction number R^g with final_size(R^g, s(tau_s), i(tau_s))
// equal to S*(r0) within tol, where (s, i)(tau_s) comes from integrating the
// uncontrolled system over [0, tau_s]. Bracketed bisection on (1, r0].
double goldilocks_r(double r0, const EpiState& x0, double tau_s, double tol = 1e-6,
                    const IntegrationOptions& opts = {});

// Policy applying goldilocks distancing from tau_s until
// tau_f = tau_s + qss_multiplier * tau_hat, where tau_hat is the infected peak
// time of the switched trajectory (baseline r0 until tau_s, r_s afterwards),
// measured from the outbreak.
SingleIntervalPolicy quasi_optimal_policy(double r0, const EpiState& x0, double tau_s,
                                          double qss_multiplier = 5.0,
                                          const IntegrationOptions& opts = {});

// Simulates the three phases of the policy and classifies the outcome:
// short term when the infected fraction at tau_f is not yet negligible,
// otherwise quasi optimal / soft / strong by where s(tau_f) sits relative
// to the herd immunity threshold.
ScenarioReport classify_scenario(const SingleIntervalPolicy& policy, const EpiState& x0,
                                 const ClassifyOptions& opts = {});

struct UpperBoundCheck {
    double s_infinity = 0.0;
    double s_star = 0.0;
    double gap = 0.0;  // s_star - s_infinity, positive for every finite policy
};

UpperBoundCheck upper_bound_check(const SingleIntervalPolicy& policy, const EpiState& x0,
                                  const ClassifyOptions& opts = {});

} // namespace sirw

#endif
