#include <sirw/sirw.h>

#include <algorithm>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "errors.hpp"
#include "final_size.hpp"
#include "integrate.hpp"
#include "intervention.hpp"
#include "lambert_w.hpp"
#include "scenario.hpp"
#include "sir_model.hpp"
#include "stability.hpp"
#include "version.hpp"

/* --- thread-local error message ---------------------------------------- */

namespace {

thread_local char tl_error[512] = "";

void set_error(const char* msg) {
    std::strncpy(tl_error, msg, sizeof(tl_error) - 1);
    tl_error[sizeof(tl_error) - 1] = '\0';
}

sirw_status map_errc(sirw::Errc code) {
    switch (code) {
        case sirw::Errc::domain_error: return SIRW_ERR_DOMAIN;
        case sirw::Errc::invalid_argument: return SIRW_ERR_INVALID;
        case sirw::Errc::step_failure: return SIRW_ERR_STEP;
        case sirw::Errc::no_qss: return SIRW_ERR_NO_QSS;
        case sirw::Errc::no_solution: return SIRW_ERR_NO_SOLUTION;
        case sirw::Errc::empty_curve: return SIRW_ERR_EMPTY_CURVE;
        case sirw::Errc::parse_error: return SIRW_ERR_PARSE;
        case sirw::Errc::validation_error: return SIRW_ERR_VALIDATION;
        case sirw::Errc::io_error: return SIRW_ERR_IO;
        case sirw::Errc::numeric_error: return SIRW_ERR_NUMERIC;
    }
    return SIRW_ERR_UNKNOWN;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
sirw_status guarded(Fn&& fn) {
    try {
        fn();
        return SIRW_OK;
    } catch (const sirw::Error& e) {
        set_error(e.what());
        return map_errc(e.code());
    } catch (const std::exception& e) {
        set_error(e.what());
        return SIRW_ERR_UNKNOWN;
    } catch (...) {
        set_error("unknown failure");
        return SIRW_ERR_UNKNOWN;
    }
}

sirw_status null_arg(const char* name) {
    std::string msg = std::string("null pointer: ") + name;
    set_error(msg.c_str());
    return SIRW_ERR_NULL;
}

sirw::IntegrationOptions to_integration(const sirw_sim_options* opts) {
    sirw::IntegrationOptions out;
    if (opts != nullptr) {
        out.rel_tol = opts->rel_tol;
        out.abs_tol = opts->abs_tol;
        out.max_step = opts->max_step;
        out.i_qss_threshold = opts->i_qss_threshold;
    }
    return out;
}

sirw::ClassifyOptions to_classify(const sirw_sim_options* opts) {
    sirw::ClassifyOptions out;
    out.integration = to_integration(opts);
    if (opts != nullptr) {
        out.qss_band = opts->qss_band;
        out.post_release_horizon = opts->post_release_horizon;
    }
    return out;
}

void fill_report(const sirw::ScenarioReport& in, sirw_scenario_report* out) {
    out->scenario_class = static_cast<int>(in.scenario);
    out->s_at_tf = in.s_at_tf;
    out->i_at_tf = in.i_at_tf;
    out->s_infinity = in.s_infinity;
    out->s_star = in.s_star;
    out->tail_s = in.tail_s;
    out->has_second_wave = in.second_wave ? 1 : 0;
    out->second_wave_tau = in.second_wave ? in.second_wave->tau : 0.0;
    out->second_wave_peak = in.second_wave ? in.second_wave->peak : 0.0;
}

sirw::SingleIntervalPolicy to_policy(const sirw_policy* p) {
    return sirw::SingleIntervalPolicy{p->tau_s, p->tau_f, p->r_s, p->r0};
}

sirw_status run_scenario_common(const sirw::ScenarioConfig& cfg, const char* output_dir,
                                sirw_scenario_report* report, int* has_report, char* digest_hex,
                                size_t digest_cap) {
    const sirw::RunArtifact artifact =
        sirw::run_scenario(cfg, output_dir != nullptr ? output_dir : "");
    if (has_report != nullptr) {
        *has_report = artifact.report ? 1 : 0;
    }
    if (report != nullptr && artifact.report) {
        fill_report(*artifact.report, report);
    }
    if (digest_hex != nullptr) {
        if (digest_cap < artifact.digest.size() + 1) {
            throw sirw::Error(sirw::Errc::invalid_argument,
                              "digest buffer must hold at least 17 bytes");
        }
        std::memcpy(digest_hex, artifact.digest.c_str(), artifact.digest.size() + 1);
    }
    return SIRW_OK;
}

} // namespace

struct sirw_schedule {
    sirw::ReproductionSchedule impl;
};

struct sirw_trajectory {
    sirw::Trajectory impl;
};

extern "C" {

const char* sirw_last_error(void) {
    return tl_error;
}

const char* sirw_version(void) {
    return sirw::kVersion;
}

void sirw_sim_options_init(sirw_sim_options* opts) {
    if (opts == nullptr) {
        return;
    }
    const sirw::IntegrationOptions integration;
    const sirw::ClassifyOptions classify;
    opts->rel_tol = integration.rel_tol;
    opts->abs_tol = integration.abs_tol;
    opts->max_step = integration.max_step;
    opts->i_qss_threshold = integration.i_qss_threshold;
    opts->qss_band = classify.qss_band;
    opts->post_release_horizon = classify.post_release_horizon;
}

/* --- scalar kernels ------------------------------------------------------ */

sirw_status sirw_lambert_w0(double z, double* w) {
    if (w == nullptr) return null_arg("w");
    return guarded([&] { *w = sirw::lambert_w0(z); });
}

sirw_status sirw_herd_immunity_threshold(double r, double* s_star) {
    if (s_star == nullptr) return null_arg("s_star");
    return guarded([&] { *s_star = sirw::herd_immunity_threshold(r); });
}

sirw_status sirw_final_size(double r, double s0, double i0, double* s_inf) {
    if (s_inf == nullptr) return null_arg("s_inf");
    return guarded([&] { *s_inf = sirw::final_size(r, s0, i0); });
}

sirw_status sirw_final_size_optimum(double r, double delta, double* s_op, double* i_op,
                                    double* s_inf_op) {
    if (s_op == nullptr) return null_arg("s_op");
    if (i_op == nullptr) return null_arg("i_op");
    if (s_inf_op == nullptr) return null_arg("s_inf_op");
    return guarded([&] {
        const sirw::FinalSizeOptimum opt = sirw::final_size_optimum(r, delta);
        *s_op = opt.s_op;
        *i_op = opt.i_op;
        *s_inf_op = opt.s_inf_op;
    });
}

sirw_status sirw_nondimensionalize(double beta, double gamma, double t, double* r, double* tau) {
    if (r == nullptr) return null_arg("r");
    if (tau == nullptr) return null_arg("tau");
    return guarded([&] {
        const sirw::NondimensionalPoint p =
            sirw::nondimensionalize(sirw::DimensionalParams{beta, gamma}, t);
        *r = p.r;
        *tau = p.tau;
    });
}

sirw_status sirw_lyapunov_v(double s, double i, double s_bar, double* v) {
    if (v == nullptr) return null_arg("v");
    return guarded([&] {
        *v = sirw::lyapunov_v(sirw::EpiState{s, i, 1.0 - s - i}, s_bar);
    });
}

sirw_status sirw_lyapunov_vdot(double i, double s_bar, double r, double* vdot) {
    if (vdot == nullptr) return null_arg("vdot");
    return guarded([&] {
        *vdot = sirw::lyapunov_vdot(sirw::EpiState{0.5, i, 0.5 - i}, s_bar, r);
    });
}

sirw_status sirw_equilibrium_class(double s_bar, double r, int* stable) {
    if (stable == nullptr) return null_arg("stable");
    return guarded([&] {
        *stable = sirw::equilibrium_class(sirw::EquilibriumPoint{s_bar}, r) ==
                          sirw::EquilibriumClass::Stable
                      ? 1
                      : 0;
    });
}

/* --- schedules ------------------------------------------------------------ */

sirw_schedule* sirw_schedule_create(double r0) {
    try {
        auto* sched = new sirw_schedule{sirw::ReproductionSchedule::constant(r0)};
        return sched;
    } catch (const std::exception& e) {
        set_error(e.what());
        return nullptr;
    }
}

sirw_status sirw_schedule_add_segment(sirw_schedule* sched, double tau_start, double r) {
    if (sched == nullptr) return null_arg("sched");
    return guarded([&] { sched->impl.add_segment(tau_start, r); });
}

void sirw_schedule_destroy(sirw_schedule* sched) {
    delete sched;
}

/* --- trajectories ----------------------------------------------------------- */

sirw_status sirw_simulate(double s0, double i0, double c0, const sirw_schedule* sched,
                          double tau_end, const sirw_sim_options* opts, sirw_trajectory** out) {
    if (sched == nullptr) return null_arg("sched");
    if (out == nullptr) return null_arg("out");
    *out = nullptr;
    return guarded([&] {
        sirw::Trajectory traj = sirw::integrate(sirw::EpiState{s0, i0, c0}, sched->impl, tau_end,
                                                to_integration(opts));
        *out = new sirw_trajectory{std::move(traj)};
    });
}

size_t sirw_trajectory_size(const sirw_trajectory* traj) {
    return traj == nullptr ? 0 : traj->impl.samples().size();
}

sirw_status sirw_trajectory_sample(const sirw_trajectory* traj, size_t index, double* tau,
                                   double* s, double* i, double* c, double* r) {
    if (traj == nullptr) return null_arg("traj");
    return guarded([&] {
        const auto& samples = traj->impl.samples();
        if (index >= samples.size()) {
            throw sirw::Error(sirw::Errc::invalid_argument, "sample index out of range");
        }
        const sirw::Sample& sample = samples[index];
        if (tau != nullptr) *tau = sample.tau;
        if (s != nullptr) *s = sample.x.s;
        if (i != nullptr) *i = sample.x.i;
        if (c != nullptr) *c = sample.x.c;
        if (r != nullptr) *r = traj->impl.r_at(sample.tau);
    });
}

sirw_status sirw_trajectory_state_at(const sirw_trajectory* traj, double tau, double* s,
                                     double* i, double* c) {
    if (traj == nullptr) return null_arg("traj");
    return guarded([&] {
        const sirw::EpiState x = traj->impl.state_at(tau);
        if (s != nullptr) *s = x.s;
        if (i != nullptr) *i = x.i;
        if (c != nullptr) *c = x.c;
    });
}

int sirw_trajectory_peak(const sirw_trajectory* traj, double* tau_hat, double* i_hat) {
    if (traj == nullptr || !traj->impl.peak()) {
        return 0;
    }
    if (tau_hat != nullptr) *tau_hat = traj->impl.peak()->tau;
    if (i_hat != nullptr) *i_hat = traj->impl.peak()->i;
    return 1;
}

int sirw_trajectory_qss(const sirw_trajectory* traj, double* tau_qss) {
    if (traj == nullptr || !traj->impl.qss()) {
        return 0;
    }
    if (tau_qss != nullptr) *tau_qss = traj->impl.qss()->tau;
    return 1;
}

size_t sirw_trajectory_wave_count(const sirw_trajectory* traj) {
    return traj == nullptr ? 0 : traj->impl.second_waves().size();
}

sirw_status sirw_trajectory_wave(const sirw_trajectory* traj, size_t index, double* tau,
                                 double* peak_i) {
    if (traj == nullptr) return null_arg("traj");
    return guarded([&] {
        const auto& waves = traj->impl.second_waves();
        if (index >= waves.size()) {
            throw sirw::Error(sirw::Errc::invalid_argument, "wave index out of range");
        }
        if (tau != nullptr) *tau = waves[index].tau;
        if (peak_i != nullptr) *peak_i = waves[index].i;
    });
}

sirw_status sirw_trajectory_write_csv(const sirw_trajectory* traj, const char* path) {
    if (traj == nullptr) return null_arg("traj");
    if (path == nullptr) return null_arg("path");
    return guarded([&] { sirw::write_file(path, sirw::trajectory_to_csv(traj->impl)); });
}

sirw_status sirw_trajectory_write_json(const sirw_trajectory* traj, const char* path) {
    if (traj == nullptr) return null_arg("traj");
    if (path == nullptr) return null_arg("path");
    return guarded([&] { sirw::write_file(path, sirw::trajectory_to_json(traj->impl)); });
}

void sirw_trajectory_destroy(sirw_trajectory* traj) {
    delete traj;
}

sirw_status sirw_qss_time(double r, double s0, double i0, double c0,
                          const sirw_sim_options* opts, double* tau_qss) {
    if (tau_qss == nullptr) return null_arg("tau_qss");
    return guarded([&] {
        *tau_qss = sirw::qss_time(r, sirw::EpiState{s0, i0, c0}, to_integration(opts));
    });
}

/* --- policies ---------------------------------------------------------------- */

const char* sirw_scenario_class_name(int scenario_class) {
    return sirw::to_string(static_cast<sirw::ScenarioClass>(scenario_class));
}

sirw_status sirw_goldilocks_r(double r0, double epsilon, double tau_s, double tol,
                              const sirw_sim_options* opts, double* r_g) {
    if (r_g == nullptr) return null_arg("r_g");
    return guarded([&] {
        *r_g = sirw::goldilocks_r(r0, sirw::outbreak_state(epsilon), tau_s,
                                  tol > 0.0 ? tol : 1e-6, to_integration(opts));
    });
}

sirw_status sirw_quasi_optimal_policy(double r0, double epsilon, double tau_s,
                                      double qss_multiplier, const sirw_sim_options* opts,
                                      sirw_policy* out) {
    if (out == nullptr) return null_arg("out");
    return guarded([&] {
        const sirw::SingleIntervalPolicy p = sirw::quasi_optimal_policy(
            r0, sirw::outbreak_state(epsilon), tau_s, qss_multiplier, to_integration(opts));
        *out = sirw_policy{p.tau_s, p.tau_f, p.r_s, p.r0};
    });
}

sirw_status sirw_classify_scenario(const sirw_policy* policy, double epsilon,
                                   const sirw_sim_options* opts, sirw_scenario_report* out) {
    if (policy == nullptr) return null_arg("policy");
    if (out == nullptr) return null_arg("out");
    return guarded([&] {
        const sirw::ScenarioReport report = sirw::classify_scenario(
            to_policy(policy), sirw::outbreak_state(epsilon), to_classify(opts));
        fill_report(report, out);
    });
}

sirw_status sirw_upper_bound_check(const sirw_policy* policy, double epsilon,
                                   const sirw_sim_options* opts, double* s_infinity,
                                   double* s_star, double* gap) {
    if (policy == nullptr) return null_arg("policy");
    return guarded([&] {
        const sirw::UpperBoundCheck check = sirw::upper_bound_check(
            to_policy(policy), sirw::outbreak_state(epsilon), to_classify(opts));
        if (s_infinity != nullptr) *s_infinity = check.s_infinity;
        if (s_star != nullptr) *s_star = check.s_star;
        if (gap != nullptr) *gap = check.gap;
    });
}

/* --- level sets and portraits --------------------------------------------------- */

sirw_status sirw_level_curve(double r, double level, int capacity, double* s, double* i,
                             int* count) {
    if (s == nullptr) return null_arg("s");
    if (i == nullptr) return null_arg("i");
    if (count == nullptr) return null_arg("count");
    return guarded([&] {
        if (capacity < 2) {
            throw sirw::Error(sirw::Errc::invalid_argument, "capacity must be >= 2");
        }
        const sirw::LevelCurve curve = sirw::final_size_level_set(r, level, capacity);
        const int n = static_cast<int>(curve.points.size());
        for (int k = 0; k < n; ++k) {
            s[k] = curve.points[k].first;
            i[k] = curve.points[k].second;
        }
        *count = n;
    });
}

sirw_status sirw_level_curves_write_csv(double r, const double* levels, int n_levels,
                                        int points_per_curve, const char* path) {
    if (levels == nullptr) return null_arg("levels");
    if (path == nullptr) return null_arg("path");
    return guarded([&] {
        std::string csv = "curve,s,i\n";
        for (int c = 0; c < n_levels; ++c) {
            const sirw::LevelCurve curve =
                sirw::final_size_level_set(r, levels[c], points_per_curve);
            for (const auto& [sv, iv] : curve.points) {
                csv += std::to_string(c);
                csv += ',';
                csv += sirw::format_double(sv);
                csv += ',';
                csv += sirw::format_double(iv);
                csv += '\n';
            }
        }
        sirw::write_file(path, csv);
    });
}

sirw_status sirw_phase_portrait_write_csv(double r, int n_starts, double tau_end,
                                          const sirw_sim_options* opts, const char* path) {
    if (path == nullptr) return null_arg("path");
    return guarded([&] {
        const auto starts = sirw::default_portrait_starts(n_starts);
        const auto trajectories = sirw::phase_portrait(
            sirw::ReproductionSchedule::constant(r), starts, tau_end, to_integration(opts));
        std::string csv = "curve,tau,S,I,C\n";
        for (std::size_t c = 0; c < trajectories.size(); ++c) {
            for (const sirw::Sample& sample : trajectories[c].samples()) {
                csv += std::to_string(c);
                csv += ',';
                csv += sirw::format_double(sample.tau);
                csv += ',';
                csv += sirw::format_double(sample.x.s);
                csv += ',';
                csv += sirw::format_double(sample.x.i);
                csv += ',';
                csv += sirw::format_double(sample.x.c);
                csv += '\n';
            }
        }
        sirw::write_file(path, csv);
    });
}

sirw_status sirw_sinfinity_drift(const sirw_trajectory* traj, double r, double tau_lo,
                                 double tau_hi, double* drift) {
    if (traj == nullptr) return null_arg("traj");
    if (drift == nullptr) return null_arg("drift");
    return guarded([&] { *drift = sirw::sinfinity_drift(traj->impl, r, tau_lo, tau_hi); });
}

/* --- scenario configs --------------------------------------------------------------- */

sirw_status sirw_run_scenario_json(const char* config_json, const char* output_dir,
                                   sirw_scenario_report* report, int* has_report,
                                   char* digest_hex, size_t digest_cap) {
    if (config_json == nullptr) return null_arg("config_json");
    return guarded([&] {
        const sirw::ScenarioConfig cfg = sirw::parse_config(config_json);
        run_scenario_common(cfg, output_dir, report, has_report, digest_hex, digest_cap);
    });
}

sirw_status sirw_run_scenario_file(const char* config_path, const char* output_dir,
                                   sirw_scenario_report* report, int* has_report,
                                   char* digest_hex, size_t digest_cap) {
    if (config_path == nullptr) return null_arg("config_path");
    return guarded([&] {
        std::ifstream in(config_path, std::ios::binary);
        if (!in) {
            throw sirw::Error(sirw::Errc::io_error,
                              std::string("cannot read config: ") + config_path);
        }
        std::ostringstream text;
        text << in.rdbuf();
        const sirw::ScenarioConfig cfg = sirw::parse_config(text.str());
        run_scenario_common(cfg, output_dir, report, has_report, digest_hex, digest_cap);
    });
}

/* --- reference table ----------------------------------------------------------------- */

sirw_status sirw_reference_suite(const sirw_sim_options* opts, sirw_reference_row* rows,
                                 int capacity, int* count, int* all_pass) {
    if (rows == nullptr) return null_arg("rows");
    if (count == nullptr) return null_arg("count");
    return guarded([&] {
        const auto result = sirw::reference_suite(to_classify(opts));
        const int n = std::min<int>(capacity, static_cast<int>(result.size()));
        bool pass = true;
        for (int k = 0; k < n; ++k) {
            std::strncpy(rows[k].name, result[k].name.c_str(), sizeof(rows[k].name) - 1);
            rows[k].name[sizeof(rows[k].name) - 1] = '\0';
            rows[k].expected = result[k].expected;
            rows[k].actual = result[k].actual;
            rows[k].tolerance = result[k].tolerance;
            rows[k].pass = result[k].pass ? 1 : 0;
        }
        for (const auto& row : result) {
            pass = pass && row.pass;
        }
        *count = n;
        if (all_pass != nullptr) {
            *all_pass = pass ? 1 : 0;
        }
        if (static_cast<int>(result.size()) > capacity) {
            throw sirw::Error(sirw::Errc::invalid_argument,
                              "row buffer too small for reference suite");
        }
    });
}

} /* extern "C" */
