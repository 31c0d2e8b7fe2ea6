// sirw command-line interface. Talks to the toolkit exclusively through the
// C API of the shared library.

#include <sirw/sirw.h>

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

namespace {

// exit codes: 0 success, 1 validation/usage, 2 numerical failure
constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumeric = 2;

int exit_code_for(sirw_status status) {
    switch (status) {
        case SIRW_OK:
            return kExitOk;
        case SIRW_ERR_INVALID:
        case SIRW_ERR_PARSE:
        case SIRW_ERR_VALIDATION:
        case SIRW_ERR_NULL:
        case SIRW_ERR_IO:
            return kExitValidation;
        default:
            return kExitNumeric;
    }
}

int fail(sirw_status status) {
    std::fprintf(stderr, "error: %s\n", sirw_last_error());
    return exit_code_for(status);
}

struct OptionFlags {
    double rel_tol;
    double abs_tol;
    double max_step;
    double i_qss_threshold;
    double qss_band;
    double post_release_horizon;
};

void add_option_flags(CLI::App* cmd, OptionFlags& flags) {
    sirw_sim_options defaults;
    sirw_sim_options_init(&defaults);
    flags = OptionFlags{defaults.rel_tol, defaults.abs_tol, defaults.max_step,
                        defaults.i_qss_threshold, defaults.qss_band,
                        defaults.post_release_horizon};
    cmd->add_option("--rel-tol", flags.rel_tol, "Integrator relative tolerance")
        ->capture_default_str();
    cmd->add_option("--abs-tol", flags.abs_tol, "Integrator absolute tolerance")
        ->capture_default_str();
    cmd->add_option("--max-step", flags.max_step, "Integrator maximum step size")
        ->capture_default_str();
    cmd->add_option("--i-qss-threshold", flags.i_qss_threshold,
                    "Infected fraction treated as zero when testing for a quasi steady state")
        ->capture_default_str();
    cmd->add_option("--qss-band", flags.qss_band,
                    "|S(tau_f) - S*| band classified as quasi optimal")
        ->capture_default_str();
    cmd->add_option("--post-horizon", flags.post_release_horizon,
                    "Simulated span past tau_f during classification")
        ->capture_default_str();
}

sirw_sim_options to_options(const OptionFlags& flags) {
    sirw_sim_options opts;
    sirw_sim_options_init(&opts);
    opts.rel_tol = flags.rel_tol;
    opts.abs_tol = flags.abs_tol;
    opts.max_step = flags.max_step;
    opts.i_qss_threshold = flags.i_qss_threshold;
    opts.qss_band = flags.qss_band;
    opts.post_release_horizon = flags.post_release_horizon;
    return opts;
}

void print_report(const sirw_scenario_report& report) {
    std::printf("scenario       %s\n", sirw_scenario_class_name(report.scenario_class));
    std::printf("S(tau_f)       %.6f\n", report.s_at_tf);
    std::printf("I(tau_f)       %.6e\n", report.i_at_tf);
    std::printf("S_inf          %.6f\n", report.s_infinity);
    std::printf("S_star         %.6f\n", report.s_star);
    std::printf("tail S         %.6f\n", report.tail_s);
    if (report.has_second_wave != 0) {
        std::printf("second wave    tau = %.4f, peak I = %.6f\n", report.second_wave_tau,
                    report.second_wave_peak);
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SIR epidemic toolkit: Lambert-W final sizes, goldilocks social distancing, "
                 "scenario classification"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(sirw_version()));

    // ---- simulate -------------------------------------------------------
    auto* simulate = app.add_subcommand("simulate", "Integrate the SIR system and export the "
                                                    "trajectory");
    std::string config_path;
    double sim_r0 = 2.5, sim_eps = 0.005, sim_tau_end = 40.0;
    double sim_beta = 0.0, sim_gamma = 0.0, sim_t_end_days = 0.0;
    std::vector<double> sim_s0;
    std::optional<double> sim_rs, sim_tau_s, sim_tau_f;
    std::vector<std::string> sim_segments;
    std::string sim_csv, sim_json, out_dir;
    OptionFlags sim_flags;
    simulate->add_option("--config", config_path,
                         "JSON scenario config; other model flags are ignored");
    simulate->add_option("--r0", sim_r0, "Baseline reproduction number")->capture_default_str();
    simulate->add_option("--eps", sim_eps, "Outbreak infected fraction")->capture_default_str();
    simulate->add_option("--state", sim_s0, "Initial state S I C (overrides --eps)")->expected(3);
    simulate->add_option("--tau-end", sim_tau_end, "Horizon in nondimensional time")
        ->capture_default_str();
    simulate->add_option("--beta", sim_beta, "Transmission rate; with --gamma replaces --r0");
    simulate->add_option("--gamma", sim_gamma, "Recovery/death rate (1/day)");
    simulate->add_option("--t-end", sim_t_end_days,
                         "Horizon in days, converted with --gamma (tau = t * gamma)");
    simulate->add_option("--r-s", sim_rs, "Distancing reproduction number");
    simulate->add_option("--tau-s", sim_tau_s, "Distancing start time");
    simulate->add_option("--tau-f", sim_tau_f, "Distancing end time");
    simulate->add_option("--segment", sim_segments,
                         "Extra schedule segment START:R (repeatable)");
    simulate->add_option("--csv", sim_csv, "Write trajectory CSV here");
    simulate->add_option("--json", sim_json, "Write trajectory JSON here");
    simulate->add_option("--out-dir", out_dir,
                         "Directory for relative config outputs (default $SIRW_OUT_DIR or .)");
    add_option_flags(simulate, sim_flags);

    // ---- final-size ------------------------------------------------------
    auto* final_size_cmd =
        app.add_subcommand("final-size", "Closed-form final susceptible fraction and S*");
    double fs_r = 2.5, fs_s0 = 0.995, fs_i0 = 0.005;
    double fs_beta = 0.0, fs_gamma = 0.0;
    final_size_cmd->add_option("--r", fs_r, "Reproduction number")->capture_default_str();
    final_size_cmd->add_option("--beta", fs_beta, "Transmission rate; with --gamma replaces --r");
    final_size_cmd->add_option("--gamma", fs_gamma, "Recovery/death rate");
    final_size_cmd->add_option("--s0", fs_s0, "Initial susceptible fraction")
        ->capture_default_str();
    final_size_cmd->add_option("--i0", fs_i0, "Initial infected fraction")->capture_default_str();

    // ---- goldilocks ------------------------------------------------------
    auto* goldilocks = app.add_subcommand(
        "goldilocks", "Distancing level whose final size equals the herd immunity threshold");
    double g_r0 = 2.5, g_eps = 0.005, g_tau_s = 2.0, g_tol = 1e-6;
    OptionFlags g_flags;
    goldilocks->add_option("--r0", g_r0, "Baseline reproduction number")->capture_default_str();
    goldilocks->add_option("--eps", g_eps, "Outbreak infected fraction")->capture_default_str();
    goldilocks->add_option("--tau-s", g_tau_s, "Distancing start time")->capture_default_str();
    goldilocks->add_option("--tol", g_tol, "Tolerance on the final-size residual")
        ->capture_default_str();
    add_option_flags(goldilocks, g_flags);

    // ---- classify --------------------------------------------------------
    auto* classify = app.add_subcommand("classify", "Classify a single-interval policy");
    double c_r0 = 2.5, c_eps = 0.005, c_tau_s = 2.0, c_tau_f = 21.6, c_rs = 1.8;
    double c_multiplier = 0.0;
    bool c_goldilocks = false;
    std::string c_out;
    OptionFlags c_flags;
    classify->add_option("--r0", c_r0, "Baseline reproduction number")->capture_default_str();
    classify->add_option("--eps", c_eps, "Outbreak infected fraction")->capture_default_str();
    classify->add_option("--tau-s", c_tau_s, "Distancing start time")->capture_default_str();
    classify->add_option("--tau-f", c_tau_f, "Distancing end time")->capture_default_str();
    classify->add_option("--r-s", c_rs, "Distancing reproduction number")->capture_default_str();
    classify->add_flag("--goldilocks", c_goldilocks, "Compute r_s with the goldilocks rule");
    classify->add_option("--qss-multiplier", c_multiplier,
                         "With --goldilocks: derive tau_f from this many peak times (>= 5)");
    classify->add_option("--out", c_out, "Write the report JSON here as well");
    add_option_flags(classify, c_flags);

    // ---- optimize ----------------------------------------------------------
    auto* optimize = app.add_subcommand(
        "optimize", "Synthesize the quasi-optimal policy: goldilocks distancing held past the "
                    "quasi steady state");
    double o_r0 = 2.5, o_eps = 0.005, o_tau_s = 2.0, o_multiplier = 6.0;
    OptionFlags o_flags;
    optimize->add_option("--r0", o_r0, "Baseline reproduction number")->capture_default_str();
    optimize->add_option("--eps", o_eps, "Outbreak infected fraction")->capture_default_str();
    optimize->add_option("--tau-s", o_tau_s, "Distancing start time")->capture_default_str();
    optimize->add_option("--qss-multiplier", o_multiplier,
                         "Hold for this many infected-peak times (>= 5)")
        ->capture_default_str();
    add_option_flags(optimize, o_flags);

    // ---- phase-portrait ----------------------------------------------------
    auto* portrait = app.add_subcommand("phase-portrait",
                                        "Trajectories from starts on the s + i = 1 edge (CSV)");
    double p_r = 2.5, p_tau_end = 40.0;
    int p_starts = 12;
    std::string p_out = "portrait.csv";
    OptionFlags p_flags;
    portrait->add_option("--r", p_r, "Reproduction number")->capture_default_str();
    portrait->add_option("--starts", p_starts, "Number of starting states")
        ->capture_default_str();
    portrait->add_option("--tau-end", p_tau_end, "Horizon")->capture_default_str();
    portrait->add_option("--out", p_out, "Output CSV path")->capture_default_str();
    add_option_flags(portrait, p_flags);

    // ---- level-curves --------------------------------------------------------
    auto* curves = app.add_subcommand(
        "level-curves", "Level sets of S* - S_inf(r, s, i) around (S*, 0) (CSV)");
    double lc_r = 2.5;
    std::vector<double> lc_levels{0.02, 0.05, 0.1, 0.15};
    int lc_points = 200;
    std::string lc_out = "level_curves.csv";
    curves->add_option("--r", lc_r, "Reproduction number")->capture_default_str();
    curves->add_option("--level", lc_levels, "Level values (repeatable)")->capture_default_str();
    curves->add_option("--points", lc_points, "Points per curve")->capture_default_str();
    curves->add_option("--out", lc_out, "Output CSV path")->capture_default_str();

    // ---- reproduce-paper -------------------------------------------------------
    auto* reproduce = app.add_subcommand(
        "reproduce-paper",
        "Re-run the bundled benchmark scenarios and compare against published values");
    OptionFlags r_flags;
    add_option_flags(reproduce, r_flags);

    CLI11_PARSE(app, argc, argv);

    if (simulate->parsed()) {
        const sirw_sim_options opts = to_options(sim_flags);
        if (!config_path.empty()) {
            sirw_scenario_report report;
            int has_report = 0;
            char digest[17];
            const sirw_status st = sirw_run_scenario_file(
                config_path.c_str(), out_dir.empty() ? nullptr : out_dir.c_str(), &report,
                &has_report, digest, sizeof(digest));
            if (st != SIRW_OK) return fail(st);
            std::printf("digest         %s\n", digest);
            if (has_report != 0) print_report(report);
            return kExitOk;
        }

        if (sim_gamma > 0.0 && sim_beta > 0.0) {
            double tau = 0.0;
            const sirw_status st =
                sirw_nondimensionalize(sim_beta, sim_gamma, 0.0, &sim_r0, &tau);
            if (st != SIRW_OK) return fail(st);
        }
        if (sim_gamma > 0.0 && sim_t_end_days > 0.0) {
            double r_ignored = 0.0;
            const sirw_status st = sirw_nondimensionalize(
                sim_gamma > 0.0 && sim_beta > 0.0 ? sim_beta : sim_r0 * sim_gamma, sim_gamma,
                sim_t_end_days, &r_ignored, &sim_tau_end);
            if (st != SIRW_OK) return fail(st);
        }

        sirw_schedule* sched = sirw_schedule_create(sim_r0);
        if (sched == nullptr) return fail(SIRW_ERR_INVALID);
        sirw_status st = SIRW_OK;
        if (sim_rs && sim_tau_s && sim_tau_f) {
            st = sirw_schedule_add_segment(sched, *sim_tau_s, *sim_rs);
            if (st == SIRW_OK) st = sirw_schedule_add_segment(sched, *sim_tau_f, sim_r0);
        } else if (sim_rs || sim_tau_s || sim_tau_f) {
            std::fprintf(stderr, "error: --r-s, --tau-s and --tau-f must be given together\n");
            sirw_schedule_destroy(sched);
            return kExitValidation;
        }
        for (const std::string& seg : sim_segments) {
            const auto colon = seg.find(':');
            if (colon == std::string::npos) {
                std::fprintf(stderr, "error: --segment expects START:R, got \"%s\"\n",
                             seg.c_str());
                sirw_schedule_destroy(sched);
                return kExitValidation;
            }
            if (st == SIRW_OK) {
                st = sirw_schedule_add_segment(sched, std::stod(seg.substr(0, colon)),
                                               std::stod(seg.substr(colon + 1)));
            }
        }
        if (st != SIRW_OK) {
            sirw_schedule_destroy(sched);
            return fail(st);
        }

        double s0 = 1.0 - sim_eps, i0 = sim_eps, c0 = 0.0;
        if (!sim_s0.empty()) {
            s0 = sim_s0[0];
            i0 = sim_s0[1];
            c0 = sim_s0[2];
        }
        sirw_trajectory* traj = nullptr;
        st = sirw_simulate(s0, i0, c0, sched, sim_tau_end, &opts, &traj);
        sirw_schedule_destroy(sched);
        if (st != SIRW_OK) return fail(st);

        const size_t n = sirw_trajectory_size(traj);
        double tau_last = 0.0, s_last = 0.0, i_last = 0.0, c_last = 0.0, r_last = 0.0;
        sirw_trajectory_sample(traj, n - 1, &tau_last, &s_last, &i_last, &c_last, &r_last);
        std::printf("samples        %zu\n", n);
        std::printf("final state    tau = %.4f  S = %.6f  I = %.6e  C = %.6f\n", tau_last,
                    s_last, i_last, c_last);
        double tau_hat = 0.0, i_hat = 0.0;
        if (sirw_trajectory_peak(traj, &tau_hat, &i_hat) != 0) {
            std::printf("infected peak  tau = %.4f  I = %.6f\n", tau_hat, i_hat);
        }
        double tau_qss = 0.0;
        if (sirw_trajectory_qss(traj, &tau_qss) != 0) {
            std::printf("qss reached    tau = %.4f\n", tau_qss);
        }
        const size_t waves = sirw_trajectory_wave_count(traj);
        for (size_t k = 0; k < waves; ++k) {
            double wt = 0.0, wp = 0.0;
            sirw_trajectory_wave(traj, k, &wt, &wp);
            std::printf("renewed wave   tau = %.4f  peak I = %.6f\n", wt, wp);
        }
        if (!sim_csv.empty() && st == SIRW_OK) st = sirw_trajectory_write_csv(traj, sim_csv.c_str());
        if (!sim_json.empty() && st == SIRW_OK) {
            st = sirw_trajectory_write_json(traj, sim_json.c_str());
        }
        sirw_trajectory_destroy(traj);
        return st == SIRW_OK ? kExitOk : fail(st);
    }

    if (final_size_cmd->parsed()) {
        if (fs_beta > 0.0 && fs_gamma > 0.0) {
            double tau = 0.0;
            const sirw_status st = sirw_nondimensionalize(fs_beta, fs_gamma, 0.0, &fs_r, &tau);
            if (st != SIRW_OK) return fail(st);
        }
        double s_inf = 0.0, s_star = 0.0;
        sirw_status st = sirw_final_size(fs_r, fs_s0, fs_i0, &s_inf);
        if (st != SIRW_OK) return fail(st);
        st = sirw_herd_immunity_threshold(fs_r, &s_star);
        if (st != SIRW_OK) return fail(st);
        std::printf("S_inf = %.6f\n", s_inf);
        std::printf("S_star = %.6f\n", s_star);
        return kExitOk;
    }

    if (goldilocks->parsed()) {
        const sirw_sim_options opts = to_options(g_flags);
        double r_g = 0.0;
        const sirw_status st = sirw_goldilocks_r(g_r0, g_eps, g_tau_s, g_tol, &opts, &r_g);
        if (st != SIRW_OK) return fail(st);
        std::printf("R_g = %.6f\n", r_g);
        return kExitOk;
    }

    if (classify->parsed()) {
        const sirw_sim_options opts = to_options(c_flags);
        sirw_policy policy{c_tau_s, c_tau_f, c_rs, c_r0};
        if (c_goldilocks) {
            if (c_multiplier > 0.0) {
                const sirw_status st = sirw_quasi_optimal_policy(c_r0, c_eps, c_tau_s,
                                                                 c_multiplier, &opts, &policy);
                if (st != SIRW_OK) return fail(st);
            } else {
                const sirw_status st =
                    sirw_goldilocks_r(c_r0, c_eps, c_tau_s, 1e-6, &opts, &policy.r_s);
                if (st != SIRW_OK) return fail(st);
            }
        }
        sirw_scenario_report report;
        const sirw_status st = sirw_classify_scenario(&policy, c_eps, &opts, &report);
        if (st != SIRW_OK) return fail(st);
        std::printf("policy         tau_s = %.4f  tau_f = %.4f  r_s = %.6f  r0 = %.4f\n",
                    policy.tau_s, policy.tau_f, policy.r_s, policy.r0);
        print_report(report);
        if (!c_out.empty()) {
            FILE* f = std::fopen(c_out.c_str(), "wb");
            if (f == nullptr) {
                std::fprintf(stderr, "error: cannot write %s\n", c_out.c_str());
                return kExitValidation;
            }
            std::fprintf(f,
                         "{\n  \"policy\": {\"tau_s\": %.17g, \"tau_f\": %.17g, \"r_s\": %.17g, "
                         "\"r0\": %.17g},\n  \"scenario\": \"%s\",\n  \"s_at_tf\": %.17g,\n"
                         "  \"i_at_tf\": %.17g,\n  \"s_infinity\": %.17g,\n  \"s_star\": %.17g,\n"
                         "  \"tail_s\": %.17g,\n  \"second_wave\": ",
                         policy.tau_s, policy.tau_f, policy.r_s, policy.r0,
                         sirw_scenario_class_name(report.scenario_class), report.s_at_tf,
                         report.i_at_tf, report.s_infinity, report.s_star, report.tail_s);
            if (report.has_second_wave != 0) {
                std::fprintf(f, "{\"tau\": %.17g, \"peak\": %.17g}\n}\n", report.second_wave_tau,
                             report.second_wave_peak);
            } else {
                std::fprintf(f, "null\n}\n");
            }
            std::fclose(f);
        }
        return kExitOk;
    }

    if (optimize->parsed()) {
        const sirw_sim_options opts = to_options(o_flags);
        sirw_policy policy;
        sirw_status st = sirw_quasi_optimal_policy(o_r0, o_eps, o_tau_s, o_multiplier, &opts,
                                                   &policy);
        if (st != SIRW_OK) return fail(st);
        std::printf("policy         tau_s = %.4f  tau_f = %.4f  r_s = %.6f  r0 = %.4f\n",
                    policy.tau_s, policy.tau_f, policy.r_s, policy.r0);
        sirw_scenario_report report;
        st = sirw_classify_scenario(&policy, o_eps, &opts, &report);
        if (st != SIRW_OK) return fail(st);
        print_report(report);
        return kExitOk;
    }

    if (portrait->parsed()) {
        const sirw_sim_options opts = to_options(p_flags);
        const sirw_status st =
            sirw_phase_portrait_write_csv(p_r, p_starts, p_tau_end, &opts, p_out.c_str());
        if (st != SIRW_OK) return fail(st);
        std::printf("wrote %s\n", p_out.c_str());
        return kExitOk;
    }

    if (curves->parsed()) {
        const sirw_status st = sirw_level_curves_write_csv(
            lc_r, lc_levels.data(), static_cast<int>(lc_levels.size()), lc_points,
            lc_out.c_str());
        if (st != SIRW_OK) return fail(st);
        std::printf("wrote %s\n", lc_out.c_str());
        return kExitOk;
    }

    if (reproduce->parsed()) {
        const sirw_sim_options opts = to_options(r_flags);
        sirw_reference_row rows[32];
        int count = 0, all_pass = 0;
        const sirw_status st = sirw_reference_suite(&opts, rows, 32, &count, &all_pass);
        if (st != SIRW_OK) return fail(st);
        std::printf("%-44s %12s %12s %10s %s\n", "scenario", "published", "computed", "tol",
                    "status");
        for (int k = 0; k < count; ++k) {
            std::printf("%-44s %12.4f %12.4f %10.4f %s\n", rows[k].name, rows[k].expected,
                        rows[k].actual, rows[k].tolerance, rows[k].pass != 0 ? "ok" : "FAIL");
        }
        if (all_pass == 0) {
            std::fprintf(stderr, "error: some scenarios missed their published values\n");
            return kExitNumeric;
        }
        return kExitOk;
    }

    return kExitValidation;
}
