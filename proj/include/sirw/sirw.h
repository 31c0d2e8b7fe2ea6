/*
 * sirw -- SIR epidemic toolkit with Lambert-W final sizes and single-interval
 * social-distancing analysis.
 *
 * C interface of the shared library. All entry points are thread safe; the
 * last-error message is thread local. Functions returning sirw_status write
 * their results through out-pointers and return SIRW_OK on success.
 */
#ifndef SIRW_H
#define SIRW_H

#include <stddef.h>

#if defined(_WIN32)
#  define SIRW_API __declspec(dllexport)
#else
#  define SIRW_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sirw_status {
    SIRW_OK = 0,
    SIRW_ERR_DOMAIN = 1,      /* argument outside mathematical domain */
    SIRW_ERR_INVALID = 2,     /* invalid argument / precondition violation */
    SIRW_ERR_STEP = 3,        /* adaptive step size underflow */
    SIRW_ERR_NO_QSS = 4,      /* quasi steady state not reached within cap */
    SIRW_ERR_NO_SOLUTION = 5, /* root bracketing failed */
    SIRW_ERR_EMPTY_CURVE = 6, /* level set unattainable */
    SIRW_ERR_PARSE = 7,       /* malformed configuration document */
    SIRW_ERR_VALIDATION = 8,  /* config violates an invariant */
    SIRW_ERR_IO = 9,          /* file read/write failure */
    SIRW_ERR_NUMERIC = 10,    /* iteration failed to converge */
    SIRW_ERR_NULL = 11,       /* required pointer was NULL */
    SIRW_ERR_UNKNOWN = 12
} sirw_status;

/* Message describing the most recent failure on this thread. */
SIRW_API const char* sirw_last_error(void);
SIRW_API const char* sirw_version(void);

/* ---- simulation options ---------------------------------------------- */

typedef struct sirw_sim_options {
    double rel_tol;              /* default 1e-9 */
    double abs_tol;              /* default 1e-12 */
    double max_step;             /* default 0.5 */
    double i_qss_threshold;      /* infected fraction treated as zero, default 1e-3 */
    double qss_band;             /* |s(tau_f) - S*| band for quasi optimal, default 0.01 */
    double post_release_horizon; /* simulated span past tau_f, default 400 */
} sirw_sim_options;

SIRW_API void sirw_sim_options_init(sirw_sim_options* opts);

/* ---- scalar kernels --------------------------------------------------- */

/* Principal branch of the Lambert W function on [-1/e, inf). */
SIRW_API sirw_status sirw_lambert_w0(double z, double* w);

/* S* = min{1, 1/r}. */
SIRW_API sirw_status sirw_herd_immunity_threshold(double r, double* s_star);

/* Limiting susceptible fraction from (s0, i0) under constant r. */
SIRW_API sirw_status sirw_final_size(double r, double s0, double i0, double* s_inf);

/* Constrained maximum of the final size over {s in [0,1], i >= delta}. */
SIRW_API sirw_status sirw_final_size_optimum(double r, double delta, double* s_op, double* i_op,
                                             double* s_inf_op);

/* r = beta/gamma and tau = t*gamma. */
SIRW_API sirw_status sirw_nondimensionalize(double beta, double gamma, double t, double* r,
                                            double* tau);

/* V(s, i) = s - s_bar - s_bar ln(s/s_bar) + i, and its flow derivative. */
SIRW_API sirw_status sirw_lyapunov_v(double s, double i, double s_bar, double* v);
SIRW_API sirw_status sirw_lyapunov_vdot(double i, double s_bar, double r, double* vdot);

/* *stable = 1 when s_bar <= S*(r), else 0. */
SIRW_API sirw_status sirw_equilibrium_class(double s_bar, double r, int* stable);

/* ---- reproduction schedules ------------------------------------------- */

typedef struct sirw_schedule sirw_schedule;

SIRW_API sirw_schedule* sirw_schedule_create(double r0);
SIRW_API sirw_status sirw_schedule_add_segment(sirw_schedule* sched, double tau_start, double r);
SIRW_API void sirw_schedule_destroy(sirw_schedule* sched);

/* ---- trajectories ------------------------------------------------------ */

typedef struct sirw_trajectory sirw_trajectory;

SIRW_API sirw_status sirw_simulate(double s0, double i0, double c0, const sirw_schedule* sched,
                                   double tau_end, const sirw_sim_options* opts,
                                   sirw_trajectory** out);

SIRW_API size_t sirw_trajectory_size(const sirw_trajectory* traj);
SIRW_API sirw_status sirw_trajectory_sample(const sirw_trajectory* traj, size_t index,
                                            double* tau, double* s, double* i, double* c,
                                            double* r);
SIRW_API sirw_status sirw_trajectory_state_at(const sirw_trajectory* traj, double tau, double* s,
                                              double* i, double* c);

/* Event accessors return 1 when the event exists. */
SIRW_API int sirw_trajectory_peak(const sirw_trajectory* traj, double* tau_hat, double* i_hat);
SIRW_API int sirw_trajectory_qss(const sirw_trajectory* traj, double* tau_qss);
SIRW_API size_t sirw_trajectory_wave_count(const sirw_trajectory* traj);
SIRW_API sirw_status sirw_trajectory_wave(const sirw_trajectory* traj, size_t index, double* tau,
                                          double* peak_i);

SIRW_API sirw_status sirw_trajectory_write_csv(const sirw_trajectory* traj, const char* path);
SIRW_API sirw_status sirw_trajectory_write_json(const sirw_trajectory* traj, const char* path);
SIRW_API void sirw_trajectory_destroy(sirw_trajectory* traj);

/* Time to quasi steady state under constant r from (s0, i0, c0). */
SIRW_API sirw_status sirw_qss_time(double r, double s0, double i0, double c0,
                                   const sirw_sim_options* opts, double* tau_qss);

/* ---- single-interval policies ------------------------------------------ */

typedef struct sirw_policy {
    double tau_s;
    double tau_f;
    double r_s;
    double r0;
} sirw_policy;

typedef enum sirw_scenario_class {
    SIRW_SCENARIO_QUASI_OPTIMAL = 0,
    SIRW_SCENARIO_SOFT_LONG_TERM = 1,
    SIRW_SCENARIO_STRONG_LONG_TERM = 2,
    SIRW_SCENARIO_SHORT_TERM = 3
} sirw_scenario_class;

SIRW_API const char* sirw_scenario_class_name(int scenario_class);

typedef struct sirw_scenario_report {
    int scenario_class;
    double s_at_tf;
    double i_at_tf;
    double s_infinity;
    double s_star;
    double tail_s;
    int has_second_wave;
    double second_wave_tau;
    double second_wave_peak;
} sirw_scenario_report;

/* Distancing level whose final size from the tau_s state equals S*(r0). */
SIRW_API sirw_status sirw_goldilocks_r(double r0, double epsilon, double tau_s, double tol,
                                       const sirw_sim_options* opts, double* r_g);

/* Goldilocks policy held for qss_multiplier infected-peak times. */
SIRW_API sirw_status sirw_quasi_optimal_policy(double r0, double epsilon, double tau_s,
                                               double qss_multiplier,
                                               const sirw_sim_options* opts, sirw_policy* out);

SIRW_API sirw_status sirw_classify_scenario(const sirw_policy* policy, double epsilon,
                                            const sirw_sim_options* opts,
                                            sirw_scenario_report* out);

SIRW_API sirw_status sirw_upper_bound_check(const sirw_policy* policy, double epsilon,
                                            const sirw_sim_options* opts, double* s_infinity,
                                            double* s_star, double* gap);

/* ---- level sets and phase portraits ------------------------------------ */

/* Fills up to capacity points of {S*(r) - S_inf(r, s, i) = level}; *count
 * receives the number written. */
SIRW_API sirw_status sirw_level_curve(double r, double level, int capacity, double* s, double* i,
                                      int* count);

/* CSV with header "curve,s,i"; one curve id per level. */
SIRW_API sirw_status sirw_level_curves_write_csv(double r, const double* levels, int n_levels,
                                                 int points_per_curve, const char* path);

/* CSV with header "curve,tau,S,I,C"; starts evenly spaced on the s+i = 1 edge. */
SIRW_API sirw_status sirw_phase_portrait_write_csv(double r, int n_starts, double tau_end,
                                                   const sirw_sim_options* opts,
                                                   const char* path);

/* Max drift of S_inf(r, s, i) across trajectory samples within [tau_lo, tau_hi]. */
SIRW_API sirw_status sirw_sinfinity_drift(const sirw_trajectory* traj, double r, double tau_lo,
                                          double tau_hi, double* drift);

/* ---- scenario configs --------------------------------------------------- */

/* Runs a JSON scenario config end to end (simulate, classify, export).
 * Outputs with relative paths land in output_dir (NULL: $SIRW_OUT_DIR or ".").
 * report may be NULL for plain simulations or when not wanted; digest_hex
 * (capacity >= 17) receives a deterministic run digest. */
SIRW_API sirw_status sirw_run_scenario_file(const char* config_path, const char* output_dir,
                                            sirw_scenario_report* report, int* has_report,
                                            char* digest_hex, size_t digest_cap);
SIRW_API sirw_status sirw_run_scenario_json(const char* config_json, const char* output_dir,
                                            sirw_scenario_report* report, int* has_report,
                                            char* digest_hex, size_t digest_cap);

/* ---- published-value comparison table ----------------------------------- */

typedef struct sirw_reference_row {
    char name[64];
    double expected;
    double actual;
    double tolerance;
    int pass;
} sirw_reference_row;

/* Re-runs the bundled benchmark scenarios and fills up to capacity rows;
 * *count receives the number written, *all_pass whether every row passed. */
SIRW_API sirw_status sirw_reference_suite(const sirw_sim_options* opts, sirw_reference_row* rows,
                                          int capacity, int* count, int* all_pass);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SIRW_H */
