/* retire — optimal retirement-investing toolkit, C API.
 *
 * The library solves the control problem of reaching a savings target M in
 * minimal expected time for the wealth diffusion
 *
 *     dX = (1 + f(X)) dt + A f(X)^alpha dW,
 *
 * exposes the auxiliary function g(x) = -V'(x), the value function V, the
 * optimal control f0, closed-form strategy evaluations, a reproducible
 * Monte Carlo hitting-time simulator, and the unit-diffusion change of
 * variables used to certify the soft reflection at 0.
 *
 * Every function returns a retire_status; values are delivered through out
 * parameters.  On failure retire_last_error() carries a thread-local message.
 * Objects are opaque handles released with the matching *_free function.
 * All handles are immutable after creation and safe for concurrent reads.
 */

#ifndef RETIRE_H
#define RETIRE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define RETIRE_API __declspec(dllexport)
#else
#define RETIRE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum retire_status {
    RETIRE_OK = 0,
    RETIRE_ERR_DOMAIN = 1,              /* argument outside its precondition */
    RETIRE_ERR_UNSUPPORTED_REGIME = 2,  /* operation undefined in this (A, alpha) regime */
    RETIRE_ERR_UNSUPPORTED_CONTROL = 3, /* f0 undefined (alpha = 1/2) */
    RETIRE_ERR_SOLVER_FAILURE = 4,      /* iteration budget exhausted */
    RETIRE_ERR_SIM_DEGENERATE = 5,      /* no path reached the target */
    RETIRE_ERR_UNATTAINABLE = 6,        /* search target out of reach */
    RETIRE_ERR_PARSE = 7,               /* malformed text input */
    RETIRE_ERR_IO = 8,                  /* file system failure */
    RETIRE_ERR_INVALID_ARGUMENT = 9,    /* null handle or out pointer */
    RETIRE_ERR_INTERNAL = 10
} retire_status;

typedef enum retire_regime {
    RETIRE_REGIME_CLASSIC = 0,        /* A = 1, alpha = 1 */
    RETIRE_REGIME_GENERAL_LINEAR = 1, /* alpha = 1, A != 1 */
    RETIRE_REGIME_POWER_REGULAR = 2,  /* 1/2 < alpha < 1 */
    RETIRE_REGIME_HALF_CRITICAL = 3,  /* alpha = 1/2 */
    RETIRE_REGIME_DEGENERATE = 4      /* alpha < 1/2 */
} retire_regime;

typedef enum retire_clamp_policy {
    RETIRE_CLAMP_SOFT_REFLECT = 0, /* X < 0 after a step clamps to 0 */
    RETIRE_CLAMP_RUIN = 1,         /* X < 0 ends the game, tau = +inf */
    RETIRE_CLAMP_AUTO = 2          /* ruin for constant strategies, soft-reflect otherwise */
} retire_clamp_policy;

typedef enum retire_boundary_class {
    RETIRE_BOUNDARY_NEVER_HITS_ZERO = 0,
    RETIRE_BOUNDARY_SOFT_REFLECTION = 1,
    RETIRE_BOUNDARY_UNDEFINED_AFTER_ZERO = 2
} retire_boundary_class;

typedef enum retire_path_outcome {
    RETIRE_PATH_HIT = 0,
    RETIRE_PATH_CENSORED = 1,
    RETIRE_PATH_RUINED = 2
} retire_path_outcome;

typedef struct retire_model retire_model;
typedef struct retire_gfunction retire_gfunction;
typedef struct retire_strategy retire_strategy;
typedef struct retire_sim_result retire_sim_result;
typedef struct retire_transform retire_transform;

RETIRE_API const char* retire_version(void);
/* Message for the most recent failing call on this thread; never NULL. */
RETIRE_API const char* retire_last_error(void);

/* --- model ---------------------------------------------------------------- */

RETIRE_API retire_status retire_model_create(double A, double alpha, double M,
                                             retire_model** out);
RETIRE_API void retire_model_free(retire_model* model);
RETIRE_API retire_status retire_model_regime(const retire_model* model, retire_regime* out);
RETIRE_API retire_status retire_model_params(const retire_model* model, double* A, double* alpha,
                                             double* M);

/* --- g, value, control ---------------------------------------------------- */

/* h(y) = 1/y + log y (y > 0). */
RETIRE_API retire_status retire_h_eval(double y, double* out);
/* Lower-branch solution g(x) in (0, 1]; residual of the defining equation < tol. */
RETIRE_API retire_status retire_solve_g(const retire_model* model, double x, double tol,
                                        double* out);
/* g'(x) from the ODE identity (x > 0). */
RETIRE_API retire_status retire_g_derivative(const retire_model* model, double x, double* out);
/* V(x) = int_x^M g, adaptive quadrature with absolute error < tol. */
RETIRE_API retire_status retire_value(const retire_model* model, double x, double tol,
                                      double* out);
/* Optimal control f0(x); RETIRE_ERR_UNSUPPORTED_CONTROL at alpha = 1/2. */
RETIRE_API retire_status retire_control(const retire_model* model, double x, double* out);
RETIRE_API retire_status retire_control_asymptotic_small(double x, double* out);
RETIRE_API retire_status retire_g_approx_large(double x, double* out);
RETIRE_API retire_status retire_f0_approx_large(double x, double* out);
/* Drift of V(X(t)) + t per unit time under action f; >= 0, zero at f = f0. */
RETIRE_API retire_status retire_submartingale_drift(const retire_model* model, double x, double f,
                                                    double* out);
/* alpha = 1 scaling map: V(x; A; M) = multiplier * V(x_scaled; A=1; m_scaled). */
RETIRE_API retire_status retire_value_scaling_map(double x, double A, double M, double* x_scaled,
                                                  double* m_scaled, double* multiplier);

/* --- tabulated g ----------------------------------------------------------- */

RETIRE_API retire_status retire_gfunction_build(const retire_model* model, double x_max,
                                                int64_t n_nodes, double tol,
                                                retire_gfunction** out);
RETIRE_API void retire_gfunction_free(retire_gfunction* gf);
RETIRE_API retire_status retire_gfunction_size(const retire_gfunction* gf, int64_t* out);
/* Node i: abscissa, tabulated g and accumulated value integral. */
RETIRE_API retire_status retire_gfunction_node(const retire_gfunction* gf, int64_t i, double* x,
                                               double* g, double* v);
/* Monotone-cubic interpolated g at x. */
RETIRE_API retire_status retire_gfunction_eval(const retire_gfunction* gf, double x, double* out);
/* f0 through the interpolated g. */
RETIRE_API retire_status retire_gfunction_control(const retire_gfunction* gf, double x,
                                                  double* out);
/* CSV columns x,g,g_prime,f0,V; JSON embeds params, grid, values, tolerances.
 * Both round-trip bit-exactly for the stored fields. */
RETIRE_API retire_status retire_gfunction_write_csv(const retire_gfunction* gf, const char* path);
RETIRE_API retire_status retire_gfunction_write_json(const retire_gfunction* gf,
                                                     const char* path);
RETIRE_API retire_status retire_gfunction_read_csv(const char* path, retire_gfunction** out);
RETIRE_API retire_status retire_gfunction_read_json(const char* path, retire_gfunction** out);

/* --- strategies ------------------------------------------------------------ */

RETIRE_API retire_status retire_strategy_zero(retire_strategy** out);
RETIRE_API retire_status retire_strategy_constant(double c, retire_strategy** out);
RETIRE_API retire_status retire_strategy_threshold(double eps, double c, retire_strategy** out);
/* The strategy keeps its own reference; the gfunction may be freed afterwards. */
RETIRE_API retire_status retire_strategy_optimal(const retire_gfunction* gf,
                                                 retire_strategy** out);
/* Text forms: "zero" | "const:C" | "threshold:EPS,C" | "optimal" (needs gf). */
RETIRE_API retire_status retire_strategy_parse(const char* text, const retire_gfunction* gf,
                                               retire_strategy** out);
RETIRE_API retire_status retire_strategy_format(const retire_strategy* strategy, char* buf,
                                                size_t buf_size);
RETIRE_API retire_status retire_strategy_evaluate(const retire_strategy* strategy, double x,
                                                  double* out);
RETIRE_API void retire_strategy_free(retire_strategy* strategy);

/* Closed forms (A = 1): pure saving takes M - x; the threshold strategy's
 * expected time is piecewise exponential with constants A', D, k. */
RETIRE_API retire_status retire_expected_time_zero(double x, double M, double* out);
RETIRE_API retire_status retire_expected_time_threshold(double x, double eps, double c,
                                                        double alpha, double M, double* out);
RETIRE_API retire_status retire_threshold_constants(double eps, double c, double alpha, double M,
                                                    double* a_prime, double* d, double* k);
/* Smallest c = 10^j (j = 1..12), eps = 1/(1+c), with expected time from 0 at
 * most target; RETIRE_ERR_UNATTAINABLE reports the best reached value. */
RETIRE_API retire_status retire_fast_retirement_params(double alpha, double target, double M,
                                                       double* eps, double* c, double* achieved);

/* --- Monte Carlo ------------------------------------------------------------ */

typedef struct retire_sim_config {
    double dt;
    uint64_t paths;
    uint64_t seed;
    double t_max;                     /* <= 0 selects 50 * M */
    retire_clamp_policy clamp_policy; /* AUTO resolves per strategy */
    uint32_t threads;                 /* 0 selects hardware concurrency */
    int bridge_crossing;              /* nonzero: Brownian-bridge within-step hit test,
                                         removing the O(sqrt(dt)) barrier bias */
} retire_sim_config;
RETIRE_API void retire_sim_config_init(retire_sim_config* config);

/* Identical (seed, config, strategy, params) give bit-identical results; the
 * per-path noise stream is a pure function of (seed, path_index, step). */
RETIRE_API retire_status retire_simulate(const retire_model* model,
                                         const retire_strategy* strategy, double x0,
                                         const retire_sim_config* config,
                                         retire_sim_result** out);
RETIRE_API retire_status retire_simulate_path(const retire_model* model,
                                              const retire_strategy* strategy, double x0,
                                              const retire_sim_config* config,
                                              uint64_t path_index, retire_path_outcome* outcome,
                                              double* tau, uint64_t* clamped_steps);
RETIRE_API void retire_sim_result_free(retire_sim_result* result);
RETIRE_API retire_status retire_sim_result_stats(const retire_sim_result* result, double* mean,
                                                 double* std_error);
RETIRE_API retire_status retire_sim_result_counts(const retire_sim_result* result, uint64_t* paths,
                                                  uint64_t* hits, uint64_t* censored,
                                                  uint64_t* ruined, uint64_t* clamped_steps);
RETIRE_API retire_status retire_sim_result_hit_time(const retire_sim_result* result, uint64_t i,
                                                    double* out);
RETIRE_API retire_status retire_sim_result_write_json(const retire_sim_result* result,
                                                      const char* path);
RETIRE_API retire_status retire_sim_result_write_hit_times_csv(const retire_sim_result* result,
                                                               const char* path);

/* First four sample moments (mean, variance, third/fourth central) with batch
 * standard errors, for the Euler scheme of dX = dt + 2 sqrt(max(X,0)) dW and
 * for directly sampled W^2(t).  Reference law: mean t, variance 2 t^2. */
typedef struct retire_moment_report {
    double mean, variance, third_central, fourth_central;
    double se_mean, se_variance, se_third, se_fourth;
    uint64_t samples;
} retire_moment_report;
typedef struct retire_w2_report {
    double t;
    retire_moment_report euler;
    retire_moment_report exact;
} retire_w2_report;
RETIRE_API retire_status retire_w_squared_moments(double t, const retire_sim_config* config,
                                                  retire_w2_report* out);

/* --- unit-diffusion transform ----------------------------------------------- */

typedef double (*retire_state_fn)(double y, void* ctx);

/* Builds the monotone map realizing dY = a(Y) dt + b(Y) dW as an image of a
 * unit diffusion; bprime may be NULL (central differences).  B(anchor) is
 * pinned to anchor_image. */
RETIRE_API retire_status retire_transform_build(retire_state_fn a, retire_state_fn b,
                                                retire_state_fn bprime, void* ctx, double lo,
                                                double hi, double anchor, double anchor_image,
                                                double tol, retire_transform** out);
RETIRE_API void retire_transform_free(retire_transform* transform);
RETIRE_API retire_status retire_transform_to_unit(const retire_transform* transform, double y,
                                                  double* out);
RETIRE_API retire_status retire_transform_from_unit(const retire_transform* transform, double x,
                                                    double* out);
RETIRE_API retire_status retire_transform_unit_drift(const retire_transform* transform, double x,
                                                     double* out);
RETIRE_API retire_status retire_transform_range(const retire_transform* transform,
                                                double* unit_lo, double* unit_hi);
RETIRE_API retire_status retire_transform_write_csv(const retire_transform* transform,
                                                    const char* path, int64_t n);

/* c < 2 never hits zero, c = 2 reflects softly, c > 2 undefined after zero. */
RETIRE_API retire_status retire_classify_sqrt_boundary(double c, retire_boundary_class* out);

typedef struct retire_nonneg_report {
    double delta;
    double unit_lo, unit_hi;
    double map_min, map_max;
    double sqrt_coeff;
} retire_nonneg_report;
/* Certifies the optimal-control diffusion stays nonnegative; refused when the
 * diffusion coefficient does not vanish at 0. */
RETIRE_API retire_status retire_nonnegativity_certificate(const retire_gfunction* gf,
                                                          double delta,
                                                          retire_nonneg_report* out);

#ifdef __cplusplus
}
#endif

#endif /* RETIRE_H */
