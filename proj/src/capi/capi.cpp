#include "retire/retire.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "core/gsolve.hpp"
#include "core/model.hpp"
#include "core/sde.hpp"
#include "core/strategies.hpp"
#include "core/unitdiff.hpp"

struct retire_model {
    retire::ModelParams params;
};
struct retire_gfunction {
    std::shared_ptr<const retire::GFunction> g;
};
struct retire_strategy {
    retire::Strategy strategy;
};
struct retire_sim_result {
    retire::SimResult result;
};
struct retire_transform {
    retire::UnitTransform transform;
};

namespace {

thread_local std::string t_last_error;

retire_status fail(retire_status status, const char* message) {
    t_last_error = message;
    return status;
}

retire_status map_code(retire::ErrorCode code) {
    using retire::ErrorCode;
    switch (code) {
        case ErrorCode::Domain: return RETIRE_ERR_DOMAIN;
        case ErrorCode::UnsupportedRegime: return RETIRE_ERR_UNSUPPORTED_REGIME;
        case ErrorCode::UnsupportedControl: return RETIRE_ERR_UNSUPPORTED_CONTROL;
        case ErrorCode::SolverFailure: return RETIRE_ERR_SOLVER_FAILURE;
        case ErrorCode::SimulationDegenerate: return RETIRE_ERR_SIM_DEGENERATE;
        case ErrorCode::Unattainable: return RETIRE_ERR_UNATTAINABLE;
        case ErrorCode::Parse: return RETIRE_ERR_PARSE;
        case ErrorCode::Io: return RETIRE_ERR_IO;
    }
    return RETIRE_ERR_INTERNAL;
}

template <class Fn>
retire_status guard(Fn&& fn) {
    try {
        fn();
        return RETIRE_OK;
    } catch (const retire::Error& e) {
        return fail(map_code(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(RETIRE_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(RETIRE_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(RETIRE_ERR_INTERNAL, "unknown failure");
    }
}

retire_status require(bool ok, const char* message) {
    return ok ? RETIRE_OK : fail(RETIRE_ERR_INVALID_ARGUMENT, message);
}

retire::SimConfig to_core(const retire_sim_config& c, const retire_strategy* strategy) {
    retire::SimConfig out;
    out.dt = c.dt;
    out.paths = c.paths;
    out.seed = c.seed;
    out.t_max = c.t_max;
    out.threads = c.threads;
    out.bridge_crossing = c.bridge_crossing != 0;
    switch (c.clamp_policy) {
        case RETIRE_CLAMP_SOFT_REFLECT: out.policy = retire::ClampPolicy::SoftReflect; break;
        case RETIRE_CLAMP_RUIN: out.policy = retire::ClampPolicy::Ruin; break;
        case RETIRE_CLAMP_AUTO:
            out.policy = strategy ? strategy->strategy.default_policy()
                                  : retire::ClampPolicy::SoftReflect;
            break;
    }
    return out;
}

retire_moment_report to_c(const retire::MomentReport& m) {
    return {m.mean,    m.variance,    m.third_central, m.fourth_central, m.se_mean,
            m.se_variance, m.se_third, m.se_fourth,     m.samples};
}

}  // namespace

extern "C" {

const char* retire_version(void) { return "0.1.0"; }

const char* retire_last_error(void) { return t_last_error.c_str(); }

/* --- model ---------------------------------------------------------------- */

retire_status retire_model_create(double A, double alpha, double M, retire_model** out) {
    if (auto s = require(out != nullptr, "model_create: out is null")) return s;
    return guard([&] { *out = new retire_model{retire::ModelParams(A, alpha, M)}; });
}

void retire_model_free(retire_model* model) { delete model; }

retire_status retire_model_regime(const retire_model* model, retire_regime* out) {
    if (auto s = require(model && out, "model_regime: null argument")) return s;
    *out = static_cast<retire_regime>(model->params.regime());
    return RETIRE_OK;
}

retire_status retire_model_params(const retire_model* model, double* A, double* alpha,
                                  double* M) {
    if (auto s = require(model != nullptr, "model_params: null model")) return s;
    if (A) *A = model->params.A();
    if (alpha) *alpha = model->params.alpha();
    if (M) *M = model->params.M();
    return RETIRE_OK;
}

/* --- g, value, control ----------------------------------------------------- */

retire_status retire_h_eval(double y, double* out) {
    if (auto s = require(out != nullptr, "h_eval: out is null")) return s;
    return guard([&] { *out = retire::h_eval(y); });
}

retire_status retire_solve_g(const retire_model* model, double x, double tol, double* out) {
    if (auto s = require(model && out, "solve_g: null argument")) return s;
    return guard([&] { *out = retire::solve_g(model->params, x, tol); });
}

retire_status retire_g_derivative(const retire_model* model, double x, double* out) {
    if (auto s = require(model && out, "g_derivative: null argument")) return s;
    return guard([&] { *out = retire::g_derivative(model->params, x); });
}

retire_status retire_value(const retire_model* model, double x, double tol, double* out) {
    if (auto s = require(model && out, "value: null argument")) return s;
    return guard([&] { *out = retire::value(model->params, x, tol); });
}

retire_status retire_control(const retire_model* model, double x, double* out) {
    if (auto s = require(model && out, "control: null argument")) return s;
    return guard([&] { *out = retire::control(model->params, x); });
}

retire_status retire_control_asymptotic_small(double x, double* out) {
    if (auto s = require(out != nullptr, "control_asymptotic_small: out is null")) return s;
    return guard([&] { *out = retire::control_asymptotic_small(x); });
}

retire_status retire_g_approx_large(double x, double* out) {
    if (auto s = require(out != nullptr, "g_approx_large: out is null")) return s;
    return guard([&] { *out = retire::g_approx_large(x); });
}

retire_status retire_f0_approx_large(double x, double* out) {
    if (auto s = require(out != nullptr, "f0_approx_large: out is null")) return s;
    return guard([&] { *out = retire::f0_approx_large(x); });
}

retire_status retire_submartingale_drift(const retire_model* model, double x, double f,
                                         double* out) {
    if (auto s = require(model && out, "submartingale_drift: null argument")) return s;
    return guard([&] { *out = retire::submartingale_drift(model->params, x, f); });
}

retire_status retire_value_scaling_map(double x, double A, double M, double* x_scaled,
                                       double* m_scaled, double* multiplier) {
    if (auto s = require(x_scaled && m_scaled && multiplier, "scaling_map: null out pointer"))
        return s;
    return guard([&] {
        const auto map = retire::value_scaling_map(x, A, M);
        *x_scaled = map.x_scaled;
        *m_scaled = map.m_scaled;
        *multiplier = map.multiplier;
    });
}

/* --- tabulated g ------------------------------------------------------------ */

retire_status retire_gfunction_build(const retire_model* model, double x_max, int64_t n_nodes,
                                     double tol, retire_gfunction** out) {
    if (auto s = require(model && out, "gfunction_build: null argument")) return s;
    return guard([&] {
        if (n_nodes < 16) throw retire::DomainError("gfunction_build: need at least 16 nodes");
        auto g = std::make_shared<const retire::GFunction>(retire::GFunction::build(
            model->params, x_max, static_cast<std::size_t>(n_nodes), tol));
        *out = new retire_gfunction{std::move(g)};
    });
}

void retire_gfunction_free(retire_gfunction* gf) { delete gf; }

retire_status retire_gfunction_size(const retire_gfunction* gf, int64_t* out) {
    if (auto s = require(gf && out, "gfunction_size: null argument")) return s;
    *out = static_cast<int64_t>(gf->g->grid().size());
    return RETIRE_OK;
}

retire_status retire_gfunction_node(const retire_gfunction* gf, int64_t i, double* x, double* g,
                                    double* v) {
    if (auto s = require(gf != nullptr, "gfunction_node: null handle")) return s;
    const auto grid = gf->g->grid();
    if (i < 0 || static_cast<std::size_t>(i) >= grid.size())
        return fail(RETIRE_ERR_DOMAIN, "gfunction_node: index out of range");
    if (x) *x = grid[static_cast<std::size_t>(i)];
    if (g) *g = gf->g->values()[static_cast<std::size_t>(i)];
    if (v) *v = gf->g->value_integrals()[static_cast<std::size_t>(i)];
    return RETIRE_OK;
}

retire_status retire_gfunction_eval(const retire_gfunction* gf, double x, double* out) {
    if (auto s = require(gf && out, "gfunction_eval: null argument")) return s;
    return guard([&] { *out = gf->g->eval(x); });
}

retire_status retire_gfunction_control(const retire_gfunction* gf, double x, double* out) {
    if (auto s = require(gf && out, "gfunction_control: null argument")) return s;
    return guard([&] { *out = gf->g->control_at(x); });
}

retire_status retire_gfunction_write_csv(const retire_gfunction* gf, const char* path) {
    if (auto s = require(gf && path, "gfunction_write_csv: null argument")) return s;
    return guard([&] { gf->g->write_csv(path); });
}

retire_status retire_gfunction_write_json(const retire_gfunction* gf, const char* path) {
    if (auto s = require(gf && path, "gfunction_write_json: null argument")) return s;
    return guard([&] { gf->g->write_json(path); });
}

retire_status retire_gfunction_read_csv(const char* path, retire_gfunction** out) {
    if (auto s = require(path && out, "gfunction_read_csv: null argument")) return s;
    return guard([&] {
        *out = new retire_gfunction{
            std::make_shared<const retire::GFunction>(retire::GFunction::read_csv(path))};
    });
}

retire_status retire_gfunction_read_json(const char* path, retire_gfunction** out) {
    if (auto s = require(path && out, "gfunction_read_json: null argument")) return s;
    return guard([&] {
        *out = new retire_gfunction{
            std::make_shared<const retire::GFunction>(retire::GFunction::read_json(path))};
    });
}

/* --- strategies -------------------------------------------------------------- */

retire_status retire_strategy_zero(retire_strategy** out) {
    if (auto s = require(out != nullptr, "strategy_zero: out is null")) return s;
    return guard([&] { *out = new retire_strategy{retire::Strategy::zero()}; });
}

retire_status retire_strategy_constant(double c, retire_strategy** out) {
    if (auto s = require(out != nullptr, "strategy_constant: out is null")) return s;
    return guard([&] { *out = new retire_strategy{retire::Strategy::constant(c)}; });
}

retire_status retire_strategy_threshold(double eps, double c, retire_strategy** out) {
    if (auto s = require(out != nullptr, "strategy_threshold: out is null")) return s;
    return guard([&] { *out = new retire_strategy{retire::Strategy::threshold(eps, c)}; });
}

retire_status retire_strategy_optimal(const retire_gfunction* gf, retire_strategy** out) {
    if (auto s = require(gf && out, "strategy_optimal: null argument")) return s;
    return guard([&] { *out = new retire_strategy{retire::Strategy::optimal(gf->g)}; });
}

retire_status retire_strategy_parse(const char* text, const retire_gfunction* gf,
                                    retire_strategy** out) {
    if (auto s = require(text && out, "strategy_parse: null argument")) return s;
    return guard([&] {
        *out = new retire_strategy{retire::Strategy::parse(text, gf ? gf->g : nullptr)};
    });
}

retire_status retire_strategy_format(const retire_strategy* strategy, char* buf,
                                     size_t buf_size) {
    if (auto s = require(strategy && buf && buf_size > 0, "strategy_format: null argument"))
        return s;
    return guard([&] {
        const std::string text = strategy->strategy.format();
        if (text.size() + 1 > buf_size)
            throw retire::DomainError("strategy_format: buffer too small");
        std::memcpy(buf, text.c_str(), text.size() + 1);
    });
}

retire_status retire_strategy_evaluate(const retire_strategy* strategy, double x, double* out) {
    if (auto s = require(strategy && out, "strategy_evaluate: null argument")) return s;
    return guard([&] { *out = strategy->strategy.evaluate(x); });
}

void retire_strategy_free(retire_strategy* strategy) { delete strategy; }

retire_status retire_expected_time_zero(double x, double M, double* out) {
    if (auto s = require(out != nullptr, "expected_time_zero: out is null")) return s;
    return guard([&] { *out = retire::expected_time_zero(x, M); });
}

retire_status retire_expected_time_threshold(double x, double eps, double c, double alpha,
                                             double M, double* out) {
    if (auto s = require(out != nullptr, "expected_time_threshold: out is null")) return s;
    return guard([&] { *out = retire::expected_time_threshold(x, eps, c, alpha, M); });
}

retire_status retire_threshold_constants(double eps, double c, double alpha, double M,
                                         double* a_prime, double* d, double* k) {
    if (auto s = require(a_prime && d && k, "threshold_constants: null out pointer")) return s;
    return guard([&] {
        const auto tc = retire::threshold_constants(eps, c, alpha, M);
        *a_prime = tc.a_prime;
        *d = tc.d;
        *k = tc.k;
    });
}

retire_status retire_fast_retirement_params(double alpha, double target, double M, double* eps,
                                            double* c, double* achieved) {
    if (auto s = require(eps && c && achieved, "fast_retirement_params: null out pointer"))
        return s;
    return guard([&] {
        const auto fr = retire::fast_retirement_params(alpha, target, M);
        *eps = fr.eps;
        *c = fr.c;
        *achieved = fr.expected_time;
    });
}

/* --- Monte Carlo -------------------------------------------------------------- */

void retire_sim_config_init(retire_sim_config* config) {
    if (!config) return;
    config->dt = 1e-3;
    config->paths = 10000;
    config->seed = 1;
    config->t_max = 0.0;
    config->clamp_policy = RETIRE_CLAMP_AUTO;
    config->threads = 0;
    config->bridge_crossing = 1;
}

retire_status retire_simulate(const retire_model* model, const retire_strategy* strategy,
                              double x0, const retire_sim_config* config,
                              retire_sim_result** out) {
    if (auto s = require(model && strategy && config && out, "simulate: null argument")) return s;
    return guard([&] {
        *out = new retire_sim_result{retire::estimate_hitting_time(
            model->params, strategy->strategy, x0, to_core(*config, strategy))};
    });
}

retire_status retire_simulate_path(const retire_model* model, const retire_strategy* strategy,
                                   double x0, const retire_sim_config* config,
                                   uint64_t path_index, retire_path_outcome* outcome, double* tau,
                                   uint64_t* clamped_steps) {
    if (auto s = require(model && strategy && config, "simulate_path: null argument")) return s;
    return guard([&] {
        const auto r = retire::simulate_path(model->params, strategy->strategy, x0,
                                             to_core(*config, strategy), path_index);
        if (outcome) *outcome = static_cast<retire_path_outcome>(r.outcome);
        if (tau) *tau = r.tau;
        if (clamped_steps) *clamped_steps = r.clamped_steps;
    });
}

void retire_sim_result_free(retire_sim_result* result) { delete result; }

retire_status retire_sim_result_stats(const retire_sim_result* result, double* mean,
                                      double* std_error) {
    if (auto s = require(result != nullptr, "sim_result_stats: null handle")) return s;
    if (mean) *mean = result->result.mean;
    if (std_error) *std_error = result->result.std_error;
    return RETIRE_OK;
}

retire_status retire_sim_result_counts(const retire_sim_result* result, uint64_t* paths,
                                       uint64_t* hits, uint64_t* censored, uint64_t* ruined,
                                       uint64_t* clamped_steps) {
    if (auto s = require(result != nullptr, "sim_result_counts: null handle")) return s;
    if (paths) *paths = result->result.paths;
    if (hits) *hits = result->result.hit_times.size();
    if (censored) *censored = result->result.censored;
    if (ruined) *ruined = result->result.ruined;
    if (clamped_steps) *clamped_steps = result->result.clamped_steps;
    return RETIRE_OK;
}

retire_status retire_sim_result_hit_time(const retire_sim_result* result, uint64_t i,
                                         double* out) {
    if (auto s = require(result && out, "sim_result_hit_time: null argument")) return s;
    if (i >= result->result.hit_times.size())
        return fail(RETIRE_ERR_DOMAIN, "sim_result_hit_time: index out of range");
    *out = result->result.hit_times[i];
    return RETIRE_OK;
}

retire_status retire_sim_result_write_json(const retire_sim_result* result, const char* path) {
    if (auto s = require(result && path, "sim_result_write_json: null argument")) return s;
    return guard([&] { result->result.write_json(path); });
}

retire_status retire_sim_result_write_hit_times_csv(const retire_sim_result* result,
                                                    const char* path) {
    if (auto s = require(result && path, "sim_result_write_hit_times_csv: null argument"))
        return s;
    return guard([&] { result->result.write_hit_times_csv(path); });
}

retire_status retire_w_squared_moments(double t, const retire_sim_config* config,
                                       retire_w2_report* out) {
    if (auto s = require(config && out, "w_squared_moments: null argument")) return s;
    return guard([&] {
        const auto rep = retire::w_squared_consistency(t, to_core(*config, nullptr));
        out->t = rep.t;
        out->euler = to_c(rep.euler);
        out->exact = to_c(rep.exact);
    });
}

/* --- unit-diffusion transform --------------------------------------------------- */

retire_status retire_transform_build(retire_state_fn a, retire_state_fn b, retire_state_fn bprime,
                                     void* ctx, double lo, double hi, double anchor,
                                     double anchor_image, double tol, retire_transform** out) {
    if (auto s = require(a && b && out, "transform_build: null argument")) return s;
    return guard([&] {
        retire::DiffusionSpec spec;
        spec.drift = [a, ctx](double y) { return a(y, ctx); };
        spec.diffusion = [b, ctx](double y) { return b(y, ctx); };
        if (bprime) spec.diffusion_prime = [bprime, ctx](double y) { return bprime(y, ctx); };
        spec.lo = lo;
        spec.hi = hi;
        *out = new retire_transform{retire::build_transform(spec, anchor, anchor_image, tol)};
    });
}

void retire_transform_free(retire_transform* transform) { delete transform; }

retire_status retire_transform_to_unit(const retire_transform* transform, double y, double* out) {
    if (auto s = require(transform && out, "transform_to_unit: null argument")) return s;
    return guard([&] { *out = transform->transform.to_unit(y); });
}

retire_status retire_transform_from_unit(const retire_transform* transform, double x,
                                         double* out) {
    if (auto s = require(transform && out, "transform_from_unit: null argument")) return s;
    return guard([&] { *out = transform->transform.from_unit(x); });
}

retire_status retire_transform_unit_drift(const retire_transform* transform, double x,
                                          double* out) {
    if (auto s = require(transform && out, "transform_unit_drift: null argument")) return s;
    return guard([&] { *out = transform->transform.unit_drift(x); });
}

retire_status retire_transform_range(const retire_transform* transform, double* unit_lo,
                                     double* unit_hi) {
    if (auto s = require(transform != nullptr, "transform_range: null handle")) return s;
    if (unit_lo) *unit_lo = transform->transform.unit_lo();
    if (unit_hi) *unit_hi = transform->transform.unit_hi();
    return RETIRE_OK;
}

retire_status retire_transform_write_csv(const retire_transform* transform, const char* path,
                                         int64_t n) {
    if (auto s = require(transform && path, "transform_write_csv: null argument")) return s;
    return guard([&] {
        if (n < 2) throw retire::DomainError("transform_write_csv: need at least 2 points");
        transform->transform.write_csv(path, static_cast<std::size_t>(n));
    });
}

retire_status retire_classify_sqrt_boundary(double c, retire_boundary_class* out) {
    if (auto s = require(out != nullptr, "classify_sqrt_boundary: out is null")) return s;
    return guard([&] {
        *out = static_cast<retire_boundary_class>(retire::classify_sqrt_boundary(c));
    });
}

retire_status retire_nonnegativity_certificate(const retire_gfunction* gf, double delta,
                                               retire_nonneg_report* out) {
    if (auto s = require(gf && out, "nonnegativity_certificate: null argument")) return s;
    return guard([&] {
        const auto rep = retire::nonnegativity_certificate(*gf->g, delta);
        out->delta = rep.delta;
        out->unit_lo = rep.unit_lo;
        out->unit_hi = rep.unit_hi;
        out->map_min = rep.map_min;
        out->map_max = rep.map_max;
        out->sqrt_coeff = rep.sqrt_coeff;
    });
}

}  // extern "C"
