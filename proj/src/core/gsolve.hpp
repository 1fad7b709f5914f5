#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "core/model.hpp"

namespace retire {

inline constexpr double kDefaultSolverTol = 1e-12;
inline constexpr double kDefaultQuadTol = 1e-9;

// h(y) = 1/y + log y.  Strictly decreasing on (0,1], minimum value 1 at y = 1;
// the lower branch of its inverse defines g.
double h_eval(double y);

// Solves for g(x) = -V'(x) in (0,1].
//   classic / general linear:  1/g + log g = 1 + x/(2 A^2)
//   power regular:             int_g^1 (1-u)^(2a-1) u^(-2a) du = x (1-1/(2a))^(2a-1)/(A^2 a)
//   half critical:             g = exp(-2x/A^2)
// The residual of the defining equation is driven below tol.
double solve_g(const ModelParams& params, double x, double tol = kDefaultSolverTol);

// g'(x) from the ODE identity (never finite differences).
double g_derivative(const ModelParams& params, double x);

// The same identity expressed through an already-known g value in (0, 1).
double g_derivative_from_g(const ModelParams& params, double g);

// V(x) = int_x^M g(u) du by adaptive Simpson with absolute error < tol.
double value(const ModelParams& params, double x, double tol = kDefaultQuadTol);

// Optimal Markov control f0(x); defined for classic, general linear and power
// regular regimes.  f0(0) = 0 exactly.
double control(const ModelParams& params, double x);

// f0 expressed through an already-known g value (shared by the tabulated path).
double control_from_g(const ModelParams& params, double g);

// Small-x Taylor limit of the classic control, f0 ~ 2 sqrt(x).
double control_asymptotic_small(double x);

// Large-x approximations for the classic regime:
//   g(x)  ~ 1 / (1 + x/2 + log(1 + x/2))
//   f0(x) ~ x + 2 log(1 + x/2)
double g_approx_large(double x);
double f0_approx_large(double x);

// Drift per unit time of Y(t) = V(X(t)) + t under action f at state x:
//   -g(x)(1+f) + (A^2/2)(-g'(x)) f^(2 alpha) + 1
// Nonnegative for every f, zero exactly at f = f0(x).
double submartingale_drift(const ModelParams& params, double x, double f);

// alpha = 1 scaling: V(x; A; M) = A^2 V(x/A^2; A=1; M/A^2).
struct ScalingMap {
    double x_scaled;
    double m_scaled;
    double multiplier;
};
ScalingMap value_scaling_map(double x, double A, double M);

// Tabulated g on a geometric-then-uniform grid over [0, x_max], monotone cubic
// (PCHIP) interpolation between nodes.  Nodes store g and the accumulated
// value integral; derivatives and the control are recomputed from the ODE.
class GFunction {
public:
    static GFunction build(const ModelParams& params, double x_max, std::size_t n_nodes,
                           double solver_tol = kDefaultSolverTol,
                           double quad_tol = kDefaultQuadTol);

    const ModelParams& params() const noexcept { return params_; }
    std::span<const double> grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return g_; }
    std::span<const double> value_integrals() const noexcept { return v_; }
    double solver_tol() const noexcept { return solver_tol_; }
    double quad_tol() const noexcept { return quad_tol_; }
    double x_max() const noexcept { return grid_.back(); }

    // Interpolated g, clamped to the tabulated range outside [0, x_max].
    double eval(double x) const;
    // f0 through the interpolated g (simulator hot path).
    double control_at(double x) const;

    void write_csv(const std::string& path) const;
    void write_json(const std::string& path) const;
    static GFunction read_csv(const std::string& path);
    static GFunction read_json(const std::string& path);

    GFunction(ModelParams params, std::vector<double> grid, std::vector<double> g,
              std::vector<double> v, double solver_tol, double quad_tol);

private:
    void init_slopes();

    ModelParams params_;
    std::vector<double> grid_;
    std::vector<double> g_;
    std::vector<double> v_;
    std::vector<double> slope_;
    double solver_tol_;
    double quad_tol_;
};

}  // namespace retire
