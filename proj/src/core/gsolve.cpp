#include "core/gsolve.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "core/quadrature.hpp"
#include "core/rootfind.hpp"

#include "json.hpp"

namespace retire {

namespace {

// Right side coefficient of the power-regular integral equation,
// K = (1 - 1/(2a))^(2a-1) / (A^2 a).  The limits a -> 1 and a -> 1/2 recover
// 1/(2A^2) and 2/A^2.
double power_coeff(double alpha, double A) {
    return std::pow(1.0 - 1.0 / (2.0 * alpha), 2.0 * alpha - 1.0) / (A * A * alpha);
}

double power_integrand(double u, double alpha) {
    return std::pow(1.0 - u, 2.0 * alpha - 1.0) * std::pow(u, -2.0 * alpha);
}

// I(g) = int_g^1 (1-u)^(2a-1) u^(-2a) du; strictly decreasing in g, I(1) = 0.
double power_integral(double g, double alpha, double quad_tol) {
    if (g >= 1.0) return 0.0;
    return integrate([alpha](double u) { return power_integrand(u, alpha); }, g, 1.0, quad_tol);
}

// Lower-branch root of 1/g + log g = rhs on (0, 1].
double solve_classic_eq(double rhs, double tol) {
    if (rhs < 1.0) throw DomainError("right side below the minimum of 1/y + log y");
    if (rhs == 1.0) return 1.0;
    double lo = 0.5 / (rhs + std::log(rhs));
    double hi = 1.0 / rhs;
    auto f = [rhs](double g) { return 1.0 / g + std::log(g) - rhs; };
    auto df = [](double g) { return (g - 1.0) / (g * g); };
    return newton_bisect(f, df, lo, hi, tol).root;
}

double solve_power_eq(double x, double alpha, double A, double tol, double hint_hi) {
    const double target = power_coeff(alpha, A) * x;
    const double quad_tol = std::min(0.25 * tol, 1e-13) * std::max(1.0, target);
    const double ftol = 0.5 * tol * std::max(1.0, target);

    double hi = std::min(hint_hi, 1.0);
    if (power_integral(hi, alpha, quad_tol) > target) hi = 1.0;
    double lo = 0.5 * hi;
    while (power_integral(lo, alpha, quad_tol) < target) {
        lo *= 0.5;
        if (lo < 1e-300) throw SolverFailure("power-regular bracket collapsed", lo, hi);
    }
    auto f = [&](double g) { return power_integral(g, alpha, quad_tol) - target; };
    auto df = [alpha](double g) { return -power_integrand(g, alpha); };
    return newton_bisect(f, df, lo, hi, ftol).root;
}

void require_value_regime(const ModelParams& params, const char* op) {
    if (!params.has_value())
        throw UnsupportedRegimeError(std::string(op) +
                                     ": degenerate regime (alpha < 1/2) has no finite value "
                                     "function; use the threshold-strategy formulas");
}

// V(x) = (1/K) int_{g(M)}^{g(x)} ((1-w)/w)^(2a-1) dw, the w-space form of the
// value integral obtained by substituting through the g ODE.  Used for the
// tabulated value column; the scalar value() keeps the direct x-space route.
double value_segment_w(const ModelParams& params, double g_from, double g_to, double tol) {
    const double alpha = params.alpha();
    const double inv_k = 1.0 / power_coeff(alpha, params.A());
    auto phi = [alpha](double w) { return std::pow((1.0 - w) / w, 2.0 * alpha - 1.0); };
    return inv_k * integrate(phi, g_from, g_to, tol / std::max(1.0, inv_k));
}

}  // namespace

double h_eval(double y) {
    if (!(y > 0.0)) throw DomainError("h_eval: y must be positive");
    return 1.0 / y + std::log(y);
}

double solve_g(const ModelParams& params, double x, double tol) {
    if (!(x >= 0.0)) throw DomainError("solve_g: x must be nonnegative");
    if (!(tol > 0.0)) throw DomainError("solve_g: tol must be positive");
    require_value_regime(params, "solve_g");
    if (x == 0.0) return 1.0;

    const double a2 = params.A() * params.A();
    switch (params.regime()) {
        case Regime::Classic:
        case Regime::GeneralLinear:
            return solve_classic_eq(1.0 + x / (2.0 * a2), tol);
        case Regime::HalfCritical:
            return std::exp(-2.0 * x / a2);
        case Regime::PowerRegular:
            return solve_power_eq(x, params.alpha(), params.A(), tol, 1.0);
        case Regime::Degenerate:
            break;
    }
    throw UnsupportedRegimeError("solve_g: unreachable regime");
}

double g_derivative_from_g(const ModelParams& params, double g) {
    require_value_regime(params, "g_derivative");
    const double a2 = params.A() * params.A();
    switch (params.regime()) {
        case Regime::Classic:
        case Regime::GeneralLinear:
            return g * g / (2.0 * a2 * (g - 1.0));
        case Regime::HalfCritical:
            return -2.0 * g / a2;
        case Regime::PowerRegular: {
            const double alpha = params.alpha();
            return -power_coeff(alpha, params.A()) * std::pow(g, 2.0 * alpha) *
                   std::pow(1.0 - g, 1.0 - 2.0 * alpha);
        }
        case Regime::Degenerate:
            break;
    }
    throw UnsupportedRegimeError("g_derivative: unreachable regime");
}

double g_derivative(const ModelParams& params, double x) {
    if (!(x > 0.0)) throw DomainError("g_derivative: x must be positive");
    require_value_regime(params, "g_derivative");
    return g_derivative_from_g(params, solve_g(params, x));
}

double value(const ModelParams& params, double x, double tol) {
    if (!(x >= 0.0) || x > params.M())
        throw DomainError("value: x must lie in [0, M]");
    if (!(tol > 0.0)) throw DomainError("value: tol must be positive");
    require_value_regime(params, "value");
    if (x == params.M()) return 0.0;
    return integrate([&params](double u) { return solve_g(params, u); }, x, params.M(), tol);
}

double control_from_g(const ModelParams& params, double g) {
    if (!(g > 0.0) || g > 1.0) throw DomainError("control: g must lie in (0, 1]");
    switch (params.regime()) {
        case Regime::Classic:
        case Regime::GeneralLinear:
            return 2.0 * (1.0 / g - 1.0);
        case Regime::PowerRegular:
            return (1.0 / g - 1.0) / (1.0 - 1.0 / (2.0 * params.alpha()));
        case Regime::HalfCritical:
            throw UnsupportedControlError(
                "control: undefined at alpha = 1/2 (minimizer exponent 1/(2 alpha - 1) "
                "degenerates); only the value function is available");
        case Regime::Degenerate:
            break;
    }
    throw UnsupportedRegimeError("control: degenerate regime has no optimal control");
}

double control(const ModelParams& params, double x) {
    if (!(x >= 0.0)) throw DomainError("control: x must be nonnegative");
    if (!params.has_control()) return control_from_g(params, 1.0);  // raises the regime error
    return control_from_g(params, solve_g(params, x));
}

double control_asymptotic_small(double x) {
    if (!(x >= 0.0)) throw DomainError("control_asymptotic_small: x must be nonnegative");
    return 2.0 * std::sqrt(x);
}

double g_approx_large(double x) {
    if (!(x >= 0.0)) throw DomainError("g_approx_large: x must be nonnegative");
    const double b = 1.0 + 0.5 * x;
    return 1.0 / (b + std::log(b));
}

double f0_approx_large(double x) {
    if (!(x >= 0.0)) throw DomainError("f0_approx_large: x must be nonnegative");
    return x + 2.0 * std::log(1.0 + 0.5 * x);
}

double submartingale_drift(const ModelParams& params, double x, double f) {
    if (!(x > 0.0) || x >= params.M())
        throw DomainError("submartingale_drift: x must lie in (0, M)");
    if (!(f >= 0.0)) throw DomainError("submartingale_drift: f must be nonnegative");
    require_value_regime(params, "submartingale_drift");

    const double g = solve_g(params, x);
    const double gp = g_derivative(params, x);
    const double a2 = params.A() * params.A();
    const double noise = (f == 0.0) ? 0.0 : std::pow(f, 2.0 * params.alpha());
    return -g * (1.0 + f) + 0.5 * a2 * (-gp) * noise + 1.0;
}

ScalingMap value_scaling_map(double x, double A, double M) {
    if (!(A > 0.0)) throw DomainError("value_scaling_map: A must be positive");
    if (!(M > 0.0)) throw DomainError("value_scaling_map: M must be positive");
    const double a2 = A * A;
    return {x / a2, M / a2, a2};
}

// ---------------------------------------------------------------------------
// GFunction
// ---------------------------------------------------------------------------

GFunction::GFunction(ModelParams params, std::vector<double> grid, std::vector<double> g,
                     std::vector<double> v, double solver_tol, double quad_tol)
    : params_(std::move(params)),
      grid_(std::move(grid)),
      g_(std::move(g)),
      v_(std::move(v)),
      solver_tol_(solver_tol),
      quad_tol_(quad_tol) {
    if (grid_.size() < 4 || grid_.size() != g_.size() || grid_.size() != v_.size())
        throw DomainError("GFunction: inconsistent tabulation arrays");
    for (std::size_t i = 1; i < grid_.size(); ++i)
        if (!(grid_[i] > grid_[i - 1]))
            throw DomainError("GFunction: grid must be strictly increasing");
    init_slopes();
}

GFunction GFunction::build(const ModelParams& params, double x_max, std::size_t n_nodes,
                           double solver_tol, double quad_tol) {
    require_value_regime(params, "GFunction::build");
    if (!(x_max >= params.M()))
        throw DomainError("GFunction::build: x_max must be at least M");
    if (n_nodes < 16) throw DomainError("GFunction::build: need at least 16 nodes");

    // Geometric ramp near zero (captures the sqrt cusp), uniform elsewhere.
    std::vector<double> grid;
    grid.reserve(n_nodes + 1);
    grid.push_back(0.0);
    const std::size_t n_geo = std::max<std::size_t>(8, (n_nodes - 1) * 2 / 5);
    const std::size_t n_uni = n_nodes - 1 - n_geo;
    const double x_lo = x_max * 1e-8;
    const double x_switch = x_max / 16.0;
    const double ratio = std::pow(x_switch / x_lo, 1.0 / static_cast<double>(n_geo));
    double xg = x_lo;
    for (std::size_t i = 0; i < n_geo; ++i, xg *= ratio) grid.push_back(xg);
    for (std::size_t j = 0; j < n_uni; ++j)
        grid.push_back(x_switch + (x_max - x_switch) * static_cast<double>(j + 1) /
                                      static_cast<double>(n_uni));
    grid.back() = x_max;

    if (x_max > params.M()) {
        auto it = std::lower_bound(grid.begin(), grid.end(), params.M());
        if (it == grid.end() || *it != params.M()) grid.insert(it, params.M());
    }

    const std::size_t n = grid.size();
    std::vector<double> g(n);
    g[0] = 1.0;
    double hint = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        if (params.regime() == Regime::PowerRegular)
            g[i] = solve_power_eq(grid[i], params.alpha(), params.A(), solver_tol, hint);
        else
            g[i] = solve_g(params, grid[i], solver_tol);
        hint = g[i];
    }

    // Accumulate the value column from the M node outward.
    std::vector<double> v(n, 0.0);
    const std::size_t i_m = static_cast<std::size_t>(
        std::lower_bound(grid.begin(), grid.end(), params.M()) - grid.begin());
    const double seg_tol = 0.5 * quad_tol / static_cast<double>(n);
    for (std::size_t i = i_m; i-- > 0;)
        v[i] = v[i + 1] + value_segment_w(params, g[i + 1], g[i], seg_tol);
    for (std::size_t i = i_m + 1; i < n; ++i)
        v[i] = v[i - 1] + value_segment_w(params, g[i - 1], g[i], seg_tol);

    return GFunction(params, std::move(grid), std::move(g), std::move(v), solver_tol, quad_tol);
}

// Cubic Hermite slopes.  Interior nodes take the exact ODE derivative (the
// identity needs only the tabulated g), which keeps the interpolant at
// O(h^4) accuracy.  The x = 0 node has a sqrt cusp in most regimes, so it
// falls back to a clamped one-sided estimate; the segment-local monotonicity
// ratio m/delta stays within the Fritsch-Carlson region either way.
void GFunction::init_slopes() {
    const std::size_t n = grid_.size();
    slope_.assign(n, 0.0);
    for (std::size_t i = 1; i < n; ++i) slope_[i] = g_derivative_from_g(params_, g_[i]);

    const double h0 = grid_[1] - grid_[0];
    const double h1 = grid_[2] - grid_[1];
    const double d0 = (g_[1] - g_[0]) / h0;
    const double d1 = (g_[2] - g_[1]) / h1;
    if (params_.regime() == Regime::HalfCritical) {
        slope_[0] = -2.0 / (params_.A() * params_.A());  // no cusp: g'(0) is finite
    } else {
        double m = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (m * d0 <= 0.0) m = 0.0;
        if (std::abs(m) > 3.0 * std::abs(d0)) m = 3.0 * d0;
        slope_[0] = m;
    }
}

double GFunction::eval(double x) const {
    if (x <= grid_.front()) return g_.front();
    if (x >= grid_.back()) return g_.back();
    const auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - grid_.begin()) - 1;
    const double h = grid_[i + 1] - grid_[i];
    const double t = (x - grid_[i]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * g_[i] + h10 * h * slope_[i] + h01 * g_[i + 1] + h11 * h * slope_[i + 1];
}

double GFunction::control_at(double x) const { return control_from_g(params_, eval(x)); }

// ---------------------------------------------------------------------------
// Serialization.  All doubles are printed with %.17g so that both formats
// round-trip bit-exactly for the stored fields.
// ---------------------------------------------------------------------------

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

bool regime_has_cusp(Regime r) {
    return r == Regime::Classic || r == Regime::GeneralLinear || r == Regime::PowerRegular;
}

}  // namespace

void GFunction::write_csv(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "# retire gfunction v1: A=" << fmt17(params_.A()) << " alpha=" << fmt17(params_.alpha())
        << " M=" << fmt17(params_.M()) << " solver_tol=" << fmt17(solver_tol_)
        << " quad_tol=" << fmt17(quad_tol_) << "\n";
    out << "# g_prime at x=0 is -inf in regimes with a sqrt-type cusp; f0 is nan where the "
           "control is undefined (alpha = 1/2)\n";
    out << "x,g,g_prime,f0,V\n";
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        double gp;
        if (i == 0)
            gp = regime_has_cusp(params_.regime())
                     ? -std::numeric_limits<double>::infinity()
                     : -2.0 / (params_.A() * params_.A());
        else
            gp = g_derivative(params_, grid_[i]);
        double f0 = std::numeric_limits<double>::quiet_NaN();
        if (params_.has_control()) f0 = (i == 0) ? 0.0 : control_from_g(params_, g_[i]);
        out << fmt17(grid_[i]) << ',' << fmt17(g_[i]) << ',' << fmt17(gp) << ',' << fmt17(f0)
            << ',' << fmt17(v_[i]) << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

GFunction GFunction::read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::string line;
    double A = 0, alpha = 0, M = 0, stol = kDefaultSolverTol, qtol = kDefaultQuadTol;
    bool have_params = false;
    std::vector<double> x, g, v;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (std::sscanf(line.c_str(), "# retire gfunction v1: A=%lf alpha=%lf M=%lf "
                                          "solver_tol=%lf quad_tol=%lf",
                            &A, &alpha, &M, &stol, &qtol) == 5)
                have_params = true;
            continue;
        }
        if (line.rfind("x,", 0) == 0) continue;
        double xi, gi, gpi, f0i, vi;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &xi, &gi, &gpi, &f0i, &vi) != 5)
            throw ParseError("malformed gfunction csv row: " + line);
        x.push_back(xi);
        g.push_back(gi);
        v.push_back(vi);
    }
    if (!have_params) throw ParseError("gfunction csv is missing the parameter header");
    return GFunction(ModelParams(A, alpha, M), std::move(x), std::move(g), std::move(v), stol,
                     qtol);
}

void GFunction::write_json(const std::string& path) const {
    nlohmann::ordered_json doc;
    doc["format"] = "retire.gfunction.v1";
    doc["params"] = {{"A", params_.A()},
                     {"alpha", params_.alpha()},
                     {"M", params_.M()},
                     {"regime", to_string(params_.regime())}};
    doc["solver_tol"] = solver_tol_;
    doc["quad_tol"] = quad_tol_;
    doc["grid"] = grid_;
    doc["g"] = g_;
    doc["v"] = v_;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << doc.dump(2) << "\n";
    if (!out) throw IoError("write failed: " + path);
}

GFunction GFunction::read_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("gfunction json: ") + e.what());
    }
    if (doc.value("format", "") != "retire.gfunction.v1")
        throw ParseError("gfunction json: unknown format tag");
    const auto& p = doc.at("params");
    ModelParams params(p.at("A").get<double>(), p.at("alpha").get<double>(),
                       p.at("M").get<double>());
    return GFunction(params, doc.at("grid").get<std::vector<double>>(),
                     doc.at("g").get<std::vector<double>>(),
                     doc.at("v").get<std::vector<double>>(), doc.at("solver_tol").get<double>(),
                     doc.at("quad_tol").get<double>());
}

}  // namespace retire
