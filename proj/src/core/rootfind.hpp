#pragma once

#include <cmath>
#include <limits>
#include <utility>

#include "core/errors.hpp"

namespace retire {

struct BracketRoot {
    double root;
    double residual;
    int iterations;
};

// Safeguarded Newton on a bracketing interval: every Newton step must stay
// inside the current bracket, otherwise the step falls back to bisection.
// Requires f(lo) and f(hi) with opposite (or zero) signs.
template <class F, class DF>
BracketRoot newton_bisect(F&& f, DF&& df, double lo, double hi, double ftol,
                          int max_iter = 200) {
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return {lo, 0.0, 0};
    if (fhi == 0.0) return {hi, 0.0, 0};
    if ((flo > 0.0) == (fhi > 0.0))
        throw SolverFailure("root not bracketed", lo, hi);

    double x = 0.5 * (lo + hi);
    for (int it = 1; it <= max_iter; ++it) {
        double fx = f(x);
        if (std::abs(fx) <= ftol) return {x, fx, it};
        if ((fx > 0.0) == (flo > 0.0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }

        double dfx = df(x);
        double candidate = x - fx / dfx;
        if (!std::isfinite(candidate) || candidate <= lo || candidate >= hi)
            candidate = 0.5 * (lo + hi);
        if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x)))
            return {candidate, fx, it};
        x = candidate;
    }
    throw SolverFailure("root finding did not converge", lo, hi);
}

// Plain golden-section minimizer for unimodal objectives.
template <class F>
double golden_section_min(F&& f, double a, double b, double rel_tol, int max_iter = 400) {
    constexpr double invphi = 0.6180339887498949;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int it = 0; it < max_iter; ++it) {
        if (b - a <= rel_tol * (std::abs(a) + std::abs(b)) + 1e-300) break;
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace retire
