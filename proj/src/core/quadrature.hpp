#pragma once

#include <cmath>

namespace retire {

namespace detail {

template <class F>
double simpson_rec(F& f, double a, double c, double b, double fa, double fc, double fb,
                   double whole, double tol, int depth) {
    double d = 0.5 * (a + c);
    double e = 0.5 * (c + b);
    double fd = f(d);
    double fe = f(e);
    double left = (c - a) / 6.0 * (fa + 4.0 * fd + fc);
    double right = (b - c) / 6.0 * (fc + 4.0 * fe + fb);
    double err = left + right - whole;
    if (depth <= 0 || std::abs(err) <= 15.0 * tol)
        return left + right + err / 15.0;
    return simpson_rec(f, a, d, c, fa, fd, fc, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, c, e, b, fc, fe, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson with Richardson correction; abs_tol is an absolute target
// for the whole interval.  Integrable endpoint behavior is handled by the
// depth-capped refinement.
template <class F>
double integrate(F&& f, double a, double b, double abs_tol, int max_depth = 60) {
    if (a == b) return 0.0;
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }
    double c = 0.5 * (a + b);
    double fa = f(a);
    double fb = f(b);
    double fc = f(c);
    double whole = (b - a) / 6.0 * (fa + 4.0 * fc + fb);
    return sign * detail::simpson_rec(f, a, c, b, fa, fc, fb, whole, abs_tol, max_depth);
}

}  // namespace retire
