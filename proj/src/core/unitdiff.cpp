#include "core/unitdiff.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "core/quadrature.hpp"
#include "core/rootfind.hpp"

namespace retire {

UnitTransform::UnitTransform(DiffusionSpec spec, double anchor, double anchor_image, double tol)
    : spec_(std::move(spec)), anchor_(anchor), anchor_image_(anchor_image), tol_(tol) {
    if (!spec_.drift || !spec_.diffusion)
        throw DomainError("unit transform needs drift and diffusion callables");
    if (!(spec_.lo < spec_.hi)) throw DomainError("unit transform domain is empty");
    if (!(anchor_ > spec_.lo) || !(anchor_ < spec_.hi))
        throw DomainError("unit transform anchor must be interior to the domain");
    if (!(tol_ > 0.0)) throw DomainError("unit transform tol must be positive");

    unit_lo_ = to_unit(spec_.lo);
    if (!std::isfinite(unit_lo_))
        throw SolverFailure("1/b is not integrable toward the lower endpoint", spec_.lo, anchor_);
    unit_hi_ = to_unit(spec_.hi);
    if (!std::isfinite(unit_hi_))
        throw SolverFailure("1/b is not integrable toward the upper endpoint", anchor_, spec_.hi);
}

double UnitTransform::to_unit(double y) const {
    if (y < spec_.lo || y > spec_.hi) throw DomainError("to_unit: y outside the domain");
    return anchor_image_ +
           integrate([this](double u) { return 1.0 / spec_.diffusion(u); }, anchor_, y, tol_);
}

double UnitTransform::from_unit(double x) const {
    const double pad = tol_ * std::max(1.0, std::abs(unit_hi_) + std::abs(unit_lo_));
    if (x < unit_lo_ - pad || x > unit_hi_ + pad)
        throw DomainError("from_unit: x outside the transformed range");
    x = std::clamp(x, unit_lo_, unit_hi_);
    auto f = [this, x](double y) { return to_unit(y) - x; };
    auto df = [this](double y) { return 1.0 / spec_.diffusion(y); };
    return newton_bisect(f, df, spec_.lo, spec_.hi, tol_).root;
}

double UnitTransform::b_prime(double y) const {
    if (spec_.diffusion_prime) return spec_.diffusion_prime(y);
    const double h = std::max(1e-6, 1e-6 * std::abs(y));
    const double yl = std::max(spec_.lo, y - h);
    const double yr = std::min(spec_.hi, y + h);
    return (spec_.diffusion(yr) - spec_.diffusion(yl)) / (yr - yl);
}

double UnitTransform::unit_drift(double x) const {
    const double y = from_unit(x);
    const double b = spec_.diffusion(y);
    return (spec_.drift(y) - 0.5 * b_prime(y) * b) / b;
}

void UnitTransform::write_csv(const std::string& path, std::size_t n) const {
    if (n < 2) throw DomainError("transform csv needs at least 2 points");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "x,g_map,A_drift\n";
    char buf[128];
    for (std::size_t i = 0; i < n; ++i) {
        const double x =
            unit_lo_ + (unit_hi_ - unit_lo_) * static_cast<double>(i) / static_cast<double>(n - 1);
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g\n", x, from_unit(x), unit_drift(x));
        out << buf;
    }
    if (!out) throw IoError("write failed: " + path);
}

UnitTransform build_transform(const DiffusionSpec& spec, double anchor, double anchor_image,
                              double tol) {
    return UnitTransform(spec, anchor, anchor_image, tol);
}

BoundaryClass classify_sqrt_boundary(double c) {
    if (!(c > 0.0)) throw DomainError("classify_sqrt_boundary requires c > 0");
    if (c < 2.0) return BoundaryClass::NeverHitsZero;
    if (c == 2.0) return BoundaryClass::SoftReflection;
    return BoundaryClass::UndefinedAfterZero;
}

const char* to_string(BoundaryClass cls) {
    switch (cls) {
        case BoundaryClass::NeverHitsZero: return "never_hits_zero";
        case BoundaryClass::SoftReflection: return "soft_reflection";
        case BoundaryClass::UndefinedAfterZero: return "undefined_after_zero";
    }
    return "unknown";
}

DiffusionSpec optimal_control_spec(const GFunction& gfun) {
    if (!gfun.params().has_control())
        throw UnsupportedControlError("optimal-control diffusion needs a regime with f0");
    DiffusionSpec spec;
    spec.drift = [&gfun](double y) { return 1.0 + gfun.control_at(y); };
    spec.diffusion = [&gfun](double y) { return gfun.control_at(y); };
    spec.lo = 0.0;
    spec.hi = gfun.x_max();
    return spec;
}

NonnegativityReport nonnegativity_certificate(const DiffusionSpec& spec, double delta,
                                              double tol) {
    if (spec.lo != 0.0)
        throw DomainError("nonnegativity certificate requires a domain starting at 0");
    const double width = spec.hi - spec.lo;
    if (delta <= 0.0) delta = 1e-6 * width;
    const double mid = 0.5 * (delta + spec.hi);
    // The construction only applies when the noise dies out at the boundary.
    if (!(spec.diffusion(delta) <= 0.01 * spec.diffusion(mid)))
        throw DomainError("nonnegativity certificate refused: diffusion does not vanish at 0");

    DiffusionSpec truncated = spec;
    truncated.lo = delta;
    const UnitTransform tf = build_transform(truncated, mid, 0.0, tol);

    NonnegativityReport rep;
    rep.delta = delta;
    rep.unit_lo = tf.unit_lo();
    rep.unit_hi = tf.unit_hi();
    rep.map_min = std::numeric_limits<double>::infinity();
    rep.map_max = -std::numeric_limits<double>::infinity();
    const std::size_t n = 101;
    for (std::size_t i = 0; i < n; ++i) {
        const double x = rep.unit_lo + (rep.unit_hi - rep.unit_lo) * static_cast<double>(i) /
                                           static_cast<double>(n - 1);
        const double y = tf.from_unit(x);
        rep.map_min = std::min(rep.map_min, y);
        rep.map_max = std::max(rep.map_max, y);
    }
    rep.sqrt_coeff = spec.diffusion(delta) / std::sqrt(delta);
    return rep;
}

NonnegativityReport nonnegativity_certificate(const GFunction& gfun, double delta, double tol) {
    return nonnegativity_certificate(optimal_control_spec(gfun), delta, tol);
}

}  // namespace retire
