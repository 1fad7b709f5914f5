#pragma once

#include <functional>
#include <string>

#include "core/gsolve.hpp"

namespace retire {

// General diffusion dY = a(Y) dt + b(Y) dW on an interval with b > 0 on the
// open interior.  diffusion_prime may be empty; central differences are used
// in that case.
struct DiffusionSpec {
    std::function<double(double)> drift;
    std::function<double(double)> diffusion;
    std::function<double(double)> diffusion_prime;  // optional
    double lo = 0.0;
    double hi = 1.0;
};

// Monotone change of variables that realizes the (a, b) diffusion as an image
// of a unit diffusion dU = A(U) dt + dW:
//   to_unit   B(y)  = anchor_image + int_anchor^y du / b(u)
//   from_unit g(x)  = B^{-1}(x)
//   unit_drift A(x) = (a(g(x)) - b'(g(x)) b(g(x)) / 2) / b(g(x))
class UnitTransform {
public:
    UnitTransform(DiffusionSpec spec, double anchor, double anchor_image, double tol);

    double to_unit(double y) const;
    double from_unit(double x) const;
    double unit_drift(double x) const;

    double unit_lo() const noexcept { return unit_lo_; }
    double unit_hi() const noexcept { return unit_hi_; }
    double domain_lo() const noexcept { return spec_.lo; }
    double domain_hi() const noexcept { return spec_.hi; }

    // Tabulates (x, g_map, A_drift) over n uniform unit-coordinate points.
    void write_csv(const std::string& path, std::size_t n = 200) const;

private:
    double b_prime(double y) const;

    DiffusionSpec spec_;
    double anchor_;
    double anchor_image_;
    double tol_;
    double unit_lo_;
    double unit_hi_;
};

// Builds the transform with the anchor pinned to anchor_image (B is only
// determined up to an additive constant).  Raises when 1/b fails to integrate
// to a finite value toward either end of the supplied domain.
UnitTransform build_transform(const DiffusionSpec& spec, double anchor, double anchor_image = 0.0,
                              double tol = 1e-10);

// Boundary trichotomy of dY = dt + c sqrt(|Y|) dW at the origin.
enum class BoundaryClass { NeverHitsZero, SoftReflection, UndefinedAfterZero };
BoundaryClass classify_sqrt_boundary(double c);
const char* to_string(BoundaryClass cls);

// Operational check that the optimal-control diffusion (a = 1 + f0, b = f0)
// stays nonnegative: the state map of its unit-diffusion construction has a
// nonnegative range.  Works on the domain truncated to [delta, M] because b
// vanishes at 0.
struct NonnegativityReport {
    double delta;        // left truncation applied before building the transform
    double unit_lo;      // B(delta)
    double unit_hi;      // B(M)
    double map_min;      // min of from_unit over the certificate grid
    double map_max;      // max of from_unit over the certificate grid
    double sqrt_coeff;   // estimate of b(y)/sqrt(y) near 0
};
NonnegativityReport nonnegativity_certificate(const DiffusionSpec& spec, double delta = -1.0,
                                              double tol = 1e-9);
NonnegativityReport nonnegativity_certificate(const GFunction& gfun, double delta = -1.0,
                                              double tol = 1e-9);

// The optimal-control diffusion induced by a tabulated g: a(y) = 1 + f0(y),
// b(y) = f0(y) on [0, x_max].
DiffusionSpec optimal_control_spec(const GFunction& gfun);

}  // namespace retire
