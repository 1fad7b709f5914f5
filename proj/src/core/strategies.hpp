#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include "core/gsolve.hpp"
#include "core/model.hpp"

namespace retire {

enum class ClampPolicy { SoftReflect, Ruin };

struct ZeroStrategy {};
struct ConstantStrategy {
    double c;
};
struct ThresholdStrategy {
    double eps;
    double c;
};
struct OptimalStrategy {
    std::shared_ptr<const GFunction> g;
};

// Investment policy taxonomy.  Immutable; evaluate() is the uniform interface
// the simulator consumes.
class Strategy {
public:
    static Strategy zero();
    static Strategy constant(double c);
    static Strategy threshold(double eps, double c);
    static Strategy optimal(std::shared_ptr<const GFunction> g);

    // Compact text forms: "zero", "const:3.0", "threshold:0.01,100", "optimal".
    // "optimal" requires a tabulated g function to bind against.
    static Strategy parse(std::string_view text, std::shared_ptr<const GFunction> g = nullptr);
    std::string format() const;

    // f(x); x beyond M evaluates by the same rule (a simulation step may
    // overshoot before the hit is detected).
    double evaluate(double x) const;

    const char* kind_name() const;
    bool is_constant() const { return std::holds_alternative<ConstantStrategy>(v_); }
    bool is_optimal() const { return std::holds_alternative<OptimalStrategy>(v_); }
    const GFunction* gfunction() const;

    // Ruin for constant policies (f bounded away from zero near 0), soft
    // reflection for the rest (f = 0 near 0).
    ClampPolicy default_policy() const {
        return is_constant() ? ClampPolicy::Ruin : ClampPolicy::SoftReflect;
    }

private:
    using Variant = std::variant<ZeroStrategy, ConstantStrategy, ThresholdStrategy, OptimalStrategy>;
    explicit Strategy(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

// Constants of the threshold-strategy expected time (A = 1):
//   k  = 2(1+c)/c^(2 alpha)
//   A' = c^(2 alpha + 1) / (2 (1+c)^2) * exp(k eps)
//   D  = eps + (M - eps)/(1+c) + A'(exp(-k eps) - exp(-k M))
// D follows from continuity of the expected time at eps (the two-piece form
// is C^1 there by construction of A').
struct ThresholdConstants {
    double a_prime;
    double d;
    double k;
};
ThresholdConstants threshold_constants(double eps, double c, double alpha, double M);

// Expected time to reach M under f = 0 (pure unit drift): M - x.
double expected_time_zero(double x, double M);

// Piecewise expected hitting time of the threshold strategy:
//   D - x                                   on [0, eps]
//   (M-x)/(1+c) + A'(e^{-kx} - e^{-kM})     on [eps, M]
double expected_time_threshold(double x, double eps, double c, double alpha, double M);

// Searches c = 10, 10^2, ..., 10^12 with eps = 1/(1+c) for the first c whose
// expected time from 0 is at most target.  Only meaningful for alpha < 1/2.
struct FastRetirement {
    double eps;
    double c;
    double expected_time;
};
FastRetirement fast_retirement_params(double alpha, double target, double M);

}  // namespace retire
