#pragma once

#include <string>

#include "core/errors.hpp"

namespace retire {

// Parameter regimes of the diffusion dX = (1+f)dt + A f^alpha dW.  Each regime
// selects a different solution route for g(x) = -V'(x); alpha > 1 is rejected
// outright (no validated formulas there).
enum class Regime {
    Classic,        // A = 1, alpha = 1
    GeneralLinear,  // alpha = 1, A != 1
    PowerRegular,   // 1/2 < alpha < 1
    HalfCritical,   // alpha = 1/2
    Degenerate,     // alpha < 1/2 (no finite value function)
};

const char* to_string(Regime regime);

class ModelParams {
public:
    // A: diffusion scale, alpha: diffusion exponent, M: retirement target.
    ModelParams(double A, double alpha, double M);

    double A() const noexcept { return a_; }
    double alpha() const noexcept { return alpha_; }
    double M() const noexcept { return m_; }
    Regime regime() const noexcept { return regime_; }

    // Regimes with a finite value function served by the g-solver.
    bool has_value() const noexcept { return regime_ != Regime::Degenerate; }
    // Regimes where the optimal Markov control f0 is defined.
    bool has_control() const noexcept {
        return regime_ == Regime::Classic || regime_ == Regime::GeneralLinear ||
               regime_ == Regime::PowerRegular;
    }

    std::string describe() const;

private:
    double a_;
    double alpha_;
    double m_;
    Regime regime_;
};

}  // namespace retire
