#include "core/model.hpp"

#include <cmath>
#include <sstream>

namespace retire {

const char* to_string(Regime regime) {
    switch (regime) {
        case Regime::Classic: return "classic";
        case Regime::GeneralLinear: return "general_linear";
        case Regime::PowerRegular: return "power_regular";
        case Regime::HalfCritical: return "half_critical";
        case Regime::Degenerate: return "degenerate";
    }
    return "unknown";
}

ModelParams::ModelParams(double A, double alpha, double M) : a_(A), alpha_(alpha), m_(M) {
    if (!std::isfinite(A) || A <= 0.0)
        throw DomainError("diffusion scale A must be positive and finite");
    if (!std::isfinite(alpha) || alpha <= 0.0)
        throw DomainError("diffusion exponent alpha must be positive and finite");
    if (!std::isfinite(M) || M <= 0.0)
        throw DomainError("retirement target M must be positive and finite");
    if (alpha > 1.0)
        throw DomainError("alpha > 1 is outside the supported model family");

    if (alpha == 1.0) {
        regime_ = (A == 1.0) ? Regime::Classic : Regime::GeneralLinear;
    } else if (alpha == 0.5) {
        regime_ = Regime::HalfCritical;
    } else if (alpha > 0.5) {
        regime_ = Regime::PowerRegular;
    } else {
        regime_ = Regime::Degenerate;
    }
}

std::string ModelParams::describe() const {
    std::ostringstream os;
    os << "ModelParams(A=" << a_ << ", alpha=" << alpha_ << ", M=" << m_
       << ", regime=" << to_string(regime_) << ")";
    return os.str();
}

}  // namespace retire
