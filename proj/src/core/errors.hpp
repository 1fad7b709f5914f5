#pragma once

#include <stdexcept>
#include <string>

namespace retire {

enum class ErrorCode {
    Domain = 1,
    UnsupportedRegime,
    UnsupportedControl,
    SolverFailure,
    SimulationDegenerate,
    Unattainable,
    Parse,
    Io,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

struct DomainError : Error {
    explicit DomainError(const std::string& what) : Error(ErrorCode::Domain, what) {}
};

struct UnsupportedRegimeError : Error {
    explicit UnsupportedRegimeError(const std::string& what)
        : Error(ErrorCode::UnsupportedRegime, what) {}
};

struct UnsupportedControlError : Error {
    explicit UnsupportedControlError(const std::string& what)
        : Error(ErrorCode::UnsupportedControl, what) {}
};

// Carries the last bracket so callers can see where the iteration stalled.
struct SolverFailure : Error {
    SolverFailure(const std::string& what, double lo, double hi)
        : Error(ErrorCode::SolverFailure, what), bracket_lo(lo), bracket_hi(hi) {}
    double bracket_lo;
    double bracket_hi;
};

struct SimulationDegenerate : Error {
    explicit SimulationDegenerate(const std::string& what)
        : Error(ErrorCode::SimulationDegenerate, what) {}
};

// Search exhausted; reports the best value that was reached.
struct Unattainable : Error {
    Unattainable(const std::string& what, double achieved)
        : Error(ErrorCode::Unattainable, what), best_achieved(achieved) {}
    double best_achieved;
};

struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error(ErrorCode::Parse, what) {}
};

struct IoError : Error {
    explicit IoError(const std::string& what) : Error(ErrorCode::Io, what) {}
};

}  // namespace retire
