#include "core/strategies.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

namespace retire {

Strategy Strategy::zero() { return Strategy(Variant{ZeroStrategy{}}); }

Strategy Strategy::constant(double c) {
    if (!(c > 0.0)) throw DomainError("constant strategy requires c > 0");
    return Strategy(Variant{ConstantStrategy{c}});
}

Strategy Strategy::threshold(double eps, double c) {
    if (!(eps > 0.0)) throw DomainError("threshold strategy requires eps > 0");
    if (!(c > 0.0)) throw DomainError("threshold strategy requires c > 0");
    return Strategy(Variant{ThresholdStrategy{eps, c}});
}

Strategy Strategy::optimal(std::shared_ptr<const GFunction> g) {
    if (!g) throw DomainError("optimal strategy requires a tabulated g function");
    if (!g->params().has_control())
        throw UnsupportedControlError("optimal strategy is undefined in the " +
                                      std::string(to_string(g->params().regime())) + " regime");
    return Strategy(Variant{OptimalStrategy{std::move(g)}});
}

namespace {

double parse_double(std::string_view s, const char* what) {
    double out = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ParseError(std::string("strategy: bad ") + what + " value '" + std::string(s) + "'");
    return out;
}

}  // namespace

Strategy Strategy::parse(std::string_view text, std::shared_ptr<const GFunction> g) {
    if (text == "zero") return zero();
    if (text == "optimal") {
        if (!g) throw ParseError("strategy 'optimal' needs a solved g function to bind against");
        return optimal(std::move(g));
    }
    if (text.rfind("const:", 0) == 0) return constant(parse_double(text.substr(6), "constant"));
    if (text.rfind("threshold:", 0) == 0) {
        const auto body = text.substr(10);
        const auto comma = body.find(',');
        if (comma == std::string_view::npos)
            throw ParseError("strategy 'threshold' expects 'threshold:EPS,C'");
        return threshold(parse_double(body.substr(0, comma), "threshold eps"),
                         parse_double(body.substr(comma + 1), "threshold c"));
    }
    throw ParseError("unknown strategy '" + std::string(text) +
                     "' (expected zero | const:C | threshold:EPS,C | optimal)");
}

std::string Strategy::format() const {
    char buf[80];
    if (std::holds_alternative<ZeroStrategy>(v_)) return "zero";
    if (const auto* c = std::get_if<ConstantStrategy>(&v_)) {
        std::snprintf(buf, sizeof(buf), "const:%.17g", c->c);
        return buf;
    }
    if (const auto* t = std::get_if<ThresholdStrategy>(&v_)) {
        std::snprintf(buf, sizeof(buf), "threshold:%.17g,%.17g", t->eps, t->c);
        return buf;
    }
    return "optimal";
}

double Strategy::evaluate(double x) const {
    if (!(x >= 0.0)) throw DomainError("strategy evaluation requires x >= 0");
    if (std::holds_alternative<ZeroStrategy>(v_)) return 0.0;
    if (const auto* c = std::get_if<ConstantStrategy>(&v_)) return c->c;
    if (const auto* t = std::get_if<ThresholdStrategy>(&v_)) return x <= t->eps ? 0.0 : t->c;
    return std::get<OptimalStrategy>(v_).g->control_at(x);
}

const char* Strategy::kind_name() const {
    if (std::holds_alternative<ZeroStrategy>(v_)) return "zero";
    if (std::holds_alternative<ConstantStrategy>(v_)) return "constant";
    if (std::holds_alternative<ThresholdStrategy>(v_)) return "threshold";
    return "optimal";
}

const GFunction* Strategy::gfunction() const {
    const auto* o = std::get_if<OptimalStrategy>(&v_);
    return o ? o->g.get() : nullptr;
}

ThresholdConstants threshold_constants(double eps, double c, double alpha, double M) {
    if (!(eps > 0.0) || !(eps < M)) throw DomainError("threshold constants require 0 < eps < M");
    if (!(c > 0.0)) throw DomainError("threshold constants require c > 0");
    if (!(alpha > 0.0)) throw DomainError("threshold constants require alpha > 0");
    if (!(M > 0.0)) throw DomainError("threshold constants require M > 0");
    const double k = 2.0 * (1.0 + c) / std::pow(c, 2.0 * alpha);
    if (k * eps > 700.0)
        throw DomainError("threshold constants overflow: exp(k eps) out of range");
    const double a_prime =
        std::pow(c, 2.0 * alpha + 1.0) / (2.0 * (1.0 + c) * (1.0 + c)) * std::exp(k * eps);
    const double d =
        eps + (M - eps) / (1.0 + c) + a_prime * (std::exp(-k * eps) - std::exp(-k * M));
    return {a_prime, d, k};
}

double expected_time_zero(double x, double M) {
    if (!(M > 0.0)) throw DomainError("expected_time_zero requires M > 0");
    if (!(x >= 0.0) || x > M) throw DomainError("expected_time_zero requires x in [0, M]");
    return M - x;
}

double expected_time_threshold(double x, double eps, double c, double alpha, double M) {
    if (!(x >= 0.0) || x > M) throw DomainError("expected_time_threshold requires x in [0, M]");
    const auto tc = threshold_constants(eps, c, alpha, M);
    if (x <= eps) return tc.d - x;
    return (M - x) / (1.0 + c) + tc.a_prime * (std::exp(-tc.k * x) - std::exp(-tc.k * M));
}

FastRetirement fast_retirement_params(double alpha, double target, double M) {
    if (!(alpha > 0.0) || !(alpha < 0.5))
        throw DomainError("fast retirement requires 0 < alpha < 1/2");
    if (!(target > 0.0)) throw DomainError("fast retirement requires target > 0");
    if (!(M > 0.0)) throw DomainError("fast retirement requires M > 0");

    double best_c = 0.0;
    double best_time = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= 12; ++j) {
        const double c = std::pow(10.0, j);
        const double eps = 1.0 / (1.0 + c);
        const double t0 = expected_time_threshold(0.0, eps, c, alpha, M);
        if (t0 < best_time) {
            best_time = t0;
            best_c = c;
        }
        if (t0 <= target) return {eps, c, t0};
    }
    char msg[160];
    std::snprintf(msg, sizeof(msg),
                  "fast retirement target %g not reached within c <= 1e12 (best %g at c = %g)",
                  target, best_time, best_c);
    throw Unattainable(msg, best_time);
}

}  // namespace retire
