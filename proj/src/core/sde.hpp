#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/model.hpp"
#include "core/strategies.hpp"

namespace retire {

// Euler-Maruyama configuration.  Noise is one standard normal per step drawn
// from a counter-based generator keyed on (seed, path_index, step), so results
// are independent of scheduling and bit-reproducible for a fixed config.
//
// bridge_crossing additionally tests each non-crossing step for a within-step
// barrier hit with the Brownian-bridge probability exp(-2(M-x)(M-x')/(s^2 dt));
// plain step-end detection leaves an O(sqrt(dt)) upward bias on hitting times
// (the missed-excursion effect), which the bridge test removes.  The bridge
// uniform comes from its own substream, so disabling it does not change the
// increment noise.
struct SimConfig {
    double dt = 1e-3;
    std::uint64_t paths = 10000;
    std::uint64_t seed = 1;
    double t_max = 0.0;  // <= 0 selects the default horizon 50 * M
    ClampPolicy policy = ClampPolicy::SoftReflect;
    unsigned threads = 0;  // 0 selects hardware concurrency
    bool bridge_crossing = true;
};

enum class PathOutcome { Hit, Censored, Ruined };

struct PathResult {
    PathOutcome outcome;
    double tau;  // hitting time for Hit, horizon for Censored, +inf for Ruined
    std::uint64_t clamped_steps;
};

// One Euler-Maruyama path of dX = (1 + f(X)) dt + A f(X)^alpha dW from x0.
// Stops at the first step with X >= M (tau linearly interpolated within the
// crossing step); X < 0 after a step either clamps to 0 (SoftReflect) or ends
// the game (Ruin).
PathResult simulate_path(const ModelParams& params, const Strategy& strategy, double x0,
                         const SimConfig& config, std::uint64_t path_index);

struct SimResult {
    std::uint64_t paths = 0;
    std::vector<double> hit_times;  // uncensored taus, path order
    std::uint64_t censored = 0;
    std::uint64_t ruined = 0;
    std::uint64_t clamped_steps = 0;
    double mean = 0.0;       // over uncensored paths only
    double std_error = 0.0;  // sample std dev of hit times / sqrt(hits)

    void write_json(const std::string& path) const;
    void write_hit_times_csv(const std::string& path) const;
};

// Runs config.paths independent paths (parallelized; aggregation is a
// deterministic reduction in path order).  Raises SimulationDegenerate when no
// path hit the target.
SimResult estimate_hitting_time(const ModelParams& params, const Strategy& strategy, double x0,
                                const SimConfig& config);

struct MomentReport {
    double mean = 0.0, variance = 0.0, third_central = 0.0, fourth_central = 0.0;
    double se_mean = 0.0, se_variance = 0.0, se_third = 0.0, se_fourth = 0.0;
    std::uint64_t samples = 0;
};

// Moment comparison for dX = dt + 2 sqrt(max(X,0)) dW from 0 against direct
// sampling of W^2(t) (same law; t-scaled chi-square with mean t, variance 2t^2).
struct WSquaredReport {
    double t = 0.0;
    MomentReport euler;
    MomentReport exact;
};
WSquaredReport w_squared_consistency(double t, const SimConfig& config);

}  // namespace retire
