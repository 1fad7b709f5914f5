#include "core/sde.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include "core/philox.hpp"

#include "json.hpp"

namespace retire {

namespace {

double effective_t_max(const ModelParams& params, const SimConfig& config) {
    if (config.t_max > 0.0) return config.t_max;
    if (config.t_max < 0.0) throw DomainError("simulation horizon t_max must be positive");
    return 50.0 * params.M();
}

void validate_config(const SimConfig& config) {
    if (!(config.dt > 0.0)) throw DomainError("simulation step dt must be positive");
    if (config.paths < 1) throw DomainError("simulation needs at least one path");
}

double noise_scale(const ModelParams& params, double f) {
    if (f == 0.0) return 0.0;
    const double alpha = params.alpha();
    if (alpha == 1.0) return params.A() * f;
    if (alpha == 0.5) return params.A() * std::sqrt(f);
    return params.A() * std::pow(f, alpha);
}

unsigned worker_count(const SimConfig& config, std::uint64_t jobs) {
    unsigned n = config.threads ? config.threads : std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    return static_cast<unsigned>(std::min<std::uint64_t>(n, jobs));
}

template <class Fn>
void parallel_paths(const SimConfig& config, std::uint64_t paths, Fn&& body) {
    const unsigned workers = worker_count(config, paths);
    if (workers <= 1) {
        for (std::uint64_t p = 0; p < paths; ++p) body(p);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::uint64_t p = w; p < paths; p += workers) body(p);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

PathResult simulate_path(const ModelParams& params, const Strategy& strategy, double x0,
                         const SimConfig& config, std::uint64_t path_index) {
    if (!(x0 >= 0.0) || x0 > params.M())
        throw DomainError("simulate_path: x0 must lie in [0, M]");
    validate_config(config);

    const double m = params.M();
    if (x0 >= m) return {PathOutcome::Hit, 0.0, 0};

    const double dt = config.dt;
    const double sqrt_dt = std::sqrt(dt);
    const double t_max = effective_t_max(params, config);
    const std::uint64_t max_steps = static_cast<std::uint64_t>(std::ceil(t_max / dt));
    const rng::CounterRng noise(config.seed, rng::kSubstreamIncrements);
    const rng::CounterRng bridge(config.seed, rng::kSubstreamBridge);

    double x = x0;
    std::uint64_t clamps = 0;
    for (std::uint64_t step = 0; step < max_steps; ++step) {
        const double f = strategy.evaluate(x);
        const double sigma = noise_scale(params, f);
        const double z = noise.normal(path_index, step);
        const double x_new = x + (1.0 + f) * dt + sigma * sqrt_dt * z;
        if (x_new >= m) {
            const double tau = static_cast<double>(step) * dt + dt * (m - x) / (x_new - x);
            return {PathOutcome::Hit, tau, clamps};
        }
        if (config.bridge_crossing && sigma > 0.0) {
            const double p =
                std::exp(-2.0 * (m - x) * (m - x_new) / (sigma * sigma * dt));
            if (bridge.uniform(path_index, step) < p) {
                const double tau = (static_cast<double>(step) + 0.5) * dt;
                return {PathOutcome::Hit, tau, clamps};
            }
        }
        if (x_new < 0.0) {
            if (config.policy == ClampPolicy::Ruin)
                return {PathOutcome::Ruined, std::numeric_limits<double>::infinity(), clamps};
            x = 0.0;
            ++clamps;
            continue;
        }
        x = x_new;
    }
    return {PathOutcome::Censored, t_max, clamps};
}

SimResult estimate_hitting_time(const ModelParams& params, const Strategy& strategy, double x0,
                                const SimConfig& config) {
    validate_config(config);
    if (!(x0 >= 0.0) || x0 > params.M())
        throw DomainError("estimate_hitting_time: x0 must lie in [0, M]");
    const std::uint64_t n = config.paths;
    std::vector<PathResult> results(n);
    parallel_paths(config, n, [&](std::uint64_t p) {
        results[p] = simulate_path(params, strategy, x0, config, p);
    });

    SimResult out;
    out.paths = n;
    out.hit_times.reserve(n);
    for (const auto& r : results) {
        out.clamped_steps += r.clamped_steps;
        switch (r.outcome) {
            case PathOutcome::Hit: out.hit_times.push_back(r.tau); break;
            case PathOutcome::Censored: ++out.censored; break;
            case PathOutcome::Ruined: ++out.ruined; break;
        }
    }
    const std::size_t hits = out.hit_times.size();
    if (hits == 0)
        throw SimulationDegenerate("no path reached the target (censored=" +
                                   std::to_string(out.censored) +
                                   ", ruined=" + std::to_string(out.ruined) + ")");
    double sum = 0.0;
    for (double tau : out.hit_times) sum += tau;
    out.mean = sum / static_cast<double>(hits);
    if (hits > 1) {
        double ss = 0.0;
        for (double tau : out.hit_times) ss += (tau - out.mean) * (tau - out.mean);
        out.std_error = std::sqrt(ss / static_cast<double>(hits - 1)) /
                        std::sqrt(static_cast<double>(hits));
    }
    return out;
}

namespace {

MomentReport moments_with_batch_se(const std::vector<double>& samples) {
    MomentReport rep;
    const std::size_t n = samples.size();
    rep.samples = n;
    double mean = 0.0;
    for (double v : samples) mean += v;
    mean /= static_cast<double>(n);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double v : samples) {
        const double d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    rep.mean = mean;
    rep.variance = m2 / static_cast<double>(n > 1 ? n - 1 : 1);
    rep.third_central = m3 / static_cast<double>(n);
    rep.fourth_central = m4 / static_cast<double>(n);

    // Standard errors from batch means.
    const std::size_t batches = std::min<std::size_t>(n, 100);
    if (batches < 2) return rep;
    std::vector<double> bm(batches, 0.0), bv(batches, 0.0), b3(batches, 0.0), b4(batches, 0.0);
    std::vector<std::size_t> bn(batches, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t b = i * batches / n;
        bm[b] += samples[i];
        ++bn[b];
    }
    for (std::size_t b = 0; b < batches; ++b) bm[b] /= static_cast<double>(bn[b]);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t b = i * batches / n;
        const double d = samples[i] - bm[b];
        bv[b] += d * d;
        b3[b] += d * d * d;
        b4[b] += d * d * d * d;
    }
    for (std::size_t b = 0; b < batches; ++b) {
        const double nb = static_cast<double>(bn[b]);
        bv[b] /= std::max(1.0, nb - 1.0);
        b3[b] /= nb;
        b4[b] /= nb;
    }
    auto se_of = [&](const std::vector<double>& stat) {
        double m = 0.0;
        for (double v : stat) m += v;
        m /= static_cast<double>(batches);
        double ss = 0.0;
        for (double v : stat) ss += (v - m) * (v - m);
        return std::sqrt(ss / static_cast<double>(batches - 1) / static_cast<double>(batches));
    };
    rep.se_mean = se_of(bm);
    rep.se_variance = se_of(bv);
    rep.se_third = se_of(b3);
    rep.se_fourth = se_of(b4);
    return rep;
}

}  // namespace

WSquaredReport w_squared_consistency(double t, const SimConfig& config) {
    if (!(t > 0.0)) throw DomainError("w_squared_consistency requires t > 0");
    validate_config(config);
    const std::uint64_t n = config.paths;
    const std::uint64_t steps =
        std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(t / config.dt)));
    const double dt = t / static_cast<double>(steps);
    const double sqrt_dt = std::sqrt(dt);

    std::vector<double> euler(n), exact(n);
    const rng::CounterRng noise(config.seed, rng::kSubstreamIncrements);
    const rng::CounterRng wdraw(config.seed, rng::kSubstreamExact);
    parallel_paths(config, n, [&](std::uint64_t p) {
        double x = 0.0;
        for (std::uint64_t s = 0; s < steps; ++s) {
            const double z = noise.normal(p, s);
            x += dt + 2.0 * std::sqrt(std::max(x, 0.0)) * sqrt_dt * z;
        }
        euler[p] = x;
        const double w = std::sqrt(t) * wdraw.normal(p, 0);
        exact[p] = w * w;
    });

    WSquaredReport rep;
    rep.t = t;
    rep.euler = moments_with_batch_se(euler);
    rep.exact = moments_with_batch_se(exact);
    return rep;
}

void SimResult::write_json(const std::string& path) const {
    nlohmann::ordered_json doc;
    doc["format"] = "retire.simresult.v1";
    doc["paths"] = paths;
    doc["hits"] = hit_times.size();
    doc["censored"] = censored;
    doc["ruined"] = ruined;
    doc["clamped_steps"] = clamped_steps;
    doc["mean"] = mean;
    doc["std_error"] = std_error;
    doc["hit_times"] = hit_times;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << doc.dump(2) << "\n";
    if (!out) throw IoError("write failed: " + path);
}

void SimResult::write_hit_times_csv(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << "tau\n";
    char buf[40];
    for (double tau : hit_times) {
        std::snprintf(buf, sizeof(buf), "%.17g\n", tau);
        out << buf;
    }
    if (!out) throw IoError("write failed: " + path);
}

}  // namespace retire
