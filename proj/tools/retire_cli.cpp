// retire command line: solve/value/control tables, Monte Carlo experiments,
// strategy comparisons, figure data and the fast-retirement search.  Links
// only the public C API; all outputs are CSV/JSON plus a run manifest that
// reproduces them byte-identically via `retire rerun`.

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "retire/retire.h"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

int exit_code_for(retire_status status) {
    switch (status) {
        case RETIRE_OK: return 0;
        case RETIRE_ERR_PARSE: return 2;
        case RETIRE_ERR_DOMAIN:
        case RETIRE_ERR_UNSUPPORTED_REGIME:
        case RETIRE_ERR_UNSUPPORTED_CONTROL: return 3;
        case RETIRE_ERR_SOLVER_FAILURE: return 4;
        case RETIRE_ERR_SIM_DEGENERATE: return 5;
        case RETIRE_ERR_UNATTAINABLE: return 6;
        case RETIRE_ERR_IO: return 7;
        case RETIRE_ERR_INVALID_ARGUMENT:
        case RETIRE_ERR_INTERNAL: break;
    }
    return 10;
}

[[noreturn]] void fail_with(retire_status status) {
    std::fprintf(stderr, "error: %s\n", retire_last_error());
    std::exit(exit_code_for(status));
}

void check(retire_status status) {
    if (status != RETIRE_OK) fail_with(status);
}

[[noreturn]] void fail_usage(const std::string& message) {
    std::fprintf(stderr, "error: %s\n", message.c_str());
    std::exit(2);
}

std::string iso_timestamp() {
    char buf[32];
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail_usage("cannot open for writing: " + path.string());
    out << text;
}

void write_manifest(const fs::path& out_dir, const std::string& command,
                    const ordered_json& parameters) {
    ordered_json doc;
    doc["format"] = "retire.manifest.v1";
    doc["command"] = command;
    doc["parameters"] = parameters;
    doc["tool_version"] = retire_version();
    doc["timestamp"] = iso_timestamp();
    std::string name = command + "_manifest.json";
    for (auto& ch : name)
        if (ch == '-') ch = '_';
    write_text(out_dir / name, doc.dump(2) + "\n");
}

struct ModelHandle {
    retire_model* ptr = nullptr;
    ~ModelHandle() { retire_model_free(ptr); }
};
struct GfHandle {
    retire_gfunction* ptr = nullptr;
    ~GfHandle() { retire_gfunction_free(ptr); }
};
struct StrategyHandle {
    retire_strategy* ptr = nullptr;
    ~StrategyHandle() { retire_strategy_free(ptr); }
};
struct SimHandle {
    retire_sim_result* ptr = nullptr;
    ~SimHandle() { retire_sim_result_free(ptr); }
};

retire_clamp_policy parse_policy(const std::string& text) {
    if (text == "soft") return RETIRE_CLAMP_SOFT_REFLECT;
    if (text == "ruin") return RETIRE_CLAMP_RUIN;
    if (text == "auto") return RETIRE_CLAMP_AUTO;
    fail_usage("unknown clamp policy '" + text + "' (expected soft | ruin | auto)");
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// command parameter blocks (also the manifest payloads)
// ---------------------------------------------------------------------------

struct SolveParams {
    double A = 1.0, alpha = 1.0, M = 10.0, tol = 1e-12;
    std::int64_t grid = 1024;
};

struct SimulateParams {
    double A = 1.0, alpha = 1.0, M = 10.0, x = 0.0;
    std::string strategy = "zero";
    double dt = 1e-3, tmax = 0.0, tol = 1e-12;
    std::uint64_t paths = 10000, seed = 1;
    std::int64_t grid = 1024;
    std::string policy = "auto";
    bool tau_csv = false;
};

struct CompareParams {
    double A = 1.0, alpha = 1.0, M = 10.0, x = 0.0;
    std::vector<std::string> strategies;
    double dt = 1e-3, tmax = 0.0, tol = 1e-12;
    std::uint64_t paths = 10000, seed = 1;
    std::int64_t grid = 1024;
    std::string policy = "auto";
};

struct FiguresParams {
    double M = 10.0;
    std::int64_t points = 1001;
    double tol = 1e-9;
};

struct FastRetireParams {
    double alpha = 0.4, target = 0.1, M = 10.0;
    bool mc = false;
    double dt = 1e-5;
    std::uint64_t paths = 2000, seed = 1;
};

// ---------------------------------------------------------------------------

void run_solve(const SolveParams& p, const fs::path& out_dir) {
    ModelHandle model;
    check(retire_model_create(p.A, p.alpha, p.M, &model.ptr));
    retire_regime regime;
    check(retire_model_regime(model.ptr, &regime));
    if (regime == RETIRE_REGIME_DEGENERATE) {
        std::fprintf(stderr, "error: degenerate regime: use fast-retire\n");
        std::exit(3);
    }
    GfHandle gf;
    check(retire_gfunction_build(model.ptr, p.M, p.grid, p.tol, &gf.ptr));
    fs::create_directories(out_dir);
    check(retire_gfunction_write_csv(gf.ptr, (out_dir / "gfunction.csv").string().c_str()));
    check(retire_gfunction_write_json(gf.ptr, (out_dir / "gfunction.json").string().c_str()));
    write_manifest(out_dir, "solve",
                   {{"A", p.A},
                    {"alpha", p.alpha},
                    {"M", p.M},
                    {"grid", p.grid},
                    {"tol", p.tol}});
    std::printf("wrote %s and gfunction.json (%lld nodes)\n",
                (out_dir / "gfunction.csv").string().c_str(),
                static_cast<long long>(p.grid));
}

StrategyHandle make_strategy(const std::string& text, const retire_model* model,
                             std::int64_t grid, double tol, GfHandle& gf) {
    StrategyHandle strategy;
    if (text == "optimal") {
        double m = 0.0;
        check(retire_model_params(model, nullptr, nullptr, &m));
        check(retire_gfunction_build(model, m, grid, tol, &gf.ptr));
    }
    const retire_status st = retire_strategy_parse(text.c_str(), gf.ptr, &strategy.ptr);
    if (st != RETIRE_OK) fail_with(st);
    return strategy;
}

retire_sim_config sim_config_from(double dt, std::uint64_t paths, std::uint64_t seed, double tmax,
                                  const std::string& policy) {
    retire_sim_config cfg;
    retire_sim_config_init(&cfg);
    cfg.dt = dt;
    cfg.paths = paths;
    cfg.seed = seed;
    cfg.t_max = tmax;
    cfg.clamp_policy = parse_policy(policy);
    return cfg;
}

void run_simulate(const SimulateParams& p, const fs::path& out_dir) {
    ModelHandle model;
    check(retire_model_create(p.A, p.alpha, p.M, &model.ptr));
    GfHandle gf;
    StrategyHandle strategy = make_strategy(p.strategy, model.ptr, p.grid, p.tol, gf);
    const retire_sim_config cfg = sim_config_from(p.dt, p.paths, p.seed, p.tmax, p.policy);

    SimHandle result;
    check(retire_simulate(model.ptr, strategy.ptr, p.x, &cfg, &result.ptr));

    fs::create_directories(out_dir);
    check(retire_sim_result_write_json(result.ptr, (out_dir / "simresult.json").string().c_str()));
    if (p.tau_csv)
        check(retire_sim_result_write_hit_times_csv(
            result.ptr, (out_dir / "hit_times.csv").string().c_str()));
    write_manifest(out_dir, "simulate",
                   {{"A", p.A},
                    {"alpha", p.alpha},
                    {"M", p.M},
                    {"x", p.x},
                    {"strategy", p.strategy},
                    {"dt", p.dt},
                    {"paths", p.paths},
                    {"seed", p.seed},
                    {"tmax", p.tmax},
                    {"tol", p.tol},
                    {"grid", p.grid},
                    {"policy", p.policy},
                    {"tau_csv", p.tau_csv}});

    double mean, se;
    uint64_t paths, hits, censored, ruined, clamped;
    check(retire_sim_result_stats(result.ptr, &mean, &se));
    check(retire_sim_result_counts(result.ptr, &paths, &hits, &censored, &ruined, &clamped));
    std::printf("strategy %s from x=%g: mean %.6f  se %.2e  (hits %llu, censored %llu, "
                "ruined %llu, clamped steps %llu)\n",
                p.strategy.c_str(), p.x, mean, se, (unsigned long long)hits,
                (unsigned long long)censored, (unsigned long long)ruined,
                (unsigned long long)clamped);
}

void run_compare(const CompareParams& p, const fs::path& out_dir) {
    if (p.strategies.size() < 2) fail_usage("compare needs at least two --strategy entries");
    ModelHandle model;
    check(retire_model_create(p.A, p.alpha, p.M, &model.ptr));

    std::string csv = "strategy,mean,std_error,hits,censored,ruined,ruined_fraction,"
                      "clamped_steps,analytic,gap\n";
    std::printf("%-24s %12s %10s %9s %9s %12s %10s\n", "strategy", "mc_mean", "se", "ruined",
                "censored", "analytic", "gap");
    for (const auto& text : p.strategies) {
        GfHandle gf;
        StrategyHandle strategy = make_strategy(text, model.ptr, p.grid, p.tol, gf);
        const retire_sim_config cfg = sim_config_from(p.dt, p.paths, p.seed, p.tmax, p.policy);
        SimHandle result;
        check(retire_simulate(model.ptr, strategy.ptr, p.x, &cfg, &result.ptr));

        double mean, se;
        uint64_t paths, hits, censored, ruined, clamped;
        check(retire_sim_result_stats(result.ptr, &mean, &se));
        check(retire_sim_result_counts(result.ptr, &paths, &hits, &censored, &ruined, &clamped));

        // closed-form reference where one exists
        double analytic = std::nan("");
        if (text == "zero") {
            check(retire_expected_time_zero(p.x, p.M, &analytic));
        } else if (text == "optimal") {
            check(retire_value(model.ptr, p.x, 1e-9, &analytic));
        } else if (text.rfind("threshold:", 0) == 0 && p.A == 1.0) {
            double f_eps = 0.0, f_c = 0.0;
            if (std::sscanf(text.c_str(), "threshold:%lf,%lf", &f_eps, &f_c) == 2) {
                const retire_status st =
                    retire_expected_time_threshold(p.x, f_eps, f_c, p.alpha, p.M, &analytic);
                if (st != RETIRE_OK) analytic = std::nan("");
            }
        }
        const double gap = mean - analytic;
        const double ruined_fraction =
            static_cast<double>(ruined) / static_cast<double>(paths);

        csv += text + ',' + fmt17(mean) + ',' + fmt17(se) + ',' + std::to_string(hits) + ',' +
               std::to_string(censored) + ',' + std::to_string(ruined) + ',' +
               fmt17(ruined_fraction) + ',' + std::to_string(clamped) + ',' + fmt17(analytic) +
               ',' + fmt17(gap) + '\n';
        std::printf("%-24s %12.6f %10.2e %9llu %9llu %12.6f %10.2e\n", text.c_str(), mean, se,
                    (unsigned long long)ruined, (unsigned long long)censored, analytic, gap);
    }
    fs::create_directories(out_dir);
    write_text(out_dir / "compare.csv", csv);
    ordered_json strategies = p.strategies;
    write_manifest(out_dir, "compare",
                   {{"A", p.A},
                    {"alpha", p.alpha},
                    {"M", p.M},
                    {"x", p.x},
                    {"strategies", strategies},
                    {"dt", p.dt},
                    {"paths", p.paths},
                    {"seed", p.seed},
                    {"tmax", p.tmax},
                    {"tol", p.tol},
                    {"grid", p.grid},
                    {"policy", p.policy}});
}

void run_figures(const FiguresParams& p, const fs::path& out_dir) {
    if (p.points < 2) fail_usage("figures needs at least 2 points");
    ModelHandle model;
    check(retire_model_create(1.0, 1.0, p.M, &model.ptr));
    fs::create_directories(out_dir);

    {  // y vs 1/y + log y over [0.05, 8]
        std::string csv = "y,h\n";
        for (int i = 0; i < 160; ++i) {
            const double y = 0.05 * (i + 1);
            double h;
            check(retire_h_eval(y, &h));
            csv += fmt17(y) + ',' + fmt17(h) + '\n';
        }
        write_text(out_dir / "fig1.csv", csv);
    }

    std::string fig2 = "x,g\n", fig3 = "x,f0\n", fig4 = "x,V\n";
    for (std::int64_t i = 0; i < p.points; ++i) {
        const double x = p.M * static_cast<double>(i) / static_cast<double>(p.points - 1);
        double g, f0, v;
        check(retire_solve_g(model.ptr, x, 1e-12, &g));
        check(retire_control(model.ptr, x, &f0));
        check(retire_value(model.ptr, x, p.tol, &v));
        fig2 += fmt17(x) + ',' + fmt17(g) + '\n';
        fig3 += fmt17(x) + ',' + fmt17(f0) + '\n';
        fig4 += fmt17(x) + ',' + fmt17(v) + '\n';
    }
    write_text(out_dir / "fig2.csv", fig2);
    write_text(out_dir / "fig3.csv", fig3);
    write_text(out_dir / "fig4.csv", fig4);
    write_manifest(out_dir, "figures",
                   {{"M", p.M}, {"points", p.points}, {"tol", p.tol}});
    std::printf("wrote fig1.csv .. fig4.csv under %s\n", out_dir.string().c_str());
}

void run_fast_retire(const FastRetireParams& p, const fs::path& out_dir) {
    double eps, c, achieved;
    check(retire_fast_retirement_params(p.alpha, p.target, p.M, &eps, &c, &achieved));
    std::printf("alpha %.4g, target %.4g: eps = %.10g, c = %.10g, expected time %.10g\n",
                p.alpha, p.target, eps, c, achieved);

    ordered_json doc;
    doc["format"] = "retire.fastretire.v1";
    doc["alpha"] = p.alpha;
    doc["target"] = p.target;
    doc["M"] = p.M;
    doc["eps"] = eps;
    doc["c"] = c;
    doc["expected_time"] = achieved;
    doc["mc"] = nullptr;

    if (p.mc) {
        ModelHandle model;
        check(retire_model_create(1.0, p.alpha, p.M, &model.ptr));
        StrategyHandle strategy;
        check(retire_strategy_threshold(eps, c, &strategy.ptr));
        retire_sim_config cfg = sim_config_from(p.dt, p.paths, p.seed, 0.0, "soft");
        SimHandle result;
        check(retire_simulate(model.ptr, strategy.ptr, 0.0, &cfg, &result.ptr));
        double mean, se;
        check(retire_sim_result_stats(result.ptr, &mean, &se));
        std::printf("mc confirmation: mean %.6f  se %.2e  (closed form %.6f)\n", mean, se,
                    achieved);
        doc["mc"] = ordered_json{{"mean", mean},
                                 {"std_error", se},
                                 {"dt", p.dt},
                                 {"paths", p.paths},
                                 {"seed", p.seed}};
    }
    fs::create_directories(out_dir);
    write_text(out_dir / "fastretire.json", doc.dump(2) + "\n");
    write_manifest(out_dir, "fast-retire",
                   {{"alpha", p.alpha},
                    {"target", p.target},
                    {"M", p.M},
                    {"mc", p.mc},
                    {"dt", p.dt},
                    {"paths", p.paths},
                    {"seed", p.seed}});
}

void run_rerun(const fs::path& manifest_path, const fs::path& out_dir) {
    std::ifstream in(manifest_path);
    if (!in) fail_usage("cannot open manifest: " + manifest_path.string());
    ordered_json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        fail_usage(std::string("malformed manifest: ") + e.what());
    }
    if (doc.value("format", "") != "retire.manifest.v1")
        fail_usage("not a retire manifest: " + manifest_path.string());
    const std::string command = doc.value("command", "");
    const auto& q = doc.at("parameters");

    if (command == "solve") {
        SolveParams p;
        p.A = q.at("A");
        p.alpha = q.at("alpha");
        p.M = q.at("M");
        p.grid = q.at("grid");
        p.tol = q.at("tol");
        run_solve(p, out_dir);
    } else if (command == "simulate") {
        SimulateParams p;
        p.A = q.at("A");
        p.alpha = q.at("alpha");
        p.M = q.at("M");
        p.x = q.at("x");
        p.strategy = q.at("strategy");
        p.dt = q.at("dt");
        p.paths = q.at("paths");
        p.seed = q.at("seed");
        p.tmax = q.at("tmax");
        p.tol = q.at("tol");
        p.grid = q.at("grid");
        p.policy = q.at("policy");
        p.tau_csv = q.at("tau_csv");
        run_simulate(p, out_dir);
    } else if (command == "compare") {
        CompareParams p;
        p.A = q.at("A");
        p.alpha = q.at("alpha");
        p.M = q.at("M");
        p.x = q.at("x");
        p.strategies = q.at("strategies").get<std::vector<std::string>>();
        p.dt = q.at("dt");
        p.paths = q.at("paths");
        p.seed = q.at("seed");
        p.tmax = q.at("tmax");
        p.tol = q.at("tol");
        p.grid = q.at("grid");
        p.policy = q.at("policy");
        run_compare(p, out_dir);
    } else if (command == "figures") {
        FiguresParams p;
        p.M = q.at("M");
        p.points = q.at("points");
        p.tol = q.at("tol");
        run_figures(p, out_dir);
    } else if (command == "fast-retire") {
        FastRetireParams p;
        p.alpha = q.at("alpha");
        p.target = q.at("target");
        p.M = q.at("M");
        p.mc = q.at("mc");
        p.dt = q.at("dt");
        p.paths = q.at("paths");
        p.seed = q.at("seed");
        run_fast_retire(p, out_dir);
    } else {
        fail_usage("manifest carries an unknown command: " + command);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"optimal retirement-investing toolkit"};
    app.set_version_flag("--version", retire_version());
    app.set_config("--config", "", "defaults file (key = value, [subcommand] sections)");
    app.require_subcommand(1);

    SolveParams solve_p;
    std::string solve_out = ".";
    auto* solve = app.add_subcommand("solve", "tabulate g, f0 and V; write CSV/JSON");
    solve->add_option("--A", solve_p.A, "diffusion scale");
    solve->add_option("--alpha", solve_p.alpha, "diffusion exponent");
    solve->add_option("--M", solve_p.M, "retirement target");
    solve->add_option("--grid", solve_p.grid, "number of tabulation nodes");
    solve->add_option("--tol", solve_p.tol, "solver tolerance");
    solve->add_option("--out", solve_out, "output directory");

    SimulateParams sim_p;
    std::string sim_out = ".";
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo hitting-time estimate");
    simulate->add_option("--A", sim_p.A, "diffusion scale");
    simulate->add_option("--alpha", sim_p.alpha, "diffusion exponent");
    simulate->add_option("--M", sim_p.M, "retirement target");
    simulate->add_option("--x", sim_p.x, "starting fortune")->required();
    simulate->add_option("--strategy", sim_p.strategy,
                         "zero | const:C | threshold:EPS,C | optimal")
        ->required();
    simulate->add_option("--dt", sim_p.dt, "time step");
    simulate->add_option("--paths", sim_p.paths, "number of paths");
    simulate->add_option("--seed", sim_p.seed, "noise seed");
    simulate->add_option("--tmax", sim_p.tmax, "censoring horizon (0 = 50*M)");
    simulate->add_option("--policy", sim_p.policy, "soft | ruin | auto");
    simulate->add_option("--grid", sim_p.grid, "tabulation nodes for the optimal strategy");
    simulate->add_option("--tol", sim_p.tol, "solver tolerance");
    simulate->add_flag("--tau-csv", sim_p.tau_csv, "also write hit_times.csv");
    simulate->add_option("--out", sim_out, "output directory");

    CompareParams cmp_p;
    std::string cmp_out = ".";
    auto* compare = app.add_subcommand("compare", "compare strategies at one starting point");
    compare->add_option("--A", cmp_p.A, "diffusion scale");
    compare->add_option("--alpha", cmp_p.alpha, "diffusion exponent");
    compare->add_option("--M", cmp_p.M, "retirement target");
    compare->add_option("--x", cmp_p.x, "starting fortune")->required();
    compare->add_option("--strategy", cmp_p.strategies, "strategy (repeat at least twice)");
    compare->add_option("--dt", cmp_p.dt, "time step");
    compare->add_option("--paths", cmp_p.paths, "number of paths");
    compare->add_option("--seed", cmp_p.seed, "noise seed");
    compare->add_option("--tmax", cmp_p.tmax, "censoring horizon (0 = 50*M)");
    compare->add_option("--policy", cmp_p.policy, "soft | ruin | auto");
    compare->add_option("--grid", cmp_p.grid, "tabulation nodes for the optimal strategy");
    compare->add_option("--tol", cmp_p.tol, "solver tolerance");
    compare->add_option("--out", cmp_out, "output directory");

    FiguresParams fig_p;
    std::string fig_out = ".";
    auto* figures = app.add_subcommand("figures", "emit fig1..fig4 data series");
    figures->add_option("--M", fig_p.M, "retirement target for fig2-fig4");
    figures->add_option("--points", fig_p.points, "rows per series");
    figures->add_option("--tol", fig_p.tol, "quadrature tolerance for V");
    figures->add_option("--out", fig_out, "output directory");

    FastRetireParams fr_p;
    std::string fr_out = ".";
    auto* fast = app.add_subcommand("fast-retire",
                                    "threshold construction collapsing the expected time");
    fast->add_option("--alpha", fr_p.alpha, "diffusion exponent (< 1/2)")->required();
    fast->add_option("--target", fr_p.target, "expected-time target from x = 0")->required();
    fast->add_option("--M", fr_p.M, "retirement target");
    fast->add_flag("--mc", fr_p.mc, "confirm by Monte Carlo");
    fast->add_option("--dt", fr_p.dt, "mc time step");
    fast->add_option("--paths", fr_p.paths, "mc paths");
    fast->add_option("--seed", fr_p.seed, "mc seed");
    fast->add_option("--out", fr_out, "output directory");

    std::string rerun_manifest;
    std::string rerun_out;
    auto* rerun = app.add_subcommand("rerun", "re-execute a run manifest");
    rerun->add_option("manifest", rerun_manifest, "manifest json")->required();
    rerun->add_option("--out", rerun_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }

    if (solve->parsed()) run_solve(solve_p, solve_out);
    if (simulate->parsed()) run_simulate(sim_p, sim_out);
    if (compare->parsed()) run_compare(cmp_p, cmp_out);
    if (figures->parsed()) run_figures(fig_p, fig_out);
    if (fast->parsed()) run_fast_retire(fr_p, fr_out);
    if (rerun->parsed()) run_rerun(rerun_manifest, rerun_out);
    return 0;
}
