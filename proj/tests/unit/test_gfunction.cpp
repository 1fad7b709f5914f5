#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "core/gsolve.hpp"
#include "core/philox.hpp"

#include "doctest.h"

using namespace retire;

namespace {

std::filesystem::path tmp_file(const char* name) {
    auto dir = std::filesystem::temp_directory_path() / "retire_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("gfunction tabulation invariants (classic)") {
    const ModelParams params(1.0, 1.0, 10.0);
    const GFunction gf = GFunction::build(params, 10.0, 512);

    const auto grid = gf.grid();
    const auto g = gf.values();
    CHECK(grid.front() == 0.0);
    CHECK(grid.back() == 10.0);
    CHECK(g.front() == 1.0);

    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(g[i] > 0.0);
        CHECK(g[i] <= 1.0);
        if (i > 0) CHECK(g[i] < g[i - 1]);
        worst = std::max(worst, std::abs(1.0 / g[i] + std::log(g[i]) - 1.0 - 0.5 * grid[i]));
    }
    CHECK(worst < 1e-10);

    // value column: zero at M, matches the scalar quadrature route
    CHECK(gf.value_integrals().back() == 0.0);
    CHECK(gf.value_integrals().front() == doctest::Approx(2.428631678010931).epsilon(1e-8));
    for (std::size_t i : {std::size_t(0), grid.size() / 3, grid.size() / 2})
        CHECK(std::abs(gf.value_integrals()[i] - value(params, grid[i])) < 2e-9);
}

TEST_CASE("gfunction interpolation tracks the direct solve") {
    const ModelParams params(1.0, 1.0, 10.0);
    const GFunction gf = GFunction::build(params, 10.0, 1024);
    const rng::CounterRng gen(5, 0);
    double worst = 0.0;
    double worst_f0 = 0.0;
    for (int i = 0; i < 400; ++i) {
        const double x = 10.0 * gen.uniform(static_cast<std::uint64_t>(i), 0);
        worst = std::max(worst, std::abs(gf.eval(x) - solve_g(params, x)));
        if (x > 1e-4)
            worst_f0 = std::max(worst_f0, std::abs(gf.control_at(x) / control(params, x) - 1.0));
    }
    CHECK(worst < 1e-7);
    CHECK(worst_f0 < 1e-6);  // what the simulator hot loop actually needs
    CHECK(gf.eval(0.0) == 1.0);
    CHECK(gf.control_at(0.0) == 0.0);
    CHECK(gf.eval(11.0) == gf.values().back());  // clamped beyond the table
}

TEST_CASE("gfunction half-critical matches the exponential") {
    const GFunction gf = GFunction::build(ModelParams(1.0, 0.5, 10.0), 10.0, 256);
    const auto grid = gf.grid();
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(gf.values()[i] == doctest::Approx(std::exp(-2.0 * grid[i])).epsilon(1e-12));
}

TEST_CASE("gfunction power regular satisfies its integral equation") {
    const ModelParams params(1.0, 0.75, 10.0);
    const GFunction gf = GFunction::build(params, 10.0, 96);
    const auto grid = gf.grid();
    const auto g = gf.values();
    const double k = std::sqrt(1.0 / 3.0) / 0.75;
    for (std::size_t i = 1; i < grid.size(); i += 7) {
        const double lhs =
            2.0 * std::sqrt((1.0 - g[i]) / g[i]) + 2.0 * std::asin(std::sqrt(g[i])) - M_PI;
        CHECK(std::abs(lhs - k * grid[i]) < 1e-10);
    }
}

TEST_CASE("gfunction general-linear nodes satisfy the rescaled equation") {
    const ModelParams params(2.0, 1.0, 8.0);
    const GFunction gf = GFunction::build(params, 8.0, 128);
    const auto grid = gf.grid();
    const auto g = gf.values();
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        worst = std::max(worst, std::abs(1.0 / g[i] + std::log(g[i]) - 1.0 - grid[i] / 8.0));
    CHECK(worst < 1e-10);
}

TEST_CASE("gfunction csv round trip is bit exact") {
    const GFunction gf = GFunction::build(ModelParams(1.0, 1.0, 10.0), 10.0, 128);
    const auto path = tmp_file("gf_roundtrip.csv");
    gf.write_csv(path.string());
    const GFunction back = GFunction::read_csv(path.string());
    REQUIRE(back.grid().size() == gf.grid().size());
    for (std::size_t i = 0; i < gf.grid().size(); ++i) {
        CHECK(back.grid()[i] == gf.grid()[i]);
        CHECK(back.values()[i] == gf.values()[i]);
        CHECK(back.value_integrals()[i] == gf.value_integrals()[i]);
    }
    CHECK(back.params().A() == 1.0);
    CHECK(back.params().M() == 10.0);
}

TEST_CASE("gfunction json round trip is bit exact") {
    const GFunction gf = GFunction::build(ModelParams(2.0, 1.0, 8.0), 8.0, 128);
    const auto path = tmp_file("gf_roundtrip.json");
    gf.write_json(path.string());
    const GFunction back = GFunction::read_json(path.string());
    REQUIRE(back.grid().size() == gf.grid().size());
    for (std::size_t i = 0; i < gf.grid().size(); ++i) {
        CHECK(back.grid()[i] == gf.grid()[i]);
        CHECK(back.values()[i] == gf.values()[i]);
        CHECK(back.value_integrals()[i] == gf.value_integrals()[i]);
    }
    CHECK(back.solver_tol() == gf.solver_tol());
    CHECK(back.quad_tol() == gf.quad_tol());
}

TEST_CASE("gfunction csv first row carries the boundary values") {
    const GFunction gf = GFunction::build(ModelParams(1.0, 1.0, 10.0), 10.0, 64);
    const auto path = tmp_file("gf_first_row.csv");
    gf.write_csv(path.string());

    std::ifstream in(path.string());
    std::string line;
    std::string first_data;
    bool seen_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!seen_header) {
            CHECK(line == "x,g,g_prime,f0,V");
            seen_header = true;
            continue;
        }
        first_data = line;
        break;
    }
    double x, g, gp, f0, v;
    REQUIRE(std::sscanf(first_data.c_str(), "%lf,%lf,%lf,%lf,%lf", &x, &g, &gp, &f0, &v) == 5);
    CHECK(x == 0.0);
    CHECK(g == 1.0);
    CHECK(std::isinf(gp));
    CHECK(gp < 0.0);
    CHECK(f0 == 0.0);
    CHECK(v == doctest::Approx(2.428631678010931).epsilon(1e-8));
}

TEST_CASE("gfunction build rejects bad arguments") {
    const ModelParams params(1.0, 1.0, 10.0);
    CHECK_THROWS_AS(GFunction::build(params, 5.0, 256), DomainError);   // x_max < M
    CHECK_THROWS_AS(GFunction::build(params, 10.0, 8), DomainError);    // too few nodes
    CHECK_THROWS_AS(GFunction::build(ModelParams(1.0, 0.3, 10.0), 10.0, 256),
                    UnsupportedRegimeError);
}

TEST_CASE("gfunction with x_max beyond M keeps V(M) = 0") {
    const ModelParams params(1.0, 1.0, 5.0);
    const GFunction gf = GFunction::build(params, 6.0, 128);
    const auto grid = gf.grid();
    bool found = false;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] == 5.0) {
            CHECK(gf.value_integrals()[i] == 0.0);
            found = true;
        }
        if (grid[i] > 5.0) CHECK(gf.value_integrals()[i] < 0.0);
    }
    CHECK(found);
}
