#include <cmath>
#include <sstream>

#include "doctest.h"

#include "helpers.hpp"
#include "restartopt/errors.hpp"
#include "restartopt/experiments.hpp"
#include "restartopt/rate.hpp"

using namespace restartopt;

TEST_CASE("rate curve columns and endpoints") {
    LandscapeProfile ex1;
    ex1.q = {0.4, 0.1};
    ex1.p1 = {0.3, 0.2};
    ex1.p2 = {0.0, 0.0};
    ex1.c = 1.0;

    const ExperimentTable t = run_rate_curve(ex1, 64);
    REQUIRE(t.rows.size() == 64);
    REQUIRE(t.columns == std::vector<std::string>{"p", "xi_crit_a2", "xi_crit_g1"});

    // p = 0 endpoint has the closed form -log(1 - q(0)).
    CHECK(t.rows[0][0] == 0.0);
    CHECK(t.rows[0][1] == doctest::Approx(std::log(5.0 / 3.0)).epsilon(1e-12));

    // The G1 column is constant.
    for (const auto& r : t.rows) CHECK(r[2] == t.rows[0][2]);
}

TEST_CASE("default-size rate curve has 512 rows") {
    const LandscapeProfile prof = testutil::random_profile_at(11);
    const ExperimentTable t = run_rate_curve(prof);
    CHECK(t.rows.size() == 512);
    // An interior maximum exists when the rising-at-zero condition holds.
    if (prof.q_at(1) > prof.q_at(0) * (1.0 - prof.q_at(0))) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < t.rows.size(); ++i)
            if (t.rows[i][1] > t.rows[best][1]) best = i;
        CHECK(best > 0);
        CHECK(best + 1 < t.rows.size());
    }
}

TEST_CASE("phase transition table") {
    const ExperimentTable t = run_phase_transition(20, 16, 7);
    REQUIRE(t.rows.size() == 16);
    const ExperimentTable again = run_phase_transition(20, 16, 7);
    CHECK(t.rows == again.rows);

    const ExperimentTable single = run_phase_transition(1, 8, 3);
    for (const auto& r : single.rows) CHECK(r[2] == 0.0);

    bool has_knee = false;
    for (const auto& [k, v] : t.metadata)
        if (k == "knee_p") has_knee = true;
    CHECK(has_knee);
}

TEST_CASE("rate variance peaks at the maximally randomized end of the default run") {
    // Exploratory liquid-regime signature at the default population size and
    // seed: pure restarting (descent probability 0) carries strictly more
    // rate variance than the variance-minimizing design point.
    const ExperimentTable t = run_phase_transition(100, 64, 0);
    double var_min = 1e300;
    for (const auto& r : t.rows) var_min = std::min(var_min, r[2]);
    CHECK(t.rows.front()[2] > var_min);
}

TEST_CASE("family sweep rows and flat endpoint") {
    const std::vector<double> grid = {2.0, 1.5, 1.0};
    const ExperimentTable t = run_family_sweep(Family::Exponential, grid, 4, 3, 2.0);
    REQUIRE(t.rows.size() == 3);
    CHECK(t.rows[0][0] == 2.0);
    CHECK(t.rows[2][0] == 1.0);

    // The flat endpoint must match a direct computation on the flat profile.
    FamilySpec spec;
    spec.family = Family::Exponential;
    spec.steepness = 1.0;
    spec.a = 4;
    spec.b = 3;
    spec.c = 2.0;
    const PBestResult direct = find_p_best(parametric_profile(spec));
    CHECK(t.rows[2][1] == doctest::Approx(direct.p_best).epsilon(1e-12));
    CHECK(t.rows[2][2] == doctest::Approx(direct.xi).epsilon(1e-12));
}

TEST_CASE("default parameter grids walk the parameter downward") {
    const std::vector<double> g = default_param_grid(Family::Exponential, 32);
    REQUIRE(g.size() == 32);
    CHECK(g.front() == 4.0);
    CHECK(g.back() == 1.0);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] < g[i - 1]);
    CHECK_THROWS_AS(default_param_grid(Family::Random, 8), InputError);
}

TEST_CASE("CSV emit round-trips exactly") {
    ExperimentTable t;
    t.name = "roundtrip";
    t.columns = {"x", "y"};
    t.rows = {{0.1, 1.0 / 3.0}, {2.5e-15, -7.25}, {1e300, 0.0}};
    std::ostringstream out;
    emit_csv(t, out);
    std::istringstream in(out.str());
    const ExperimentTable back = parse_csv(in);
    CHECK(back.columns == t.columns);
    REQUIRE(back.rows.size() == t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        for (std::size_t j = 0; j < t.rows[i].size(); ++j)
            CHECK(back.rows[i][j] == t.rows[i][j]);
}

TEST_CASE("CSV output is byte-identical across repeated runs") {
    const ExperimentTable a = run_phase_transition(5, 8, 123);
    const ExperimentTable b = run_phase_transition(5, 8, 123);
    std::ostringstream sa, sb;
    emit_csv(a, sa);
    emit_csv(b, sb);
    CHECK(sa.str() == sb.str());
}

TEST_CASE("SVG carries one polyline per y column") {
    LandscapeProfile prof;
    prof.q = {0.4, 0.1};
    prof.p1 = {0.3, 0.2};
    prof.p2 = {0.0, 0.0};
    prof.c = 1.0;
    const ExperimentTable t = run_rate_curve(prof, 16);
    std::ostringstream out;
    emit_svg(t, out);
    const std::string svg = out.str();
    std::size_t count = 0;
    for (std::size_t pos = svg.find("<polyline"); pos != std::string::npos;
         pos = svg.find("<polyline", pos + 1))
        ++count;
    CHECK(count == t.columns.size() - 1);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find(t.name) != std::string::npos);
}

TEST_CASE("JSON emit carries the metadata block with the seed") {
    const ExperimentTable t = run_phase_transition(3, 8, 99);
    std::ostringstream out;
    emit_json(t, out);
    CHECK(out.str().find("\"seed\": \"99\"") != std::string::npos);
    CHECK(out.str().find("\"columns\"") != std::string::npos);
}

TEST_CASE("emit rejects unknown formats and unwritable paths") {
    const ExperimentTable t = run_phase_transition(2, 4, 1);
    CHECK_THROWS_AS(emit(t, "yaml", "/tmp/x.yaml"), InputError);
    CHECK_THROWS_AS(emit(t, "csv", "/nonexistent-dir/x.csv"), InputError);
}
