#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"

#include "helpers.hpp"
#include "restartopt/errors.hpp"
#include "restartopt/landscape.hpp"

using namespace restartopt;
using testutil::p4;
using testutil::random_landscape;

TEST_CASE("descend takes the argmin over the closed neighborhood") {
    const DiscreteLandscape ls = p4();
    CHECK(descend(ls, 1) == 0);
    CHECK(descend(ls, 2) == 2);  // strict local minimum
    CHECK(descend(ls, 3) == 2);
    CHECK(descend(ls, 0) == 0);

    const DiscreteLandscape single =
        DiscreteLandscape::from_parts({{0, 0.0, 1.0}}, {});
    CHECK(descend(single, 0) == 0);

    CHECK_THROWS_AS(descend(ls, 42), InputError);
}

TEST_CASE("descend is monotone in energy and fixes exactly the local minima") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const DiscreteLandscape ls = random_landscape(30, seed);
        for (NodeId x : ls.ids()) {
            const NodeId y = descend(ls, x);
            CHECK(ls.energy(y) <= ls.energy(x));
            if (y == x) {
                for (NodeId z : ls.neighbors(x)) CHECK(ls.energy(z) >= ls.energy(x));
            } else {
                CHECK(ls.energy(y) < ls.energy(x));
            }
        }
    }
}

TEST_CASE("tie-break picks the lowest node id") {
    // Both neighbors of 1 sit at the same minimal energy.
    const DiscreteLandscape ls = DiscreteLandscape::from_parts(
        {{0, 0.0, 0.25}, {1, 2.0, 0.25}, {2, 0.0, 0.25}, {3, 1.0, 0.25}},
        {{0, 1}, {1, 2}, {2, 3}});
    CHECK(descend(ls, 1) == 0);
}

TEST_CASE("depth counts steps to the stopping set") {
    const DiscreteLandscape ls = p4();
    CHECK(depth(ls, 0.0, RestartSetSpec::g1(), 3) == 1);
    CHECK(depth(ls, 0.0, RestartSetSpec::g1(), 0) == 0);
    CHECK(depth(ls, 0.0, RestartSetSpec::a2(), 0) == 0);
    CHECK(depth(ls, 0.0, RestartSetSpec::g1(), 1) == 1);

    CHECK_THROWS_AS(depth(ls, 0.5, RestartSetSpec::g1(), 1), InputError);  // eps not attained
}

TEST_CASE("depth additivity along descent chains") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        const DiscreteLandscape ls = random_landscape(40, seed + 100);
        for (Mode m : {Mode::G1, Mode::A2}) {
            const RestartSetSpec spec{m, {}};
            for (NodeId x : ls.ids()) {
                const int d = depth(ls, 0.0, spec, x);
                if (d >= 1)
                    CHECK(depth(ls, 0.0, spec, descend(ls, x)) == d - 1);
            }
        }
    }
}

TEST_CASE("decompose on the path fixture") {
    const DiscreteLandscape ls = p4();
    const SetDecomposition d = decompose(ls, 0.0, RestartSetSpec::g1());
    CHECK(d.well == std::vector<NodeId>{0, 1});
    CHECK(d.outside_well == std::vector<NodeId>{2, 3});
    CHECK(d.local_minima == std::vector<NodeId>{0, 2});
    CHECK(d.x1 == std::vector<NodeId>{2, 3});
    CHECK(d.x2 == std::vector<NodeId>{0, 1});
    CHECK(d.x3.empty());
    CHECK(d.level_set == std::vector<NodeId>{0});
    CHECK(d.above_set == std::vector<NodeId>{1, 2, 3});
}

TEST_CASE("monotone single-well landscape has an empty outside") {
    const DiscreteLandscape ls = DiscreteLandscape::from_parts(
        {{0, 0.0, 0.25}, {1, 1.0, 0.25}, {2, 2.0, 0.25}, {3, 3.0, 0.25}},
        {{0, 1}, {1, 2}, {2, 3}});
    const SetDecomposition d = decompose(ls, 0.0, RestartSetSpec::g1());
    CHECK(d.outside_well.empty());
    CHECK(d.x3.empty());
    CHECK(d.x1.empty());
    CHECK_THROWS_AS(extract_profile(ls, 0.0, RestartSetSpec::g1()), InputError);
}

TEST_CASE("decomposition partitions the landscape") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        const DiscreteLandscape ls = random_landscape(50, seed + 7);
        for (Mode m : {Mode::G1, Mode::A2}) {
            const SetDecomposition d = decompose(ls, 0.0, {m, {}});
            std::vector<NodeId> all;
            all.insert(all.end(), d.x1.begin(), d.x1.end());
            all.insert(all.end(), d.x2.begin(), d.x2.end());
            all.insert(all.end(), d.x3.begin(), d.x3.end());
            std::sort(all.begin(), all.end());
            CHECK(all == ls.ids());
            CHECK(d.x2 == d.well);
        }
    }
}

TEST_CASE("extract_profile on the path fixture, both restart sets") {
    const DiscreteLandscape ls = p4();
    const LandscapeProfile g1 = extract_profile(ls, 0.0, RestartSetSpec::g1());
    CHECK(g1.q == std::vector<double>{0.25, 0.25});
    CHECK(g1.p2 == std::vector<double>{0.25, 0.25});
    CHECK(g1.p1 == std::vector<double>{0.0, 0.0});
    CHECK(g1.a() == 1);
    CHECK(g1.b() == 1);
    CHECK(g1.c == doctest::Approx(1.0).epsilon(1e-14));
    g1.validate();

    const LandscapeProfile a2 = extract_profile(ls, 0.0, RestartSetSpec::a2());
    CHECK(a2.q == std::vector<double>{0.25, 0.25});
    CHECK(a2.p1 == std::vector<double>{0.25, 0.25});
    CHECK(a2.p2 == std::vector<double>{0.0, 0.0});
}

TEST_CASE("profile invariants hold on random landscapes") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const DiscreteLandscape ls = random_landscape(60, seed + 40);
        for (Mode m : {Mode::G1, Mode::A2}) {
            const LandscapeProfile prof = extract_profile(ls, 0.0, {m, {}});
            prof.validate();
            CHECK(prof.q_sum() + prof.trap_sum() == doctest::Approx(1.0).epsilon(1e-12));
            if (m == Mode::A2) CHECK(prof.p2_sum() == 0.0);
            if (m == Mode::G1) CHECK(prof.p1_sum() == 0.0);
            // Depth-0 well mass dominates the level-set mass.
            double level_mass = 0.0;
            for (NodeId x : ls.ids())
                if (ls.energy(x) <= 0.0) level_mass += ls.mass(x);
            CHECK(prof.q[0] >= level_mass - 1e-12);
        }
    }
}

TEST_CASE("boundary and closure") {
    const DiscreteLandscape ls = p4();
    CHECK(boundary(ls, {0, 1}) == std::vector<NodeId>{2});
    CHECK(boundary(ls, {2, 3}) == std::vector<NodeId>{1});
    CHECK(closure(ls, {2, 3}) == std::vector<NodeId>{1, 2, 3});
    CHECK(boundary(ls, {0, 1, 2, 3}).empty());
}

TEST_CASE("critical depth on the path fixture") {
    const CriticalDepthResult r = critical_depth(p4());
    REQUIRE(r.barriers.size() == 1);
    CHECK(r.barriers[0].minimum == 2);
    CHECK(r.barriers[0].barrier == doctest::Approx(1.0).epsilon(1e-14));
    REQUIRE(r.d_f.has_value());
    CHECK(*r.d_f == doctest::Approx(1.0).epsilon(1e-14));

    // Raising the rim of the trap leaves its boundary barrier unchanged.
    const DiscreteLandscape raised = DiscreteLandscape::from_parts(
        {{0, 0.0, 0.25}, {1, 2.0, 0.25}, {2, 1.0, 0.25}, {3, 10.0, 0.25}},
        {{0, 1}, {1, 2}, {2, 3}});
    const CriticalDepthResult r2 = critical_depth(raised);
    REQUIRE(r2.barriers.size() == 1);
    CHECK(r2.barriers[0].barrier == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(*r2.d_f == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("critical depth is undefined on single-well landscapes") {
    const DiscreteLandscape convex = DiscreteLandscape::from_parts(
        {{0, 0.0, 0.5}, {1, 1.0, 0.3}, {2, 2.0, 0.2}}, {{0, 1}, {1, 2}});
    const CriticalDepthResult r = critical_depth(convex);
    CHECK_FALSE(r.d_f.has_value());
    CHECK(r.barriers.empty());
}

TEST_CASE("critical depth agrees with the brute-force pair maximum") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const DiscreteLandscape ls = random_landscape(40, seed + 900);
        const CriticalDepthResult r = critical_depth(ls);
        for (const WellBarrier& wb : r.barriers) {
            // Assemble W(x) by brute iteration of descend, then max over all
            // (boundary, well) pairs.
            std::vector<NodeId> well;
            for (NodeId y : ls.ids()) {
                NodeId z = y;
                for (int k = 0; k < ls.size() + 1 && descend(ls, z) != z; ++k)
                    z = descend(ls, z);
                if (z == wb.minimum) well.push_back(y);
            }
            const std::vector<NodeId> rim = boundary(ls, well);
            REQUIRE_FALSE(rim.empty());
            double best = -1e300;
            for (NodeId z : rim)
                for (NodeId y : well)
                    best = std::max(best, ls.energy(z) - ls.energy(y));
            CHECK(wb.barrier == doctest::Approx(best).epsilon(1e-12));
        }
    }
}

TEST_CASE("JSON round trip and normalization warnings") {
    const std::string text = R"({
        "nodes": [{"id": 0, "f": 1.0, "mu": 1.0}, {"id": 1, "f": 3.0, "mu": 1.0},
                  {"id": 2, "f": 2.0, "mu": 2.0}],
        "edges": [[0, 1], [1, 2]]
    })";
    std::ostringstream warn;
    const DiscreteLandscape ls = DiscreteLandscape::from_json(text, &warn);
    CHECK(warn.str().find("shifted") != std::string::npos);
    CHECK(warn.str().find("normalizing") != std::string::npos);
    CHECK(ls.energy(0) == 0.0);  // shifted down by 1
    CHECK(ls.mass(2) == doctest::Approx(0.5).epsilon(1e-14));

    const DiscreteLandscape again = DiscreteLandscape::from_json(ls.to_json());
    CHECK(again.size() == 3);
    CHECK(again.energy(1) == ls.energy(1));
    CHECK(again.neighbors(1) == ls.neighbors(1));
}

TEST_CASE("JSON validation failures") {
    CHECK_THROWS_AS(DiscreteLandscape::from_json("{"), InputError);
    CHECK_THROWS_AS(DiscreteLandscape::from_json(R"({"nodes": [], "edges": []})"),
                    InputError);
    CHECK_THROWS_AS(DiscreteLandscape::from_json(
                        R"({"nodes": [{"id": 0, "f": 0.0, "mu": 0.0}], "edges": []})"),
                    InputError);
    CHECK_THROWS_AS(DiscreteLandscape::from_json(
                        R"({"nodes": [{"id": 0, "f": 0.0, "mu": 1.0}], "edges": [[0, 5]]})"),
                    InputError);
    CHECK_THROWS_AS(
        DiscreteLandscape::from_json(
            R"({"nodes": [{"id": 0, "f": 0.0, "mu": 0.5}, {"id": 0, "f": 1.0, "mu": 0.5}], "edges": []})"),
        InputError);
}
