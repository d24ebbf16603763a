#pragma once

#include <utility>
#include <vector>

#include "restartopt/landscape.hpp"
#include "restartopt/profile.hpp"
#include "restartopt/profile_gen.hpp"
#include "restartopt/rng.hpp"

namespace testutil {

using namespace restartopt;

// 4-node path with energies [0, 2, 1, 3] and uniform mass; the classic
// two-well fixture used throughout the tests.
inline DiscreteLandscape p4() {
    std::vector<LandscapeNode> nodes = {
        {0, 0.0, 0.25}, {1, 2.0, 0.25}, {2, 1.0, 0.25}, {3, 3.0, 0.25}};
    return DiscreteLandscape::from_parts(nodes, {{0, 1}, {1, 2}, {2, 3}});
}

// Connected random landscape: a random tree plus extra chords, one node at
// energy exactly 0, masses positive. Regenerates until a strict local
// minimum above 0 exists so that profile extraction is well-posed.
inline DiscreteLandscape random_landscape(int n, std::uint64_t seed) {
    for (std::uint64_t attempt = 0;; ++attempt) {
        Rng rng = Rng::substream(seed, attempt);
        std::vector<LandscapeNode> nodes(n);
        std::vector<std::pair<NodeId, NodeId>> edges;
        for (int v = 1; v < n; ++v)
            edges.emplace_back(static_cast<NodeId>(rng.uniform_int(v)), v);
        for (int e = 0; e < n / 2; ++e) {
            const int u = static_cast<int>(rng.uniform_int(n));
            const int v = static_cast<int>(rng.uniform_int(n));
            if (u != v) edges.emplace_back(u, v);
        }
        const int ground = static_cast<int>(rng.uniform_int(n));
        for (int v = 0; v < n; ++v) {
            nodes[v].id = v;
            nodes[v].energy = v == ground ? 0.0 : 0.5 + 4.5 * rng.uniform01();
            nodes[v].mass = 0.05 + rng.uniform01();
        }
        DiscreteLandscape ls = DiscreteLandscape::from_parts(nodes, edges);
        // Need an outside region: some local minimum above level 0.
        bool has_trap = false;
        for (NodeId id : ls.ids())
            if (descend(ls, id) == id && ls.energy(id) > 0.0) has_trap = true;
        if (has_trap) return ls;
    }
}

// Uniform-random profile at the default experiment geometry.
inline LandscapeProfile random_profile_at(std::uint64_t seed, int a = 20, int b = 10,
                                          double c = 1000.0) {
    FamilySpec spec;
    spec.family = Family::Random;
    spec.a = a;
    spec.b = b;
    spec.c = c;
    spec.seed = seed;
    spec.trap_split = Mode::A2;
    return random_profile(spec);
}

}  // namespace testutil
