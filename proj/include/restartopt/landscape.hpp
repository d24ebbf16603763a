#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "restartopt/profile.hpp"

namespace restartopt {

using NodeId = int;

struct LandscapeNode {
    NodeId id = 0;
    double energy = 0.0;
    double mass = 0.0;
};

// Finite energy landscape: nodes with energies and restart masses plus a
// symmetric neighborhood structure. Every node is its own neighbor, so local
// minima are exactly the fixed points of the descent map. Energies are
// normalized to min 0 and masses to total 1 on construction (with a warning
// when the input was off).
class DiscreteLandscape {
public:
    static DiscreteLandscape from_parts(std::vector<LandscapeNode> nodes,
                                        const std::vector<std::pair<NodeId, NodeId>>& edges,
                                        std::ostream* warnings = nullptr);
    static DiscreteLandscape from_json(const std::string& text,
                                       std::ostream* warnings = nullptr);
    static DiscreteLandscape load(const std::string& path,
                                  std::ostream* warnings = nullptr);

    int size() const { return static_cast<int>(ids_.size()); }
    const std::vector<NodeId>& ids() const { return ids_; }

    bool has_node(NodeId id) const;
    int index_of(NodeId id) const;  // throws InputError on unknown id
    NodeId id_at(int index) const { return ids_[index]; }

    double energy(NodeId id) const { return energy_[index_of(id)]; }
    double mass(NodeId id) const { return mass_[index_of(id)]; }
    std::vector<NodeId> neighbors(NodeId id) const;

    const std::vector<double>& energies_by_index() const { return energy_; }
    const std::vector<double>& masses_by_index() const { return mass_; }
    const std::vector<std::vector<int>>& adjacency_by_index() const { return nbrs_; }

    // Requires epsilon to be an attained energy value; between-level values
    // are rejected, not rounded.
    void require_epsilon(double epsilon) const;

    std::string to_json() const;

private:
    std::vector<NodeId> ids_;             // sorted ascending
    std::vector<double> energy_;
    std::vector<double> mass_;
    std::vector<std::vector<int>> nbrs_;  // by index, self included, sorted
};

// Restart set selector for the set machinery. G1 uses the complement of the
// local minima, A2 the whole space, GeneralA the explicit node list.
struct RestartSetSpec {
    Mode mode = Mode::G1;
    std::vector<NodeId> explicit_set;  // GeneralA only

    static RestartSetSpec g1() { return {Mode::G1, {}}; }
    static RestartSetSpec a2() { return {Mode::A2, {}}; }
    static RestartSetSpec general(std::vector<NodeId> set) {
        return {Mode::GeneralA, std::move(set)};
    }
};

struct SetDecomposition {
    std::vector<NodeId> level_set;     // energies <= epsilon
    std::vector<NodeId> above_set;     // complement of the level set
    std::vector<NodeId> well;          // states whose descent ends at the level set
    std::vector<NodeId> outside_well;
    std::vector<NodeId> local_minima;  // fixed points of descend
    std::vector<NodeId> x1;            // outside states stopping in the restart complement
    std::vector<NodeId> x2;            // == well
    std::vector<NodeId> x3;            // outside states stopping inside the restart set
};

// One steepest-descent step: argmin of energy over the neighborhood, ties
// broken by lowest node id. Fixed point exactly at local minima.
NodeId descend(const DiscreteLandscape& ls, NodeId node);

// Steps until the descent chain first hits a local minimum, the level set,
// or the restart complement.
int depth(const DiscreteLandscape& ls, double epsilon, const RestartSetSpec& spec,
          NodeId node);

SetDecomposition decompose(const DiscreteLandscape& ls, double epsilon,
                           const RestartSetSpec& spec);

// Depth-mass summary (q, p1, p2, a, b, c) of a landscape under the given
// restart set. Throws when the outside region is empty (c undefined).
LandscapeProfile extract_profile(const DiscreteLandscape& ls, double epsilon,
                                 const RestartSetSpec& spec);

// Discrete boundary (neighbors of S outside S) and closure.
std::vector<NodeId> boundary(const DiscreteLandscape& ls, const std::vector<NodeId>& set);
std::vector<NodeId> closure(const DiscreteLandscape& ls, const std::vector<NodeId>& set);

struct WellBarrier {
    NodeId minimum = 0;
    double barrier = 0.0;  // H(x): largest boundary-vs-well energy gap
};

struct CriticalDepthResult {
    std::optional<double> d_f;  // max H(x)/f(x); empty when no strict local minima
    std::vector<WellBarrier> barriers;
};

// Escape-barrier difficulty of the landscape over its strict local minima.
CriticalDepthResult critical_depth(const DiscreteLandscape& ls);

std::string critical_depth_to_json(const CriticalDepthResult& r);

}  // namespace restartopt
