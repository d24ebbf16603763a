#include "restartopt/landscape.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "restartopt/errors.hpp"

namespace restartopt {

namespace {

// Descent targets for every node, by index.
std::vector<int> descent_map(const DiscreteLandscape& ls) {
    const auto& f = ls.energies_by_index();
    const auto& nbrs = ls.adjacency_by_index();
    std::vector<int> d(ls.size());
    for (int x = 0; x < ls.size(); ++x) {
        int best = x;
        for (int y : nbrs[x])
            if (f[y] < f[best]) best = y;  // lists sorted by id: first lowest wins ties
        d[x] = best;
    }
    return d;
}

// Limit of the iterated descent, memoized along chains.
std::vector<int> descent_limits(const std::vector<int>& dmap) {
    const int n = static_cast<int>(dmap.size());
    std::vector<int> limit(n, -1);
    std::vector<int> path;
    for (int x = 0; x < n; ++x) {
        if (limit[x] >= 0) continue;
        path.clear();
        int y = x;
        while (limit[y] < 0 && dmap[y] != y) {
            path.push_back(y);
            y = dmap[y];
        }
        const int end = limit[y] >= 0 ? limit[y] : y;
        limit[y] = end;
        for (int z : path) limit[z] = end;
    }
    return limit;
}

// x in A, by index, per the restart-set spec.
std::vector<char> restart_set_mask(const DiscreteLandscape& ls, const RestartSetSpec& spec,
                                   const std::vector<int>& dmap) {
    const int n = ls.size();
    std::vector<char> in_a(n, 1);
    switch (spec.mode) {
        case Mode::A2:
            break;
        case Mode::G1:
            for (int x = 0; x < n; ++x)
                if (dmap[x] == x) in_a[x] = 0;
            break;
        case Mode::GeneralA: {
            std::fill(in_a.begin(), in_a.end(), 0);
            for (NodeId id : spec.explicit_set) in_a[ls.index_of(id)] = 1;
            break;
        }
    }
    return in_a;
}

struct DepthInfo {
    std::vector<int> steps;     // d(x)
    std::vector<int> endpoint;  // where the chain stops
};

// d(x): first hit of (local minima  union  level set)  union  restart
// complement, walking the descent map. Memoized; finite on finite landscapes.
DepthInfo depth_info(const DiscreteLandscape& ls, double epsilon, const RestartSetSpec& spec) {
    const auto dmap = descent_map(ls);
    const auto& f = ls.energies_by_index();
    const auto in_a = restart_set_mask(ls, spec, dmap);
    const int n = ls.size();

    std::vector<char> stop(n, 0);
    for (int x = 0; x < n; ++x)
        stop[x] = (dmap[x] == x) || (f[x] <= epsilon) || !in_a[x];

    DepthInfo info;
    info.steps.assign(n, -1);
    info.endpoint.assign(n, -1);
    std::vector<int> path;
    for (int x = 0; x < n; ++x) {
        if (info.steps[x] >= 0) continue;
        path.clear();
        int y = x;
        while (info.steps[y] < 0 && !stop[y]) {
            path.push_back(y);
            y = dmap[y];
        }
        int base_steps;
        int base_end;
        if (info.steps[y] >= 0) {
            base_steps = info.steps[y];
            base_end = info.endpoint[y];
        } else {
            base_steps = 0;
            base_end = y;
            info.steps[y] = 0;
            info.endpoint[y] = y;
        }
        for (int k = static_cast<int>(path.size()) - 1; k >= 0; --k) {
            ++base_steps;
            info.steps[path[k]] = base_steps;
            info.endpoint[path[k]] = base_end;
        }
    }
    return info;
}

std::vector<NodeId> to_ids(const DiscreteLandscape& ls, const std::vector<int>& indices) {
    std::vector<NodeId> out;
    out.reserve(indices.size());
    for (int i : indices) out.push_back(ls.id_at(i));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

DiscreteLandscape DiscreteLandscape::from_parts(std::vector<LandscapeNode> nodes,
                                                const std::vector<std::pair<NodeId, NodeId>>& edges,
                                                std::ostream* warnings) {
    if (nodes.empty()) throw InputError("landscape has no nodes");
    std::sort(nodes.begin(), nodes.end(),
              [](const LandscapeNode& a, const LandscapeNode& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < nodes.size(); ++i)
        if (nodes[i].id == nodes[i - 1].id)
            throw InputError("duplicate node id " + std::to_string(nodes[i].id));

    DiscreteLandscape ls;
    ls.ids_.reserve(nodes.size());
    ls.energy_.reserve(nodes.size());
    ls.mass_.reserve(nodes.size());
    for (const auto& nd : nodes) {
        if (!(nd.mass > 0.0))
            throw InputError("node " + std::to_string(nd.id) + " must have positive mass");
        if (!std::isfinite(nd.energy))
            throw InputError("node " + std::to_string(nd.id) + " has non-finite energy");
        ls.ids_.push_back(nd.id);
        ls.energy_.push_back(nd.energy);
        ls.mass_.push_back(nd.mass);
    }

    const double fmin = *std::min_element(ls.energy_.begin(), ls.energy_.end());
    if (fmin != 0.0) {
        if (warnings)
            *warnings << "warning: energies shifted by " << -fmin << " so that min f = 0\n";
        for (double& v : ls.energy_) v -= fmin;
    }

    double total = 0.0;
    for (double m : ls.mass_) total += m;
    if (std::abs(total - 1.0) > 1e-9 && warnings)
        *warnings << "warning: masses sum to " << total << "; normalizing to 1\n";
    for (double& m : ls.mass_) m /= total;

    std::vector<std::set<int>> adj(ls.size());
    for (int i = 0; i < ls.size(); ++i) adj[i].insert(i);
    for (const auto& [u, v] : edges) {
        const int iu = ls.index_of(u);
        const int iv = ls.index_of(v);
        adj[iu].insert(iv);
        adj[iv].insert(iu);
    }
    ls.nbrs_.resize(ls.size());
    for (int i = 0; i < ls.size(); ++i)
        ls.nbrs_[i].assign(adj[i].begin(), adj[i].end());
    return ls;
}

DiscreteLandscape DiscreteLandscape::from_json(const std::string& text, std::ostream* warnings) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("landscape JSON parse error: ") + e.what());
    }
    std::vector<LandscapeNode> nodes;
    std::vector<std::pair<NodeId, NodeId>> edges;
    try {
        for (const auto& nd : j.at("nodes"))
            nodes.push_back({nd.at("id").get<NodeId>(), nd.at("f").get<double>(),
                             nd.at("mu").get<double>()});
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 2)
                throw InputError("landscape JSON: edges must be [u, v] pairs");
            edges.emplace_back(e[0].get<NodeId>(), e[1].get<NodeId>());
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("landscape JSON: ") + e.what());
    }
    return from_parts(std::move(nodes), edges, warnings);
}

DiscreteLandscape DiscreteLandscape::load(const std::string& path, std::ostream* warnings) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open landscape file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str(), warnings);
}

bool DiscreteLandscape::has_node(NodeId id) const {
    return std::binary_search(ids_.begin(), ids_.end(), id);
}

int DiscreteLandscape::index_of(NodeId id) const {
    const auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id)
        throw InputError("unknown node id " + std::to_string(id));
    return static_cast<int>(it - ids_.begin());
}

std::vector<NodeId> DiscreteLandscape::neighbors(NodeId id) const {
    std::vector<NodeId> out;
    for (int i : nbrs_[index_of(id)]) out.push_back(ids_[i]);
    return out;
}

void DiscreteLandscape::require_epsilon(double epsilon) const {
    for (double v : energy_)
        if (v == epsilon) return;
    throw InputError("epsilon must be an attained energy value");
}

std::string DiscreteLandscape::to_json() const {
    nlohmann::json j;
    j["nodes"] = nlohmann::json::array();
    for (int i = 0; i < size(); ++i)
        j["nodes"].push_back({{"id", ids_[i]}, {"f", energy_[i]}, {"mu", mass_[i]}});
    j["edges"] = nlohmann::json::array();
    for (int i = 0; i < size(); ++i)
        for (int k : nbrs_[i])
            if (k > i) j["edges"].push_back({ids_[i], ids_[k]});
    return j.dump();
}

NodeId descend(const DiscreteLandscape& ls, NodeId node) {
    const int x = ls.index_of(node);
    const auto& f = ls.energies_by_index();
    const auto& nbrs = ls.adjacency_by_index();
    int best = x;
    for (int y : nbrs[x])
        if (f[y] < f[best]) best = y;
    return ls.id_at(best);
}

int depth(const DiscreteLandscape& ls, double epsilon, const RestartSetSpec& spec,
          NodeId node) {
    ls.require_epsilon(epsilon);
    const int x = ls.index_of(node);
    return depth_info(ls, epsilon, spec).steps[x];
}

SetDecomposition decompose(const DiscreteLandscape& ls, double epsilon,
                           const RestartSetSpec& spec) {
    ls.require_epsilon(epsilon);
    const auto dmap = descent_map(ls);
    const auto limits = descent_limits(dmap);
    const auto in_a = restart_set_mask(ls, spec, dmap);
    const auto info = depth_info(ls, epsilon, spec);
    const auto& f = ls.energies_by_index();
    const int n = ls.size();

    std::vector<int> level, above, well, outside, minima, x1, x2, x3;
    for (int x = 0; x < n; ++x) {
        (f[x] <= epsilon ? level : above).push_back(x);
        if (dmap[x] == x) minima.push_back(x);
        const bool in_well = f[limits[x]] <= epsilon;
        (in_well ? well : outside).push_back(x);
        if (in_well) {
            x2.push_back(x);
        } else {
            (in_a[info.endpoint[x]] ? x3 : x1).push_back(x);
        }
    }

    SetDecomposition d;
    d.level_set = to_ids(ls, level);
    d.above_set = to_ids(ls, above);
    d.well = to_ids(ls, well);
    d.outside_well = to_ids(ls, outside);
    d.local_minima = to_ids(ls, minima);
    d.x1 = to_ids(ls, x1);
    d.x2 = to_ids(ls, x2);
    d.x3 = to_ids(ls, x3);
    return d;
}

LandscapeProfile extract_profile(const DiscreteLandscape& ls, double epsilon,
                                 const RestartSetSpec& spec) {
    ls.require_epsilon(epsilon);
    const auto dmap = descent_map(ls);
    const auto limits = descent_limits(dmap);
    const auto in_a = restart_set_mask(ls, spec, dmap);
    const auto info = depth_info(ls, epsilon, spec);
    const auto& f = ls.energies_by_index();
    const auto& mu = ls.masses_by_index();
    const int n = ls.size();

    double well_mass = 0.0, outside_mass = 0.0;
    int max_b = 0, max_a = 0;
    for (int x = 0; x < n; ++x) {
        if (f[limits[x]] <= epsilon) {
            well_mass += mu[x];
            max_b = std::max(max_b, info.steps[x]);
        } else {
            outside_mass += mu[x];
            max_a = std::max(max_a, info.steps[x]);
        }
    }
    if (well_mass <= 0.0)
        throw InputError("degenerate landscape: the target well carries no mass");
    if (outside_mass <= 0.0)
        throw InputError(
            "degenerate landscape: no states outside the target well (c undefined)");

    LandscapeProfile prof;
    prof.q.assign(max_b + 1, 0.0);
    prof.p1.assign(max_a + 1, 0.0);
    prof.p2.assign(max_a + 1, 0.0);
    prof.c = outside_mass / well_mass;
    for (int x = 0; x < n; ++x) {
        if (f[limits[x]] <= epsilon) {
            prof.q[info.steps[x]] += mu[x];
        } else {
            (in_a[info.endpoint[x]] ? prof.p1 : prof.p2)[info.steps[x]] += mu[x];
        }
    }
    return prof;
}

std::vector<NodeId> boundary(const DiscreteLandscape& ls, const std::vector<NodeId>& set) {
    std::set<int> inside;
    for (NodeId id : set) inside.insert(ls.index_of(id));
    std::set<int> out;
    const auto& nbrs = ls.adjacency_by_index();
    for (int x : inside)
        for (int y : nbrs[x])
            if (!inside.count(y)) out.insert(y);
    return to_ids(ls, std::vector<int>(out.begin(), out.end()));
}

std::vector<NodeId> closure(const DiscreteLandscape& ls, const std::vector<NodeId>& set) {
    std::vector<NodeId> cl = boundary(ls, set);
    cl.insert(cl.end(), set.begin(), set.end());
    std::sort(cl.begin(), cl.end());
    cl.erase(std::unique(cl.begin(), cl.end()), cl.end());
    return cl;
}

CriticalDepthResult critical_depth(const DiscreteLandscape& ls) {
    const auto dmap = descent_map(ls);
    const auto limits = descent_limits(dmap);
    const auto& f = ls.energies_by_index();
    const auto& nbrs = ls.adjacency_by_index();
    const int n = ls.size();

    CriticalDepthResult result;
    for (int x = 0; x < n; ++x) {
        if (dmap[x] != x || !(f[x] > 0.0)) continue;  // strict local minima only
        // Well of x and its discrete boundary.
        double well_min = f[x];
        double boundary_max = -1.0;
        bool has_boundary = false;
        for (int y = 0; y < n; ++y) {
            if (limits[y] != x) continue;
            well_min = std::min(well_min, f[y]);
            for (int z : nbrs[y]) {
                if (limits[z] == x) continue;
                boundary_max = has_boundary ? std::max(boundary_max, f[z]) : f[z];
                has_boundary = true;
            }
        }
        if (!has_boundary) continue;
        result.barriers.push_back({ls.id_at(x), boundary_max - well_min});
    }

    if (!result.barriers.empty()) {
        double best = -1.0;
        for (const auto& wb : result.barriers)
            best = std::max(best, wb.barrier / ls.energy(wb.minimum));
        result.d_f = best;
    }
    return result;
}

std::string critical_depth_to_json(const CriticalDepthResult& r) {
    nlohmann::json j;
    if (r.d_f)
        j["d_f"] = *r.d_f;
    else
        j["d_f"] = nullptr;
    j["barriers"] = nlohmann::json::array();
    for (const auto& wb : r.barriers)
        j["barriers"].push_back({{"minimum", wb.minimum}, {"H", wb.barrier}});
    return j.dump();
}

}  // namespace restartopt
