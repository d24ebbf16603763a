#pragma once

#include <string>
#include <vector>

namespace restartopt {

// Restart-set flavors. G1 descends everywhere except at local minima, where
// it restarts (p is pinned to 1). A2 flips a p-coin between a descent step
// and a restart at every state. GeneralA keeps an explicit p1/p2 split in the
// profile (or an explicit restart set on a concrete landscape).
enum class Mode { G1, A2, GeneralA };

std::string to_string(Mode m);
Mode mode_from_string(const std::string& s);

// Depth-indexed mass summary of an energy landscape. q[j] is the mass inside
// the target well at descent depth j; p1[j]/p2[j] is the outside mass at
// depth j whose descent terminates inside/outside the restart set; c is the
// outside/inside mass ratio. Together with (a, b) this determines the
// convergence-rate function Q completely.
struct LandscapeProfile {
    std::vector<double> q;   // depths 0..b
    std::vector<double> p1;  // depths 0..a
    std::vector<double> p2;  // depths 0..a
    double c = 0.0;

    int a() const {
        return static_cast<int>(p1.size() > p2.size() ? p1.size() : p2.size()) - 1;
    }
    int b() const { return static_cast<int>(q.size()) - 1; }

    double q_at(int j) const { return j >= 0 && j < static_cast<int>(q.size()) ? q[j] : 0.0; }
    double p1_at(int j) const { return j >= 0 && j < static_cast<int>(p1.size()) ? p1[j] : 0.0; }
    double p2_at(int j) const { return j >= 0 && j < static_cast<int>(p2.size()) ? p2[j] : 0.0; }
    double trap_at(int j) const { return p1_at(j) + p2_at(j); }

    double q_sum() const;
    double p1_sum() const;
    double p2_sum() const;
    double trap_sum() const { return p1_sum() + p2_sum(); }

    // The same depth weights reinterpreted under a different restart set:
    // G1 sends all outside mass to p2, A2 sends all of it to p1.
    LandscapeProfile g1_view() const;
    LandscapeProfile a2_view() const;

    // Throws InputError on violated invariants (partition of unity, mass
    // ratio, maximal-depth support).
    void validate() const;
};

LandscapeProfile profile_from_json(const std::string& text);
LandscapeProfile load_profile(const std::string& path);
std::string profile_to_json(const LandscapeProfile& prof);

}  // namespace restartopt
