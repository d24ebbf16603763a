#pragma once

#include <string>
#include <vector>

#include "restartopt/profile.hpp"

namespace restartopt {

// A design point of the algorithm family: the randomization level p and the
// restart-set mode. G1 pins p = 1; A2/GeneralA with outside mass descending
// into the restart set require p < 1 for the critical exponent to exist.
struct AlgorithmConfig {
    Mode mode = Mode::A2;
    double p = 0.0;

    void validate(const LandscapeProfile& prof) const;
};

struct RateResult {
    double xi_crit = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    double residual = 0.0;  // |Q(xi_crit, p)|
    double rate_lo = 0.0;   // -alpha* gamma* xi_crit
    double rate_hi = 0.0;   // -xi_crit
    double p = 0.0;
    Mode mode = Mode::A2;
};

// Lower-triangular coefficients of the polynomial form
//   sum_j e^{j xi} sum_{i<=j} c[j][i] p^i  ==  (1 - p e^xi) * Q(xi, p).
struct CoefficientTable {
    std::vector<std::vector<double>> c;  // row j holds columns 0..j

    int rows() const { return static_cast<int>(c.size()); }
    double eval(double xi, double p) const;
};

// Q(xi, p) for the profile as split by the mode (trap mass as p2 under G1,
// as p1 under A2, as stored under GeneralA).
double eval_Q(double xi, const AlgorithmConfig& config, const LandscapeProfile& prof);

// The two specializations: Q1 is the p = 1 restart-at-minima form (needs p2
// support), Q2 the restart-everywhere form (p2 identically zero).
double eval_Q1(double xi, const LandscapeProfile& prof);
double eval_Q2(double xi, double p, const LandscapeProfile& prof);

// Unique positive root of Q(., p). Bisection on (0, -log p) when the strip
// applies, geometric-doubling bracket otherwise, then Newton polish.
RateResult xi_crit(const AlgorithmConfig& config, const LandscapeProfile& prof);

CoefficientTable build_coefficients(Mode mode, const LandscapeProfile& prof);

// d xi_crit / dp in A2 mode via implicit differentiation of the pole-free
// form of Q2.
double dxi_dp(double p, const LandscapeProfile& prof);

struct PStarResult {
    double p_star = 0.0;
    double xi = 0.0;
    // Residuals of the two equations of the closing system at the optimum;
    // an interior optimum drives both to ~0, a boundary optimum at p = 0
    // only the root equation.
    double residual_stationarity = 0.0;
    double residual_root = 0.0;
};

// argmax of xi_crit(p) over [0,1) in A2 mode: coarse grid, then golden
// section refinement.
PStarResult find_p_star(const LandscapeProfile& prof, int grid_points = 512,
                        double tol = 1e-10);

struct PBestResult {
    double p_best = 0.0;
    Mode chosen = Mode::G1;
    double xi = 0.0;
};

// Better of sup_p A2 and G1 on the same depth weights; ties go to G1.
PBestResult find_p_best(const LandscapeProfile& prof, int grid_points = 512,
                        double tol = 1e-10);

struct Theorem2Result {
    double lhs_sum = 0.0;
    bool holds = false;
};

// Sufficiency check sum_j p2(j)/(1-q(0))^{j+1} >= 1 on the G1 view.
Theorem2Result theorem2_check(const LandscapeProfile& prof);

// Minimal outside depth that guarantees an interior optimal randomization
// level, as a function of q(0) and the smallest p2 entry.
double corollary2_min_depth(double q0, double p2min);

std::string rate_result_to_json(const RateResult& r);

}  // namespace restartopt
