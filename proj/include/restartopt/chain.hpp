#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "restartopt/landscape.hpp"
#include "restartopt/rate.hpp"

namespace restartopt {

// Exact transition law on a concrete landscape: where descent is enabled,
// take the descent step with probability p and otherwise redraw the state
// from the restart measure; where it is disabled, always redraw. Rows are
// mixtures of a point mass and the restart distribution, so matvecs cost
// O(n).
struct RestartKernel {
    int n = 0;
    double p = 0.0;
    std::vector<int> descend_to;        // index of the descent target
    std::vector<char> descent_enabled;  // x in A
    std::vector<double> restart_dist;   // mu, by index
    std::vector<char> above;            // f(x) > epsilon
    std::vector<NodeId> ids;
    double epsilon = 0.0;

    std::vector<double> row(int x) const;  // dense row, for tests and small cases
};

RestartKernel build_kernel(const DiscreteLandscape& ls, const AlgorithmConfig& config,
                           double epsilon,
                           const std::vector<NodeId>* explicit_set = nullptr);

// log of the spectral radius of the kernel restricted to the states above
// epsilon, via power iteration on the substochastic block (dense storage
// below 64 states). This is the exact tail exponent of the hitting time and
// the independent oracle for the analytic rate. Returns -inf when the block
// is nilpotent (descent-only escape).
double exact_tail_exponent(const RestartKernel& kernel);

struct SurvivalCurve {
    std::vector<std::int64_t> survivors;  // survivors[N] = #runs with tau > N
    std::int64_t n_runs = 0;

    int max_n() const { return static_cast<int>(survivors.size()) - 1; }
    double p_hat(int N) const;
};

// Monte Carlo hitting times from the given start distribution; trajectory k
// uses substream k of the seed, so runs are reproducible and order-free.
SurvivalCurve simulate_tau(const RestartKernel& kernel, const std::vector<double>& start,
                           std::int64_t n_runs, std::uint64_t seed, int n_max);

struct FitWindow {
    int lo = 0;
    int hi = 0;
};

// Least-squares slope of log p_hat(N) over the window; the default window is
// the largest prefix still above the 50-survivor noise floor.
double fit_tail_exponent(const SurvivalCurve& curve,
                         std::optional<FitWindow> window = std::nullopt);

struct TailEstimate {
    double exact_log_rho = 0.0;
    double mc_exponent = 0.0;
    std::int64_t n_runs = 0;
    int fit_lo = 0;
    int fit_hi = 0;
};

// Oracle exponent plus a Monte Carlo estimate from the restart measure; the
// survival cap is ceil(50/|log rho|) when the oracle is finite, 10^4 otherwise.
TailEstimate estimate_tail(const RestartKernel& kernel, std::int64_t n_runs,
                           std::uint64_t seed);

void survival_to_csv(const SurvivalCurve& curve, std::ostream& out);
std::string tail_estimate_to_json(const TailEstimate& est);

}  // namespace restartopt
