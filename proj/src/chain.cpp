#include "restartopt/chain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "json.hpp"

#include "restartopt/errors.hpp"
#include "restartopt/format.hpp"
#include "restartopt/rng.hpp"

namespace restartopt {

namespace {

std::vector<double> cumulative(const std::vector<double>& dist) {
    std::vector<double> cdf(dist.size());
    double run = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        run += dist[i];
        cdf[i] = run;
    }
    cdf.back() = 1.0;
    return cdf;
}

int sample(const std::vector<double>& cdf, double u) {
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return static_cast<int>(std::min<std::ptrdiff_t>(it - cdf.begin(),
                                                     static_cast<std::ptrdiff_t>(cdf.size()) - 1));
}

}  // namespace

std::vector<double> RestartKernel::row(int x) const {
    std::vector<double> r(n, 0.0);
    const double pd = descent_enabled[x] ? p : 0.0;
    for (int y = 0; y < n; ++y) r[y] = (1.0 - pd) * restart_dist[y];
    r[descend_to[x]] += pd;
    return r;
}

RestartKernel build_kernel(const DiscreteLandscape& ls, const AlgorithmConfig& config,
                           double epsilon, const std::vector<NodeId>* explicit_set) {
    ls.require_epsilon(epsilon);
    if (!(config.p >= 0.0 && config.p <= 1.0)) throw InputError("p must lie in [0,1]");
    if (config.mode == Mode::G1 && config.p != 1.0) throw InputError("G1 pins p = 1");
    if (config.mode == Mode::GeneralA && explicit_set == nullptr)
        throw InputError("general mode needs an explicit restart set");

    RestartKernel k;
    k.n = ls.size();
    k.p = config.mode == Mode::G1 ? 1.0 : config.p;
    k.epsilon = epsilon;
    k.ids = ls.ids();
    k.restart_dist = ls.masses_by_index();

    const auto& f = ls.energies_by_index();
    const auto& nbrs = ls.adjacency_by_index();
    k.descend_to.resize(k.n);
    for (int x = 0; x < k.n; ++x) {
        int best = x;
        for (int y : nbrs[x])
            if (f[y] < f[best]) best = y;
        k.descend_to[x] = best;
    }

    k.descent_enabled.assign(k.n, 1);
    if (config.mode == Mode::G1) {
        for (int x = 0; x < k.n; ++x)
            if (k.descend_to[x] == x) k.descent_enabled[x] = 0;
    } else if (config.mode == Mode::GeneralA) {
        std::fill(k.descent_enabled.begin(), k.descent_enabled.end(), 0);
        for (NodeId id : *explicit_set) k.descent_enabled[ls.index_of(id)] = 1;
    }

    k.above.resize(k.n);
    for (int x = 0; x < k.n; ++x) k.above[x] = f[x] > epsilon;

    if (k.p == 1.0 && config.mode != Mode::G1) {
        // A trap state with descent always on never escapes.
        for (int x = 0; x < k.n; ++x)
            if (k.above[x] && k.descent_enabled[x] && k.descend_to[x] == x)
                throw InputError("p = 1 with a descent-enabled local minimum above epsilon "
                                 "never converges");
    }
    return k;
}

double exact_tail_exponent(const RestartKernel& kernel) {
    std::vector<int> block;
    for (int x = 0; x < kernel.n; ++x)
        if (kernel.above[x]) block.push_back(x);
    if (block.empty())
        throw InputError("no states above epsilon; tail exponent undefined");

    const int m = static_cast<int>(block.size());
    std::vector<int> pos(kernel.n, -1);
    for (int i = 0; i < m; ++i) pos[block[i]] = i;

    // Restart mass that stays inside the block, plus per-state descent
    // targets within it.
    double mu_in = 0.0;
    for (int x : block) mu_in += kernel.restart_dist[x];
    if (mu_in >= 1.0) throw InputError("the above-epsilon block is absorbing");

    std::vector<double> mu_blk(m);
    std::vector<int> desc(m);
    std::vector<double> pdesc(m);
    for (int i = 0; i < m; ++i) {
        const int x = block[i];
        mu_blk[i] = kernel.restart_dist[x];
        const double pd = kernel.descent_enabled[x] ? kernel.p : 0.0;
        pdesc[i] = pd;
        desc[i] = pos[kernel.descend_to[x]];  // -1 when the target escapes
    }

    const bool dense = m < 64;
    std::vector<std::vector<double>> dense_m;
    if (dense) {
        dense_m.assign(m, std::vector<double>(m, 0.0));
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) dense_m[i][j] = (1.0 - pdesc[i]) * mu_blk[j];
            if (desc[i] >= 0) dense_m[i][desc[i]] += pdesc[i];
        }
    }

    auto step = [&](const std::vector<double>& y, std::vector<double>& z) {
        if (dense) {
            for (int i = 0; i < m; ++i) {
                double acc = 0.0;
                for (int j = 0; j < m; ++j) acc += dense_m[i][j] * y[j];
                z[i] = acc;
            }
            return;
        }
        double inner = 0.0;
        for (int j = 0; j < m; ++j) inner += mu_blk[j] * y[j];
        for (int i = 0; i < m; ++i) {
            double acc = (1.0 - pdesc[i]) * inner;
            if (desc[i] >= 0) acc += pdesc[i] * y[desc[i]];
            z[i] = acc;
        }
    };

    // Power iteration tracking the slope of the cumulative log-amplitude
    // over a stride; the windowed slope cancels the slow geometric
    // transient that a raw ratio test would inherit.
    const int stride = 256;
    std::vector<double> y(m, 1.0), z(m);
    double log_cum = 0.0;
    std::vector<double> window_marks;
    double prev_est = std::numeric_limits<double>::quiet_NaN();
    const long max_iters = 2000000;
    for (long it = 1; it <= max_iters; ++it) {
        step(y, z);
        double norm = 0.0;
        for (double v : z) norm = std::max(norm, std::abs(v));
        if (norm == 0.0) return -std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i) y[i] = z[i] / norm;
        log_cum += std::log(norm);
        if (it % stride == 0) {
            window_marks.push_back(log_cum);
            const std::size_t w = window_marks.size();
            if (w >= 2) {
                const double est = (window_marks[w - 1] - window_marks[w - 2]) / stride;
                if (!std::isnan(prev_est) && std::abs(est - prev_est) < 1e-12)
                    return est;
                prev_est = est;
            }
        }
    }
    throw NumericalError("power iteration did not converge");
}

double SurvivalCurve::p_hat(int N) const {
    return static_cast<double>(survivors[N]) / static_cast<double>(n_runs);
}

SurvivalCurve simulate_tau(const RestartKernel& kernel, const std::vector<double>& start,
                           std::int64_t n_runs, std::uint64_t seed, int n_max) {
    if (n_runs < 1) throw InputError("n_runs must be at least 1");
    if (n_max < 0) throw InputError("n_max must be nonnegative");
    if (static_cast<int>(start.size()) != kernel.n)
        throw InputError("start distribution size mismatch");
    double total = 0.0;
    for (double v : start) {
        if (!(v >= 0.0)) throw InputError("start distribution has negative mass");
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-9) throw InputError("start distribution must sum to 1");

    const std::vector<double> start_cdf = cumulative(start);
    const std::vector<double> mu_cdf = cumulative(kernel.restart_dist);

    SurvivalCurve curve;
    curve.n_runs = n_runs;
    curve.survivors.assign(n_max + 1, 0);

    for (std::int64_t run = 0; run < n_runs; ++run) {
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(run));
        int x = sample(start_cdf, rng.uniform01());
        int tau = 0;
        while (kernel.above[x] && tau <= n_max) {
            bool descend_now;
            if (!kernel.descent_enabled[x] || kernel.p == 0.0)
                descend_now = false;
            else if (kernel.p == 1.0)
                descend_now = true;
            else
                descend_now = rng.uniform01() < kernel.p;
            x = descend_now ? kernel.descend_to[x] : sample(mu_cdf, rng.uniform01());
            ++tau;
        }
        // tau > n_max counts as surviving the whole window.
        const int upto = std::min(tau - 1, n_max);
        for (int N = 0; N <= upto; ++N) ++curve.survivors[N];
    }
    return curve;
}

double fit_tail_exponent(const SurvivalCurve& curve, std::optional<FitWindow> window) {
    int lo = 0, hi = -1;
    if (window) {
        lo = window->lo;
        hi = window->hi;
        if (lo < 0 || hi > curve.max_n() || lo > hi)
            throw InputError("fit window out of range");
        for (int N = lo; N <= hi; ++N)
            if (curve.survivors[N] <= 0)
                throw InputError("fit window touches empty survival counts");
    } else {
        while (hi + 1 <= curve.max_n() && curve.survivors[hi + 1] >= 50) ++hi;
        if (hi < lo) throw InputError("survival curve is entirely below the noise floor");
    }
    const int count = hi - lo + 1;
    if (count < 2) throw InputError("fit window needs at least two points");

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (int N = lo; N <= hi; ++N) {
        const double x = N;
        const double y = std::log(curve.p_hat(N));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = count * sxx - sx * sx;
    if (denom == 0.0) throw NumericalError("degenerate fit window");
    return (count * sxy - sx * sy) / denom;
}

TailEstimate estimate_tail(const RestartKernel& kernel, std::int64_t n_runs,
                           std::uint64_t seed) {
    TailEstimate est;
    est.exact_log_rho = exact_tail_exponent(kernel);
    est.n_runs = n_runs;
    int n_max = 10000;
    if (std::isfinite(est.exact_log_rho) && est.exact_log_rho < 0.0)
        n_max = static_cast<int>(std::ceil(50.0 / -est.exact_log_rho));
    const SurvivalCurve curve = simulate_tau(kernel, kernel.restart_dist, n_runs, seed, n_max);

    int hi = -1;
    while (hi + 1 <= curve.max_n() && curve.survivors[hi + 1] >= 50) ++hi;
    est.fit_lo = 0;
    est.fit_hi = std::max(hi, 0);
    est.mc_exponent = fit_tail_exponent(curve);
    return est;
}

void survival_to_csv(const SurvivalCurve& curve, std::ostream& out) {
    out << "N,survivors,p_hat\n";
    for (int N = 0; N <= curve.max_n(); ++N)
        out << N << ',' << curve.survivors[N] << ',' << format_double(curve.p_hat(N)) << '\n';
}

std::string tail_estimate_to_json(const TailEstimate& est) {
    nlohmann::json j;
    j["exact_log_rho"] = est.exact_log_rho;
    j["mc_exponent"] = est.mc_exponent;
    j["n_runs"] = est.n_runs;
    j["fit_window"] = {est.fit_lo, est.fit_hi};
    return j.dump();
}

}  // namespace restartopt
