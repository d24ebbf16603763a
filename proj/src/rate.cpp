#include "restartopt/rate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

#include "restartopt/bounds.hpp"
#include "restartopt/errors.hpp"

namespace restartopt {

namespace {

// Largest xi we ever evaluate at: keeps e^{((a v b)+2) xi} finite.
double xi_cap(const LandscapeProfile& prof) {
    const int deg = std::max(prof.a(), prof.b()) + 2;
    return 700.0 / std::max(1, deg);
}

// Direct evaluation of Q for an already-split profile. The running prefix
// sum handles the empty-sum convention (inner sum vanishes at j = 0).
double eval_Q_raw(double xi, double p, const LandscapeProfile& prof) {
    const double E = std::exp(xi);
    const double pe = p * E;
    const double s1 = prof.p1_sum();

    double value = 1.0;
    if (s1 != 0.0) {
        const double denom = 1.0 - pe;
        if (denom == 0.0) throw NumericalError("Q undefined: p e^xi = 1");
        value -= (1.0 - p) * E / denom * s1;
    }

    const int ab = std::max(prof.a(), prof.b());
    double pe_pow = 1.0;   // (p e^xi)^j
    double prefix = 0.0;   // sum_{i=0}^{j-1} (p e^xi)^i
    double sum_p2 = 0.0;
    double sum_tail = 0.0;
    for (int j = 0; j <= ab; ++j) {
        sum_p2 += prof.p2_at(j) * pe_pow;
        sum_tail += (prof.q_at(j) + prof.p2_at(j)) * prefix;
        prefix += pe_pow;
        pe_pow *= pe;
    }
    value -= E * sum_p2;
    value -= (1.0 - p) * E * sum_tail;
    return value;
}

// d/dxi of eval_Q_raw, same term structure.
double eval_dQ_raw(double xi, double p, const LandscapeProfile& prof) {
    const double E = std::exp(xi);
    const double pe = p * E;
    const double s1 = prof.p1_sum();

    double deriv = 0.0;
    if (s1 != 0.0) {
        const double denom = 1.0 - pe;
        if (denom == 0.0) throw NumericalError("Q undefined: p e^xi = 1");
        deriv -= (1.0 - p) * E / (denom * denom) * s1;
    }

    const int ab = std::max(prof.a(), prof.b());
    double pe_pow = 1.0;
    double prefix = 0.0;        // sum_{i<j} x^i
    double prefix_i = 0.0;      // sum_{i<j} i x^i
    double sum_p2 = 0.0;
    double sum_tail = 0.0;
    for (int j = 0; j <= ab; ++j) {
        sum_p2 += prof.p2_at(j) * (j + 1) * pe_pow;
        sum_tail += (prof.q_at(j) + prof.p2_at(j)) * (prefix + prefix_i);
        prefix_i += j * pe_pow;
        prefix += pe_pow;
        pe_pow *= pe;
    }
    deriv -= E * sum_p2;
    deriv -= (1.0 - p) * E * sum_tail;
    return deriv;
}

double eval_q1_raw(double xi, const LandscapeProfile& prof) {
    const double E = std::exp(xi);
    double sum = 0.0;
    double epow = E;  // e^{(j+1) xi}
    for (std::size_t j = 0; j < prof.p2.size(); ++j) {
        sum += prof.p2[j] * epow;
        epow *= E;
    }
    return 1.0 - sum;
}

double eval_dq1_raw(double xi, const LandscapeProfile& prof) {
    const double E = std::exp(xi);
    double sum = 0.0;
    double epow = E;
    for (std::size_t j = 0; j < prof.p2.size(); ++j) {
        sum += prof.p2[j] * (static_cast<double>(j) + 1.0) * epow;
        epow *= E;
    }
    return -sum;
}

// Pole-free numerator form of Q2: (1 - p e^xi) Q2. Shares its root with Q2
// inside the strip and stays negative at the strip's right edge.
double q2_tilde(double xi, double p, const LandscapeProfile& prof) {
    const double E = std::exp(xi);
    const double pe = p * E;
    double sum = 0.0;
    double pw = E;  // p^j e^{(j+1) xi}
    for (std::size_t j = 0; j < prof.q.size(); ++j) {
        sum += prof.q[j] * pw;
        pw *= pe;
    }
    return 1.0 - E + (1.0 - p) * sum;
}

double dq2_tilde_dxi(double xi, double p, const LandscapeProfile& prof) {
    const double E = std::exp(xi);
    const double pe = p * E;
    double sum = 0.0;
    double pw = E;
    for (std::size_t j = 0; j < prof.q.size(); ++j) {
        sum += prof.q[j] * (static_cast<double>(j) + 1.0) * pw;
        pw *= pe;
    }
    return -E + (1.0 - p) * sum;
}

double dq2_tilde_dp(double xi, double p, const LandscapeProfile& prof) {
    // d/dp of (1-p) p^j = j p^{j-1} - (j+1) p^j, with the j = 0 power term
    // absent.
    const double E = std::exp(xi);
    double sum = 0.0;
    double p_prev = 0.0;  // p^{j-1}; unused at j = 0
    double p_cur = 1.0;   // p^j
    double epow = E;      // e^{(j+1) xi}
    for (std::size_t j = 0; j < prof.q.size(); ++j) {
        const double dj = static_cast<double>(j);
        const double poly = (j == 0 ? 0.0 : dj * p_prev) - (dj + 1.0) * p_cur;
        sum += prof.q[j] * epow * poly;
        p_prev = p_cur;
        p_cur *= p;
        epow *= E;
    }
    return sum;
}

struct RootSpec {
    double lo, hi;          // sign change bracket: f(lo) > 0 > f(hi)
    double bracket_lo, bracket_hi;  // reported bracket
};

// Bisection to width 1e-14, then a couple of Newton polishing steps kept
// inside the bracket.
template <typename F, typename DF>
double solve_root(F&& f, DF&& df, double lo, double hi) {
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double v = f(mid);
        if (v > 0.0)
            lo = mid;
        else if (v < 0.0)
            hi = mid;
        else
            return mid;
    }
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 2; ++it) {
        const double v = f(x);
        const double d = df(x);
        if (d == 0.0) break;
        const double step = v / d;
        const double xn = x - step;
        if (!(xn > lo && xn < hi)) break;
        x = xn;
    }
    return x;
}

// Geometric-doubling upper bracket for a decreasing-to-negative function,
// capped to keep the exponentials finite.
template <typename F>
RootSpec doubling_bracket(F&& f, double cap) {
    double lo = 0.0;
    double hi = std::min(0.5, cap);
    while (f(hi) > 0.0) {
        lo = hi;
        if (hi >= cap)
            throw NumericalError("no sign change found within the overflow-safe range");
        hi = std::min(hi * 2.0, cap);
    }
    return {lo, hi, lo, hi};
}

RateResult finish_result(double xi, double lo, double hi, const AlgorithmConfig& config,
                         const LandscapeProfile& split) {
    RateResult r;
    r.xi_crit = xi;
    r.bracket_lo = lo;
    r.bracket_hi = hi;
    r.residual = std::abs(eval_Q_raw(xi, config.mode == Mode::G1 ? 1.0 : config.p, split));
    const RateInterval iv = rate_interval(xi);
    r.rate_lo = iv.lo;
    r.rate_hi = iv.hi;
    r.p = config.mode == Mode::G1 ? 1.0 : config.p;
    r.mode = config.mode;
    return r;
}

LandscapeProfile split_for_mode(Mode mode, const LandscapeProfile& prof) {
    switch (mode) {
        case Mode::G1: return prof.g1_view();
        case Mode::A2: return prof.a2_view();
        case Mode::GeneralA: return prof;
    }
    throw InputError("bad mode");
}

}  // namespace

void AlgorithmConfig::validate(const LandscapeProfile& prof) const {
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("p must lie in [0,1]");
    if (mode == Mode::G1) {
        if (p != 1.0) throw InputError("G1 pins p = 1");
        return;
    }
    // Outside mass that descends into the restart set makes p = 1
    // non-convergent (trajectories get stuck in traps forever).
    const LandscapeProfile split = split_for_mode(mode, prof);
    if (p == 1.0 && split.p1_sum() > 0.0)
        throw InputError("p = 1 requires an empty x3 (no outside mass descending into A)");
}

double eval_Q(double xi, const AlgorithmConfig& config, const LandscapeProfile& prof) {
    const LandscapeProfile split = split_for_mode(config.mode, prof);
    const double p = config.mode == Mode::G1 ? 1.0 : config.p;
    return eval_Q_raw(xi, p, split);
}

double eval_Q1(double xi, const LandscapeProfile& prof) {
    const LandscapeProfile split = prof.g1_view();
    if (split.p2_sum() <= 0.0) throw InputError("Q1 needs p2 support");
    return eval_q1_raw(xi, split);
}

double eval_Q2(double xi, double p, const LandscapeProfile& prof) {
    const double E = std::exp(xi);
    const double denom = 1.0 - p * E;
    if (denom == 0.0) throw NumericalError("Q2 undefined: p e^xi = 1");
    return q2_tilde(xi, p, prof) / denom;
}

RateResult xi_crit(const AlgorithmConfig& config, const LandscapeProfile& prof) {
    config.validate(prof);
    const LandscapeProfile split = split_for_mode(config.mode, prof);
    const double cap = xi_cap(split);

    if (config.mode == Mode::G1) {
        if (split.p2_sum() <= 0.0)
            throw InputError("G1 rate needs outside (trap) mass");
        auto f = [&](double x) { return eval_q1_raw(x, split); };
        auto df = [&](double x) { return eval_dq1_raw(x, split); };
        const RootSpec rs = doubling_bracket(f, cap);
        const double xi = solve_root(f, df, rs.lo, rs.hi);
        return finish_result(xi, rs.bracket_lo, rs.bracket_hi, config, split);
    }

    const double p = config.p;
    const bool has_x3 = split.p1_sum() > 0.0;

    if (split.q_sum() <= 0.0)
        throw InputError("profile has no well mass; Q has no positive root");

    if (split.p2_sum() == 0.0) {
        // A2 shape: solve on the pole-free numerator form.
        auto f = [&](double x) { return q2_tilde(x, p, split); };
        auto df = [&](double x) { return dq2_tilde_dxi(x, p, split); };
        if (p > 0.0 && has_x3) {
            const double hi = -std::log(p);
            const double xi = solve_root(f, df, 0.0, hi);
            return finish_result(xi, 0.0, hi, config, split);
        }
        const RootSpec rs = doubling_bracket(f, cap);
        const double xi = solve_root(f, df, rs.lo, rs.hi);
        return finish_result(xi, rs.bracket_lo, rs.bracket_hi, config, split);
    }

    // General split. Inside the strip Q itself is the function to root.
    auto f = [&](double x) { return eval_Q_raw(x, p, split); };
    auto df = [&](double x) { return eval_dQ_raw(x, p, split); };
    if (p > 0.0 && has_x3) {
        const double hi = -std::log(p);
        const double xi = solve_root(f, df, 0.0, hi);
        return finish_result(xi, 0.0, hi, config, split);
    }
    const RootSpec rs = doubling_bracket(f, cap);
    const double xi = solve_root(f, df, rs.lo, rs.hi);
    return finish_result(xi, rs.bracket_lo, rs.bracket_hi, config, split);
}

double CoefficientTable::eval(double xi, double p) const {
    const double E = std::exp(xi);
    double value = 0.0;
    double epow = 1.0;
    for (const auto& row : c) {
        double poly = 0.0;
        double ppow = 1.0;
        for (double cji : row) {
            poly += cji * ppow;
            ppow *= p;
        }
        value += epow * poly;
        epow *= E;
    }
    return value;
}

CoefficientTable build_coefficients(Mode mode, const LandscapeProfile& prof) {
    const LandscapeProfile split = split_for_mode(mode, prof);
    const int ab = std::max(split.a(), split.b());
    const int rows = ab + 3;  // exponents 0..(a v b)+2

    CoefficientTable table;
    table.c.resize(rows);
    for (int j = 0; j < rows; ++j) table.c[j].assign(j + 1, 0.0);

    // (1 - p E) * Q expanded term by term; E-power is the row, p-power the
    // column.
    table.c[0][0] += 1.0;
    table.c[1][1] -= 1.0;

    const double s1 = split.p1_sum();
    table.c[1][0] -= s1;
    table.c[1][1] += s1;

    for (int j = 0; j <= split.a(); ++j) {
        const double v = split.p2_at(j);
        if (v == 0.0) continue;
        table.c[j + 1][j] -= v;
        table.c[j + 2][j + 1] += v;
    }

    for (int j = 0; j <= ab; ++j) {
        const double w = split.q_at(j) + split.p2_at(j);
        if (w == 0.0) continue;
        for (int i = 0; i < j; ++i) {
            table.c[i + 1][i] -= w;
            table.c[i + 1][i + 1] += w;
            table.c[i + 2][i + 1] += w;
            table.c[i + 2][i + 2] -= w;
        }
    }
    return table;
}

double dxi_dp(double p, const LandscapeProfile& prof) {
    if (!(p >= 0.0 && p < 1.0)) throw InputError("dxi_dp: p must lie in [0,1)");
    const LandscapeProfile split = prof.a2_view();
    const AlgorithmConfig config{Mode::A2, p};
    const double xi = xi_crit(config, prof).xi_crit;
    const double num = dq2_tilde_dp(xi, p, split);
    const double den = dq2_tilde_dxi(xi, p, split);
    return -num / den;
}

PStarResult find_p_star(const LandscapeProfile& prof, int grid_points, double tol) {
    if (grid_points < 2) throw InputError("find_p_star: grid too small");
    const LandscapeProfile split = prof.a2_view();

    auto xi_at = [&](double p) {
        return xi_crit(AlgorithmConfig{Mode::A2, p}, prof).xi_crit;
    };

    int best = 0;
    double best_xi = -1.0;
    const double step = 1.0 / grid_points;
    for (int k = 0; k < grid_points; ++k) {
        const double v = xi_at(k * step);
        if (v > best_xi) {
            best_xi = v;
            best = k;
        }
    }

    double lo = best > 0 ? (best - 1) * step : 0.0;
    double hi = best + 1 < grid_points ? (best + 1) * step : std::min(1.0 - 1e-9, best * step + step);

    // Golden-section ascent on the bracketing cell pair.
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c1 = hi - gr * (hi - lo);
    double c2 = lo + gr * (hi - lo);
    double f1 = xi_at(c1);
    double f2 = xi_at(c2);
    while (hi - lo > tol) {
        if (f1 > f2) {
            hi = c2;
            c2 = c1;
            f2 = f1;
            c1 = hi - gr * (hi - lo);
            f1 = xi_at(c1);
        } else {
            lo = c1;
            c1 = c2;
            f1 = f2;
            c2 = lo + gr * (hi - lo);
            f2 = xi_at(c2);
        }
    }

    PStarResult result;
    result.p_star = 0.5 * (lo + hi);
    if (result.p_star < tol) result.p_star = 0.0;  // boundary optimum
    result.xi = xi_at(result.p_star);
    result.residual_stationarity =
        std::abs(dq2_tilde_dp(result.xi, result.p_star, split));
    result.residual_root = std::abs(q2_tilde(result.xi, result.p_star, split));
    return result;
}

PBestResult find_p_best(const LandscapeProfile& prof, int grid_points, double tol) {
    const double xi_g1 = xi_crit(AlgorithmConfig{Mode::G1, 1.0}, prof).xi_crit;
    const PStarResult star = find_p_star(prof, grid_points, tol);

    PBestResult result;
    if (star.xi > xi_g1) {
        result.p_best = star.p_star;
        result.chosen = Mode::A2;
        result.xi = star.xi;
    } else {
        result.p_best = 1.0;
        result.chosen = Mode::G1;
        result.xi = xi_g1;
    }
    return result;
}

Theorem2Result theorem2_check(const LandscapeProfile& prof) {
    const LandscapeProfile split = prof.g1_view();
    const double q0 = split.q_at(0);
    if (q0 >= 1.0) throw InputError("theorem2_check: q(0) = 1 is degenerate");
    Theorem2Result result;
    double w = 1.0 / (1.0 - q0);  // (1-q0)^{-(j+1)}
    for (std::size_t j = 0; j < split.p2.size(); ++j) {
        result.lhs_sum += split.p2[j] * w;
        w /= 1.0 - q0;
    }
    result.holds = result.lhs_sum >= 1.0;
    return result;
}

double corollary2_min_depth(double q0, double p2min) {
    if (!(q0 > 0.0 && q0 < 1.0)) throw InputError("corollary2_min_depth: q0 must lie in (0,1)");
    if (!(p2min > 0.0)) throw InputError("corollary2_min_depth: p2min must be positive");
    return -std::log1p(q0 / p2min) / std::log1p(-q0) - 1.0;
}

std::string rate_result_to_json(const RateResult& r) {
    nlohmann::json j;
    j["xi_crit"] = r.xi_crit;
    j["p"] = r.p;
    j["mode"] = to_string(r.mode);
    j["residual"] = r.residual;
    j["bounds"] = {r.rate_lo, r.rate_hi};
    return j.dump();
}

}  // namespace restartopt
