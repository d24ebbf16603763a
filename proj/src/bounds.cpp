#include "restartopt/bounds.hpp"

#include <cmath>
#include <limits>

#include "json.hpp"

#include "restartopt/errors.hpp"

namespace restartopt {

namespace {

double shape_deriv(double y) { return std::exp(1.0 - y) * (1.0 - y); }

struct Residuals {
    double f1, f2;
};

Residuals residuals_at(double alpha, double gamma) {
    const double v = 1.0 / alpha;
    const double fg = shape_fn(gamma);
    const double fv = shape_fn(v);
    return {gamma * fg + v * fv - 1.0, fg + fv - 1.0};
}

double norm_inf(const Residuals& r) {
    return std::max(std::abs(r.f1), std::abs(r.f2));
}

// gamma > 1 solving f(gamma) = t on the decreasing branch; t in (0,1).
double gamma_for(double t) {
    double lo = 1.0, hi = 2.0;
    while (shape_fn(hi) > t) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
        const double mid = 0.5 * (lo + hi);
        (shape_fn(mid) > t ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

BoundConstants pack(double alpha, double gamma) {
    BoundConstants bc;
    bc.alpha_star = alpha;
    bc.gamma_star = gamma;
    bc.product = alpha * gamma;
    const Residuals r = residuals_at(alpha, gamma);
    bc.residual_eq1 = std::abs(r.f1);
    bc.residual_eq2 = std::abs(r.f2);
    return bc;
}

}  // namespace

double shape_fn(double y) { return y * std::exp(1.0 - y); }

BoundConstants solve_alpha_gamma() {
    // Coarse grid seed over (1,10)^2. The boundary limit alpha -> inf,
    // gamma -> 1 also satisfies the equations, so the seed matters.
    double alpha = 1.5, gamma = 5.0;
    double best = std::numeric_limits<double>::infinity();
    for (double a = 1.05; a < 10.0; a += 0.05) {
        for (double g = 1.05; g < 10.0; g += 0.05) {
            const double n = norm_inf(residuals_at(a, g));
            if (n < best) {
                best = n;
                alpha = a;
                gamma = g;
            }
        }
    }

    for (int it = 0; it < 100; ++it) {
        const Residuals r = residuals_at(alpha, gamma);
        if (norm_inf(r) < 1e-15) break;

        const double v = 1.0 / alpha;
        const double j11 = -(shape_fn(v) + v * shape_deriv(v)) / (alpha * alpha);
        const double j12 = shape_fn(gamma) + gamma * shape_deriv(gamma);
        const double j21 = -shape_deriv(v) / (alpha * alpha);
        const double j22 = shape_deriv(gamma);
        const double det = j11 * j22 - j12 * j21;
        if (std::abs(det) < 1e-300) break;

        const double da = (-r.f1 * j22 + r.f2 * j12) / det;
        const double dg = (-j11 * r.f2 + j21 * r.f1) / det;

        double lambda = 1.0;
        bool moved = false;
        while (lambda > 1e-8) {
            const double an = alpha + lambda * da;
            const double gn = gamma + lambda * dg;
            if (an > 1.0 && gn > 1.0 &&
                norm_inf(residuals_at(an, gn)) < norm_inf(r)) {
                alpha = an;
                gamma = gn;
                moved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!moved) break;
    }

    if (norm_inf(residuals_at(alpha, gamma)) > 1e-11) {
        // Fallback: eliminate gamma through the second equation and bisect
        // the first in alpha.
        auto outer = [](double a) {
            const double t = 1.0 - shape_fn(1.0 / a);
            const double g = gamma_for(t);
            return residuals_at(a, g).f1;
        };
        double lo = 1.0 + 1e-9, hi = 64.0;
        if (outer(lo) * outer(hi) > 0.0)
            throw NumericalError("bound-constant solve failed to bracket");
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
            const double mid = 0.5 * (lo + hi);
            (outer(mid) * outer(lo) > 0.0 ? lo : hi) = mid;
        }
        alpha = 0.5 * (lo + hi);
        gamma = gamma_for(1.0 - shape_fn(1.0 / alpha));
    }

    const BoundConstants bc = pack(alpha, gamma);
    if (bc.residual_eq1 > 1e-10 || bc.residual_eq2 > 1e-10)
        throw NumericalError("bound-constant solve did not converge");
    if (!(bc.alpha_star > 1.0 && bc.gamma_star > 1.0))
        throw NumericalError("bound-constant solve left (1,inf)^2");
    return bc;
}

const BoundConstants& bound_constants() {
    static const BoundConstants cached = solve_alpha_gamma();
    return cached;
}

RateInterval rate_interval(double xi_crit) {
    if (!(xi_crit > 0.0)) throw InputError("rate_interval: xi_crit must be positive");
    const BoundConstants& bc = bound_constants();
    return {-bc.product * xi_crit, -xi_crit};
}

std::string bound_constants_to_json(const BoundConstants& bc) {
    nlohmann::json j;
    j["alpha_star"] = bc.alpha_star;
    j["gamma_star"] = bc.gamma_star;
    j["product"] = bc.product;
    j["residuals"] = {bc.residual_eq1, bc.residual_eq2};
    return j.dump();
}

}  // namespace restartopt
