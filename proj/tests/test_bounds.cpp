#include <cmath>

#include "doctest.h"

#include "restartopt/bounds.hpp"
#include "restartopt/errors.hpp"
#include "restartopt/rng.hpp"

using namespace restartopt;

TEST_CASE("shape function") {
    CHECK(shape_fn(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(shape_fn(0.0) == doctest::Approx(0.0).epsilon(1e-15));
    // Unimodal with the peak at 1.
    double prev = shape_fn(0.0);
    for (int k = 1; k <= 40; ++k) {
        const double v = shape_fn(k / 40.0);
        CHECK(v > prev);
        prev = v;
    }
    for (int k = 1; k <= 40; ++k) {
        const double v = shape_fn(1.0 + k * 0.2);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("bound constants solve the system inside (1,inf)^2") {
    const BoundConstants bc = solve_alpha_gamma();
    CHECK(bc.alpha_star > 1.0);
    CHECK(bc.gamma_star > 1.0);
    CHECK(bc.product > 7.5);
    CHECK(bc.product < 8.5);
    CHECK(bc.residual_eq1 < 1e-10);
    CHECK(bc.residual_eq2 < 1e-10);

    // Plug back explicitly.
    const double v = 1.0 / bc.alpha_star;
    CHECK(bc.gamma_star * shape_fn(bc.gamma_star) + v * shape_fn(v) ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(shape_fn(bc.gamma_star) + shape_fn(v) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("Newton from scattered seeds never finds a second interior solution") {
    const BoundConstants ref = bound_constants();
    Rng rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        // Plain undamped Newton from a random seed in (1,10)^2.
        double alpha = 1.0 + 9.0 * rng.uniform01();
        double gamma = 1.0 + 9.0 * rng.uniform01();
        bool ok = true;
        for (int it = 0; it < 200; ++it) {
            const double vv = 1.0 / alpha;
            const double f1 = gamma * shape_fn(gamma) + vv * shape_fn(vv) - 1.0;
            const double f2 = shape_fn(gamma) + shape_fn(vv) - 1.0;
            auto fp = [](double y) { return std::exp(1.0 - y) * (1.0 - y); };
            const double j11 = -(shape_fn(vv) + vv * fp(vv)) / (alpha * alpha);
            const double j12 = shape_fn(gamma) + gamma * fp(gamma);
            const double j21 = -fp(vv) / (alpha * alpha);
            const double j22 = fp(gamma);
            const double det = j11 * j22 - j12 * j21;
            if (!std::isfinite(det) || std::abs(det) < 1e-300) {
                ok = false;
                break;
            }
            alpha += (-f1 * j22 + f2 * j12) / det;
            gamma += (-j11 * f2 + j21 * f1) / det;
            if (!(alpha > 1.0 && gamma > 1.0) || !std::isfinite(alpha) ||
                !std::isfinite(gamma)) {
                ok = false;  // left the domain: counts as divergence
                break;
            }
        }
        if (!ok) continue;
        const double vv = 1.0 / alpha;
        const double r1 = std::abs(gamma * shape_fn(gamma) + vv * shape_fn(vv) - 1.0);
        const double r2 = std::abs(shape_fn(gamma) + shape_fn(vv) - 1.0);
        if (r1 < 1e-10 && r2 < 1e-10 && gamma > 1.0 + 1e-6) {
            CHECK(alpha == doctest::Approx(ref.alpha_star).epsilon(1e-8));
            CHECK(gamma == doctest::Approx(ref.gamma_star).epsilon(1e-8));
        }
    }
}

TEST_CASE("cached constants are reused bit-identically") {
    const BoundConstants& a = bound_constants();
    const BoundConstants& b = bound_constants();
    CHECK(&a == &b);
    CHECK(a.alpha_star == b.alpha_star);
    CHECK(a.gamma_star == b.gamma_star);
}

TEST_CASE("rate interval") {
    const BoundConstants& bc = bound_constants();
    const RateInterval unit = rate_interval(1.0);
    CHECK(unit.hi == -1.0);
    CHECK(unit.lo == doctest::Approx(-bc.product).epsilon(1e-14));

    const RateInterval scaled = rate_interval(0.37);
    CHECK(scaled.hi == -0.37);
    CHECK(scaled.lo == doctest::Approx(unit.lo * 0.37).epsilon(1e-14));

    CHECK_THROWS_AS(rate_interval(0.0), InputError);
    CHECK_THROWS_AS(rate_interval(-1.0), InputError);
}
