#pragma once

#include <string>

namespace restartopt {

// Universal constants (alpha*, gamma*) solving
//   gamma f(gamma) + (1/alpha) f(1/alpha) = 1
//   f(gamma) + f(1/alpha) = 1
// with f(y) = y e^{1-y}, unique in (1,inf)^2. Their product scales the lower
// end of the two-sided convergence-rate interval.
struct BoundConstants {
    double alpha_star = 0.0;
    double gamma_star = 0.0;
    double product = 0.0;
    double residual_eq1 = 0.0;
    double residual_eq2 = 0.0;
};

double shape_fn(double y);  // y e^{1-y}

// Damped Newton from a coarse grid seed; nested bisection fallback.
BoundConstants solve_alpha_gamma();

// Process-wide cache, computed once on first use.
const BoundConstants& bound_constants();

struct RateInterval {
    double lo = 0.0;  // -alpha* gamma* xi
    double hi = 0.0;  // -xi
};

RateInterval rate_interval(double xi_crit);

std::string bound_constants_to_json(const BoundConstants& bc);

}  // namespace restartopt
