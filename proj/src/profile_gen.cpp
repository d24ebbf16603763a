#include "restartopt/profile_gen.hpp"

#include <cmath>
#include <vector>

#include "restartopt/errors.hpp"
#include "restartopt/rng.hpp"

namespace restartopt {

namespace {

void check_dims(const FamilySpec& spec) {
    if (spec.a < 0 || spec.b < 0) throw InputError("profile dimensions a, b must be >= 0");
    if (!(spec.c > 0.0)) throw InputError("mass ratio c must be positive");
}

// Scale well weights to 1/(1+c) and trap weights to c/(1+c), then split the
// trap side per the requested mode. A GeneralA split consumes one extra
// uniform draw per trap depth, after the weight draws.
LandscapeProfile assemble(const FamilySpec& spec, const std::vector<double>& wq,
                          const std::vector<double>& wr, Rng* rng) {
    double sq = 0.0, sr = 0.0;
    for (double v : wq) sq += v;
    for (double v : wr) sr += v;
    if (!(sq > 0.0) || !(sr > 0.0))
        throw InputError("profile weights must have positive total");

    LandscapeProfile prof;
    prof.c = spec.c;
    prof.q.resize(wq.size());
    const double well_total = 1.0 / (1.0 + spec.c);
    for (std::size_t j = 0; j < wq.size(); ++j) prof.q[j] = wq[j] / sq * well_total;

    const double trap_total = spec.c / (1.0 + spec.c);
    prof.p1.assign(wr.size(), 0.0);
    prof.p2.assign(wr.size(), 0.0);
    for (std::size_t j = 0; j < wr.size(); ++j) {
        const double w = wr[j] / sr * trap_total;
        switch (spec.trap_split) {
            case Mode::A2: prof.p1[j] = w; break;
            case Mode::G1: prof.p2[j] = w; break;
            case Mode::GeneralA: {
                const double frac = rng ? rng->uniform01() : 0.5;
                prof.p1[j] = w * frac;
                prof.p2[j] = w * (1.0 - frac);
                break;
            }
        }
    }
    return prof;
}

double positive_uniform(Rng& rng) {
    double v = rng.uniform01();
    while (v == 0.0) v = rng.uniform01();
    return v;
}

}  // namespace

std::string to_string(Family f) {
    switch (f) {
        case Family::Random: return "random";
        case Family::Exponential: return "exponential";
        case Family::Polynomial: return "polynomial";
        case Family::Logarithmic: return "logarithmic";
    }
    return "?";
}

Family family_from_string(const std::string& s) {
    if (s == "random") return Family::Random;
    if (s == "exponential" || s == "exp") return Family::Exponential;
    if (s == "polynomial" || s == "poly") return Family::Polynomial;
    if (s == "logarithmic" || s == "log") return Family::Logarithmic;
    throw InputError("unknown family '" + s + "'");
}

LandscapeProfile random_profile(const FamilySpec& spec) {
    if (spec.family != Family::Random)
        throw InputError("random_profile called with a parametric family");
    check_dims(spec);
    Rng rng(spec.seed);
    std::vector<double> wq(spec.b + 1), wr(spec.a + 1);
    for (double& v : wq) v = positive_uniform(rng);
    for (double& v : wr) v = positive_uniform(rng);
    return assemble(spec, wq, wr, &rng);
}

LandscapeProfile parametric_profile(const FamilySpec& spec) {
    check_dims(spec);
    std::vector<double> wq(spec.b + 1), wr(spec.a + 1);
    auto weight = [&](int j) -> double {
        switch (spec.family) {
            case Family::Exponential:
                if (!(spec.steepness >= 1.0))
                    throw InputError("exponential family needs steepness >= 1");
                return std::pow(spec.steepness, j);
            case Family::Polynomial:
                if (!(spec.steepness > 0.0))
                    throw InputError("polynomial family needs steepness > 0");
                return std::pow(j + 1.0, spec.steepness);
            case Family::Logarithmic:
                if (!(spec.steepness > 0.0))
                    throw InputError("logarithmic family needs steepness > 0");
                return std::pow(std::log(j + 2.0), spec.steepness);
            case Family::Random:
                throw InputError("parametric_profile called with the random family");
        }
        throw InputError("bad family");
    };
    for (int j = 0; j <= spec.b; ++j) wq[j] = weight(j);
    for (int j = 0; j <= spec.a; ++j) wr[j] = weight(j);
    Rng rng(spec.seed);
    return assemble(spec, wq, wr, &rng);
}

}  // namespace restartopt
