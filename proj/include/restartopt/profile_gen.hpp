#pragma once

#include <cstdint>
#include <string>

#include "restartopt/profile.hpp"

namespace restartopt {

enum class Family { Random, Exponential, Polynomial, Logarithmic };

std::string to_string(Family f);
Family family_from_string(const std::string& s);

// Recipe for a generated profile. steepness is the family parameter
// (theta >= 1 for exponential, > 0 for the other two); trap_split says how
// the outside mass lands in p1 vs p2: A2 puts all of it in p1, G1 in p2,
// GeneralA splits each depth by a seeded uniform fraction.
struct FamilySpec {
    Family family = Family::Random;
    double steepness = 1.0;
    int a = 20;
    int b = 10;
    double c = 1000.0;
    std::uint64_t seed = 0;
    Mode trap_split = Mode::A2;
};

// Depth weights drawn iid uniform, then normalized so the well carries
// 1/(1+c) of the mass and the outside c/(1+c). Exact zeros are redrawn.
LandscapeProfile random_profile(const FamilySpec& spec);

// Raw weight theta^j, (j+1)^theta or log(j+2)^theta per family, normalized
// the same way. The +1/+2 offsets keep the depth-0 and depth-1 weights
// finite and positive.
LandscapeProfile parametric_profile(const FamilySpec& spec);

}  // namespace restartopt
