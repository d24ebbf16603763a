#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "restartopt/profile.hpp"
#include "restartopt/profile_gen.hpp"

namespace restartopt {

// Tabular result of one experiment. Metadata pairs (insertion-ordered) carry
// everything needed to reproduce the rows bit-identically.
struct ExperimentTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<std::string, std::string>> metadata;
};

// xi_crit(p) across a p grid in A2 mode, next to the constant G1 rate.
ExperimentTable run_rate_curve(const LandscapeProfile& prof, int p_grid = 512);

// Mean and variance of the A2 rate over a population of random profiles,
// per p. Rows double as the mean-vs-variance curve ordered by p; the
// max-curvature point along it is annotated in the metadata.
ExperimentTable run_phase_transition(int n_landscapes = 100, int p_grid = 64,
                                     std::uint64_t seed = 0,
                                     FamilySpec base = FamilySpec{});

// p_best and its rate per family parameter. The default grid walks the
// parameter downward, i.e. from the flattest to the steepest wells, so rows
// are ordered by increasing steepness.
ExperimentTable run_family_sweep(Family family, std::vector<double> param_grid,
                                 int a = 20, int b = 10, double c = 1000.0);
std::vector<double> default_param_grid(Family family, int points = 32);

void emit_csv(const ExperimentTable& table, std::ostream& out);
void emit_json(const ExperimentTable& table, std::ostream& out);
// One polyline per y column against the first column.
void emit_svg(const ExperimentTable& table, std::ostream& out);
void emit(const ExperimentTable& table, const std::string& format, const std::string& path);

ExperimentTable parse_csv(std::istream& in);  // inverse of emit_csv

}  // namespace restartopt
