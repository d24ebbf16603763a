#include "restartopt/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "restartopt/errors.hpp"
#include "restartopt/format.hpp"
#include "restartopt/rate.hpp"

namespace restartopt {

namespace {

std::string fmt(double v) { return format_double(v); }

void push_meta(ExperimentTable& t, const std::string& k, const std::string& v) {
    t.metadata.emplace_back(k, v);
}

}  // namespace

ExperimentTable run_rate_curve(const LandscapeProfile& prof, int p_grid) {
    if (p_grid < 2) throw InputError("rate curve needs at least 2 grid points");
    const double xi_g1 = xi_crit(AlgorithmConfig{Mode::G1, 1.0}, prof).xi_crit;

    ExperimentTable t;
    t.name = "rate_curve";
    t.columns = {"p", "xi_crit_a2", "xi_crit_g1"};
    t.rows.reserve(p_grid);
    for (int k = 0; k < p_grid; ++k) {
        const double p = static_cast<double>(k) / p_grid;
        const double xi = xi_crit(AlgorithmConfig{Mode::A2, p}, prof).xi_crit;
        t.rows.push_back({p, xi, xi_g1});
    }
    push_meta(t, "a", std::to_string(prof.a()));
    push_meta(t, "b", std::to_string(prof.b()));
    push_meta(t, "c", fmt(prof.c));
    push_meta(t, "p_grid", std::to_string(p_grid));
    return t;
}

ExperimentTable run_phase_transition(int n_landscapes, int p_grid, std::uint64_t seed,
                                     FamilySpec base) {
    if (n_landscapes < 1) throw InputError("need at least one landscape");
    if (p_grid < 2) throw InputError("phase transition needs at least 2 grid points");
    base.family = Family::Random;
    base.trap_split = Mode::A2;

    // Rates per (p, landscape); batch k uses seed + k.
    std::vector<double> mean(p_grid, 0.0), m2(p_grid, 0.0);
    for (int i = 0; i < n_landscapes; ++i) {
        FamilySpec spec = base;
        spec.seed = seed + static_cast<std::uint64_t>(i);
        const LandscapeProfile prof = random_profile(spec);
        for (int k = 0; k < p_grid; ++k) {
            const double p = static_cast<double>(k) / p_grid;
            const double xi = xi_crit(AlgorithmConfig{Mode::A2, p}, prof).xi_crit;
            const double delta = xi - mean[k];
            mean[k] += delta / (i + 1);
            m2[k] += delta * (xi - mean[k]);
        }
    }

    ExperimentTable t;
    t.name = "phase_transition";
    t.columns = {"p", "mean_rate", "var_rate"};
    for (int k = 0; k < p_grid; ++k) {
        const double p = static_cast<double>(k) / p_grid;
        t.rows.push_back({p, mean[k], m2[k] / n_landscapes});
    }

    // Knee annotation: max-curvature point of the (mean, var) curve with
    // both axes normalized to [0,1]. Exploratory marker only.
    double best_curv = -1.0;
    double knee_p = 0.0;
    double mn_lo = 1e300, mn_hi = -1e300, vr_lo = 1e300, vr_hi = -1e300;
    for (const auto& r : t.rows) {
        mn_lo = std::min(mn_lo, r[1]);
        mn_hi = std::max(mn_hi, r[1]);
        vr_lo = std::min(vr_lo, r[2]);
        vr_hi = std::max(vr_hi, r[2]);
    }
    const double mn_span = mn_hi > mn_lo ? mn_hi - mn_lo : 1.0;
    const double vr_span = vr_hi > vr_lo ? vr_hi - vr_lo : 1.0;
    for (int k = 1; k + 1 < p_grid; ++k) {
        const double ax = (t.rows[k][1] - t.rows[k - 1][1]) / mn_span;
        const double ay = (t.rows[k][2] - t.rows[k - 1][2]) / vr_span;
        const double bx = (t.rows[k + 1][1] - t.rows[k][1]) / mn_span;
        const double by = (t.rows[k + 1][2] - t.rows[k][2]) / vr_span;
        const double cross = std::abs(ax * by - ay * bx);
        const double la = std::hypot(ax, ay), lb = std::hypot(bx, by);
        const double lc = std::hypot(ax + bx, ay + by);
        if (la == 0.0 || lb == 0.0 || lc == 0.0) continue;
        const double curv = 2.0 * cross / (la * lb * lc);
        if (curv > best_curv) {
            best_curv = curv;
            knee_p = t.rows[k][0];
        }
    }
    push_meta(t, "seed", std::to_string(seed));
    push_meta(t, "n_landscapes", std::to_string(n_landscapes));
    push_meta(t, "p_grid", std::to_string(p_grid));
    push_meta(t, "a", std::to_string(base.a));
    push_meta(t, "b", std::to_string(base.b));
    push_meta(t, "c", fmt(base.c));
    push_meta(t, "knee_p", fmt(knee_p));
    push_meta(t, "note", "rate = xi_crit; knee annotation is exploratory");
    return t;
}

std::vector<double> default_param_grid(Family family, int points) {
    if (points < 2) throw InputError("parameter grid needs at least 2 points");
    double hi = 0.0, lo = 0.0;
    switch (family) {
        case Family::Exponential: hi = 4.0; lo = 1.0; break;
        case Family::Polynomial:
        case Family::Logarithmic: hi = 6.0; lo = 0.5; break;
        case Family::Random:
            throw InputError("the random family has no steepness parameter");
    }
    // Downward walk: steepness of the wells grows along the grid.
    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i)
        grid[i] = hi - (hi - lo) * i / (points - 1);
    return grid;
}

ExperimentTable run_family_sweep(Family family, std::vector<double> param_grid,
                                 int a, int b, double c) {
    if (param_grid.empty()) throw InputError("empty parameter grid");

    ExperimentTable t;
    t.name = "family_sweep";
    t.columns = {"param", "p_best", "xi_at_p_best", "chosen_class"};
    for (double theta : param_grid) {
        FamilySpec spec;
        spec.family = family;
        spec.steepness = theta;
        spec.a = a;
        spec.b = b;
        spec.c = c;
        const LandscapeProfile prof = parametric_profile(spec);
        const PBestResult best = find_p_best(prof);
        t.rows.push_back({theta, best.p_best, best.xi,
                          best.chosen == Mode::G1 ? 1.0 : 0.0});
    }
    push_meta(t, "family", to_string(family));
    push_meta(t, "a", std::to_string(a));
    push_meta(t, "b", std::to_string(b));
    push_meta(t, "c", fmt(c));
    push_meta(t, "points", std::to_string(param_grid.size()));
    push_meta(t, "chosen_class", "0 = a2, 1 = g1");
    push_meta(t, "ordering",
              "rows walk the parameter downward (increasing well steepness)");
    return t;
}

void emit_csv(const ExperimentTable& table, std::ostream& out) {
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        out << (i ? "," : "") << table.columns[i];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << fmt(row[i]);
        out << '\n';
    }
}

void emit_json(const ExperimentTable& table, std::ostream& out) {
    nlohmann::json j;
    j["name"] = table.name;
    j["columns"] = table.columns;
    nlohmann::json meta = nlohmann::json::object();
    for (const auto& [k, v] : table.metadata) meta[k] = v;
    j["metadata"] = meta;
    j["rows"] = table.rows;
    out << j.dump(2) << '\n';
}

void emit_svg(const ExperimentTable& table, std::ostream& out) {
    if (table.rows.empty()) throw InputError("cannot plot an empty table");
    const int width = 840, height = 520;
    const int ml = 70, mr = 20, mt = 40, mb = 45;
    const int pw = width - ml - mr, ph = height - mt - mb;
    const std::size_t ycols = table.columns.size() - 1;

    double x_lo = 1e300, x_hi = -1e300, y_lo = 1e300, y_hi = -1e300;
    for (const auto& r : table.rows) {
        if (!std::isfinite(r[0])) continue;
        x_lo = std::min(x_lo, r[0]);
        x_hi = std::max(x_hi, r[0]);
        for (std::size_t c = 1; c < r.size(); ++c) {
            if (!std::isfinite(r[c])) continue;
            y_lo = std::min(y_lo, r[c]);
            y_hi = std::max(y_hi, r[c]);
        }
    }
    if (x_hi <= x_lo) x_hi = x_lo + 1.0;
    if (y_hi <= y_lo) y_hi = y_lo + 1.0;

    auto sx = [&](double x) { return ml + (x - x_lo) / (x_hi - x_lo) * pw; };
    auto sy = [&](double y) { return mt + ph - (y - y_lo) / (y_hi - y_lo) * ph; };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b"};
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
        << "\" height=\"" << height << "\">\n";
    out << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << table.name << "</text>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw
        << "\" y2=\"" << mt + ph << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << mt + ph << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << ml << "\" y=\"" << height - 12
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(x_lo) << "</text>\n";
    out << "<text x=\"" << ml + pw << "\" y=\"" << height - 12
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt(x_hi) << "</text>\n";
    out << "<text x=\"" << ml - 6 << "\" y=\"" << mt + ph
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt(y_lo) << "</text>\n";
    out << "<text x=\"" << ml - 6 << "\" y=\"" << mt + 10
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt(y_hi) << "</text>\n";

    for (std::size_t c = 1; c <= ycols; ++c) {
        out << "<polyline fill=\"none\" stroke=\"" << palette[(c - 1) % 6]
            << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (const auto& r : table.rows) {
            if (!std::isfinite(r[0]) || !std::isfinite(r[c])) continue;
            out << (first ? "" : " ") << fmt(sx(r[0])) << ',' << fmt(sy(r[c]));
            first = false;
        }
        out << "\"/>\n";
        out << "<text x=\"" << ml + 8 << "\" y=\"" << mt + 14 * c
            << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\""
            << palette[(c - 1) % 6] << "\">" << table.columns[c] << "</text>\n";
    }
    out << "</svg>\n";
}

void emit(const ExperimentTable& table, const std::string& format, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write to '" + path + "'");
    if (format == "csv")
        emit_csv(table, out);
    else if (format == "json")
        emit_json(table, out);
    else if (format == "svg")
        emit_svg(table, out);
    else
        throw InputError("unknown format '" + format + "' (expected csv, json or svg)");
    if (!out) throw InputError("write to '" + path + "' failed");
}

ExperimentTable parse_csv(std::istream& in) {
    ExperimentTable t;
    std::string line;
    if (!std::getline(in, line)) throw InputError("empty CSV");
    std::stringstream header(line);
    std::string cell;
    while (std::getline(header, cell, ',')) t.columns.push_back(cell);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != t.columns.size()) throw InputError("ragged CSV row");
        t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace restartopt
