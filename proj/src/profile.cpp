#include "restartopt/profile.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

#include "restartopt/errors.hpp"

namespace restartopt {

std::string to_string(Mode m) {
    switch (m) {
        case Mode::G1: return "g1";
        case Mode::A2: return "a2";
        case Mode::GeneralA: return "general";
    }
    return "?";
}

Mode mode_from_string(const std::string& s) {
    if (s == "g1" || s == "G1") return Mode::G1;
    if (s == "a2" || s == "A2") return Mode::A2;
    if (s == "general" || s == "generalA") return Mode::GeneralA;
    throw InputError("unknown mode '" + s + "' (expected g1, a2 or general)");
}

double LandscapeProfile::q_sum() const {
    return std::accumulate(q.begin(), q.end(), 0.0);
}
double LandscapeProfile::p1_sum() const {
    return std::accumulate(p1.begin(), p1.end(), 0.0);
}
double LandscapeProfile::p2_sum() const {
    return std::accumulate(p2.begin(), p2.end(), 0.0);
}

LandscapeProfile LandscapeProfile::g1_view() const {
    LandscapeProfile out;
    out.q = q;
    out.c = c;
    const int na = a();
    out.p1.assign(na + 1, 0.0);
    out.p2.resize(na + 1);
    for (int j = 0; j <= na; ++j) out.p2[j] = trap_at(j);
    return out;
}

LandscapeProfile LandscapeProfile::a2_view() const {
    LandscapeProfile out;
    out.q = q;
    out.c = c;
    const int na = a();
    out.p2.assign(na + 1, 0.0);
    out.p1.resize(na + 1);
    for (int j = 0; j <= na; ++j) out.p1[j] = trap_at(j);
    return out;
}

void LandscapeProfile::validate() const {
    if (q.empty()) throw InputError("profile: q is empty");
    if (p1.empty() && p2.empty()) throw InputError("profile: no outside mass (p1 and p2 empty)");
    for (double v : q)
        if (!(v >= 0.0)) throw InputError("profile: negative or NaN entry in q");
    for (double v : p1)
        if (!(v >= 0.0)) throw InputError("profile: negative or NaN entry in p1");
    for (double v : p2)
        if (!(v >= 0.0)) throw InputError("profile: negative or NaN entry in p2");

    const double total = q_sum() + trap_sum();
    if (std::abs(total - 1.0) > 1e-12)
        throw InputError("profile: q + p1 + p2 must sum to 1 (got " + std::to_string(total) + ")");

    if (!(c > 0.0)) throw InputError("profile: mass ratio c must be positive");
    const double qs = q_sum();
    if (qs <= 0.0) throw InputError("profile: well mass is zero");
    if (std::abs(trap_sum() / qs - c) > 1e-9)
        throw InputError("profile: mass ratio c inconsistent with q/p1/p2 sums");

    if (!(q.back() > 0.0)) throw InputError("profile: q[b] must be positive (b maximal)");
    const int na = a();
    if (!(std::max(p1_at(na), p2_at(na)) > 0.0))
        throw InputError("profile: max(p1[a], p2[a]) must be positive (a maximal)");
}

LandscapeProfile profile_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("profile JSON parse error: ") + e.what());
    }
    LandscapeProfile prof;
    try {
        prof.c = j.at("c").get<double>();
        prof.q = j.at("q").get<std::vector<double>>();
        prof.p1 = j.at("p1").get<std::vector<double>>();
        prof.p2 = j.at("p2").get<std::vector<double>>();
        const int a = j.at("a").get<int>();
        const int b = j.at("b").get<int>();
        if (a != prof.a() || b != prof.b())
            throw InputError("profile JSON: a/b fields disagree with array lengths");
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("profile JSON: ") + e.what());
    }
    prof.validate();
    return prof;
}

LandscapeProfile load_profile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open profile file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return profile_from_json(ss.str());
}

std::string profile_to_json(const LandscapeProfile& prof) {
    nlohmann::json j;
    j["a"] = prof.a();
    j["b"] = prof.b();
    j["c"] = prof.c;
    j["q"] = prof.q;
    j["p1"] = prof.p1;
    j["p2"] = prof.p2;
    return j.dump();
}

}  // namespace restartopt
