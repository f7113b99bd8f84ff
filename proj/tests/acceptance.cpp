// Runs the eleven acceptance criteria and prints one PASS/FAIL line each.
// Exit status is the number of failed criteria (capped at 100).

#include "lab.hpp"
#include "sweepout/cycle_families.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <string>
#include <vector>

using namespace sweepout;
using lab::ExperimentConfig;
using nlohmann::json;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string name;
    double limit_s;  // runtime budget, 0 for none
    std::function<Outcome()> body;
};

std::string fmt(const char* f, double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

json run(const std::string& command, json params, std::uint64_t seed = 0)
{
    ExperimentConfig cfg;
    cfg.command = command;
    cfg.params = std::move(params);
    cfg.seed = seed;
    // from_json fills the remaining defaults.
    cfg = ExperimentConfig::from_json(cfg.to_json());
    return lab::run_experiment(cfg).summary;
}

double num(const json& s, const char* key)
{
    const json& v = s.at(key);
    return v.is_boolean() ? double(v.get<bool>()) : v.get<double>();
}

std::vector<Criterion> criteria()
{
    std::vector<Criterion> cs;

    cs.push_back({1, "vertical lines reach length 2 at the centre", 1.0, [] {
                      const FamilyStats st = family_max_volume(vertical_lines(), 64, 0);
                      const bool ok = std::abs(st.max_volume - 2.0) <= 1e-9 && st.argmax.size() == 1 &&
                                      st.argmax[0] == 0.0;
                      return Outcome{ok, "max " + fmt("%.12f", st.max_volume) + " at t = " +
                                             fmt("%g", st.argmax.empty() ? NAN : st.argmax[0])};
                  }});

    // Criteria 2 and 3 share one run.
    static json bent;
    cs.push_back({2, "bent lines length grows like p^(1/2)", 300.0, [] {
                      bent = run("scaling", {{"construction", "bent-lines"}});
                      const double slope = num(bent, "slope"), r2 = num(bent, "r2");
                      return Outcome{slope >= 0.4 && slope <= 0.6 && r2 >= 0.95,
                                     "slope " + fmt("%.4f", slope) + ", r2 " + fmt("%.5f", r2)};
                  }});
    cs.push_back({3, "cup lower bound sandwiches the bent family", 300.0, [] {
                      if (bent.is_null()) bent = run("scaling", {{"construction", "bent-lines"}});
                      const double spread = num(bent, "ratio_spread");
                      return Outcome{bent.at("sandwich_ok").get<bool>() && spread <= 3.0,
                                     "sandwich " + std::string(bent.at("sandwich_ok").get<bool>() ? "ok" : "violated") +
                                         ", ratio spread " + fmt("%.3f", spread)};
                  }});

    cs.push_back({4, "flat norm equals area distance on the 3x3 grid", 60.0, [] {
                      const json s = run("flatdist", {{"n", 2}, {"N", 3}, {"bruteforce", true}});
                      const bool ok = s.at("all_equal").get<bool>() && num(s, "cycles") == 256;
                      return Outcome{ok, fmt("%g", num(s, "equal")) + " of " + fmt("%g", num(s, "cycles")) + " equal"};
                  }});

    cs.push_back({5, "Crofton lengths of a circle and of random curves", 0.0, [] {
                      const json s = run("crofton", {{"lines", 100000}, {"degree", {1, 2, 3, 4, 5, 6}}, {"curves", 50}});
                      const double rel = num(s, "circle_rel_error"), viol = num(s, "violations");
                      return Outcome{rel <= 0.02 && viol == 0,
                                     "circle error " + fmt("%.4f", rel) + ", violations " + fmt("%g", viol)};
                  }});

    cs.push_back({6, "sublevel volumes obey the 1/(dn) exponent", 120.0, [] {
                      const json s = run("sublevel", {{"d", {1, 2, 3}}, {"n", {1, 2}}, {"polys", 20}, {"constant", 10.0}});
                      return Outcome{num(s, "violations") == 0, "violations " + fmt("%g", num(s, "violations"))};
                  }});

    cs.push_back({7, "continuity exponent is positive", 300.0, [] {
                      const json s = run("continuity", {{"d", 3}, {"trials", 50}});
                      const double e = num(s, "epsilon_hat");
                      const bool dec = s.at("decreasing").get<bool>();
                      return Outcome{e > 0.0 && dec,
                                     "epsilon_hat " + fmt("%.4f", e) + ", " + (dec ? "decreasing" : "not decreasing")};
                  }});

    cs.push_back({8, "pyramid thickness growth", 600.0, [] {
                      const json s = run("pyramid", {{"n", 3}, {"i", 1}, {"k", 1}, {"P", 8}, {"phi", 64}});
                      const double gT = num(s, "growth_T"), gR = num(s, "growth_rad_inv");
                      const bool holder = s.at("holder_all").get<bool>();
                      const bool ok = gT >= 1.2 && gR <= 2.0 * std::sqrt(2.5) && holder;
                      return Outcome{ok, "growth T " + fmt("%.4f", gT) + ", growth sum 1/Rad " + fmt("%.4f", gR) +
                                             ", Hölder " + (holder ? "exact" : "violated")};
                  }});

    cs.push_back({9, "packing and optimal radii", 60.0, [] {
                      bool ok = true;
                      std::string d;
                      for (int n : {2, 3}) {
                          const json s = run("pack", {{"n", n}, {"p", {10, 100, 1000, 10000}}, {"trials", 200}});
                          const bool packed = s.at("all_packed").get<bool>();
                          const bool wins = num(s, "audit_wins") == num(s, "audits");
                          ok = ok && packed && wins;
                          d += "n=" + std::to_string(n) + (packed ? " packed" : " NOT packed") + ", audits " +
                               fmt("%g", num(s, "audit_wins")) + "/" + fmt("%g", num(s, "audits")) + "; ";
                      }
                      return Outcome{ok, d.substr(0, d.size() - 2)};
                  }});

    cs.push_back({10, "point and antipodal coverage", 0.0, [] {
                      const double par = num(run("coverage", {{"family", "parallel"}, {"trials", 100}}), "success_rate");
                      const double bnt = num(run("coverage", {{"family", "bent"}, {"trials", 100}, {"delta", 0.05}}),
                                             "success_rate");
                      const double ant = num(run("coverage", {{"family", "antipodal"}, {"trials", 100}, {"delta", 0.05}}),
                                             "success_rate");
                      return Outcome{par == 1.0 && bnt >= 0.95 && ant >= 0.95,
                                     "parallel " + fmt("%.2f", par) + ", bent " + fmt("%.2f", bnt) + ", antipodal " +
                                         fmt("%.2f", ant)};
                  }});

    cs.push_back({11, "multiscale growth per unit Q0 and Q1", 900.0, [] {
                      const json s = run("scaling", {{"construction", "multiscale"},
                                                     {"Q0", {0, 1, 2, 3, 4, 5, 6}},
                                                     {"Q1", {0, 1, 2, 3, 4, 5, 6}}});
                      const double g0 = num(s, "growth_Q0"), g1 = num(s, "growth_Q1");
                      const double t0 = std::pow(2.0, 2.0 / 3.0), t1 = std::sqrt(2.0);
                      const bool ok = std::abs(g0 / t0 - 1.0) <= 0.15 && std::abs(g1 / t1 - 1.0) <= 0.15;
                      return Outcome{ok, "growth Q0 " + fmt("%.4f", g0) + " (target " + fmt("%.4f", t0) + "), Q1 " +
                                             fmt("%.4f", g1) + " (target " + fmt("%.4f", t1) + ")"};
                  }});
    return cs;
}

}  // namespace

int main(int argc, char** argv)
{
    // Optional list of criterion numbers to run.
    std::vector<int> only;
    for (int a = 1; a < argc; ++a) only.push_back(std::atoi(argv[a]));
    int failed = 0;
    for (const auto& c : criteria()) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.body();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.limit_s > 0.0 && secs > c.limit_s) {
            o.pass = false;
            o.detail += "; over the " + fmt("%g", c.limit_s) + " s budget";
        }
        std::printf("%s %2d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(), o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += !o.pass;
    }
    return std::min(failed, 100);
}
