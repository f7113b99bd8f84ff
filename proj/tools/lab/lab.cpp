#include "lab.hpp"

#include "sweepout/common.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace sweepout::lab {

namespace {

using json = nlohmann::json;

const std::map<std::string, std::vector<OptSpec>>& table()
{
    static const std::map<std::string, std::vector<OptSpec>> t = {
        {"scaling",
         {{"construction", OptKind::Str, "bent-lines", "bent-lines, vertical-lines or multiscale"},
          {"p", OptKind::IntList, "4..1024", "family sizes; a..b steps by factors of 4", 4},
          {"eps", OptKind::Real, "0.1", "squeeze core size"},
          {"budget", OptKind::Int, "8", "sampled parameters per family"},
          {"Q0", OptKind::IntList, "0..6", "multiscale: outer levels"},
          {"Q1", OptKind::IntList, "0..6", "multiscale: inner levels"}}},
        {"pyramid",
         {{"n", OptKind::Int, "3", "ambient dimension (2 or 3)"},
          {"i", OptKind::Int, "1", "fiber index"},
          {"k", OptKind::Int, "1", "cycle dimension"},
          {"P", OptKind::Int, "6", "depth"},
          {"phi", OptKind::Int, "64", "direction grid size"},
          {"beta", OptKind::Real, "8", "N functional parameter"},
          {"samples", OptKind::Int, "2000", "projection samples per node"},
          {"tol", OptKind::Real, "0.001", "relative bisection tolerance"},
          {"tree", OptKind::Flag, "false", "include the full tree in artifacts"}}},
        {"flatdist",
         {{"n", OptKind::Int, "2", "dimension"},
          {"N", OptKind::Int, "3", "cells per axis"},
          {"bruteforce", OptKind::Flag, "false", "exhaustive flat norm on every relative cycle"}}},
        {"crofton",
         {{"lines", OptKind::Int, "100000", "random lines"},
          {"radius", OptKind::Real, "0.5", "test circle radius"},
          {"degree", OptKind::IntList, "1..6", "curve degrees"},
          {"curves", OptKind::Int, "50", "random curves per degree"}}},
        {"sublevel",
         {{"d", OptKind::IntList, "1..3", "degrees"},
          {"n", OptKind::IntList, "1..2", "dimensions"},
          {"delta", OptKind::RealList, "0.1,0.01,0.001,0.0001", "thresholds"},
          {"polys", OptKind::Int, "20", "random polynomials per (d, n)"},
          {"samples", OptKind::Int, "200000", "Monte Carlo samples"},
          {"constant", OptKind::Real, "10", "bound constant"}}},
        {"continuity",
         {{"d", OptKind::Int, "3", "degree"},
          {"eta", OptKind::RealList, "0.1,0.03,0.01,0.003,0.001", "perturbation sizes"},
          {"trials", OptKind::Int, "50", "trials per eta"},
          {"raster", OptKind::Int, "256", "raster resolution"}}},
        {"coverage",
         {{"family", OptKind::Str, "bent", "parallel, bent, vertical or antipodal"},
          {"trials", OptKind::Int, "100", "random point sets or loops"},
          {"max-points", OptKind::Int, "32", "largest point set"},
          {"delta", OptKind::Real, "0.05", "distance tolerance"},
          {"budget", OptKind::Int, "0", "sampled parameters after the witness"},
          {"degree", OptKind::Int, "3", "antipodal: loop degree"}}},
        {"pack",
         {{"n", OptKind::Int, "3", "dimension"},
          {"p", OptKind::IntList, "10..10000", "ball counts; a..b steps by factors of 10", 10},
          {"trials", OptKind::Int, "200", "random radius vectors per optimality audit"}}},
        {"report", {{"inputs", OptKind::Str, "", "comma-separated report files"}}},
    };
    return t;
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep))
        if (!cur.empty()) out.push_back(cur);
    return out;
}

long long to_int(const std::string& s)
{
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (const std::exception&) {
        throw DomainError("not an integer: '" + s + "'");
    }
    if (pos != s.size()) throw DomainError("not an integer: '" + s + "'");
    return v;
}

double to_real(const std::string& s)
{
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw DomainError("not a number: '" + s + "'");
    }
    if (pos != s.size() || !std::isfinite(v)) throw DomainError("not a number: '" + s + "'");
    return v;
}

bool type_ok(const OptSpec& s, const json& v)
{
    switch (s.kind) {
    case OptKind::Int: return v.is_number_integer();
    case OptKind::Real: return v.is_number();
    case OptKind::Str: return v.is_string();
    case OptKind::Flag: return v.is_boolean();
    case OptKind::IntList:
        return v.is_array() && std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_number_integer(); });
    case OptKind::RealList:
        return v.is_array() && std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_number(); });
    }
    return false;
}

json defaults(const std::string& command)
{
    json p = json::object();
    for (const auto& s : options_for(command)) p[s.name] = parse_value(s, s.def);
    return p;
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw std::runtime_error("write failed: '" + path + "'");
}

std::string read_file(const std::string& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DomainError("cannot read '" + path + "'");
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

std::uint64_t parse_seed(const std::string& s)
{
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        if (!s.empty() && s[0] == '-') throw std::invalid_argument("negative");
        v = std::stoull(s, &pos);
    } catch (const std::exception&) {
        throw DomainError("invalid seed '" + s + "'");
    }
    if (pos != s.size()) throw DomainError("invalid seed '" + s + "'");
    return v;
}

std::string describe(const std::string& name)
{
    static const std::map<std::string, std::string> d = {
        {"scaling", "max length of bent or multiscale families against p"},
        {"pyramid", "greedy bisection pyramid and its thickness"},
        {"flatdist", "flat norm against area distance on a cubical grid"},
        {"crofton", "Crofton length of a circle and of random algebraic curves"},
        {"sublevel", "Monte Carlo sublevel volumes of random polynomials"},
        {"continuity", "area distance of zero sets under coefficient noise"},
        {"coverage", "point and antipodal coverage by family members"},
        {"pack", "greedy disjoint balls and the radius optimality audit"},
        {"report", "collects summaries of earlier reports"},
    };
    return d.at(name);
}

}  // namespace

const std::vector<std::string>& subcommands()
{
    static const std::vector<std::string> names = {"scaling",    "pyramid",  "flatdist", "crofton", "sublevel",
                                                   "continuity", "coverage", "pack",     "report"};
    return names;
}

const std::vector<OptSpec>& options_for(const std::string& command)
{
    const auto it = table().find(command);
    if (it == table().end()) throw DomainError("unknown subcommand '" + command + "'");
    return it->second;
}

json parse_value(const OptSpec& spec, const std::string& text)
{
    switch (spec.kind) {
    case OptKind::Int: return to_int(text);
    case OptKind::Real: return to_real(text);
    case OptKind::Str: return text;
    case OptKind::Flag:
        if (text == "true" || text == "1") return true;
        if (text == "false" || text == "0") return false;
        throw DomainError("--" + spec.name + ": expected true or false");
    case OptKind::IntList: {
        json out = json::array();
        for (const auto& part : split(text, ',')) {
            const auto dots = part.find("..");
            if (dots == std::string::npos) {
                out.push_back(to_int(part));
                continue;
            }
            const long long a = to_int(part.substr(0, dots));
            const long long b = to_int(part.substr(dots + 2));
            if (a > b) throw DomainError("--" + spec.name + ": empty range " + part);
            if (spec.geometric > 1) {
                if (a < 1) throw DomainError("--" + spec.name + ": geometric range must start at 1 or more");
                for (long long x = a; x <= b; x *= spec.geometric) out.push_back(x);
            } else {
                if (b - a > 100000) throw DomainError("--" + spec.name + ": range too long");
                for (long long x = a; x <= b; ++x) out.push_back(x);
            }
        }
        if (out.empty()) throw DomainError("--" + spec.name + ": empty list");
        return out;
    }
    case OptKind::RealList: {
        json out = json::array();
        for (const auto& part : split(text, ',')) out.push_back(to_real(part));
        if (out.empty()) throw DomainError("--" + spec.name + ": empty list");
        return out;
    }
    }
    throw DomainError("unsupported option kind");
}

json ExperimentConfig::to_json() const
{
    return json{{"command", command}, {"params", params}, {"seed", seed}};
}

ExperimentConfig ExperimentConfig::from_json(const json& j)
{
    if (!j.is_object()) throw DomainError("config: expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (it.key() != "command" && it.key() != "params" && it.key() != "seed")
            throw DomainError("config: unknown key '" + it.key() + "'");
    if (!j.contains("command") || !j["command"].is_string()) throw DomainError("config: missing command");
    ExperimentConfig c;
    c.command = j["command"].get<std::string>();
    const auto& specs = options_for(c.command);
    c.params = defaults(c.command);
    if (j.contains("params")) {
        if (!j["params"].is_object()) throw DomainError("config: params must be an object");
        for (auto it = j["params"].begin(); it != j["params"].end(); ++it) {
            const auto s = std::find_if(specs.begin(), specs.end(), [&](const OptSpec& o) { return o.name == it.key(); });
            if (s == specs.end()) throw DomainError("config: unknown parameter '" + it.key() + "' for " + c.command);
            if (!type_ok(*s, it.value())) throw DomainError("config: parameter '" + it.key() + "' has the wrong type");
            c.params[it.key()] = it.value();
        }
    }
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<std::int64_t>() >= 0))
            throw DomainError("config: seed must be a non-negative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    return c;
}

json Report::to_json(const ExperimentConfig& cfg) const
{
    json j{{"experiment", experiment}, {"version", kVersion}, {"config", cfg.to_json()},
           {"rows", rows},             {"summary", summary},  {"notes", notes}};
    if (!artifacts.is_null()) j["artifacts"] = artifacts;
    return j;
}

std::vector<Check> parse_checks(const std::string& text)
{
    std::vector<Check> out;
    for (const auto& part : split(text, ',')) {
        const auto colon = part.find(':');
        const auto dots = part.find("..", colon == std::string::npos ? 0 : colon);
        if (colon == std::string::npos || dots == std::string::npos || colon == 0)
            throw DomainError("--check: expected key:lo..hi, got '" + part + "'");
        Check c;
        c.key = part.substr(0, colon);
        c.lo = to_real(part.substr(colon + 1, dots - colon - 1));
        c.hi = to_real(part.substr(dots + 2));
        if (c.lo > c.hi) throw DomainError("--check: empty interval for " + c.key);
        out.push_back(c);
    }
    if (out.empty()) throw DomainError("--check: no checks given");
    return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Sweepout experiment runner", "sweepout"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1, 1);

    struct Common {
        std::string seed, config, out, csv, svg, check;
        bool timing = false;
    };
    std::map<std::string, Common> common;
    std::map<std::string, std::map<std::string, std::string>> given;
    std::map<std::string, std::map<std::string, bool>> flags;

    for (const auto& name : subcommands()) {
        auto* sub = app.add_subcommand(name, describe(name));
        auto& c = common[name];
        sub->add_option("--seed", c.seed, "64-bit seed (falls back to SWEEPOUT_SEED, then 0)");
        sub->add_option("--config", c.config, "JSON config; flags override it");
        sub->add_option("--out", c.out, "report path (default: standard output)");
        sub->add_option("--csv", c.csv, "write rows as CSV");
        sub->add_option("--svg", c.svg, "write a plot");
        sub->add_option("--check", c.check, "key:lo..hi[,...] against summary values");
        sub->add_flag("--timing", c.timing, "print wall time to standard error");
        for (const auto& spec : options_for(name)) {
            if (spec.kind == OptKind::Flag)
                sub->add_flag("--" + spec.name, flags[name][spec.name], spec.help);
            else
                sub->add_option("--" + spec.name, given[name][spec.name], spec.help + " [" + spec.def + "]");
        }
    }

    if (argc > 1 && argv[1][0] != '-' &&
        std::find(subcommands().begin(), subcommands().end(), std::string(argv[1])) == subcommands().end()) {
        err << "sweepout: unknown subcommand '" << argv[1] << "'\n\n" << app.help();
        return 2;
    }
    try {
        app.parse(argc, const_cast<char**>(argv));
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n\n" << app.help();
        return 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    auto* sub = app.get_subcommands().front();
    const Common& c = common[command];

    ExperimentConfig cfg;
    std::vector<Check> checks;
    try {
        if (!c.config.empty()) {
            json j;
            try {
                j = json::parse(read_file(c.config));
            } catch (const json::parse_error& e) {
                throw DomainError("config '" + c.config + "': " + e.what());
            }
            cfg = ExperimentConfig::from_json(j);
            if (cfg.command != command)
                throw DomainError("config is for '" + cfg.command + "', not '" + command + "'");
        } else {
            cfg.command = command;
            cfg.params = defaults(command);
        }
        for (const auto& spec : options_for(command)) {
            const std::string flag = "--" + spec.name;
            if (sub->count(flag) == 0) continue;
            cfg.params[spec.name] =
                spec.kind == OptKind::Flag ? json(flags[command][spec.name]) : parse_value(spec, given[command][spec.name]);
        }
        if (!c.seed.empty())
            cfg.seed = parse_seed(c.seed);
        else if (c.config.empty())
            if (const char* env = std::getenv("SWEEPOUT_SEED")) cfg.seed = parse_seed(env);
        if (!c.check.empty()) checks = parse_checks(c.check);
    } catch (const Error& e) {
        err << "sweepout " << command << ": " << e.what() << "\n\n" << sub->help();
        return 2;
    }

    Report report;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        report = run_experiment(cfg);
        if (report.rows.empty()) throw StructuralError("experiment produced no rows");
    } catch (const DomainError& e) {
        err << "sweepout " << command << ": " << e.what() << "\n";
        return 2;
    } catch (const CapabilityError& e) {
        err << "sweepout " << command << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "sweepout " << command << ": " << e.what() << "\n";
        return 1;
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    try {
        const std::string text = canonical_json(report.to_json(cfg));
        if (c.out.empty() || c.out == "-")
            out << text;
        else
            write_file(c.out, text);
        if (!c.csv.empty()) write_file(c.csv, rows_csv(report.rows, report.csv_columns));
        if (!c.svg.empty()) {
            std::vector<std::pair<double, double>> pts;
            for (const auto& r : report.rows)
                if (r.contains(report.plot.x) && r.contains(report.plot.y) && r[report.plot.x].is_number() &&
                    r[report.plot.y].is_number())
                    pts.emplace_back(r[report.plot.x].get<double>(), r[report.plot.y].get<double>());
            write_file(c.svg, plot_svg(pts, report.plot));
        }
    } catch (const DomainError& e) {
        err << "sweepout " << command << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "sweepout " << command << ": " << e.what() << "\n";
        return 1;
    }
    if (c.timing) err << "wall time " << wall << " s\n";

    bool pass = true;
    for (const auto& chk : checks) {
        const json* sv = report.summary.contains(chk.key) ? &report.summary[chk.key] : nullptr;
        if (!sv || !(sv->is_number() || sv->is_boolean())) {
            err << "check " << chk.key << ": no numeric summary value\n";
            pass = false;
            continue;
        }
        // Booleans compare as 0 and 1.
        const double v = sv->is_boolean() ? double(sv->get<bool>()) : sv->get<double>();
        const bool ok = v >= chk.lo && v <= chk.hi;
        err << "check " << chk.key << " = " << v << " in [" << chk.lo << ", " << chk.hi << "]: "
            << (ok ? "ok" : "FAILED") << "\n";
        pass = pass && ok;
    }
    return pass ? 0 : 3;
}

}  // namespace sweepout::lab
