#include <doctest.h>

#include "lab.hpp"
#include "sweepout/common.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace sweepout;
using namespace sweepout::lab;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(std::vector<std::string> args)
{
    args.insert(args.begin(), "sweepout");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / "sweepout_lab_tests";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_SUITE("lab_cli")
{
    TEST_CASE("exit codes")
    {
        CHECK(call({"flatdist", "--N", "2", "--bruteforce"}).code == 0);
        const Result unknown = call({"frobnicate"});
        CHECK(unknown.code == 2);
        CHECK(unknown.err.find("unknown subcommand 'frobnicate'") != std::string::npos);
        CHECK(call({"flatdist", "--no-such-flag"}).code == 2);
        CHECK(call({"flatdist", "--N", "zero"}).code == 2);
        CHECK(call({}).code == 2);
        // Out-of-range parameter reaches the library and comes back as a domain error.
        CHECK(call({"crofton", "--lines", "2000", "--curves", "2", "--degree", "1", "--radius", "0"}).code == 2);
        CHECK(call({"flatdist", "--N", "2", "--bruteforce", "--check", "all_equal:1..1"}).code == 0);
        CHECK(call({"flatdist", "--N", "2", "--bruteforce", "--check", "cycles:100..200"}).code == 3);
        CHECK(call({"flatdist", "--N", "2", "--check", "nonsense"}).code == 2);
        CHECK(call({"flatdist", "--help"}).code == 0);
    }

    TEST_CASE("same config and seed give identical bytes")
    {
        const std::vector<std::string> args{"crofton", "--lines", "3000", "--curves", "3", "--degree", "1..3", "--seed", "42"};
        const Result a = call(args), b = call(args);
        REQUIRE(a.code == 0);
        CHECK(a.out == b.out);
        const Result c = call({"crofton", "--lines", "3000", "--curves", "3", "--degree", "1..3", "--seed", "43"});
        CHECK(c.out != a.out);
    }

    TEST_CASE("seed precedence")
    {
        const auto seed_of = [](const Result& r) { return nlohmann::json::parse(r.out)["config"]["seed"].get<std::uint64_t>(); };
        ::setenv("SWEEPOUT_SEED", "77", 1);
        CHECK(seed_of(call({"flatdist", "--N", "2"})) == 77);
        CHECK(seed_of(call({"flatdist", "--N", "2", "--seed", "5"})) == 5);
        ::unsetenv("SWEEPOUT_SEED");
        CHECK(seed_of(call({"flatdist", "--N", "2"})) == 0);
    }

    TEST_CASE("config echo round trips byte for byte")
    {
        const Result first = call({"scaling", "--p", "4..64", "--seed", "9"});
        REQUIRE(first.code == 0);
        const auto cfg = nlohmann::json::parse(first.out)["config"];
        const fs::path path = scratch("scaling_config.json");
        std::ofstream(path) << cfg.dump(2);
        const Result second = call({"scaling", "--config", path.string()});
        REQUIRE(second.code == 0);
        CHECK(second.out == first.out);

        const ExperimentConfig parsed = ExperimentConfig::from_json(cfg);
        CHECK(ExperimentConfig::from_json(parsed.to_json()) == parsed);
        CHECK(canonical_json(parsed.to_json()) == canonical_json(cfg));
    }

    TEST_CASE("config validation")
    {
        nlohmann::json j{{"command", "flatdist"}, {"params", {{"N", 2}, {"colour", "red"}}}, {"seed", 1}};
        CHECK_THROWS_AS(ExperimentConfig::from_json(j), DomainError);
        j = {{"command", "flatdist"}, {"params", {{"N", "two"}}}, {"seed", 1}};
        CHECK_THROWS_AS(ExperimentConfig::from_json(j), DomainError);
        j = {{"command", "nope"}, {"params", nlohmann::json::object()}, {"seed", 1}};
        CHECK_THROWS_AS(ExperimentConfig::from_json(j), DomainError);
        j = {{"command", "flatdist"}, {"params", {{"N", 2}}}, {"seed", 1}, {"extra", 0}};
        CHECK_THROWS_AS(ExperimentConfig::from_json(j), DomainError);
        // Missing parameters take their defaults.
        j = {{"command", "flatdist"}, {"params", nlohmann::json::object()}, {"seed", 1}};
        CHECK(ExperimentConfig::from_json(j).params["N"] == 3);

        const fs::path wrong = scratch("wrong_command.json");
        std::ofstream(wrong) << R"({"command": "crofton", "params": {}, "seed": 0})";
        CHECK(call({"flatdist", "--config", wrong.string()}).code == 2);
        const fs::path broken = scratch("broken.json");
        std::ofstream(broken) << "{not json";
        CHECK(call({"flatdist", "--config", broken.string()}).code == 2);
    }

    TEST_CASE("output files")
    {
        const fs::path out = scratch("report.json"), csv = scratch("rows.csv"), svg = scratch("plot.svg");
        const Result r = call({"scaling", "--p", "4..64", "--out", out.string(), "--csv", csv.string(), "--svg", svg.string()});
        REQUIRE(r.code == 0);
        CHECK(r.out.empty());
        const auto report = nlohmann::json::parse(slurp(out));
        CHECK(report["version"] == kVersion);
        CHECK(report["rows"].size() == 3);
        const std::string text = slurp(csv);
        CHECK(text.rfind("p,", 0) == 0);
        CHECK(std::count(text.begin(), text.end(), '\n') == 4);
        CHECK(slurp(svg).find("<svg") != std::string::npos);
    }

    TEST_CASE("canonical json")
    {
        const nlohmann::json j{{"b", 1.0 / 3.0}, {"a", {1, 2, 3}}, {"c", std::nan("")}};
        CHECK(canonical_json(j) == "{\n  \"a\": [1, 2, 3],\n  \"b\": 0.333333333333,\n  \"c\": null\n}\n");
    }

    TEST_CASE("csv quoting")
    {
        const nlohmann::json rows = nlohmann::json::array({{{"name", "a,b"}, {"ok", true}, {"x", 1.5}}});
        CHECK(rows_csv(rows, {}) == "name,ok,x\n\"a,b\",1,1.5\n");
        CHECK(rows_csv(rows, {"x"}) == "x\n1.5\n");
    }

    TEST_CASE("svg plots")
    {
        PlotSpec spec{"p", "L", true, true, "test"};
        const std::vector<std::pair<double, double>> pts{{1, 1}, {4, 2}};
        const std::string a = plot_svg(pts, spec);
        CHECK(a == plot_svg(pts, spec));
        CHECK(a.find("<line") != std::string::npos);
        CHECK(a.find("slope = 0.5") != std::string::npos);
        CHECK(std::count(a.begin(), a.end(), '\n') > 5);
        CHECK_THROWS_AS(plot_svg({{0, 1}, {1, 2}}, spec), DomainError);
        CHECK_THROWS_AS(plot_svg({}, spec), DomainError);
        spec.xlog = spec.ylog = false;
        CHECK_NOTHROW(plot_svg({{0, 1}, {1, 2}}, spec));
    }

    TEST_CASE("check parsing")
    {
        const auto cs = parse_checks("slope:0.4..0.6,r2:0.9..1");
        REQUIRE(cs.size() == 2);
        CHECK(cs[0].key == "slope");
        CHECK(cs[0].lo == 0.4);
        CHECK(cs[1].hi == 1.0);
        CHECK_THROWS_AS(parse_checks("slope:1..0"), DomainError);
        CHECK_THROWS_AS(parse_checks(":1..2"), DomainError);
    }
}
