#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace sweepout::lab {

inline constexpr const char* kVersion = "0.1.0";

enum class OptKind { Int, Real, Str, IntList, RealList, Flag };

struct OptSpec {
    std::string name;
    OptKind kind;
    std::string def;
    std::string help;
    int geometric = 0;  // IntList ranges "a..b": 0 steps by one, otherwise multiplies
};

const std::vector<std::string>& subcommands();
const std::vector<OptSpec>& options_for(const std::string& command);

// Parses a flag value into its typed JSON form. Throws DomainError.
nlohmann::json parse_value(const OptSpec& spec, const std::string& text);

struct ExperimentConfig {
    std::string command;
    nlohmann::json params = nlohmann::json::object();
    std::uint64_t seed = 0;

    nlohmann::json to_json() const;
    // Rejects unknown commands and keys with DomainError.
    static ExperimentConfig from_json(const nlohmann::json& j);
    bool operator==(const ExperimentConfig&) const = default;
};

struct PlotSpec {
    std::string x;
    std::string y;
    bool xlog = true;
    bool ylog = true;
    std::string title;
};

struct Report {
    std::string experiment;
    nlohmann::json rows = nlohmann::json::array();
    nlohmann::json summary = nlohmann::json::object();
    std::vector<std::string> notes;
    std::vector<std::string> csv_columns;  // empty: sorted keys of the first row
    PlotSpec plot;
    nlohmann::json artifacts;              // optional extra payload

    nlohmann::json to_json(const ExperimentConfig& cfg) const;
};

Report run_experiment(const ExperimentConfig& cfg);

// Sorted keys, two-space indentation, floats as %.12g, trailing newline.
std::string canonical_json(const nlohmann::json& j);

std::string rows_csv(const nlohmann::json& rows, const std::vector<std::string>& columns);

// Self-contained SVG with points and the least-squares line in plot
// coordinates. Throws DomainError for nonpositive values on log axes.
std::string plot_svg(const std::vector<std::pair<double, double>>& pts, const PlotSpec& spec);

struct Check {
    std::string key;
    double lo = 0.0;
    double hi = 0.0;
};
std::vector<Check> parse_checks(const std::string& text);

// Exit codes: 0 success, 2 validation error, 3 failed --check, 1 other errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sweepout::lab
