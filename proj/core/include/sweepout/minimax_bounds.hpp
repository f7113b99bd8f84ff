#pragma once

#include "sweepout/common.hpp"
#include "sweepout/cycle_families.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace sweepout {

// c_base stands in for the unknown minimax constant of the fundamental class.
// Only (n, k) = (2, 1) has a known value (2, the diameter).
struct BoundConfig {
    int n = 2;
    int k = 1;
    double c_base = 2.0;
    double eps = 0.0;
    bool constant_known = true;

    static BoundConfig defaults(int n, int k);
    void validate() const;
};

struct Packing {
    int n = 2;
    std::vector<Vec> centres;
    std::vector<double> radii;
    std::size_t candidates_used = 0;

    nlohmann::json to_json() const;
};

// Greedy placement in B(0, 1/2), largest radius first, each centre avoiding
// the balls B(p_i, 2 r_i) already placed. Refuses (DomainError) when
// sum r^n exceeds 4^-n. Output order matches the input radii.
Packing pack_balls(const std::vector<double>& radii, int n, std::uint64_t seed);

// Throws StructuralError if balls overlap or leave the unit ball.
void verify_packing(const Packing& p);

struct OptimalRadii {
    std::vector<double> radii;
    double achieved = 0.0;
};

OptimalRadii optimal_radii(const std::vector<double>& V, int n, int k);

// sum_i V_i r_i^k, the volume guaranteed by disjoint balls of radii r_i.
double packing_value(const std::vector<double>& V, const std::vector<double>& r, int k);

double cup_lower_bound(int p, const BoundConfig& cfg);

// Lower bound for a hypersurface bisecting the unit n-ball.
double hypersurface_bound(int n);

LineFit scaling_fit(const std::vector<std::pair<double, double>>& rows);

struct CoverageResult {
    bool found = false;
    Param param;
    double max_distance = 0.0;  // of the returned (or best) parameter
    std::size_t tried = 0;
    bool from_witness = false;
    double theta = 0.0;  // antipodal coverage only
};

// Looks for a member passing within delta of every point: first the family's
// constructive witness, then `budget` sampled parameters.
CoverageResult point_coverage(const Family& f, const std::vector<Vec>& points, double delta, std::size_t budget,
                              std::uint64_t seed);

// loop holds samples at angles 2 pi j / loop.size(); the size must be even so
// that antipodal samples are paired. Finds theta where the last coordinates
// of loop(theta) and loop(theta + pi) agree and asks the family's witness for
// a member through both points.
CoverageResult antipodal_coverage(const Family& f, const std::vector<Vec>& loop, double delta, std::size_t budget,
                                  std::uint64_t seed);

// Random trigonometric loop of the given degree in B^n, scaled to max radius.
std::vector<Vec> random_loop(int n, int degree, double radius, std::size_t samples, Rng& rng);

}  // namespace sweepout
