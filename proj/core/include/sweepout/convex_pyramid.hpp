#pragma once

#include "sweepout/common.hpp"
#include "sweepout/polytope.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace sweepout {

// Prefix v_{1-n}..v_0 is the standard basis; v_1..v_L follow. Every n-i
// consecutive vectors of prefix + v must be orthonormal.
struct DirectionSequence {
    int n = 3;
    int i = 1;
    std::vector<Vec> prefix;
    std::vector<Vec> v;

    // Throws StructuralError naming the first bad window (index of its last vector).
    void validate(double tol = 1e-9) const;
    nlohmann::json to_json() const;
};

enum class DirectionMode { Random, Adversarial };

DirectionSequence direction_sequence(int n, int i, int L, DirectionMode mode, std::uint64_t seed, int k = 1);

// Thickness of the pyramid that cuts every level-a node along v_a.
double sequence_thickness(const DirectionSequence& seq, int k, double tol = 1e-3);

struct Bisection {
    HPolytope left;   // dir . x <= offset
    HPolytope right;  // dir . x >= offset
    Body left_body;
    Body right_body;
    double offset = 0.0;
    double left_volume = 0.0;
    double right_volume = 0.0;
};

Bisection bisect_equal_volume(const HPolytope& p, const Vec& dir, double tol = 1e-3);
Bisection bisect_equal_volume(const HPolytope& p, const Body& body, const Vec& dir, double tol = 1e-3);

struct PyramidNode {
    std::string path;  // "" for the root, then '1' (left) / '2' (right) per level
    int depth = 0;
    HPolytope poly;
    Vec centre;        // Chebyshev centre
    double rad = 0.0;
    double volume = 0.0;
    Vec cut_dir;       // empty at leaves
    double offset = 0.0;
    double T = 0.0;
    int left = -1;
    int right = -1;
};

struct PyramidTree {
    int n = 3;
    int i = 1;
    int k = 1;
    int P = 0;
    std::size_t phi_samples = 64;
    std::size_t phi_used = 64;  // ladder entry that produced this tree
    std::vector<double> ladder_T;  // T for phi_samples, /2, /4, ... >= 4
    std::uint64_t seed = 0;
    double bisect_tol = 1e-3;
    std::vector<PyramidNode> nodes;  // nodes[0] is the root; children follow parents

    nlohmann::json to_json() const;
};

// Greedy bisection tree. At every node the cut direction minimizes
// Rad(left)^k + Rad(right)^k over a grid of phi_samples directions in the
// allowed fiber, refined locally. The reported tree is the best over the
// dyadic ladder of grid sizes, so T never increases as phi_samples doubles.
// All values are upper bounds for the true infimum.
PyramidTree build_pyramid(int n, int i, int k, int P, std::size_t phi_samples, std::uint64_t seed,
                          double tol = 1e-3);

struct ThicknessReport {
    double T = 0.0;
    std::vector<double> level_T;     // (1/2) sum Rad^k over level p
    std::vector<double> level_min;   // min Rad over level p
    std::vector<double> level_mean;  // mean Rad over level p
    std::vector<double> leaf_rad;
};
ThicknessReport thickness(const PyramidTree& tree);

// Rectangle R with R inside A inside centre + lambda (R - centre).
struct BoxApprox {
    Vec centre;
    std::vector<Vec> axes;      // orthonormal, sorted so that sides ascend
    std::vector<double> sides;  // full side lengths R_1 <= ... <= R_n
    std::vector<double> heights;  // farthest-point distances of the sweep
    double lambda = 0.0;
    bool inner_ok = false;
    bool outer_ok = false;
};
BoxApprox rect_approx(const HPolytope& p);

// Average q-volume of orthogonal projections onto random q-planes.
Estimate mean_projection(const HPolytope& p, int q, std::size_t samples, std::uint64_t seed);

struct NFunctionalReport {
    double beta = 8.0;
    std::vector<double> values;           // N_{a,beta} for a = 1..n
    std::vector<Estimate> projections;    // pi_{n-a}
    double N = 0.0;
    int argmax = 1;
    double volume = 0.0;
};
NFunctionalReport n_functional(const HPolytope& p, double beta, std::size_t samples, std::uint64_t seed);

struct StarLevel {
    int p = 0;
    double sum_rad_inv = 0.0;
    double sum_rad_k = 0.0;
    double T_level = 0.0;
    bool holder_ok = false;
};

struct RatioRow {
    std::string path;
    int a = 0;
    double ratio = 0.0;  // R_{a+1} / R_a
    double ratio_over_beta2 = 0.0;
};

struct HCounter {
    std::string path;
    int a = 0;
    int min_h = 0;  // over descendants n-i generations down
    int near_cuts = 0;
};

struct StarReport {
    double beta = 8.0;
    std::vector<StarLevel> levels;
    bool holder_all = true;
    double growth_T = 0.0;
    double growth_rad_inv = 0.0;
    double r2_T = 0.0;
    double r2_rad_inv = 0.0;
    std::size_t additivity_checks = 0;
    double additivity_max_residual = 0.0;
    bool additivity_ok = true;
    std::vector<RatioRow> ratios;
    std::vector<HCounter> h_counters;
    int h_negative = 0;

    nlohmann::json to_json() const;
    std::string to_csv() const;
};

// Exact Hölder check in rationals: 2^{p(k+1)} <= (sum Rad^k)(sum Rad^-1)^k.
bool holder_exact(const std::vector<double>& rads, int k);

StarReport star_report(const PyramidTree& tree, double beta, std::size_t samples, std::uint64_t seed);

}  // namespace sweepout
