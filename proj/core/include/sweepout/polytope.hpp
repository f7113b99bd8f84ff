#pragma once

#include "sweepout/common.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <utility>
#include <vector>

namespace sweepout {

// Intersection of halfspaces a_j . x <= b_j with unit normals a_j.
struct HPolytope {
    int n = 3;
    std::vector<Vec> a;
    std::vector<double> b;

    void add(const Vec& normal, double offset);  // normalizes
    std::size_t size() const { return a.size(); }
    bool contains(const Vec& x, double tol = 1e-9) const;
    // Throws StructuralError when empty, flat or unbounded.
    void validate() const;
    nlohmann::json to_json() const;
};

HPolytope box_polytope(const Vec& lo, const Vec& hi);
// Coordinate and diagonal supporting halfspaces of the unit ball (2n + 2^n facets).
HPolytope ball_polytope(int n);
// {x >= 0, sum x <= 1}
HPolytope simplex_corner(int n);

struct Chebyshev {
    Vec centre;
    double radius = 0.0;
};
Chebyshev chebyshev(const HPolytope& p);

// Vertices by brute-force enumeration of n-subsets of facets. Throws
// StructuralError if degenerate even after perturbation.
std::vector<Vec> polytope_vertices(const HPolytope& p);

enum class VolumeMethod { Exact, MonteCarlo };
Estimate polytope_volume(const HPolytope& p, VolumeMethod method = VolumeMethod::Exact, std::size_t samples = 100000,
                         std::uint64_t seed = 0);

double hull_area_2d(std::vector<Eigen::Vector2d> pts);

// Boundary representation in dimensions 2 and 3, used where a body is cut many
// times. For n = 2 `faces` holds one counter-clockwise loop, for n = 3 one loop
// per facet.
class Body {
public:
    Body() = default;
    static Body from(const HPolytope& p);

    int dim() const { return n_; }
    // Part with dir . x <= offset.
    Body clip(const Vec& dir, double offset) const;
    double volume() const;
    bool empty() const { return faces_.empty(); }
    std::vector<Vec> vertices() const;
    std::pair<double, double> support(const Vec& dir) const;  // (min, max) of dir . x

private:
    int n_ = 0;
    std::vector<std::vector<Vec>> faces_;
};

}  // namespace sweepout
