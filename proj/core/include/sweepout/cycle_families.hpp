#pragma once

#include "sweepout/common.hpp"
#include "sweepout/mod2_chains.hpp"

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sweepout {

using Param = std::vector<double>;
using Rotation = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 4, 4>;

struct DomainFactor {
    enum class Kind { Interval, Box, Simplex, Sphere, ProjectiveSphere };
    Kind kind = Kind::Interval;
    int dims = 1;  // coordinates in the parameter vector
    double lo = -1.0;
    double hi = 1.0;
};

// Product of simple factors. Parameters are charted from the unit cube so that
// samplers can stay generic.
struct ParamDomain {
    std::vector<DomainFactor> factors;

    int dims() const;
    Param from_unit(const std::vector<double>& u) const;
    std::string kind() const;
    ParamDomain operator*(const ParamDomain& o) const;
};

ParamDomain interval_domain(double lo = -1.0, double hi = 1.0);
ParamDomain simplex_domain(int p);
ParamDomain projective_sphere_domain(int m);

struct Disk {
    Vec centre;
    Vec u;
    Vec v;
    double radius = 0.0;
};

// A mod-2 cycle of dimension 0, 1 or 2 in R^n.
struct Cycle {
    int k = 1;
    int n = 2;
    std::vector<Vec> points;   // k = 0
    SegmentCycle segments;     // k = 1
    std::vector<Disk> disks;   // k = 2

    double volume() const;
    bool empty() const;
    // Distance from x to the cycle's support.
    double distance_to(const Vec& x) const;
};

Cycle empty_cycle(int k, int n);

struct Family {
    std::string label;
    int k = 1;
    int n = 2;
    ParamDomain domain;
    std::function<Cycle(const Param&)> evaluate;
    // Constructive parameter whose cycle passes through the given points, when
    // the construction admits one.
    std::function<std::optional<Param>(const std::vector<Vec>&)> witness;
};

Family vertical_lines();
Family point_tuples(int p);
Family parallel_tuples(int p);
Family roots_family(int p);
Family planar_curves(int d, int resolution = 64);
Family suspend(const Family& f, int k_extra);
Family translate(const Family& f);
Family sum_family(const Family& f, int copies);
Family rotate(const Family& f, const Rotation& R);
Family rotate(const Family& f, double angle);

// Fixed irrational rotation used wherever a generic angle is needed.
Rotation generic_rotation(int n);

// Mod-2 normal form of a 0-cycle: sorts and cancels equal pairs.
std::vector<double> cancel_points(std::vector<double> xs);

struct FamilyStats {
    double max_volume = 0.0;
    Param argmax;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
};

FamilyStats family_max_volume(const Family& f, std::size_t budget, std::uint64_t seed);

// Parameter sampled for index i of family_max_volume's stream.
Param sample_parameter(const ParamDomain& d, std::size_t i, Rng& rng);

// Area distance of two planar 1-cycles after rasterizing their regions.
double cycle_area_distance(const SegmentCycle& a, const SegmentCycle& b, int N);

nlohmann::json to_json(const Family& f, const FamilyStats& stats);

}  // namespace sweepout
