#pragma once

#include "sweepout/common.hpp"
#include "sweepout/cycle_families.hpp"
#include "sweepout/mod2_chains.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <vector>

namespace sweepout {

// One squeezing stage onto the l-skeleton of the lattice offset + s Z^n.
// Inside a cell with centre c and local coordinate u = (x - c)/(s/2), the top
// level sends u to u / max(eps, |u|_inf); lower levels act on each boundary
// face by the same rule and are extended conically over the cell.
struct SqueezeMap {
    int n = 2;
    int l = 1;
    double s = 1.0;
    double eps = 0.1;
    Vec offset;
    std::uint32_t lattice = 0;

    void validate() const;
};

Vec squeeze_point(const SqueezeMap& m, const Vec& x);

// Pushes a polyline through the map. Skeleton pieces come back exact and
// tagged with their carrying l-face; pieces crossing cell cores come back free.
// Curved core images are subdivided until the chord error is below tol.
std::vector<Segment> push_polyline(const SqueezeMap& m, const std::vector<Vec>& polyline, double tol);
std::vector<Segment> push_segments(const SqueezeMap& m, const std::vector<Segment>& segments, double tol);

// Mod-2 normal form on lattice edges: keeps odd-coverage intervals per edge.
// Free segments and pieces on higher-dimensional faces pass through.
SegmentCycle cancel_on_skeleton(const std::vector<Segment>& segments, int n);

SegmentCycle clip_cycle(const SegmentCycle& c, double radius = 1.0);

struct LengthSplit {
    double skeleton = 0.0;
    double free = 0.0;
};
LengthSplit length_split(const SegmentCycle& c);

struct SqueezeSchedule {
    int n = 3;
    int k = 1;
    std::vector<int> Q;
    std::vector<double> s;
    std::vector<Vec> offsets;
    double eps = 0.1;

    // Stage i squeezes onto the (n-1-i)-skeleton at scale s[i].
    SqueezeMap stage(std::size_t i) const;
    nlohmann::json to_json() const;
};

SqueezeSchedule make_schedule(int n, int k, const std::vector<int>& Q, double eps, std::uint64_t seed);

// Parallel lines rotated to the generic angle, dilated to B(R), squeezed onto
// the 1-skeleton at scale s, cancelled and clipped to the unit disk.
struct BentFamily {
    Family family;
    SqueezeMap map;
    double R = 1.0;
};
BentFamily bent_family(int p, double s, double eps, std::uint64_t seed);

struct BendReport {
    int p = 0;
    double s = 0.0;
    double R = 0.0;
    FamilyStats stats;
    double skeleton_length = 0.0;  // of the argmax cycle
    double free_length = 0.0;
    std::uint64_t seed = 0;
};
BendReport bend_and_cancel(int p, double s, double eps, std::size_t budget, std::uint64_t seed);

struct StageReport {
    int l = 0;
    double s = 0.0;
    std::size_t pieces = 0;
    double max_diameter = 0.0;
};

struct MultiscaleReport {
    SqueezeSchedule schedule;
    double R = 0.0;
    FamilyStats stats;
    std::vector<StageReport> stages;
};

// Vertical lines in B^3 over 2^Q0 rows of 2^Q1 points each.
Family multiscale_family(int Q0, int Q1);

MultiscaleReport multiscale_push(const SqueezeSchedule& schedule, const Family& family, std::size_t budget,
                                 std::uint64_t seed);

struct MultiscaleRow {
    int Q0 = 0;
    int Q1 = 0;
    double max_length = 0.0;
    double input_length = 0.0;  // of the argmax member before squeezing, inside B(R)
    std::vector<StageReport> stages;
};

// Runs multiscale_push over 0 <= Q0 <= q0_max, 0 <= Q1 <= q1_max and fits
// log2(max_length) = a + b Q0 + c Q1 over rows with positive length.
struct MultiscaleScan {
    std::vector<MultiscaleRow> rows;
    double growth_Q0 = 0.0;  // 2^b
    double growth_Q1 = 0.0;  // 2^c
    double r2 = 0.0;
    std::size_t excluded = 0;
};
MultiscaleScan multiscale_scan(int q0_max, int q1_max, double eps, std::size_t budget, std::uint64_t seed);

// Pieces grouped by carrying face (skeleton) or cell (free), with the largest
// group diameter.
StageReport piece_stats(const std::vector<Segment>& segments, int l, double s);

}  // namespace sweepout
