#pragma once

#include "sweepout/common.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cstdint>
#include <vector>

namespace sweepout {

// Regular cubical grid on [-1,1]^n with N cells per axis.
struct CubicalGrid {
    int n = 2;
    int N = 1;

    double side() const { return 2.0 / N; }
    std::int64_t vertices_per_axis() const { return N + 1; }
    std::int64_t vertex_count() const;
    std::int64_t top_cell_count() const;
    bool operator==(const CubicalGrid&) const = default;
};

// An axis-aligned face: anchor vertex index plus the bitmask of free axes.
struct Cell {
    std::array<int, 4> index{};
    unsigned axes = 0;

    int dim() const;
    bool operator==(const Cell&) const = default;
};

class GridChain {
public:
    GridChain(CubicalGrid grid, int k, bool relative);
    // Builds a chain from distinct cells; with relative=true, cells lying in
    // the cube boundary are dropped (they vanish in the quotient).
    GridChain(CubicalGrid grid, int k, bool relative, const std::vector<Cell>& cells);

    const CubicalGrid& grid() const { return grid_; }
    int k() const { return k_; }
    bool relative() const { return relative_; }
    std::size_t size() const { return ids_.size(); }
    bool empty() const { return ids_.empty(); }
    bool contains(const Cell& c) const;

    std::vector<Cell> cells() const;
    const std::vector<std::uint64_t>& ids() const { return ids_; }

    std::uint64_t encode(const Cell& c) const;
    Cell decode(std::uint64_t id) const;
    bool valid(const Cell& c) const;
    bool in_cube_boundary(const Cell& c) const;

    static GridChain from_sorted_ids(CubicalGrid grid, int k, bool relative, std::vector<std::uint64_t> ids);

    bool operator==(const GridChain& o) const
    {
        return grid_ == o.grid_ && k_ == o.k_ && relative_ == o.relative_ && ids_ == o.ids_;
    }

private:
    CubicalGrid grid_;
    int k_;
    bool relative_;
    std::vector<std::uint64_t> ids_;  // sorted, unique
};

// Carrier of a segment: a lattice face (edge for 1-skeleta) or free.
struct SkeletonKey {
    std::uint32_t lattice = UINT32_MAX;
    unsigned axes = 0;  // free axes of the carrying face
    std::array<std::int64_t, 4> anchor{};

    int dim() const;
    auto operator<=>(const SkeletonKey&) const = default;
};

struct Segment {
    Vec a;
    Vec b;
    bool on_skeleton = false;
    // For skeleton segments the carrying face; for free segments the lattice
    // cell the piece came from (axes = all), or lattice = UINT32_MAX.
    SkeletonKey key;

    double length() const { return (b - a).norm(); }
};

struct SegmentCycle {
    int n = 2;
    std::vector<Segment> segments;

    bool empty() const { return segments.empty(); }
    void add_free(const Vec& a, const Vec& b);
};

std::vector<std::uint64_t> symmetric_difference(const std::vector<std::uint64_t>& a,
                                                const std::vector<std::uint64_t>& b);

GridChain boundary(const GridChain& c);
double chain_volume(const GridChain& c);
double chain_volume(const SegmentCycle& c);
GridChain add_mod2(const GridChain& c1, const GridChain& c2);

// Minimal number of n-cells in a relative filling of c1 + c2 (codimension 1).
std::int64_t area_distance_cells(const GridChain& c1, const GridChain& c2);
double area_distance_codim1(const GridChain& c1, const GridChain& c2);

double cone_fill(const SegmentCycle& c);

struct FlatNorm {
    double value = 0.0;
    // value * 2 * (N/2)^(k+1) = 2|D| + N|dD - c|, an exact integer.
    std::int64_t scaled = 0;
    std::int64_t filling_cells = 0;
    std::int64_t residual_cells = 0;
};

inline constexpr int kFlatNormCellCap = 25;

FlatNorm flat_norm_bruteforce(const GridChain& c);

// |D| + |dD - c| for a user-supplied filling candidate D.
double flat_cost(const GridChain& c, const GridChain& D);

// All relative (n-1)-cycles of a grid, obtained as boundaries of n-chains
// modulo the full chain. Requires N^n <= 20.
std::vector<GridChain> all_relative_codim1_cycles(const CubicalGrid& grid);

// Random relative (n-1)-cycle: boundary of a random blob of n-cells.
GridChain random_relative_cycle(const CubicalGrid& grid, Rng& rng, double fill = 0.5);

// n-cells whose centres lie in the open unit ball and satisfy pred.
template <class Pred>
GridChain top_cells_where(const CubicalGrid& grid, Pred&& pred);

// Rasterizes a planar segment cycle into the n-chain of cells (inside the
// unit disk) separated from the anchor cell by an odd number of crossings.
GridChain rasterize_region(const SegmentCycle& c, int N);

// Fitted isoperimetric constant: max over sampled relative cycles of
// fill / volume^(n/(n-1)).
struct IsoperimetricFit {
    double constant = 0.0;
    std::size_t cycles = 0;
};
IsoperimetricFit isoperimetric_constant(const CubicalGrid& grid, int samples, std::uint64_t seed);

nlohmann::json to_json(const GridChain& c);
GridChain grid_chain_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------

template <class Pred>
GridChain top_cells_where(const CubicalGrid& grid, Pred&& pred)
{
    std::vector<Cell> cells;
    const double h = grid.side();
    std::array<int, 4> idx{};
    const std::int64_t total = grid.top_cell_count();
    for (std::int64_t lin = 0; lin < total; ++lin) {
        std::int64_t r = lin;
        Vec centre(grid.n);
        double r2 = 0.0;
        for (int a = 0; a < grid.n; ++a) {
            idx[a] = static_cast<int>(r % grid.N);
            r /= grid.N;
            centre[a] = -1.0 + (idx[a] + 0.5) * h;
            r2 += centre[a] * centre[a];
        }
        if (r2 >= 1.0) continue;
        if (pred(centre)) cells.push_back(Cell{idx, (1u << grid.n) - 1});
    }
    return GridChain(grid, grid.n, true, cells);
}

}  // namespace sweepout
