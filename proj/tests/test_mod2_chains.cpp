#include <doctest.h>

#include "sweepout/mod2_chains.hpp"

#include <cmath>

using namespace sweepout;

namespace {

Cell top(int i, int j) { return Cell{{i, j, 0, 0}, 3u}; }

// Smallest set of top cells whose relative boundary is c, by enumerating
// every subset. Only for tiny grids.
std::int64_t brute_filling(const GridChain& c)
{
    const CubicalGrid& g = c.grid();
    const auto total = static_cast<int>(g.top_cell_count());
    REQUIRE(total <= 16);
    std::int64_t best = -1;
    for (std::uint32_t mask = 0; mask < (1u << total); ++mask) {
        std::vector<Cell> cells;
        for (int t = 0; t < total; ++t)
            if ((mask >> t) & 1u) {
                Cell cell;
                cell.axes = (1u << g.n) - 1;
                int r = t;
                for (int a = 0; a < g.n; ++a) {
                    cell.index[a] = r % g.N;
                    r /= g.N;
                }
                cells.push_back(cell);
            }
        if (boundary(GridChain(g, g.n, true, cells)) == c) {
            const auto size = static_cast<std::int64_t>(cells.size());
            if (best < 0 || size < best) best = size;
        }
    }
    return best;
}

GridChain random_chain(const CubicalGrid& g, int k, Rng& rng)
{
    GridChain proto(g, k, false);
    std::vector<Cell> cells;
    for (int tries = 0; tries < 40; ++tries) {
        Cell c;
        unsigned axes = 0;
        while (std::popcount(axes) != k) axes = static_cast<unsigned>(rng.below(1u << g.n));
        c.axes = axes;
        for (int a = 0; a < g.n; ++a) {
            const int hi = ((axes >> a) & 1u) ? g.N - 1 : g.N;
            c.index[a] = static_cast<int>(rng.below(hi + 1));
        }
        if (std::find(cells.begin(), cells.end(), c) == cells.end()) cells.push_back(c);
    }
    return GridChain(g, k, rng.uniform() < 0.5, cells);
}

}  // namespace

TEST_SUITE("mod2_chains")
{
    TEST_CASE("boundary of one interior square is its four edges")
    {
        const CubicalGrid g{2, 4};
        const GridChain sq(g, 2, false, {top(1, 1)});
        const GridChain b = boundary(sq);
        CHECK(b.size() == 4);
        CHECK(b.contains(Cell{{1, 1, 0, 0}, 1u}));
        CHECK(b.contains(Cell{{1, 2, 0, 0}, 1u}));
        CHECK(b.contains(Cell{{1, 1, 0, 0}, 2u}));
        CHECK(b.contains(Cell{{2, 1, 0, 0}, 2u}));
    }

    TEST_CASE("the full relative chain has no boundary")
    {
        for (int n = 1; n <= 3; ++n) {
            const CubicalGrid g{n, 3};
            std::vector<Cell> all;
            for (int lin = 0; lin < g.top_cell_count(); ++lin) {
                Cell c;
                c.axes = (1u << n) - 1;
                int r = lin;
                for (int a = 0; a < n; ++a) {
                    c.index[a] = r % 3;
                    r /= 3;
                }
                all.push_back(c);
            }
            CHECK(boundary(GridChain(g, n, true, all)).empty());
        }
    }

    TEST_CASE("boundary of a boundary vanishes")
    {
        Rng rng(11);
        for (int trial = 0; trial < 200; ++trial) {
            const int n = 2 + static_cast<int>(rng.below(2));
            const CubicalGrid g{n, 1 + static_cast<int>(rng.below(n == 2 ? 16 : 6))};
            const int k = 2 + static_cast<int>(rng.below(n - 1));
            const GridChain c = random_chain(g, k, rng);
            CHECK(boundary(boundary(c)).empty());
        }
    }

    TEST_CASE("chain volume")
    {
        const CubicalGrid g{2, 8};
        CHECK(chain_volume(GridChain(g, 1, false)) == 0.0);
        CHECK(chain_volume(GridChain(g, 1, false, {Cell{{3, 3, 0, 0}, 1u}})) == doctest::Approx(0.25));
        SegmentCycle s;
        s.n = 2;
        s.add_free(make_vec({0, 0}), make_vec({1, 0}));
        s.add_free(make_vec({0, 0}), make_vec({0, 1}));
        CHECK(chain_volume(s) == doctest::Approx(2.0));
    }

    TEST_CASE("area distance between two vertical grid lines is the strip")
    {
        const CubicalGrid g{2, 8};
        std::vector<Cell> l2, l5;
        for (int j = 0; j < 8; ++j) {
            l2.push_back(Cell{{2, j, 0, 0}, 2u});
            l5.push_back(Cell{{5, j, 0, 0}, 2u});
        }
        const GridChain c1(g, 1, true, l2), c2(g, 1, true, l5);
        CHECK(area_distance_cells(c1, c2) == 24);
        CHECK(area_distance_codim1(c1, c2) == doctest::Approx(1.5));
        CHECK(area_distance_codim1(c1, c1) == 0.0);
    }

    TEST_CASE("area distance matches exhaustive filling and is symmetric")
    {
        Rng rng(5);
        for (int N = 2; N <= 4; ++N) {
            const CubicalGrid g{2, N};
            const GridChain none(g, 1, true);
            for (int trial = 0; trial < (N == 4 ? 6 : 20); ++trial) {
                const GridChain a = random_relative_cycle(g, rng);
                const GridChain b = random_relative_cycle(g, rng);
                CHECK(area_distance_cells(a, none) == brute_filling(a));
                CHECK(area_distance_cells(a, b) == brute_filling(add_mod2(a, b)));
                CHECK(area_distance_cells(a, b) == area_distance_cells(b, a));
            }
        }
    }

    TEST_CASE("mod 2 addition")
    {
        Rng rng(3);
        const CubicalGrid g{2, 6};
        for (int trial = 0; trial < 50; ++trial) {
            const GridChain a = random_relative_cycle(g, rng);
            const GridChain b = random_relative_cycle(g, rng);
            CHECK(add_mod2(a, a).empty());
            CHECK(add_mod2(a, GridChain(g, 1, true)) == a);
            CHECK(chain_volume(add_mod2(a, b)) <= chain_volume(a) + chain_volume(b) + 1e-12);
        }
    }

    TEST_CASE("cone fill of a chord is the triangle to the origin")
    {
        SegmentCycle c;
        c.n = 2;
        CHECK(cone_fill(c) == 0.0);
        const double h = 0.3, L = 2 * std::sqrt(1 - h * h);
        c.add_free(make_vec({-L / 2, h}), make_vec({L / 2, h}));
        CHECK(cone_fill(c) == doctest::Approx(L * h / 2));
    }

    TEST_CASE("cone fill bounds the rasterized filling from above")
    {
        Rng rng(17);
        const int N = 128;
        const double h = 2.0 / N;
        for (int trial = 0; trial < 50; ++trial) {
            // Star-shaped polygon around a random centre.
            const Vec centre = make_vec({rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3)});
            const int m = 5 + static_cast<int>(rng.below(10));
            std::vector<Vec> pts;
            for (int j = 0; j < m; ++j) {
                const double t = 2 * M_PI * (j + rng.uniform(0.0, 0.8)) / m;
                const double r = rng.uniform(0.1, 0.6);
                pts.push_back(centre + make_vec({r * std::cos(t), r * std::sin(t)}));
            }
            SegmentCycle c;
            c.n = 2;
            for (int j = 0; j < m; ++j) c.add_free(pts[j], pts[(j + 1) % m]);
            const GridChain region = rasterize_region(c, N);
            const double raster = area_distance_codim1(boundary(region), GridChain({2, N}, 1, true));
            CHECK(cone_fill(c) >= raster - 2.0 * h * chain_volume(c));
        }
    }

    TEST_CASE("flat norm on a small grid")
    {
        const CubicalGrid g{2, 3};
        CHECK(flat_norm_bruteforce(GridChain(g, 1, true)).value == 0.0);

        // Interior vertical path at x index 1: a relative cycle.
        std::vector<Cell> path;
        for (int j = 0; j < 3; ++j) path.push_back(Cell{{1, j, 0, 0}, 2u});
        const GridChain c(g, 1, true, path);
        REQUIRE(boundary(c).empty());
        const FlatNorm f = flat_norm_bruteforce(c);
        const GridChain none(g, 1, true);
        CHECK(f.value == area_distance_codim1(c, none));
        CHECK(f.filling_cells == area_distance_cells(c, none));

        for (const auto& cyc : all_relative_codim1_cycles(g)) {
            const FlatNorm fn = flat_norm_bruteforce(cyc);
            CHECK(fn.value <= area_distance_codim1(cyc, none) + 1e-12);
            CHECK(fn.value <= flat_cost(cyc, GridChain(g, 2, true)) + 1e-12);
        }
    }

    TEST_CASE("relative cycle enumeration counts")
    {
        // Every relative 1-cycle on the 3x3 grid bounds a set of cells, up to
        // complement: 2^9 / 2.
        CHECK(all_relative_codim1_cycles({2, 3}).size() == 256);
        CHECK(all_relative_codim1_cycles({2, 2}).size() == 8);
    }

    TEST_CASE("invalid cells are rejected")
    {
        const CubicalGrid g{2, 3};
        CHECK_THROWS_AS(GridChain(g, 1, false, {Cell{{3, 0, 0, 0}, 1u}}), StructuralError);
        CHECK_THROWS_AS(GridChain(g, 1, false, {Cell{{0, 0, 0, 0}, 3u}}), StructuralError);
        CHECK_THROWS_AS(GridChain(g, 1, false, {Cell{{0, 1, 0, 0}, 1u}, Cell{{0, 1, 0, 0}, 1u}}), StructuralError);
        CHECK_THROWS_AS(GridChain({5, 3}, 1, false), StructuralError);
    }

    TEST_CASE("relative chains drop cube boundary cells")
    {
        const CubicalGrid g{2, 3};
        const GridChain c(g, 1, true, {Cell{{0, 0, 0, 0}, 1u}, Cell{{1, 1, 0, 0}, 1u}});
        CHECK(c.size() == 1);
    }

    TEST_CASE("json round trip")
    {
        Rng rng(2);
        for (int trial = 0; trial < 20; ++trial) {
            const GridChain c = random_relative_cycle({2, 5}, rng);
            CHECK(grid_chain_from_json(to_json(c)) == c);
        }
        CHECK_THROWS(grid_chain_from_json(nlohmann::json{{"n", 2}}));
    }

    TEST_CASE("isoperimetric fit is positive")
    {
        const IsoperimetricFit f = isoperimetric_constant({2, 16}, 20, 1);
        CHECK(f.cycles > 0);
        CHECK(f.constant > 0.0);
        // Corner regions of the cube fill with little boundary, but never more
        // than a quarter square per unit of squared length.
        CHECK(f.constant <= 0.5);
    }
}
