#include "sweepout/mod2_chains.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>

namespace sweepout {

std::int64_t CubicalGrid::vertex_count() const
{
    std::int64_t v = 1;
    for (int a = 0; a < n; ++a) v *= N + 1;
    return v;
}

std::int64_t CubicalGrid::top_cell_count() const
{
    std::int64_t v = 1;
    for (int a = 0; a < n; ++a) v *= N;
    return v;
}

int Cell::dim() const { return std::popcount(axes); }

int SkeletonKey::dim() const { return std::popcount(axes); }

void SegmentCycle::add_free(const Vec& a, const Vec& b)
{
    Segment s;
    s.a = a;
    s.b = b;
    segments.push_back(std::move(s));
}

static void check_grid(const CubicalGrid& g)
{
    if (g.n < 1 || g.n > 4) throw StructuralError("grid dimension must be in [1,4]");
    if (g.N < 1) throw StructuralError("grid must have N >= 1");
}

GridChain::GridChain(CubicalGrid grid, int k, bool relative) : grid_(grid), k_(k), relative_(relative)
{
    check_grid(grid);
    if (k < 0 || k > grid.n) throw StructuralError("chain dimension out of range");
}

GridChain::GridChain(CubicalGrid grid, int k, bool relative, const std::vector<Cell>& cells)
    : GridChain(grid, k, relative)
{
    ids_.reserve(cells.size());
    for (const Cell& c : cells) {
        if (!valid(c)) throw StructuralError("invalid cell identifier for this grid and dimension");
        if (relative_ && in_cube_boundary(c)) continue;
        ids_.push_back(encode(c));
    }
    std::sort(ids_.begin(), ids_.end());
    if (std::adjacent_find(ids_.begin(), ids_.end()) != ids_.end())
        throw StructuralError("duplicate cell in chain");
}

GridChain GridChain::from_sorted_ids(CubicalGrid grid, int k, bool relative, std::vector<std::uint64_t> ids)
{
    GridChain c(grid, k, relative);
    c.ids_ = std::move(ids);
    return c;
}

std::uint64_t GridChain::encode(const Cell& c) const
{
    std::uint64_t lin = 0, mul = 1;
    for (int a = 0; a < grid_.n; ++a) {
        lin += static_cast<std::uint64_t>(c.index[a]) * mul;
        mul *= static_cast<std::uint64_t>(grid_.N + 1);
    }
    return static_cast<std::uint64_t>(c.axes) * mul + lin;
}

Cell GridChain::decode(std::uint64_t id) const
{
    const auto V = static_cast<std::uint64_t>(grid_.vertex_count());
    Cell c;
    c.axes = static_cast<unsigned>(id / V);
    std::uint64_t lin = id % V;
    for (int a = 0; a < grid_.n; ++a) {
        c.index[a] = static_cast<int>(lin % (grid_.N + 1));
        lin /= (grid_.N + 1);
    }
    return c;
}

bool GridChain::valid(const Cell& c) const
{
    if (c.axes >= (1u << grid_.n)) return false;
    if (c.dim() != k_) return false;
    for (int a = 0; a < grid_.n; ++a) {
        const bool free_axis = (c.axes >> a) & 1u;
        const int hi = free_axis ? grid_.N - 1 : grid_.N;
        if (c.index[a] < 0 || c.index[a] > hi) return false;
    }
    for (int a = grid_.n; a < 4; ++a)
        if (c.index[a] != 0) return false;
    return true;
}

bool GridChain::in_cube_boundary(const Cell& c) const
{
    for (int a = 0; a < grid_.n; ++a) {
        if ((c.axes >> a) & 1u) continue;
        if (c.index[a] == 0 || c.index[a] == grid_.N) return true;
    }
    return false;
}

bool GridChain::contains(const Cell& c) const
{
    if (!valid(c)) return false;
    return std::binary_search(ids_.begin(), ids_.end(), encode(c));
}

std::vector<Cell> GridChain::cells() const
{
    std::vector<Cell> out;
    out.reserve(ids_.size());
    for (auto id : ids_) out.push_back(decode(id));
    return out;
}

std::vector<std::uint64_t> symmetric_difference(const std::vector<std::uint64_t>& a,
                                                const std::vector<std::uint64_t>& b)
{
    std::vector<std::uint64_t> out;
    out.reserve(a.size() + b.size());
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

// Keeps the ids that occur an odd number of times.
static std::vector<std::uint64_t> odd_ids(std::vector<std::uint64_t>& ids)
{
    std::sort(ids.begin(), ids.end());
    std::vector<std::uint64_t> out;
    out.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size();) {
        std::size_t j = i;
        while (j < ids.size() && ids[j] == ids[i]) ++j;
        if ((j - i) % 2 == 1) out.push_back(ids[i]);
        i = j;
    }
    return out;
}

GridChain boundary(const GridChain& c)
{
    if (c.k() < 1) throw StructuralError("boundary requires k >= 1");
    GridChain out(c.grid(), c.k() - 1, c.relative());
    std::vector<std::uint64_t> faces;
    faces.reserve(c.size() * 2 * c.k());
    for (auto id : c.ids()) {
        const Cell cell = c.decode(id);
        for (int a = 0; a < c.grid().n; ++a) {
            if (!((cell.axes >> a) & 1u)) continue;
            Cell f = cell;
            f.axes &= ~(1u << a);
            if (!(c.relative() && out.in_cube_boundary(f))) faces.push_back(out.encode(f));
            f.index[a] += 1;
            if (!(c.relative() && out.in_cube_boundary(f))) faces.push_back(out.encode(f));
        }
    }
    return GridChain::from_sorted_ids(c.grid(), c.k() - 1, c.relative(), odd_ids(faces));
}

double chain_volume(const GridChain& c)
{
    return static_cast<double>(c.size()) * std::pow(c.grid().side(), c.k());
}

double chain_volume(const SegmentCycle& c)
{
    CompensatedSum s;
    for (const auto& seg : c.segments) s.add(seg.length());
    return s.value();
}

GridChain add_mod2(const GridChain& c1, const GridChain& c2)
{
    if (!(c1.grid() == c2.grid()) || c1.k() != c2.k() || c1.relative() != c2.relative())
        throw StructuralError("add_mod2: chains live on different grids or dimensions");
    return GridChain::from_sorted_ids(c1.grid(), c1.k(), c1.relative(), symmetric_difference(c1.ids(), c2.ids()));
}

std::int64_t area_distance_cells(const GridChain& c1, const GridChain& c2)
{
    const CubicalGrid& g = c1.grid();
    if (!(g == c2.grid())) throw StructuralError("area distance: chains live on different grids");
    if (c1.k() != g.n - 1 || c2.k() != g.n - 1)
        throw StructuralError("area distance: both chains must have dimension n-1");
    if (!c1.relative() || !c2.relative()) throw StructuralError("area distance: chains must be relative");

    const auto sum = symmetric_difference(c1.ids(), c2.ids());
    const std::uint64_t V = g.vertex_count();
    std::vector<std::uint8_t> member(static_cast<std::size_t>(V << g.n), 0);
    for (auto id : sum) member[id] = 1;

    const unsigned full = (1u << g.n) - 1;
    const std::int64_t total = g.top_cell_count();
    std::vector<std::uint8_t> label(total, 0);
    std::array<std::int64_t, 4> stride{};
    std::array<std::uint64_t, 4> vstride{};
    stride[0] = 1;
    vstride[0] = 1;
    for (int a = 1; a < g.n; ++a) {
        stride[a] = stride[a - 1] * g.N;
        vstride[a] = vstride[a - 1] * (g.N + 1);
    }

    // Face between cell x - e_a and x: anchor x, free axes full minus a.
    auto face_id = [&](const std::array<int, 4>& x, int a) {
        std::uint64_t lin = 0;
        for (int b = 0; b < g.n; ++b) lin += static_cast<std::uint64_t>(x[b]) * vstride[b];
        return static_cast<std::uint64_t>(full & ~(1u << a)) * V + lin;
    };

    std::array<int, 4> x{};
    std::int64_t ones = 0;
    for (std::int64_t lin = 0; lin < total; ++lin) {
        std::int64_t r = lin;
        for (int a = 0; a < g.n; ++a) {
            x[a] = static_cast<int>(r % g.N);
            r /= g.N;
        }
        int first = -1;
        for (int a = 0; a < g.n; ++a) {
            if (x[a] == 0) continue;
            const std::uint8_t expect = label[lin - stride[a]] ^ member[face_id(x, a)];
            if (first < 0) {
                label[lin] = expect;
                first = a;
            } else if (label[lin] != expect) {
                throw DomainError("not a relative cycle: no consistent parity labelling");
            }
        }
        ones += label[lin];
    }
    return std::min(ones, total - ones);
}

double area_distance_codim1(const GridChain& c1, const GridChain& c2)
{
    const auto cells = area_distance_cells(c1, c2);
    return static_cast<double>(cells) * std::pow(c1.grid().side(), c1.grid().n);
}

double cone_fill(const SegmentCycle& c)
{
    CompensatedSum s;
    for (const auto& seg : c.segments) {
        const double aa = seg.a.squaredNorm(), bb = seg.b.squaredNorm(), ab = seg.a.dot(seg.b);
        s.add(0.5 * std::sqrt(std::max(0.0, aa * bb - ab * ab)));
    }
    return s.value();
}

// All valid cells of dimension k (skipping cube-boundary cells when relative).
static std::vector<Cell> enumerate_cells(const GridChain& proto)
{
    const CubicalGrid& g = proto.grid();
    std::vector<Cell> out;
    for (unsigned mask = 0; mask < (1u << g.n); ++mask) {
        if (std::popcount(mask) != proto.k()) continue;
        std::array<int, 4> hi{};
        std::int64_t count = 1;
        for (int a = 0; a < g.n; ++a) {
            hi[a] = ((mask >> a) & 1u) ? g.N : g.N + 1;
            count *= hi[a];
        }
        for (std::int64_t lin = 0; lin < count; ++lin) {
            Cell c;
            c.axes = mask;
            std::int64_t r = lin;
            for (int a = 0; a < g.n; ++a) {
                c.index[a] = static_cast<int>(r % hi[a]);
                r /= hi[a];
            }
            if (proto.relative() && proto.in_cube_boundary(c)) continue;
            out.push_back(c);
        }
    }
    return out;
}

FlatNorm flat_norm_bruteforce(const GridChain& c)
{
    const CubicalGrid& g = c.grid();
    const int k = c.k();
    if (k >= g.n) throw StructuralError("flat norm: chain dimension must be below n");
    GridChain proto(g, k + 1, c.relative());
    const auto top = enumerate_cells(proto);
    if (top.size() > static_cast<std::size_t>(kFlatNormCellCap))
        throw CapacityError("flat norm brute force: " + std::to_string(top.size()) +
                            " cells of dimension k+1 exceed the cap of " + std::to_string(kFlatNormCellCap));

    // Local indexing of every k-cell that can appear.
    std::vector<std::uint64_t> universe(c.ids());
    std::vector<std::vector<std::uint64_t>> face_ids(top.size());
    for (std::size_t i = 0; i < top.size(); ++i) {
        GridChain single(g, k + 1, c.relative(), {top[i]});
        face_ids[i] = boundary(single).ids();
        universe.insert(universe.end(), face_ids[i].begin(), face_ids[i].end());
    }
    std::sort(universe.begin(), universe.end());
    universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
    const std::size_t W = (universe.size() + 63) / 64;
    auto locate = [&](std::uint64_t id) {
        return static_cast<std::size_t>(std::lower_bound(universe.begin(), universe.end(), id) - universe.begin());
    };
    std::vector<std::uint64_t> state(W, 0);
    for (auto id : c.ids()) {
        const auto p = locate(id);
        state[p / 64] ^= 1ULL << (p % 64);
    }
    std::vector<std::vector<std::uint64_t>> masks(top.size(), std::vector<std::uint64_t>(W, 0));
    for (std::size_t i = 0; i < top.size(); ++i)
        for (auto id : face_ids[i]) {
            const auto p = locate(id);
            masks[i][p / 64] ^= 1ULL << (p % 64);
        }

    auto popcount = [&] {
        std::int64_t s = 0;
        for (auto w : state) s += std::popcount(w);
        return s;
    };
    std::int64_t D = 0, E = popcount();
    std::int64_t best = static_cast<std::int64_t>(g.N) * E, bestD = 0, bestE = E;
    const std::uint64_t total = 1ULL << top.size();
    std::vector<std::uint8_t> inD(top.size(), 0);
    for (std::uint64_t code = 1; code < total; ++code) {
        const int j = std::countr_zero(code);
        for (std::size_t w = 0; w < W; ++w) state[w] ^= masks[j][w];
        inD[j] ^= 1;
        D += inD[j] ? 1 : -1;
        E = popcount();
        const std::int64_t cost = 2 * D + static_cast<std::int64_t>(g.N) * E;
        if (cost < best) {
            best = cost;
            bestD = D;
            bestE = E;
        }
    }
    FlatNorm r;
    r.scaled = best;
    r.filling_cells = bestD;
    r.residual_cells = bestE;
    r.value = bestD * std::pow(g.side(), k + 1) + bestE * std::pow(g.side(), k);
    return r;
}

double flat_cost(const GridChain& c, const GridChain& D)
{
    if (D.k() != c.k() + 1) throw StructuralError("flat_cost: filling must have dimension k+1");
    const GridChain residual = add_mod2(boundary(D), c);
    return chain_volume(D) + chain_volume(residual);
}

std::vector<GridChain> all_relative_codim1_cycles(const CubicalGrid& grid)
{
    GridChain proto(grid, grid.n - 1, true);
    const auto cells = enumerate_cells(proto);
    if (cells.size() > 20) throw CapacityError("cycle enumeration: more than 20 candidate cells");
    std::vector<GridChain> out;
    for (std::uint64_t mask = 0; mask < (1ULL << cells.size()); ++mask) {
        std::vector<Cell> chosen;
        for (std::size_t i = 0; i < cells.size(); ++i)
            if ((mask >> i) & 1ULL) chosen.push_back(cells[i]);
        GridChain c(grid, grid.n - 1, true, chosen);
        if (grid.n - 1 >= 1 && !boundary(c).empty()) continue;
        out.push_back(std::move(c));
    }
    return out;
}

GridChain random_relative_cycle(const CubicalGrid& grid, Rng& rng, double fill)
{
    std::vector<Cell> cells;
    const std::int64_t total = grid.top_cell_count();
    for (std::int64_t lin = 0; lin < total; ++lin) {
        if (rng.uniform() >= fill) continue;
        Cell c;
        c.axes = (1u << grid.n) - 1;
        std::int64_t r = lin;
        for (int a = 0; a < grid.n; ++a) {
            c.index[a] = static_cast<int>(r % grid.N);
            r /= grid.N;
        }
        cells.push_back(c);
    }
    return boundary(GridChain(grid, grid.n, true, cells));
}

GridChain rasterize_region(const SegmentCycle& c, int N)
{
    if (c.n != 2) throw CapabilityError("rasterize_region supports planar cycles only");
    const CubicalGrid grid{2, N};
    const double h = grid.side();
    auto centre = [&](int i) { return -1.0 + (i + 0.5) * h; };
    // hflip(i,j): dual edge (i,j)-(i+1,j); vflip(i,j): dual edge (i,j)-(i,j+1).
    std::vector<std::uint8_t> hflip(static_cast<std::size_t>(N) * N, 0), vflip(static_cast<std::size_t>(N) * N, 0);
    for (const auto& s : c.segments) {
        const double ax = s.a[0], ay = s.a[1], bx = s.b[0], by = s.b[1];
        {
            const int j0 = std::max(0, static_cast<int>(std::floor((std::min(ay, by) + 1.0) / h - 0.5)));
            const int j1 = std::min(N - 1, static_cast<int>(std::ceil((std::max(ay, by) + 1.0) / h - 0.5)));
            for (int j = j0; j <= j1; ++j) {
                const double y = centre(j);
                if ((ay - y) * (by - y) >= 0.0) continue;
                const double x = ax + (y - ay) / (by - ay) * (bx - ax);
                const int i = static_cast<int>(std::floor((x + 1.0) / h - 0.5));
                if (i >= 0 && i < N - 1) hflip[static_cast<std::size_t>(j) * N + i] ^= 1;
            }
        }
        {
            const int i0 = std::max(0, static_cast<int>(std::floor((std::min(ax, bx) + 1.0) / h - 0.5)));
            const int i1 = std::min(N - 1, static_cast<int>(std::ceil((std::max(ax, bx) + 1.0) / h - 0.5)));
            for (int i = i0; i <= i1; ++i) {
                const double x = centre(i);
                if ((ax - x) * (bx - x) >= 0.0) continue;
                const double y = ay + (x - ax) / (bx - ax) * (by - ay);
                const int j = static_cast<int>(std::floor((y + 1.0) / h - 0.5));
                if (j >= 0 && j < N - 1) vflip[static_cast<std::size_t>(i) * N + j] ^= 1;
            }
        }
    }
    std::vector<int> label(static_cast<std::size_t>(N) * N, -1);
    auto inside = [&](int i, int j) {
        const double x = centre(i), y = centre(j);
        return x * x + y * y < 1.0;
    };
    int anchor = -1;
    for (int lin = 0; lin < N * N && anchor < 0; ++lin)
        if (inside(lin % N, lin / N)) anchor = lin;
    std::vector<Cell> cells;
    if (anchor < 0) return GridChain(grid, 2, true, cells);
    std::deque<int> queue{anchor};
    label[anchor] = 0;
    while (!queue.empty()) {
        const int cur = queue.front();
        queue.pop_front();
        const int i = cur % N, j = cur / N;
        auto visit = [&](int ni, int nj, std::uint8_t flip) {
            if (ni < 0 || nj < 0 || ni >= N || nj >= N || !inside(ni, nj)) return;
            const int nl = nj * N + ni;
            if (label[nl] >= 0) return;
            label[nl] = label[cur] ^ flip;
            queue.push_back(nl);
        };
        if (i + 1 < N) visit(i + 1, j, hflip[static_cast<std::size_t>(j) * N + i]);
        if (i > 0) visit(i - 1, j, hflip[static_cast<std::size_t>(j) * N + i - 1]);
        if (j + 1 < N) visit(i, j + 1, vflip[static_cast<std::size_t>(i) * N + j]);
        if (j > 0) visit(i, j - 1, vflip[static_cast<std::size_t>(i) * N + j - 1]);
    }
    for (int lin = 0; lin < N * N; ++lin)
        if (label[lin] == 1) cells.push_back(Cell{{lin % N, lin / N, 0, 0}, 3u});
    return GridChain(grid, 2, true, cells);
}

IsoperimetricFit isoperimetric_constant(const CubicalGrid& grid, int samples, std::uint64_t seed)
{
    Rng rng(seed, 11);
    IsoperimetricFit fit;
    const double h = grid.side();
    const double expo = static_cast<double>(grid.n) / (grid.n - 1);
    for (int s = 0; s < samples; ++s) {
        Vec centre(grid.n);
        for (int a = 0; a < grid.n; ++a) centre[a] = rng.uniform(-1.0, 1.0);
        const double radius = rng.uniform(0.1, 1.2);
        const bool box = (s % 2) == 1;
        std::vector<Cell> cells;
        const std::int64_t total = grid.top_cell_count();
        for (std::int64_t lin = 0; lin < total; ++lin) {
            Cell c;
            c.axes = (1u << grid.n) - 1;
            std::int64_t r = lin;
            double dist = 0.0;
            for (int a = 0; a < grid.n; ++a) {
                c.index[a] = static_cast<int>(r % grid.N);
                r /= grid.N;
                const double x = -1.0 + (c.index[a] + 0.5) * h - centre[a];
                dist = box ? std::max(dist, std::abs(x)) : dist + x * x;
            }
            if (!box) dist = std::sqrt(dist);
            if (dist < radius) cells.push_back(c);
        }
        const GridChain cyc = boundary(GridChain(grid, grid.n, true, cells));
        if (cyc.empty()) continue;
        const double fill = area_distance_codim1(cyc, GridChain(grid, grid.n - 1, true));
        const double vol = chain_volume(cyc);
        fit.constant = std::max(fit.constant, fill / std::pow(vol, expo));
        ++fit.cycles;
    }
    return fit;
}

nlohmann::json to_json(const GridChain& c)
{
    nlohmann::json cells = nlohmann::json::array();
    for (const Cell& cell : c.cells()) {
        nlohmann::json entry = nlohmann::json::array();
        for (int a = 0; a < c.grid().n; ++a) entry.push_back(cell.index[a]);
        nlohmann::json axes = nlohmann::json::array();
        for (int a = 0; a < c.grid().n; ++a)
            if ((cell.axes >> a) & 1u) axes.push_back(a);
        entry.push_back(axes);
        cells.push_back(entry);
    }
    return {{"n", c.grid().n}, {"N", c.grid().N}, {"k", c.k()}, {"relative", c.relative()}, {"cells", cells}};
}

GridChain grid_chain_from_json(const nlohmann::json& j)
{
    try {
        const CubicalGrid grid{j.at("n").get<int>(), j.at("N").get<int>()};
        const int k = j.at("k").get<int>();
        const bool relative = j.at("relative").get<bool>();
        std::vector<Cell> cells;
        for (const auto& entry : j.at("cells")) {
            if (!entry.is_array() || static_cast<int>(entry.size()) != grid.n + 1)
                throw StructuralError("cell entry must list n indices and an axis subset");
            Cell c;
            for (int a = 0; a < grid.n; ++a) {
                if (!entry[a].is_number_integer()) throw StructuralError("cell indices must be integers");
                c.index[a] = entry[a].get<int>();
            }
            for (const auto& ax : entry[grid.n]) {
                const int a = ax.get<int>();
                if (a < 0 || a >= grid.n || ((c.axes >> a) & 1u)) throw StructuralError("invalid axis subset");
                c.axes |= 1u << a;
            }
            cells.push_back(c);
        }
        return GridChain(grid, k, relative, cells);
    } catch (const nlohmann::json::exception& e) {
        throw StructuralError(std::string("malformed grid chain json: ") + e.what());
    }
}

}  // namespace sweepout
