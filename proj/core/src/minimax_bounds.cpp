#include "sweepout/minimax_bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <unordered_map>

namespace sweepout {

namespace {

struct GridHash {
    double cell;
    int n;
    std::unordered_map<std::uint64_t, std::vector<int>> buckets;

    std::array<std::int64_t, 4> key_of(const Vec& x) const
    {
        std::array<std::int64_t, 4> k{0, 0, 0, 0};
        for (int i = 0; i < n; ++i) k[i] = static_cast<std::int64_t>(std::floor(x[i] / cell));
        return k;
    }
    static std::uint64_t hash(const std::array<std::int64_t, 4>& k)
    {
        std::uint64_t h = 0x243f6a8885a308d3ULL;
        for (auto v : k) {
            std::uint64_t s = h ^ static_cast<std::uint64_t>(v);
            h = splitmix64(s);
        }
        return h;
    }
    void insert(const Vec& x, int id) { buckets[hash(key_of(x))].push_back(id); }

    template <class F>
    bool any_near(const Vec& x, F&& pred) const
    {
        const auto base = key_of(x);
        int total = 1;
        for (int i = 0; i < n; ++i) total *= 3;
        for (int code = 0; code < total; ++code) {
            auto k = base;
            int c = code;
            for (int i = 0; i < n; ++i) {
                k[i] += c % 3 - 1;
                c /= 3;
            }
            auto it = buckets.find(hash(k));
            if (it == buckets.end()) continue;
            for (int id : it->second)
                if (pred(id)) return true;
        }
        return false;
    }
};

double max_distance(const Cycle& c, const std::vector<Vec>& points)
{
    double worst = 0.0;
    for (const auto& p : points) worst = std::max(worst, c.distance_to(p));
    return worst;
}

Vec lerp(const Vec& a, const Vec& b, double s) { return a + s * (b - a); }

}  // namespace

BoundConfig BoundConfig::defaults(int n, int k)
{
    BoundConfig c;
    c.n = n;
    c.k = k;
    c.constant_known = n == 2 && k == 1;
    c.c_base = c.constant_known ? 2.0 : 1.0;
    return c;
}

void BoundConfig::validate() const
{
    if (n < 2 || k < 1 || k >= n) throw DomainError("BoundConfig: need 1 <= k < n");
    if (!(c_base > 0.0)) throw DomainError("BoundConfig: c_base must be positive");
    if (!(eps >= 0.0 && eps < 1.0)) throw DomainError("BoundConfig: eps must lie in [0, 1)");
}

nlohmann::json Packing::to_json() const
{
    nlohmann::json cs = nlohmann::json::array();
    for (const auto& c : centres) cs.push_back(std::vector<double>(c.data(), c.data() + c.size()));
    return {{"n", n}, {"centers", cs}, {"radii", radii}};
}

Packing pack_balls(const std::vector<double>& radii, int n, std::uint64_t seed)
{
    if (n < 1 || n > 4) throw DomainError("pack_balls: n must be in 1..4");
    if (radii.empty()) throw DomainError("pack_balls: no radii");
    CompensatedSum budget;
    for (double r : radii) {
        if (!(r > 0.0)) throw DomainError("pack_balls: radii must be positive");
        budget.add(std::pow(r, n));
    }
    const double limit = std::pow(4.0, -n);
    if (budget.value() > limit * (1.0 + 1e-9))
        throw DomainError("pack_balls: refused, sum r^n = " + std::to_string(budget.value()) + " exceeds 4^-n = " +
                          std::to_string(limit));
    std::vector<std::size_t> order(radii.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return radii[a] > radii[b]; });

    Packing out;
    out.n = n;
    out.radii = radii;
    out.centres.assign(radii.size(), zero_vec(n));
    GridHash grid{2.0 * radii[order.front()], n, {}};
    std::uint64_t st = seed;
    std::uint64_t index = 1 + splitmix64(st) % 1000003ULL;
    const std::uint64_t cap = 200000000ULL;
    std::uint64_t used = 0;
    for (std::size_t idx : order) {
        bool ok = false;
        while (used < cap) {
            ++used;
            const auto u = halton(index++, n);
            Vec x(n);
            for (int i = 0; i < n; ++i) x[i] = u[i] - 0.5;
            if (!(x.norm() < 0.5)) continue;
            const bool blocked = grid.any_near(x, [&](int id) {
                const auto j = static_cast<std::size_t>(id);
                return (x - out.centres[j]).norm() <= 2.0 * radii[j];
            });
            if (blocked) continue;
            out.centres[idx] = x;
            grid.insert(x, static_cast<int>(idx));
            ok = true;
            break;
        }
        if (!ok) throw CapacityError("pack_balls: candidate stream exhausted inside the feasible budget");
    }
    out.candidates_used = used;
    verify_packing(out);
    return out;
}

void verify_packing(const Packing& p)
{
    if (p.centres.size() != p.radii.size()) throw StructuralError("packing: centre and radius counts differ");
    double rmax = 0.0;
    for (std::size_t i = 0; i < p.radii.size(); ++i) {
        rmax = std::max(rmax, p.radii[i]);
        if (p.centres[i].norm() + p.radii[i] > 1.0) throw StructuralError("packing: ball leaves the unit ball");
    }
    GridHash grid{2.0 * rmax, p.n, {}};
    for (std::size_t i = 0; i < p.radii.size(); ++i) {
        const bool overlap = grid.any_near(p.centres[i], [&](int id) {
            const auto j = static_cast<std::size_t>(id);
            return (p.centres[i] - p.centres[j]).norm() <= p.radii[i] + p.radii[j];
        });
        if (overlap) throw StructuralError("packing: balls " + std::to_string(i) + " overlap");
        grid.insert(p.centres[i], static_cast<int>(i));
    }
}

OptimalRadii optimal_radii(const std::vector<double>& V, int n, int k)
{
    if (k < 1 || k >= n) throw DomainError("optimal_radii: need 1 <= k < n");
    if (V.empty()) throw DomainError("optimal_radii: empty list");
    CompensatedSum S;
    for (double v : V) {
        if (!(v > 0.0)) throw DomainError("optimal_radii: values must be positive");
        S.add(std::pow(v, static_cast<double>(n) / (n - k)));
    }
    OptimalRadii out;
    const double scale = 0.25 * std::pow(S.value(), -1.0 / n);
    for (double v : V) out.radii.push_back(scale * std::pow(v, 1.0 / (n - k)));
    out.achieved = std::pow(4.0, -k) * std::pow(S.value(), static_cast<double>(n - k) / n);
    return out;
}

double packing_value(const std::vector<double>& V, const std::vector<double>& r, int k)
{
    if (V.size() != r.size()) throw StructuralError("packing_value: size mismatch");
    CompensatedSum s;
    for (std::size_t i = 0; i < V.size(); ++i) s.add(V[i] * std::pow(r[i], k));
    return s.value();
}

double cup_lower_bound(int p, const BoundConfig& cfg)
{
    cfg.validate();
    if (p < 1) throw DomainError("cup_lower_bound: p must be >= 1");
    const double r = 0.25 * std::pow(static_cast<double>(p), -1.0 / cfg.n);
    return 0.5 * p * cfg.c_base * std::pow(r, cfg.k);
}

double hypersurface_bound(int n)
{
    if (n < 2) throw DomainError("hypersurface_bound: n must be >= 2");
    return (std::pow(0.5, static_cast<double>(n - 1) / n) - 0.5) * sphere_area(n);
}

LineFit scaling_fit(const std::vector<std::pair<double, double>>& rows)
{
    if (rows.size() < 3) throw DomainError("scaling_fit: need at least three rows");
    std::vector<double> x, y;
    for (auto [p, v] : rows) {
        if (!(p > 0.0) || !(v > 0.0)) throw DomainError("scaling_fit: values must be positive");
        x.push_back(std::log(p));
        y.push_back(std::log(v));
    }
    return least_squares(x, y);
}

CoverageResult point_coverage(const Family& f, const std::vector<Vec>& points, double delta, std::size_t budget,
                              std::uint64_t seed)
{
    for (const auto& p : points)
        if (p.size() != f.n || !(p.norm() < 1.0)) throw DomainError("point_coverage: points must lie in the open unit ball");
    CoverageResult res;
    res.max_distance = INFINITY;
    if (f.witness) {
        if (auto w = f.witness(points)) {
            const double d = max_distance(f.evaluate(*w), points);
            res.param = *w;
            res.max_distance = d;
            res.tried = 1;
            if (d <= delta) {
                res.found = true;
                res.from_witness = true;
                return res;
            }
        }
    }
    Rng rng(seed, 141);
    for (std::size_t i = 0; i < budget; ++i) {
        Param pt = sample_parameter(f.domain, i, rng);
        const double d = max_distance(f.evaluate(pt), points);
        ++res.tried;
        if (d < res.max_distance) {
            res.max_distance = d;
            res.param = pt;
        }
        if (d <= delta) {
            res.found = true;
            return res;
        }
    }
    return res;
}

CoverageResult antipodal_coverage(const Family& f, const std::vector<Vec>& loop, double delta, std::size_t budget,
                                  std::uint64_t seed)
{
    if (loop.size() < 2 || loop.size() % 2) throw DomainError("antipodal_coverage: need an even number of samples");
    const std::size_t m = loop.size(), half = m / 2;
    const int last = f.n - 1;
    for (const auto& p : loop)
        if (p.size() != f.n || !(p.norm() < 1.0)) throw DomainError("antipodal_coverage: loop must lie in the open unit ball");
    CoverageResult res;
    res.max_distance = INFINITY;
    auto h = [&](std::size_t j) { return loop[j % m][last] - loop[(j + half) % m][last]; };
    // h(j + half) = -h(j), so a sign change occurs within every half turn.
    if (f.witness) {
        for (std::size_t j = 0; j < half; ++j) {
            const double h0 = h(j), h1 = h(j + 1);
            if (!(h0 == 0.0 || (h0 < 0.0) != (h1 < 0.0))) continue;
            const double s = h0 == 0.0 ? 0.0 : h0 / (h0 - h1);
            const Vec a = lerp(loop[j], loop[(j + 1) % m], s);
            const Vec b = lerp(loop[(j + half) % m], loop[(j + 1 + half) % m], s);
            const std::vector<Vec> pair{a, b};
            auto w = f.witness(pair);
            ++res.tried;
            if (!w) continue;
            const double d = max_distance(f.evaluate(*w), pair);
            if (d < res.max_distance) {
                res.max_distance = d;
                res.param = *w;
                res.theta = 2.0 * std::numbers::pi * (static_cast<double>(j) + s) / static_cast<double>(m);
            }
            if (d <= delta) {
                res.found = true;
                res.from_witness = true;
                return res;
            }
        }
    }
    Rng rng(seed, 151);
    for (std::size_t i = 0; i < budget; ++i) {
        Param pt = sample_parameter(f.domain, i, rng);
        const Cycle c = f.evaluate(pt);
        ++res.tried;
        for (std::size_t j = 0; j < half; ++j) {
            const double d = std::max(c.distance_to(loop[j]), c.distance_to(loop[j + half]));
            if (d < res.max_distance) {
                res.max_distance = d;
                res.param = pt;
                res.theta = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m);
            }
            if (d <= delta) {
                res.found = true;
                return res;
            }
        }
    }
    return res;
}

std::vector<Vec> random_loop(int n, int degree, double radius, std::size_t samples, Rng& rng)
{
    std::vector<Vec> a(degree + 1, zero_vec(n)), b(degree + 1, zero_vec(n));
    for (int d = 0; d <= degree; ++d)
        for (int i = 0; i < n; ++i) {
            a[d][i] = rng.normal() / (1.0 + d);
            b[d][i] = d == 0 ? 0.0 : rng.normal() / (1.0 + d);
        }
    std::vector<Vec> pts;
    double far = 0.0;
    for (std::size_t j = 0; j < samples; ++j) {
        const double th = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(samples);
        Vec x = zero_vec(n);
        for (int d = 0; d <= degree; ++d) x += a[d] * std::cos(d * th) + b[d] * std::sin(d * th);
        far = std::max(far, x.norm());
        pts.push_back(x);
    }
    const double scale = far > 0.0 ? radius * rng.uniform(0.5, 1.0) / far : 0.0;
    for (auto& x : pts) x *= scale;
    return pts;
}

}  // namespace sweepout
