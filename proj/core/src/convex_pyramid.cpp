#include "sweepout/convex_pyramid.hpp"

#include "sweepout/lp.hpp"

#include <gmpxx.h>

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <sstream>

namespace sweepout {

namespace {

constexpr double kNearAngle = 0.3;  // c(n) in the h(L) bookkeeping

Vec unit(int n, int i)
{
    Vec e = zero_vec(n);
    e[i] = 1.0;
    return e;
}

std::vector<Vec> standard_prefix(int n)
{
    std::vector<Vec> out;
    for (int j = 0; j < n; ++j) out.push_back(unit(n, j));
    return out;
}

// Orthonormal basis of the orthogonal complement of span(prev).
std::vector<Vec> complement_basis(int n, const std::vector<Vec>& prev)
{
    std::vector<Vec> span;
    for (const auto& p : prev) {
        Vec w = p;
        for (const auto& s : span) w -= s.dot(w) * s;
        if (w.norm() > 1e-9) span.push_back(w.normalized());
    }
    std::vector<Vec> out;
    for (int j = 0; j < n && static_cast<int>(span.size()) < n; ++j) {
        Vec w = unit(n, j);
        for (const auto& s : span) w -= s.dot(w) * s;
        if (w.norm() > 1e-6) {
            w.normalize();
            span.push_back(w);
            out.push_back(w);
        }
    }
    return out;
}

Vec combine(const std::vector<Vec>& basis, const std::vector<double>& coef)
{
    Vec v = zero_vec(static_cast<int>(basis.front().size()));
    for (std::size_t j = 0; j < basis.size(); ++j) v += coef[j] * basis[j];
    return v.normalized();
}

Vec random_on_fiber(const std::vector<Vec>& basis, Rng& rng)
{
    std::vector<double> c(basis.size());
    for (auto& x : c) x = rng.normal();
    return combine(basis, c);
}

// Grid of S directions on the fiber sphere, one per antipodal pair. For a
// circle fiber the grid is theta0 + j pi / S, so halving S gives a subgrid.
std::vector<Vec> fiber_grid(const std::vector<Vec>& basis, std::size_t S, double theta0)
{
    std::vector<Vec> out;
    if (basis.size() == 1) {
        out.push_back(basis[0]);
        return out;
    }
    if (basis.size() == 2) {
        for (std::size_t j = 0; j < S; ++j) {
            const double th = theta0 + std::numbers::pi * static_cast<double>(j) / static_cast<double>(S);
            out.push_back(combine(basis, {std::cos(th), std::sin(th)}));
        }
        return out;
    }
    for (std::size_t j = 1; j <= S; ++j) {
        auto u = halton(j, static_cast<int>(basis.size()));
        std::vector<double> c(u.size());
        for (std::size_t t = 0; t < u.size(); ++t) c[t] = normal_quantile(u[t]);
        if (c[0] < 0)
            for (auto& x : c) x = -x;
        out.push_back(combine(basis, c));
    }
    return out;
}

std::vector<Vec> previous_window(const std::vector<Vec>& chain, int count)
{
    std::vector<Vec> out;
    for (int j = std::max(0, static_cast<int>(chain.size()) - count); j < static_cast<int>(chain.size()); ++j)
        out.push_back(chain[j]);
    return out;
}

struct CutEval {
    Vec dir;
    Bisection bis;
    Chebyshev left, right;
    double score = INFINITY;
};

CutEval evaluate_cut(const HPolytope& p, const Body& body, const Vec& dir, int k, double tol)
{
    CutEval e;
    e.dir = dir;
    e.bis = bisect_equal_volume(p, body, dir, tol);
    e.left = chebyshev(e.bis.left);
    e.right = chebyshev(e.bis.right);
    e.score = std::pow(e.left.radius, k) + std::pow(e.right.radius, k);
    return e;
}

struct GreedyParams {
    int n, i, k, P;
    std::size_t S;
    double theta0;
    double tol;
};

CutEval best_cut(const GreedyParams& g, const HPolytope& poly, const Body& body, const std::vector<Vec>& chain)
{
    const auto basis = complement_basis(g.n, previous_window(chain, g.n - g.i - 1));
    const auto grid = fiber_grid(basis, g.S, g.theta0);
    CutEval best;
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        auto e = evaluate_cut(poly, body, grid[j], g.k, g.tol);
        if (e.score < best.score) {
            best = std::move(e);
            best_j = j;
        }
    }
    if (basis.size() == 2) {
        // Golden-section refinement inside the neighbouring grid cells.
        const double h = std::numbers::pi / static_cast<double>(g.S);
        const double centre = g.theta0 + h * static_cast<double>(best_j);
        double a = centre - h, b = centre + h;
        const double r = (std::sqrt(5.0) - 1.0) / 2.0;
        auto at = [&](double th) { return evaluate_cut(poly, body, combine(basis, {std::cos(th), std::sin(th)}), g.k, g.tol); };
        double x1 = b - r * (b - a), x2 = a + r * (b - a);
        auto e1 = at(x1), e2 = at(x2);
        for (int it = 0; it < 14; ++it) {
            if (e1.score < best.score) best = e1;
            if (e2.score < best.score) best = e2;
            if (e1.score <= e2.score) {
                b = x2;
                x2 = x1;
                e2 = std::move(e1);
                x1 = b - r * (b - a);
                e1 = at(x1);
            } else {
                a = x1;
                x1 = x2;
                e1 = std::move(e2);
                x2 = a + r * (b - a);
                e2 = at(x2);
            }
        }
        if (e1.score < best.score) best = e1;
        if (e2.score < best.score) best = e2;
    }
    return best;
}

std::vector<PyramidNode> build_greedy(const GreedyParams& g)
{
    std::vector<PyramidNode> nodes;
    std::vector<Body> bodies;
    std::vector<std::vector<Vec>> chains;  // prefix + ancestor cut directions
    PyramidNode root;
    root.poly = ball_polytope(g.n);
    const auto ch = chebyshev(root.poly);
    root.centre = ch.centre;
    root.rad = ch.radius;
    bodies.push_back(Body::from(root.poly));
    root.volume = bodies.back().volume();
    nodes.push_back(root);
    chains.push_back(standard_prefix(g.n));
    for (std::size_t idx = 0; idx < nodes.size(); ++idx) {
        if (nodes[idx].depth >= g.P) continue;
        auto cut = best_cut(g, nodes[idx].poly, bodies[idx], chains[idx]);
        nodes[idx].cut_dir = cut.dir;
        nodes[idx].offset = cut.bis.offset;
        auto chain = chains[idx];
        chain.push_back(cut.dir);
        for (int side = 0; side < 2; ++side) {
            PyramidNode child;
            child.path = nodes[idx].path + (side == 0 ? '1' : '2');
            child.depth = nodes[idx].depth + 1;
            child.poly = side == 0 ? cut.bis.left : cut.bis.right;
            const auto& c = side == 0 ? cut.left : cut.right;
            child.centre = c.centre;
            child.rad = c.radius;
            child.volume = side == 0 ? cut.bis.left_volume : cut.bis.right_volume;
            bodies.push_back(side == 0 ? cut.bis.left_body : cut.bis.right_body);
            chains.push_back(chain);
            (side == 0 ? nodes[idx].left : nodes[idx].right) = static_cast<int>(nodes.size());
            nodes.push_back(std::move(child));
        }
    }
    for (std::size_t j = nodes.size(); j-- > 0;) {
        auto& nd = nodes[j];
        nd.T = nd.left < 0 ? 0.5 * std::pow(nd.rad, g.k) : nodes[nd.left].T + nodes[nd.right].T;
    }
    return nodes;
}

std::vector<Vec> node_vertices(const HPolytope& p) { return polytope_vertices(p); }

// Widths and shadow areas of several bodies along shared random frames.
double shadow(const std::vector<Vec>& verts, const std::vector<Vec>& frame)
{
    if (verts.empty()) return 0.0;
    if (frame.size() == 1) {
        double lo = INFINITY, hi = -INFINITY;
        for (const auto& v : verts) {
            const double d = frame[0].dot(v);
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
        return hi - lo;
    }
    std::vector<Eigen::Vector2d> pts;
    pts.reserve(verts.size());
    for (const auto& v : verts) pts.emplace_back(frame[0].dot(v), frame[1].dot(v));
    return hull_area_2d(pts);
}

std::vector<Vec> random_frame(int n, int q, Rng& rng)
{
    std::vector<Vec> frame;
    while (static_cast<int>(frame.size()) < q) {
        Vec w(n);
        for (int j = 0; j < n; ++j) w[j] = rng.normal();
        for (const auto& f : frame) w -= f.dot(w) * f;
        if (w.norm() > 1e-9) frame.push_back(w.normalized());
    }
    return frame;
}

}  // namespace

void DirectionSequence::validate(double tol) const
{
    std::vector<Vec> all = prefix;
    all.insert(all.end(), v.begin(), v.end());
    const int w = n - i;
    if (w < 1) throw StructuralError("direction_sequence: window length n - i must be positive");
    for (std::size_t end = static_cast<std::size_t>(w - 1); end < all.size(); ++end) {
        for (std::size_t x = end + 1 - static_cast<std::size_t>(w); x <= end; ++x)
            for (std::size_t y = x; y <= end; ++y) {
                const double g = all[x].dot(all[y]);
                const double want = x == y ? 1.0 : 0.0;
                if (!(std::abs(g - want) <= tol)) {
                    const long a = static_cast<long>(end) - n + 1;
                    throw StructuralError("direction_sequence: window ending at v_" + std::to_string(a) +
                                          " is not orthonormal");
                }
            }
    }
}

nlohmann::json DirectionSequence::to_json() const
{
    nlohmann::json vs = nlohmann::json::array();
    for (const auto& x : v) vs.push_back(std::vector<double>(x.data(), x.data() + x.size()));
    return {{"n", n}, {"i", i}, {"v", vs}};
}

DirectionSequence direction_sequence(int n, int i, int L, DirectionMode mode, std::uint64_t seed, int k)
{
    if (n < 2 || n > 4) throw DomainError("direction_sequence: n must be in 2..4");
    if (i < 1 || i > n - 1) throw DomainError("direction_sequence: i must be in 1..n-1");
    if (L < 1) throw DomainError("direction_sequence: L must be >= 1");
    DirectionSequence seq;
    seq.n = n;
    seq.i = i;
    seq.prefix = standard_prefix(n);
    Rng rng(seed, 101);
    auto chain = seq.prefix;
    for (int a = 1; a <= L; ++a) {
        const auto basis = complement_basis(n, previous_window(chain, n - i - 1));
        chain.push_back(random_on_fiber(basis, rng));
        seq.v.push_back(chain.back());
    }
    seq.validate();
    if (mode == DirectionMode::Random) return seq;
    if (n > 3) throw CapabilityError("direction_sequence: adversarial mode needs n <= 3");

    // Coordinate descent: replace one v_a at a time by fiber candidates and
    // repair the later vectors by projecting out their windows.
    auto repaired = [&](std::vector<Vec> v, int a, const Vec& cand) {
        v[a] = cand;
        std::vector<Vec> ch = seq.prefix;
        for (int b = 0; b < static_cast<int>(v.size()); ++b) {
            if (b > a) {
                auto win = previous_window(ch, n - i - 1);
                Vec w = v[b];
                for (const auto& u : win) w -= u.dot(w) * u;
                if (w.norm() < 1e-6) w = complement_basis(n, win).front();
                v[b] = w.normalized();
            }
            ch.push_back(v[b]);
        }
        return v;
    };
    double best = sequence_thickness(seq, k);
    const std::size_t candidates = 16;
    for (int sweep = 0; sweep < 2; ++sweep) {
        for (int a = 0; a < L; ++a) {
            std::vector<Vec> ch = seq.prefix;
            ch.insert(ch.end(), seq.v.begin(), seq.v.begin() + a);
            const auto basis = complement_basis(n, previous_window(ch, n - i - 1));
            for (const auto& cand : fiber_grid(basis, candidates, 0.0)) {
                DirectionSequence trial = seq;
                trial.v = repaired(seq.v, a, cand);
                const double t = sequence_thickness(trial, k);
                if (t < best - 1e-12) {
                    best = t;
                    seq = std::move(trial);
                }
            }
        }
    }
    seq.validate();
    return seq;
}

double sequence_thickness(const DirectionSequence& seq, int k, double tol)
{
    std::vector<HPolytope> polys{ball_polytope(seq.n)};
    std::vector<Body> bodies{Body::from(polys.front())};
    for (const auto& dir : seq.v) {
        std::vector<HPolytope> np;
        std::vector<Body> nb;
        for (std::size_t j = 0; j < polys.size(); ++j) {
            auto bis = bisect_equal_volume(polys[j], bodies[j], dir, tol);
            np.push_back(std::move(bis.left));
            np.push_back(std::move(bis.right));
            nb.push_back(std::move(bis.left_body));
            nb.push_back(std::move(bis.right_body));
        }
        polys.swap(np);
        bodies.swap(nb);
    }
    CompensatedSum t;
    for (const auto& p : polys) t.add(0.5 * std::pow(chebyshev(p).radius, k));
    return t.value();
}

Bisection bisect_equal_volume(const HPolytope& p, const Vec& dir, double tol)
{
    return bisect_equal_volume(p, Body::from(p), dir, tol);
}

Bisection bisect_equal_volume(const HPolytope& p, const Body& body, const Vec& dir, double tol)
{
    if (std::abs(dir.norm() - 1.0) > 1e-9) throw DomainError("bisect_equal_volume: direction must be unit");
    if (!(tol > 0.0)) throw DomainError("bisect_equal_volume: tolerance must be positive");
    const double V = body.volume();
    auto [lo, hi] = body.support(dir);
    Bisection out;
    auto evaluate = [&](double o) {
        out.offset = o;
        out.left_body = body.clip(dir, o);
        out.right_body = body.clip(-dir, -o);
        out.left_volume = out.left_body.volume();
        out.right_volume = out.right_body.volume();
        return out.left_volume - out.right_volume;
    };
    // Illinois false position on g(o) = vol(left) - vol(right), starting at the midpoint.
    double a = lo, b = hi, ga = -V, gb = V;
    double o = 0.5 * (lo + hi);
    bool done = false;
    int side = 0;
    for (int it = 0; it < 200; ++it) {
        const double g = evaluate(o);
        if (std::abs(g) <= tol * V) {
            done = true;
            break;
        }
        if (g < 0) {
            a = o;
            ga = g;
            if (side == -1) gb *= 0.5;
            side = -1;
        } else {
            b = o;
            gb = g;
            if (side == 1) ga *= 0.5;
            side = 1;
        }
        o = (a * gb - b * ga) / (gb - ga);
        if (!(o > a && o < b)) o = 0.5 * (a + b);
    }
    if (!done) throw ConvergenceError("bisect_equal_volume: tolerance not reached");
    out.left = p;
    out.left.add(dir, out.offset);
    out.right = p;
    out.right.add(-dir, -out.offset);
    return out;
}

nlohmann::json PyramidTree::to_json() const
{
    nlohmann::json ns = nlohmann::json::array();
    for (const auto& nd : nodes) {
        nlohmann::json j{{"path", nd.path},
                         {"depth", nd.depth},
                         {"volume", nd.volume},
                         {"rad", nd.rad},
                         {"T", nd.T},
                         {"offset", nd.offset}};
        j["cut_dir"] = nd.cut_dir.size() ? nlohmann::json(std::vector<double>(nd.cut_dir.data(), nd.cut_dir.data() + nd.cut_dir.size()))
                                         : nlohmann::json(nullptr);
        ns.push_back(std::move(j));
    }
    return {{"n", n},
            {"i", i},
            {"k", k},
            {"P", P},
            {"phi_samples", phi_samples},
            {"phi_used", phi_used},
            {"ladder_T", ladder_T},
            {"seed", seed},
            {"bisect_tol", bisect_tol},
            {"root", "polytope with coordinate and diagonal supporting halfspaces of the unit ball"},
            {"infimum", "sampled; T is an upper bound for the exact infimum"},
            {"nodes", ns}};
}

PyramidTree build_pyramid(int n, int i, int k, int P, std::size_t phi_samples, std::uint64_t seed, double tol)
{
    if (n < 2 || n > 3) throw CapabilityError("build_pyramid: supported for n <= 3");
    if (k < 1 || k > n - 1) throw DomainError("build_pyramid: k must be in 1..n-1");
    if (i < 1 || i > n - k - 1) throw DomainError("build_pyramid: i must be in 1..n-k-1");
    if (P < 0 || P > 12) throw DomainError("build_pyramid: P must be in 0..12");
    if (phi_samples < 1) throw DomainError("build_pyramid: phi_samples must be positive");
    PyramidTree best;
    best.n = n;
    best.i = i;
    best.k = k;
    best.P = P;
    best.phi_samples = phi_samples;
    best.seed = seed;
    best.bisect_tol = tol;
    Rng rng(seed, 111);
    const double theta0 = rng.uniform() * std::numbers::pi / 1024.0;
    double best_T = INFINITY;
    for (std::size_t S = phi_samples;; S /= 2) {
        auto nodes = build_greedy({n, i, k, P, S, theta0, tol});
        best.ladder_T.push_back(nodes.front().T);
        if (nodes.front().T < best_T) {
            best_T = nodes.front().T;
            best.nodes = std::move(nodes);
            best.phi_used = S;
        }
        if (S / 2 < 4 || P == 0) break;
    }
    return best;
}

ThicknessReport thickness(const PyramidTree& tree)
{
    ThicknessReport r;
    r.T = tree.nodes.front().T;
    r.level_T.assign(tree.P + 1, 0.0);
    r.level_min.assign(tree.P + 1, INFINITY);
    r.level_mean.assign(tree.P + 1, 0.0);
    std::vector<int> count(tree.P + 1, 0);
    for (const auto& nd : tree.nodes) {
        r.level_T[nd.depth] += 0.5 * std::pow(nd.rad, tree.k);
        r.level_min[nd.depth] = std::min(r.level_min[nd.depth], nd.rad);
        r.level_mean[nd.depth] += nd.rad;
        ++count[nd.depth];
        if (nd.left < 0) r.leaf_rad.push_back(nd.rad);
    }
    for (int p = 0; p <= tree.P; ++p) r.level_mean[p] /= count[p];
    return r;
}

BoxApprox rect_approx(const HPolytope& p)
{
    const int n = p.n;
    const auto verts = polytope_vertices(p);
    const auto ch = chebyshev(p);
    if (!(ch.radius > 1e-12)) throw StructuralError("rect_approx: degenerate polytope");
    BoxApprox out;
    // Farthest-point sweep: a_j maximizes the distance to the affine span of a_0..a_{j-1}.
    std::vector<Vec> frame;
    const Vec a0 = ch.centre;
    for (int j = 0; j < n; ++j) {
        double far = -1.0;
        Vec dir;
        for (const auto& v : verts) {
            Vec w = v - a0;
            for (const auto& f : frame) w -= f.dot(w) * f;
            if (w.norm() > far) {
                far = w.norm();
                dir = w;
            }
        }
        if (far <= 1e-12) throw StructuralError("rect_approx: degenerate polytope");
        out.heights.push_back(far);
        frame.push_back(dir / far);
    }
    // Half-ranges of A along the frame.
    std::vector<double> half(n);
    for (int j = 0; j < n; ++j) {
        double lo = INFINITY, hi = -INFINITY;
        for (const auto& v : verts) {
            lo = std::min(lo, frame[j].dot(v));
            hi = std::max(hi, frame[j].dot(v));
        }
        half[j] = 0.5 * (hi - lo);
    }
    // Largest frame-aligned box with these proportions: maximize t with
    // a.c + t sum_j |a.e_j| half_j <= b.
    const auto m = static_cast<Eigen::Index>(p.size());
    Eigen::MatrixXd A(m, n + 1);
    Eigen::VectorXd b(m);
    for (Eigen::Index r = 0; r < m; ++r) {
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += std::abs(p.a[r].dot(frame[j])) * half[j];
        A.row(r).head(n) = p.a[r].transpose();
        A(r, n) = s;
        b[r] = p.b[r];
    }
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n + 1);
    c[n] = 1.0;
    const auto lp = lp_maximize(c, A, b);
    if (lp.status != LpResult::Status::Optimal || !(lp.x[n] > 0.0))
        throw StructuralError("rect_approx: inscribed box LP failed");
    const double t = lp.x[n];
    out.centre = lp.x.head(n);
    std::vector<int> order(n);
    for (int j = 0; j < n; ++j) order[j] = j;
    std::sort(order.begin(), order.end(), [&](int x, int y) { return half[x] < half[y]; });
    for (int j : order) {
        out.axes.push_back(frame[j]);
        out.sides.push_back(2.0 * t * half[j]);
    }
    // Smallest lambda with A inside centre + lambda (R - centre), from the
    // support function of A computed by LP.
    const Eigen::MatrixXd PA = [&] {
        Eigen::MatrixXd M(m, n);
        for (Eigen::Index r = 0; r < m; ++r) M.row(r) = p.a[r].transpose();
        return M;
    }();
    double lambda = 0.0;
    for (int j = 0; j < n; ++j) {
        const double hw = 0.5 * out.sides[j];
        for (double sgn : {1.0, -1.0}) {
            Eigen::VectorXd dir = sgn * out.axes[j];
            const auto s = lp_maximize(dir, PA, b);
            if (s.status != LpResult::Status::Optimal) throw StructuralError("rect_approx: unbounded polytope");
            lambda = std::max(lambda, (s.value - dir.dot(Eigen::VectorXd(out.centre))) / hw);
        }
    }
    out.lambda = lambda;
    out.outer_ok = true;
    for (const auto& v : verts)
        for (int j = 0; j < n; ++j)
            if (std::abs(out.axes[j].dot(v - out.centre)) > lambda * 0.5 * out.sides[j] * (1.0 + 1e-9) + 1e-12)
                out.outer_ok = false;
    out.inner_ok = true;
    for (int mask = 0; mask < (1 << n); ++mask) {
        Vec x = out.centre;
        for (int j = 0; j < n; ++j) x += ((mask >> j) & 1 ? 0.5 : -0.5) * out.sides[j] * out.axes[j];
        if (!p.contains(x, 1e-9)) out.inner_ok = false;
    }
    return out;
}

Estimate mean_projection(const HPolytope& p, int q, std::size_t samples, std::uint64_t seed)
{
    if (q < 0 || q > p.n) throw DomainError("mean_projection: q must be in 0..n");
    if (q == 0) return {1.0, 0.0, 0};
    if (q == p.n) return polytope_volume(p, VolumeMethod::Exact, samples, seed);
    if (q > 2) throw CapabilityError("mean_projection: shadows above dimension 2 are not implemented");
    if (samples < 2) throw DomainError("mean_projection: need at least two samples");
    const auto verts = polytope_vertices(p);
    Rng rng(seed, 121);
    std::vector<double> vals;
    vals.reserve(samples);
    for (std::size_t s = 0; s < samples; ++s) vals.push_back(shadow(verts, random_frame(p.n, q, rng)));
    const auto st = mean_and_stderr(vals);
    return {st.mean, st.stderr_, samples};
}

NFunctionalReport n_functional(const HPolytope& p, double beta, std::size_t samples, std::uint64_t seed)
{
    if (!(beta >= 2.0)) throw DomainError("n_functional: beta must be >= 2");
    NFunctionalReport r;
    r.beta = beta;
    r.volume = polytope_volume(p, VolumeMethod::Exact, samples, seed).value;
    if (!(r.volume > 0.0)) throw DomainError("n_functional: zero volume");
    for (int a = 1; a <= p.n; ++a) {
        const auto proj = mean_projection(p, p.n - a, samples, seed + static_cast<std::uint64_t>(a));
        r.projections.push_back(proj);
        const double v = std::pow(beta, a) * std::pow(r.volume, -1.0 / a) * std::pow(proj.value, 1.0 / a);
        r.values.push_back(v);
        if (v > r.N) {
            r.N = v;
            r.argmax = a;
        }
    }
    return r;
}

bool holder_exact(const std::vector<double>& rads, int k)
{
    if (rads.empty()) return true;
    mpq_class sum_k = 0, sum_inv = 0;
    for (double r : rads) {
        if (!(r > 0.0)) return false;
        mpq_class x(r);
        mpq_class pk = 1;
        for (int j = 0; j < k; ++j) pk *= x;
        sum_k += pk;
        sum_inv += 1 / x;
    }
    mpz_class cnt = static_cast<unsigned long>(rads.size());
    mpz_class lhs = 1;
    for (int j = 0; j <= k; ++j) lhs *= cnt;
    mpq_class rhs = sum_k;
    for (int j = 0; j < k; ++j) rhs *= sum_inv;
    return mpq_class(lhs) <= rhs;
}

StarReport star_report(const PyramidTree& tree, double beta, std::size_t samples, std::uint64_t seed)
{
    StarReport r;
    r.beta = beta;
    const int k = tree.k;
    std::vector<std::vector<double>> rads(tree.P + 1);
    for (const auto& nd : tree.nodes) rads[nd.depth].push_back(nd.rad);
    for (int p = 0; p <= tree.P; ++p) {
        StarLevel lv;
        lv.p = p;
        CompensatedSum inv, rk;
        for (double x : rads[p]) {
            inv.add(1.0 / x);
            rk.add(std::pow(x, k));
        }
        lv.sum_rad_inv = inv.value();
        lv.sum_rad_k = rk.value();
        lv.T_level = 0.5 * lv.sum_rad_k;
        lv.holder_ok = holder_exact(rads[p], k);
        r.holder_all = r.holder_all && lv.holder_ok;
        r.levels.push_back(lv);
    }
    if (tree.P >= 2) {
        std::vector<double> xs, yt, yi;
        for (int p = 1; p <= tree.P; ++p) {
            xs.push_back(p);
            yt.push_back(std::log(r.levels[p].T_level));
            yi.push_back(std::log(r.levels[p].sum_rad_inv));
        }
        const auto ft = least_squares(xs, yt);
        const auto fi = least_squares(xs, yi);
        r.growth_T = std::exp(ft.slope);
        r.r2_T = ft.r2;
        r.growth_rad_inv = std::exp(fi.slope);
        r.r2_rad_inv = fi.r2;
    }

    // Projection additivity across cuts, with shared frames for all four sets.
    Rng rng(seed, 131);
    const std::size_t max_nodes = 64, frames = 16;
    std::size_t checked_nodes = 0;
    for (const auto& nd : tree.nodes) {
        if (nd.left < 0 || checked_nodes >= max_nodes) continue;
        ++checked_nodes;
        const auto vc = node_vertices(nd.poly);
        const auto va = node_vertices(tree.nodes[nd.left].poly);
        const auto vb = node_vertices(tree.nodes[nd.right].poly);
        std::vector<Vec> vs;
        for (const auto& v : va)
            if (std::abs(nd.cut_dir.dot(v) - nd.offset) <= 1e-7) vs.push_back(v);
        for (int q = 1; q < tree.n; ++q) {
            for (std::size_t f = 0; f < frames; ++f) {
                const auto fr = random_frame(tree.n, q, rng);
                const double c = shadow(vc, fr);
                const double res = c + shadow(vs, fr) - shadow(va, fr) - shadow(vb, fr);
                r.additivity_max_residual = std::max(r.additivity_max_residual, std::abs(res) / c);
                ++r.additivity_checks;
            }
        }
    }
    r.additivity_ok = r.additivity_max_residual <= 1e-7;

    // Near-cut bookkeeping per internal node with n-i generations below it.
    const int gens = tree.n - tree.i;
    for (std::size_t idx = 0; idx < tree.nodes.size(); ++idx) {
        const auto& nd = tree.nodes[idx];
        if (nd.depth + gens > tree.P) continue;
        const auto nf = n_functional(nd.poly, beta, samples, seed ^ (0x9e3779b97f4a7c15ULL * (idx + 1)));
        const int a = nf.argmax;
        const auto box = rect_approx(nd.poly);
        if (a > 1 && a < tree.n) {
            RatioRow row;
            row.path = nd.path;
            row.a = a;
            row.ratio = box.sides[a] / box.sides[a - 1];
            row.ratio_over_beta2 = row.ratio / (beta * beta);
            r.ratios.push_back(row);
        }
        // h counters: P is spanned by the a shortest box axes.
        std::vector<Vec> plane(box.axes.begin(), box.axes.begin() + std::min(a, tree.n));
        HCounter hc;
        hc.path = nd.path;
        hc.a = a;
        hc.min_h = a;
        std::deque<std::pair<int, int>> queue{{static_cast<int>(idx), a}};
        for (int g = 0; g < gens; ++g) {
            std::deque<std::pair<int, int>> next;
            for (auto [j, h] : queue) {
                const auto& L = tree.nodes[j];
                Vec proj = zero_vec(tree.n);
                for (const auto& e : plane) proj += e.dot(L.cut_dir) * e;
                const double angle = std::acos(std::clamp(proj.norm(), 0.0, 1.0));
                const int hh = angle <= kNearAngle ? h - 1 : h;
                next.emplace_back(L.left, hh);
                next.emplace_back(L.right, hh);
            }
            queue.swap(next);
        }
        for (auto [j, h] : queue) hc.min_h = std::min(hc.min_h, h);
        hc.near_cuts = a - hc.min_h;
        if (hc.min_h < 0) ++r.h_negative;
        r.h_counters.push_back(hc);
    }
    return r;
}

nlohmann::json StarReport::to_json() const
{
    nlohmann::json lv = nlohmann::json::array();
    for (const auto& l : levels)
        lv.push_back({{"p", l.p}, {"sum_rad_inv", l.sum_rad_inv}, {"sum_rad_k", l.sum_rad_k}, {"T_level", l.T_level},
                      {"holder_ok", l.holder_ok}});
    nlohmann::json rs = nlohmann::json::array();
    for (const auto& x : ratios)
        rs.push_back({{"path", x.path}, {"a", x.a}, {"ratio", x.ratio}, {"ratio_over_beta2", x.ratio_over_beta2}});
    nlohmann::json hs = nlohmann::json::array();
    for (const auto& h : h_counters)
        hs.push_back({{"path", h.path}, {"a", h.a}, {"min_h", h.min_h}, {"near_cuts", h.near_cuts}});
    return {{"beta", beta},
            {"levels", lv},
            {"holder_all", holder_all},
            {"growth_T", growth_T},
            {"growth_rad_inv", growth_rad_inv},
            {"r2_T", r2_T},
            {"r2_rad_inv", r2_rad_inv},
            {"additivity", {{"checks", additivity_checks}, {"max_residual", additivity_max_residual}, {"ok", additivity_ok}}},
            {"ratios", rs},
            {"h_counters", hs},
            {"h_negative", h_negative}};
}

std::string StarReport::to_csv() const
{
    std::ostringstream os;
    os.precision(12);
    os << "p,sum_rad_inv,sum_rad_k,T_level,holder_ok\n";
    for (const auto& l : levels)
        os << l.p << ',' << l.sum_rad_inv << ',' << l.sum_rad_k << ',' << l.T_level << ',' << (l.holder_ok ? 1 : 0)
           << '\n';
    return os.str();
}

}  // namespace sweepout
