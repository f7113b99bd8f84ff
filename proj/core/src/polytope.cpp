#include "sweepout/polytope.hpp"

#include "sweepout/lp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sweepout {

namespace {

constexpr double kOnPlane = 1e-9;

Eigen::MatrixXd constraint_matrix(const HPolytope& p)
{
    Eigen::MatrixXd A(static_cast<Eigen::Index>(p.size()), p.n);
    for (std::size_t j = 0; j < p.size(); ++j) A.row(static_cast<Eigen::Index>(j)) = p.a[j].transpose();
    return A;
}

Eigen::VectorXd rhs(const HPolytope& p)
{
    return Eigen::Map<const Eigen::VectorXd>(p.b.data(), static_cast<Eigen::Index>(p.b.size()));
}

// Orthonormal pair spanning the plane orthogonal to the unit vector a (n = 3).
std::pair<Eigen::Vector3d, Eigen::Vector3d> plane_basis(const Eigen::Vector3d& a)
{
    Eigen::Vector3d helper = std::abs(a.x()) < 0.9 ? Eigen::Vector3d::UnitX() : Eigen::Vector3d::UnitY();
    Eigen::Vector3d u = (helper - helper.dot(a) * a).normalized();
    Eigen::Vector3d w = a.cross(u);
    return {u, w};
}

// Sorts coplanar points counter-clockwise seen from the tip of `normal`.
void sort_loop(std::vector<Vec>& pts, const Vec& normal)
{
    if (pts.size() < 3) return;
    Vec c = zero_vec(3);
    for (const auto& p : pts) c += p;
    c /= static_cast<double>(pts.size());
    auto [u, w] = plane_basis(Eigen::Vector3d(normal[0], normal[1], normal[2]));
    std::vector<std::pair<double, Vec>> keyed;
    keyed.reserve(pts.size());
    for (const auto& p : pts) {
        Eigen::Vector3d d(p[0] - c[0], p[1] - c[1], p[2] - c[2]);
        keyed.emplace_back(std::atan2(d.dot(w), d.dot(u)), p);
    }
    std::sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    pts.clear();
    for (auto& [ang, p] : keyed) pts.push_back(p);
}

void dedupe(std::vector<Vec>& pts, double tol)
{
    std::vector<Vec> out;
    for (const auto& p : pts) {
        bool seen = false;
        for (const auto& q : out)
            if ((p - q).lpNorm<Eigen::Infinity>() <= tol) {
                seen = true;
                break;
            }
        if (!seen) out.push_back(p);
    }
    pts.swap(out);
}

void drop_repeats(std::vector<Vec>& loop, double tol)
{
    std::vector<Vec> out;
    for (const auto& p : loop)
        if (out.empty() || (p - out.back()).lpNorm<Eigen::Infinity>() > tol) out.push_back(p);
    while (out.size() > 1 && (out.front() - out.back()).lpNorm<Eigen::Infinity>() <= tol) out.pop_back();
    loop.swap(out);
}

double loop_area_2d(const std::vector<Vec>& loop)
{
    double s = 0.0;
    for (std::size_t i = 0; i < loop.size(); ++i) {
        const Vec& p = loop[i];
        const Vec& q = loop[(i + 1) % loop.size()];
        s += p[0] * q[1] - p[1] * q[0];
    }
    return 0.5 * s;
}

Estimate volume_mc(const HPolytope& p, std::size_t samples, std::uint64_t seed)
{
    Vec lo = zero_vec(p.n), hi = zero_vec(p.n);
    const Eigen::MatrixXd A = constraint_matrix(p);
    const Eigen::VectorXd b = rhs(p);
    for (int i = 0; i < p.n; ++i) {
        Eigen::VectorXd c = Eigen::VectorXd::Zero(p.n);
        c[i] = 1.0;
        auto up = lp_maximize(c, A, b);
        auto dn = lp_maximize(-c, A, b);
        if (up.status != LpResult::Status::Optimal || dn.status != LpResult::Status::Optimal)
            throw StructuralError("polytope_volume: unbounded or empty polytope");
        hi[i] = up.value;
        lo[i] = -dn.value;
    }
    double box = 1.0;
    for (int i = 0; i < p.n; ++i) box *= hi[i] - lo[i];
    Rng rng(seed, 41);
    std::size_t hits = 0;
    Vec x(p.n);
    for (std::size_t s = 0; s < samples; ++s) {
        for (int i = 0; i < p.n; ++i) x[i] = rng.uniform(lo[i], hi[i]);
        if (p.contains(x, 0.0)) ++hits;
    }
    const double f = samples ? static_cast<double>(hits) / static_cast<double>(samples) : 0.0;
    Estimate e;
    e.value = box * f;
    e.stderr_ = samples ? box * std::sqrt(f * (1.0 - f) / static_cast<double>(samples)) : 0.0;
    e.samples = samples;
    return e;
}

}  // namespace

void HPolytope::add(const Vec& normal, double offset)
{
    if (normal.size() != n) throw StructuralError("HPolytope::add: dimension mismatch");
    const double len = normal.norm();
    if (!(len > 0.0)) throw DomainError("HPolytope::add: zero normal");
    a.push_back(normal / len);
    b.push_back(offset / len);
}

bool HPolytope::contains(const Vec& x, double tol) const
{
    for (std::size_t j = 0; j < a.size(); ++j)
        if (a[j].dot(x) > b[j] + tol) return false;
    return true;
}

void HPolytope::validate() const
{
    if (n < 1 || n > 4) throw StructuralError("HPolytope: dimension must be in 1..4");
    const auto ch = chebyshev(*this);
    if (!(ch.radius > 1e-12)) throw StructuralError("HPolytope: empty interior");
}

nlohmann::json HPolytope::to_json() const
{
    nlohmann::json hs = nlohmann::json::array();
    for (std::size_t j = 0; j < a.size(); ++j)
        hs.push_back({{"a", std::vector<double>(a[j].data(), a[j].data() + n)}, {"b", b[j]}});
    return {{"n", n}, {"halfspaces", hs}};
}

HPolytope box_polytope(const Vec& lo, const Vec& hi)
{
    HPolytope p;
    p.n = static_cast<int>(lo.size());
    for (int i = 0; i < p.n; ++i) {
        Vec e = zero_vec(p.n);
        e[i] = 1.0;
        p.add(e, hi[i]);
        p.add(-e, -lo[i]);
    }
    return p;
}

HPolytope ball_polytope(int n)
{
    if (n < 1 || n > 4) throw StructuralError("ball_polytope: n must be in 1..4");
    HPolytope p;
    p.n = n;
    for (int i = 0; i < n; ++i) {
        Vec e = zero_vec(n);
        e[i] = 1.0;
        p.add(e, 1.0);
        p.add(-e, 1.0);
    }
    if (n > 1) {
        for (int mask = 0; mask < (1 << n); ++mask) {
            Vec d(n);
            for (int i = 0; i < n; ++i) d[i] = (mask >> i) & 1 ? -1.0 : 1.0;
            p.add(d, std::sqrt(static_cast<double>(n)));
        }
    }
    return p;
}

HPolytope simplex_corner(int n)
{
    HPolytope p;
    p.n = n;
    Vec ones = Vec::Ones(n);
    for (int i = 0; i < n; ++i) {
        Vec e = zero_vec(n);
        e[i] = -1.0;
        p.add(e, 0.0);
    }
    p.add(ones, 1.0);
    return p;
}

Chebyshev chebyshev(const HPolytope& p)
{
    const auto m = static_cast<Eigen::Index>(p.size());
    Eigen::MatrixXd A(m + 1, p.n + 1);
    Eigen::VectorXd b(m + 1);
    A.topLeftCorner(m, p.n) = constraint_matrix(p);
    A.col(p.n).head(m).setOnes();
    A.row(m).setZero();
    A(m, p.n) = -1.0;
    b.head(m) = rhs(p);
    b[m] = 0.0;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(p.n + 1);
    c[p.n] = 1.0;
    const auto res = lp_maximize(c, A, b);
    if (res.status == LpResult::Status::Unbounded) throw StructuralError("chebyshev: unbounded polytope");
    if (res.status != LpResult::Status::Optimal) throw StructuralError("chebyshev: infeasible polytope");
    if (res.x[p.n] < -1e-12) throw StructuralError("chebyshev: empty polytope");
    Chebyshev out;
    out.centre = res.x.head(p.n);
    out.radius = res.x[p.n];
    return out;
}

std::vector<Vec> polytope_vertices(const HPolytope& p)
{
    const int n = p.n;
    const int m = static_cast<int>(p.size());
    std::vector<Vec> verts;
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    if (m < n + 1) throw StructuralError("polytope_vertices: too few halfspaces");
    while (true) {
        Eigen::MatrixXd M(n, n);
        Eigen::VectorXd r(n);
        for (int i = 0; i < n; ++i) {
            M.row(i) = p.a[idx[i]].transpose();
            r[i] = p.b[idx[i]];
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(M);
        if (lu.rank() == n && std::abs(lu.determinant()) > 1e-12) {
            Vec x = lu.solve(r);
            if (p.contains(x, kOnPlane)) verts.push_back(x);
        }
        int k = n - 1;
        while (k >= 0 && idx[k] == m - n + k) --k;
        if (k < 0) break;
        ++idx[k];
        for (int j = k + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
    }
    dedupe(verts, 1e-9);
    if (static_cast<int>(verts.size()) < n + 1) throw StructuralError("polytope_vertices: degenerate polytope");
    return verts;
}

Estimate polytope_volume(const HPolytope& p, VolumeMethod method, std::size_t samples, std::uint64_t seed)
{
    if (method == VolumeMethod::MonteCarlo || p.n > 3) return volume_mc(p, samples, seed);
    Estimate e;
    e.samples = 0;
    if (p.n == 1) {
        double lo = -INFINITY, hi = INFINITY;
        for (std::size_t j = 0; j < p.size(); ++j) {
            if (p.a[j][0] > 0)
                hi = std::min(hi, p.b[j] / p.a[j][0]);
            else
                lo = std::max(lo, p.b[j] / p.a[j][0]);
        }
        if (!std::isfinite(lo) || !std::isfinite(hi)) throw StructuralError("polytope_volume: unbounded");
        e.value = std::max(0.0, hi - lo);
        return e;
    }
    e.value = Body::from(p).volume();
    return e;
}

double hull_area_2d(std::vector<Eigen::Vector2d> pts)
{
    if (pts.size() < 3) return 0.0;
    std::sort(pts.begin(), pts.end(),
              [](const auto& a, const auto& b) { return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y()); });
    auto cross = [](const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
        return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
    };
    std::vector<Eigen::Vector2d> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
        while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i - 1]) <= 0) --k;
        hull[k++] = pts[i - 1];
    }
    hull.resize(k - 1);
    double s = 0.0;
    for (std::size_t i = 0; i < hull.size(); ++i) {
        const auto& a = hull[i];
        const auto& b = hull[(i + 1) % hull.size()];
        s += a.x() * b.y() - a.y() * b.x();
    }
    return 0.5 * std::abs(s);
}

Body Body::from(const HPolytope& p)
{
    if (p.n != 2 && p.n != 3) throw CapabilityError("Body: only dimensions 2 and 3");
    const auto verts = polytope_vertices(p);
    Body body;
    body.n_ = p.n;
    if (p.n == 2) {
        Vec c = zero_vec(2);
        for (const auto& v : verts) c += v;
        c /= static_cast<double>(verts.size());
        std::vector<Vec> loop = verts;
        std::sort(loop.begin(), loop.end(), [&](const Vec& x, const Vec& y) {
            return std::atan2(x[1] - c[1], x[0] - c[0]) < std::atan2(y[1] - c[1], y[0] - c[0]);
        });
        body.faces_.push_back(std::move(loop));
        return body;
    }
    for (std::size_t j = 0; j < p.size(); ++j) {
        std::vector<Vec> face;
        for (const auto& v : verts)
            if (std::abs(p.a[j].dot(v) - p.b[j]) <= kOnPlane) face.push_back(v);
        if (face.size() < 3) continue;
        sort_loop(face, p.a[j]);
        body.faces_.push_back(std::move(face));
    }
    return body;
}

Body Body::clip(const Vec& dir, double offset) const
{
    Body out;
    out.n_ = n_;
    if (faces_.empty()) return out;
    auto [lo, hi] = support(dir);
    if (hi <= offset) return *this;
    if (lo >= offset) return out;
    constexpr double tol = 1e-13;
    auto side = [&](const Vec& x) { return dir.dot(x) - offset; };
    std::vector<Vec> cap;
    for (const auto& loop : faces_) {
        std::vector<Vec> kept;
        for (std::size_t i = 0; i < loop.size(); ++i) {
            const Vec& p = loop[i];
            const Vec& q = loop[(i + 1) % loop.size()];
            const double dp = side(p), dq = side(q);
            const bool pin = dp <= tol, qin = dq <= tol;
            if (pin) kept.push_back(p);
            if (pin && std::abs(dp) <= tol) cap.push_back(p);
            if (pin != qin && std::abs(dp - dq) > 0.0) {
                const double t = dp / (dp - dq);
                Vec x = p + t * (q - p);
                kept.push_back(x);
                cap.push_back(x);
            }
        }
        drop_repeats(kept, 1e-12);
        if (kept.size() >= 3) out.faces_.push_back(std::move(kept));
    }
    if (n_ == 3) {
        dedupe(cap, 1e-12);
        if (cap.size() >= 3) {
            sort_loop(cap, dir);
            out.faces_.push_back(std::move(cap));
        }
    }
    return out;
}

double Body::volume() const
{
    if (faces_.empty()) return 0.0;
    if (n_ == 2) return std::abs(loop_area_2d(faces_.front()));
    Vec ref = zero_vec(3);
    std::size_t count = 0;
    for (const auto& f : faces_)
        for (const auto& v : f) {
            ref += v;
            ++count;
        }
    ref /= static_cast<double>(count);
    CompensatedSum vol;
    for (const auto& f : faces_) {
        const Eigen::Vector3d a = (f[0] - ref).head<3>();
        for (std::size_t i = 1; i + 1 < f.size(); ++i) {
            const Eigen::Vector3d b = (f[i] - ref).head<3>();
            const Eigen::Vector3d c = (f[i + 1] - ref).head<3>();
            vol.add(std::abs(a.dot(b.cross(c))) / 6.0);
        }
    }
    return vol.value();
}

std::vector<Vec> Body::vertices() const
{
    std::vector<Vec> out;
    for (const auto& f : faces_) out.insert(out.end(), f.begin(), f.end());
    dedupe(out, 1e-12);
    return out;
}

std::pair<double, double> Body::support(const Vec& dir) const
{
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& f : faces_)
        for (const auto& v : f) {
            const double d = dir.dot(v);
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
    return {lo, hi};
}

}  // namespace sweepout
