#include "sweepout/cycle_families.hpp"

#include "sweepout/algebraic_curves.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sweepout {

int ParamDomain::dims() const
{
    int d = 0;
    for (const auto& f : factors) d += f.dims;
    return d;
}

Param ParamDomain::from_unit(const std::vector<double>& u) const
{
    if (static_cast<int>(u.size()) != dims()) throw StructuralError("parameter chart: wrong number of coordinates");
    Param out;
    out.reserve(u.size());
    std::size_t pos = 0;
    for (const auto& f : factors) {
        const auto first = out.size();
        switch (f.kind) {
        case DomainFactor::Kind::Interval:
        case DomainFactor::Kind::Box:
            for (int i = 0; i < f.dims; ++i) out.push_back(f.lo + (f.hi - f.lo) * u[pos + i]);
            break;
        case DomainFactor::Kind::Simplex:
            for (int i = 0; i < f.dims; ++i) out.push_back(f.lo + (f.hi - f.lo) * u[pos + i]);
            std::sort(out.begin() + static_cast<std::ptrdiff_t>(first), out.end());
            break;
        case DomainFactor::Kind::Sphere:
        case DomainFactor::Kind::ProjectiveSphere: {
            double norm2 = 0.0;
            for (int i = 0; i < f.dims; ++i) {
                const double g = normal_quantile(u[pos + i]);
                out.push_back(g);
                norm2 += g * g;
            }
            if (norm2 < 1e-24) {
                for (int i = 0; i < f.dims; ++i) out[first + i] = i == 0 ? 1.0 : 0.0;
            } else {
                const double nn = std::sqrt(norm2);
                for (int i = 0; i < f.dims; ++i) out[first + i] /= nn;
            }
            break;
        }
        }
        pos += f.dims;
    }
    return out;
}

static const char* kind_name(DomainFactor::Kind k)
{
    switch (k) {
    case DomainFactor::Kind::Interval: return "interval";
    case DomainFactor::Kind::Box: return "box";
    case DomainFactor::Kind::Simplex: return "simplex";
    case DomainFactor::Kind::Sphere: return "sphere";
    case DomainFactor::Kind::ProjectiveSphere: return "projective_sphere";
    }
    return "unknown";
}

std::string ParamDomain::kind() const
{
    if (factors.size() == 1) return kind_name(factors[0].kind);
    std::string s = "product(";
    for (std::size_t i = 0; i < factors.size(); ++i) {
        if (i) s += ",";
        s += kind_name(factors[i].kind);
    }
    return s + ")";
}

ParamDomain ParamDomain::operator*(const ParamDomain& o) const
{
    ParamDomain d = *this;
    d.factors.insert(d.factors.end(), o.factors.begin(), o.factors.end());
    return d;
}

ParamDomain interval_domain(double lo, double hi)
{
    return ParamDomain{{DomainFactor{DomainFactor::Kind::Interval, 1, lo, hi}}};
}

ParamDomain simplex_domain(int p)
{
    return ParamDomain{{DomainFactor{DomainFactor::Kind::Simplex, p, -1.0, 1.0}}};
}

ParamDomain projective_sphere_domain(int m)
{
    return ParamDomain{{DomainFactor{DomainFactor::Kind::ProjectiveSphere, m, -1.0, 1.0}}};
}

double Cycle::volume() const
{
    switch (k) {
    case 0: return static_cast<double>(points.size());
    case 1: return chain_volume(segments);
    default: {
        CompensatedSum s;
        for (const auto& d : disks) s.add(std::numbers::pi * d.radius * d.radius);
        return s.value();
    }
    }
}

bool Cycle::empty() const { return points.empty() && segments.empty() && disks.empty(); }

double Cycle::distance_to(const Vec& x) const
{
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : points) best = std::min(best, (p - x).norm());
    for (const auto& s : segments.segments) best = std::min(best, point_segment_distance(x, s.a, s.b));
    for (const auto& d : disks) {
        const Vec r = x - d.centre;
        const double a = r.dot(d.u), b = r.dot(d.v);
        const Vec normal_part = r - a * d.u - b * d.v;
        const double radial = std::max(0.0, std::hypot(a, b) - d.radius);
        best = std::min(best, std::hypot(normal_part.norm(), radial));
    }
    return best;
}

Cycle empty_cycle(int k, int n)
{
    Cycle c;
    c.k = k;
    c.n = n;
    c.segments.n = n;
    return c;
}

std::vector<double> cancel_points(std::vector<double> xs)
{
    std::sort(xs.begin(), xs.end());
    std::vector<double> out;
    for (std::size_t i = 0; i < xs.size();) {
        std::size_t j = i;
        while (j < xs.size() && xs[j] == xs[i]) ++j;
        if ((j - i) % 2 == 1) out.push_back(xs[i]);
        i = j;
    }
    return out;
}

Family vertical_lines()
{
    Family f;
    f.label = "vertical_lines";
    f.k = 1;
    f.n = 2;
    f.domain = interval_domain();
    f.evaluate = [](const Param& t) {
        Cycle c = empty_cycle(1, 2);
        const double x = t.at(0);
        if (std::abs(x) >= 1.0) return c;
        const double h = std::sqrt(1.0 - x * x);
        c.segments.add_free(make_vec({x, -h}), make_vec({x, h}));
        return c;
    };
    f.witness = [](const std::vector<Vec>& pts) -> std::optional<Param> {
        if (pts.empty()) return Param{0.0};
        for (const auto& p : pts)
            if (p[0] != pts[0][0]) return std::nullopt;
        return Param{pts[0][0]};
    };
    return f;
}

Family point_tuples(int p)
{
    if (p < 1) throw DomainError("point_tuples needs p >= 1");
    Family f;
    f.label = "point_tuples";
    f.k = 0;
    f.n = 1;
    f.domain = simplex_domain(p);
    f.evaluate = [p](const Param& t) {
        if (static_cast<int>(t.size()) != p) throw StructuralError("point_tuples: wrong parameter size");
        Cycle c = empty_cycle(0, 1);
        for (double x : cancel_points(t))
            if (std::abs(x) < 1.0) c.points.push_back(make_vec({x}));
        return c;
    };
    f.witness = [p](const std::vector<Vec>& pts) -> std::optional<Param> {
        std::vector<double> xs;
        for (const auto& q : pts) xs.push_back(q[0]);
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        if (static_cast<int>(xs.size()) > p) return std::nullopt;
        // Unused coordinates sit on the boundary, where they contribute nothing.
        while (static_cast<int>(xs.size()) < p) xs.push_back(1.0);
        return xs;
    };
    return f;
}

Family parallel_tuples(int p)
{
    Family f = suspend(point_tuples(p), 1);
    f.label = "parallel_tuples";
    return f;
}

Family roots_family(int p)
{
    if (p < 1) throw DomainError("roots_family needs p >= 1");
    Family f;
    f.label = "roots";
    f.k = 0;
    f.n = 1;
    f.domain = projective_sphere_domain(p + 1);
    f.evaluate = [](const Param& coeffs) {
        Cycle c = empty_cycle(0, 1);
        for (double r : sturm_roots_mod2(Poly1(coeffs), -1.0, 1.0)) c.points.push_back(make_vec({r}));
        return c;
    };
    f.witness = [p](const std::vector<Vec>& pts) -> std::optional<Param> {
        std::vector<double> xs;
        for (const auto& q : pts) xs.push_back(q[0]);
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        if (static_cast<int>(xs.size()) > p) return std::nullopt;
        Poly1 poly = Poly1::from_roots(xs);
        poly.c.resize(p + 1, 0.0);
        double nn = 0.0;
        for (double x : poly.c) nn += x * x;
        for (double& x : poly.c) x /= std::sqrt(nn);
        return poly.c;
    };
    return f;
}

Family planar_curves(int d, int resolution)
{
    if (d < 1) throw DomainError("planar_curves needs degree >= 1");
    const int m = static_cast<int>(Poly2::size_for(d));
    Family f;
    f.label = "planar_curves";
    f.k = 1;
    f.n = 2;
    f.domain = projective_sphere_domain(m);
    f.evaluate = [d, resolution](const Param& coeffs) {
        Poly2 P(d);
        P.c = coeffs;
        Cycle c = empty_cycle(1, 2);
        c.segments = marching_squares(P, resolution);
        return c;
    };
    // A curve through the points: a null vector of the monomial matrix.
    f.witness = [d, m](const std::vector<Vec>& pts) -> std::optional<Param> {
        if (static_cast<int>(pts.size()) >= m) return std::nullopt;
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(std::max<int>(1, static_cast<int>(pts.size())), m);
        for (std::size_t r = 0; r < pts.size(); ++r)
            for (int s = 0; s <= d; ++s)
                for (int j = 0; j <= s; ++j)
                    A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(Poly2::index(s - j, j))) =
                        std::pow(pts[r][0], s - j) * std::pow(pts[r][1], j);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
        const Eigen::VectorXd v = svd.matrixV().col(m - 1);
        return Param(v.data(), v.data() + v.size());
    };
    return f;
}

Family suspend(const Family& f, int k_extra)
{
    if (f.k != 0) throw CapabilityError("suspend expects a family of 0-cycles");
    if (k_extra != 1 && k_extra != 2) throw CapabilityError("suspend supports k_extra of 1 or 2 only");
    Family g;
    g.label = "suspend(" + f.label + ")";
    g.k = k_extra;
    g.n = f.n + k_extra;
    g.domain = f.domain;
    const int n0 = f.n, n = g.n;
    auto inner = f.evaluate;
    g.evaluate = [inner, n0, n, k_extra](const Param& t) {
        const Cycle c0 = inner(t);
        Cycle c = empty_cycle(k_extra, n);
        for (const auto& x : c0.points) {
            const double r2 = 1.0 - x.squaredNorm();
            if (r2 <= 0.0) continue;
            const double rho = std::sqrt(r2);
            Vec centre = Vec::Zero(n);
            centre.head(n0) = x;
            if (k_extra == 1) {
                Vec a = centre, b = centre;
                a[n0] = -rho;
                b[n0] = rho;
                c.segments.add_free(a, b);
            } else {
                Disk d;
                d.centre = centre;
                d.u = Vec::Zero(n);
                d.v = Vec::Zero(n);
                d.u[n0] = 1.0;
                d.v[n0 + 1] = 1.0;
                d.radius = rho;
                c.disks.push_back(d);
            }
        }
        return c;
    };
    if (f.witness) {
        auto w = f.witness;
        g.witness = [w, n0](const std::vector<Vec>& pts) {
            std::vector<Vec> proj;
            for (const auto& p : pts) proj.push_back(p.head(n0));
            return w(proj);
        };
    }
    return g;
}

Family translate(const Family& f)
{
    if (f.k > 1 || f.n > 3) throw CapabilityError("translate supports 0- and 1-cycles in dimension <= 3");
    Family g;
    g.label = "translate(" + f.label + ")";
    g.k = f.k;
    g.n = f.n + 1;
    g.domain = f.domain * interval_domain();
    const int n0 = f.n, k = f.k;
    auto inner = f.evaluate;
    g.evaluate = [inner, n0, k](const Param& pt) {
        Cycle c = empty_cycle(k, n0 + 1);
        const double t = pt.back();
        if (std::abs(t) >= 1.0) return c;
        const Cycle c0 = inner(Param(pt.begin(), pt.end() - 1));
        auto lift = [&](const Vec& x) {
            Vec y(n0 + 1);
            y.head(n0) = x;
            y[n0] = t;
            return y;
        };
        for (const auto& x : c0.points) {
            const Vec y = lift(x);
            if (y.squaredNorm() < 1.0) c.points.push_back(y);
        }
        for (const auto& s : c0.segments.segments) {
            Vec a, b;
            if (clip_to_ball(lift(s.a), lift(s.b), 1.0, a, b)) c.segments.add_free(a, b);
        }
        return c;
    };
    if (f.witness) {
        auto w = f.witness;
        g.witness = [w, n0](const std::vector<Vec>& pts) -> std::optional<Param> {
            if (pts.empty()) return std::nullopt;
            double t = 0.0;
            std::vector<Vec> proj;
            for (const auto& p : pts) {
                t += p[n0];
                proj.push_back(p.head(n0));
            }
            t /= static_cast<double>(pts.size());
            if (std::abs(t) >= 1.0) return std::nullopt;
            auto base = w(proj);
            if (!base) return std::nullopt;
            base->push_back(t);
            return base;
        };
    }
    return g;
}

Family sum_family(const Family& f, int copies)
{
    if (copies < 1) throw DomainError("sum_family needs copies >= 1");
    Family g;
    g.label = "sum(" + f.label + ")";
    g.k = f.k;
    g.n = f.n;
    for (int i = 0; i < copies; ++i) g.domain = g.domain * f.domain;
    const std::size_t block = static_cast<std::size_t>(f.domain.dims());
    auto inner = f.evaluate;
    const int k = f.k, n = f.n;
    g.evaluate = [inner, block, copies, k, n](const Param& pt) {
        Cycle c = empty_cycle(k, n);
        std::vector<double> xs;
        for (int i = 0; i < copies; ++i) {
            const auto first = pt.begin() + static_cast<std::ptrdiff_t>(i * block);
            const Cycle ci = inner(Param(first, first + static_cast<std::ptrdiff_t>(block)));
            if (k == 0 && n == 1) {
                for (const auto& p : ci.points) xs.push_back(p[0]);
            } else {
                c.points.insert(c.points.end(), ci.points.begin(), ci.points.end());
            }
            c.segments.segments.insert(c.segments.segments.end(), ci.segments.segments.begin(),
                                       ci.segments.segments.end());
            c.disks.insert(c.disks.end(), ci.disks.begin(), ci.disks.end());
        }
        if (k == 0 && n == 1)
            for (double x : cancel_points(xs)) c.points.push_back(make_vec({x}));
        return c;
    };
    return g;
}

static bool is_orthogonal(const Rotation& R)
{
    if (R.rows() != R.cols()) return false;
    const Rotation I = Rotation::Identity(R.rows(), R.cols());
    return (R.transpose() * R - I).cwiseAbs().maxCoeff() <= 1e-9;
}

Family rotate(const Family& f, const Rotation& R)
{
    if (R.rows() != f.n || !is_orthogonal(R)) throw StructuralError("rotate: matrix is not an orthogonal n x n matrix");
    Family g = f;
    g.label = "rotate(" + f.label + ")";
    auto inner = f.evaluate;
    g.evaluate = [inner, R](const Param& pt) {
        Cycle c = inner(pt);
        for (auto& p : c.points) p = R * p;
        for (auto& s : c.segments.segments) {
            s.a = R * s.a;
            s.b = R * s.b;
        }
        for (auto& d : c.disks) {
            d.centre = R * d.centre;
            d.u = R * d.u;
            d.v = R * d.v;
        }
        return c;
    };
    if (f.witness) {
        auto w = f.witness;
        g.witness = [w, R](const std::vector<Vec>& pts) {
            std::vector<Vec> back;
            for (const auto& p : pts) back.push_back(R.transpose() * p);
            return w(back);
        };
    }
    return g;
}

static Rotation plane_rotation(int n, int a, int b, double angle)
{
    Rotation R = Rotation::Identity(n, n);
    R(a, a) = std::cos(angle);
    R(a, b) = -std::sin(angle);
    R(b, a) = std::sin(angle);
    R(b, b) = std::cos(angle);
    return R;
}

Family rotate(const Family& f, double angle)
{
    if (f.n < 2) throw CapabilityError("rotation by an angle needs n >= 2");
    return rotate(f, plane_rotation(f.n, 0, 1, angle));
}

Rotation generic_rotation(int n)
{
    if (n < 2 || n > 4) throw CapabilityError("generic rotation needs 2 <= n <= 4");
    const double phi = std::numbers::phi;
    Rotation R = plane_rotation(n, 0, 1, std::atan(1.0 / (phi * phi)));
    if (n >= 3) {
        R = plane_rotation(n, 1, 2, std::atan(1.0 / (phi * phi * phi))) * R;
        R = plane_rotation(n, 0, 2, std::atan(1.0 / (phi * phi * phi * phi))) * R;
    }
    if (n == 4) R = plane_rotation(n, 2, 3, std::atan(1.0 / std::pow(phi, 5))) * R;
    return R;
}

Param sample_parameter(const ParamDomain& d, std::size_t i, Rng& rng)
{
    const int dims = d.dims();
    std::vector<double> u;
    if (dims <= static_cast<int>(small_primes().size()) && i % 2 == 0) {
        // Index 1 is the cube centre, whose coordinates all coincide; several
        // families degenerate there, so multi-dimensional streams skip it.
        u = halton(i / 2 + (dims > 1 ? 2 : 1), dims);
    } else {
        u.resize(dims);
        for (double& x : u) x = rng.uniform();
    }
    return d.from_unit(u);
}

FamilyStats family_max_volume(const Family& f, std::size_t budget, std::uint64_t seed)
{
    if (budget < 1) throw DomainError("family_max_volume needs budget >= 1");
    Rng rng(seed, 51);
    FamilyStats st;
    st.seed = seed;
    st.max_volume = -1.0;
    for (std::size_t i = 0; i < budget; ++i) {
        Param pt = sample_parameter(f.domain, i, rng);
        const double v = f.evaluate(pt).volume();
        if (v > st.max_volume || (v == st.max_volume && pt < st.argmax)) {
            st.max_volume = v;
            st.argmax = std::move(pt);
        }
        ++st.samples;
    }
    return st;
}

double cycle_area_distance(const SegmentCycle& a, const SegmentCycle& b, int N)
{
    const GridChain ra = boundary(rasterize_region(a, N));
    const GridChain rb = boundary(rasterize_region(b, N));
    return area_distance_codim1(ra, rb);
}

nlohmann::json to_json(const Family& f, const FamilyStats& stats)
{
    return {{"label", f.label},
            {"k", f.k},
            {"n", f.n},
            {"domain", {{"kind", f.domain.kind()}, {"dims", f.domain.dims()}}},
            {"stats",
             {{"max_volume", stats.max_volume},
              {"argmax", stats.argmax},
              {"samples", stats.samples},
              {"seed", stats.seed}}}};
}

}  // namespace sweepout
