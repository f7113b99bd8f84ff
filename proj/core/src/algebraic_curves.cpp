#include "sweepout/algebraic_curves.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sweepout {

int Poly1::degree() const
{
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
        if (c[i] != 0.0) return i;
    return -1;
}

double Poly1::operator()(double x) const
{
    double v = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
    return v;
}

Poly1 Poly1::derivative() const
{
    Poly1 d;
    for (std::size_t i = 1; i < c.size(); ++i) d.c.push_back(c[i] * static_cast<double>(i));
    return d;
}

Poly1 Poly1::from_roots(const std::vector<double>& roots, double lead)
{
    Poly1 p({lead});
    for (double r : roots) p = p * Poly1({-r, 1.0});
    return p;
}

Poly1 operator*(const Poly1& a, const Poly1& b)
{
    if (a.c.empty() || b.c.empty()) return Poly1();
    std::vector<double> out(a.c.size() + b.c.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j) out[i + j] += a.c[i] * b.c[j];
    return Poly1(std::move(out));
}

Poly2::Poly2(int degree) : d(degree), c(size_for(degree), 0.0)
{
    if (degree < 0) throw StructuralError("Poly2 degree must be nonnegative");
}

double Poly2::operator()(double x, double y) const
{
    double xp[16], yp[16];
    xp[0] = yp[0] = 1.0;
    for (int i = 1; i <= d; ++i) {
        xp[i] = xp[i - 1] * x;
        yp[i] = yp[i - 1] * y;
    }
    double v = 0.0;
    for (int s = 0; s <= d; ++s)
        for (int j = 0; j <= s; ++j) v += c[index(s - j, j)] * xp[s - j] * yp[j];
    return v;
}

double Poly2::norm() const
{
    double s = 0.0;
    for (double x : c) s += x * x;
    return std::sqrt(s);
}

double Poly2::max_abs() const
{
    double m = 0.0;
    for (double x : c) m = std::max(m, std::abs(x));
    return m;
}

Poly2 Poly2::normalized() const
{
    const double nn = norm();
    if (nn == 0.0) throw DomainError("cannot normalize the zero polynomial");
    Poly2 q = *this;
    for (double& x : q.c) x /= nn;
    return q;
}

Poly2 Poly2::random_unit(int degree, Rng& rng)
{
    if (degree > 15) throw CapacityError("Poly2 degree above 15 is not supported");
    Poly2 p(degree);
    do {
        for (double& x : p.c) x = rng.normal();
    } while (p.norm() == 0.0);
    return p.normalized();
}

namespace {

constexpr double kZeroThreshold = 1e-14;

double max_abs(const std::vector<double>& v)
{
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// Drops coefficients below threshold * scale from the top and rescales to max 1.
void trim_normalize(std::vector<double>& v, double scale)
{
    while (!v.empty() && std::abs(v.back()) <= kZeroThreshold * scale) v.pop_back();
    const double m = max_abs(v);
    if (m == 0.0) {
        v.clear();
        return;
    }
    for (double& x : v) x /= m;
}

std::vector<double> remainder(std::vector<double> a, const std::vector<double>& b, double& scale)
{
    const int db = static_cast<int>(b.size()) - 1;
    const double lead = b.back();
    scale = max_abs(a);
    for (int i = static_cast<int>(a.size()) - 1; i >= db; --i) {
        const double f = a[i] / lead;
        scale = std::max(scale, std::abs(f) * max_abs(b));
        for (int j = 0; j <= db; ++j) a[i - db + j] -= f * b[j];
        a[i] = 0.0;
    }
    a.resize(std::max(db, 0));
    return a;
}

std::vector<std::vector<double>> sturm_sequence(const Poly1& p)
{
    std::vector<std::vector<double>> seq;
    std::vector<double> p0 = p.c;
    trim_normalize(p0, max_abs(p0));
    if (p0.empty()) throw DomainError("root isolation of the zero polynomial");
    seq.push_back(p0);
    std::vector<double> p1 = Poly1(p0).derivative().c;
    trim_normalize(p1, max_abs(p1));
    if (p1.empty()) return seq;
    seq.push_back(p1);
    while (seq.back().size() > 1) {
        double scale = 0.0;
        std::vector<double> r = remainder(seq[seq.size() - 2], seq.back(), scale);
        for (double& x : r) x = -x;
        trim_normalize(r, scale);
        if (r.empty()) break;
        seq.push_back(std::move(r));
    }
    return seq;
}

int sign_changes(const std::vector<std::vector<double>>& seq, double x)
{
    int changes = 0, last = 0;
    for (const auto& q : seq) {
        double v = 0.0;
        for (auto it = q.rbegin(); it != q.rend(); ++it) v = v * x + *it;
        const int s = (v > 0) - (v < 0);
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

void isolate(const std::vector<std::vector<double>>& seq, double a, double b, int va, int vb,
             std::vector<double>& out)
{
    const int count = va - vb;
    if (count <= 0) return;
    if (b - a <= 1e-12) {
        out.push_back(0.5 * (a + b));
        return;
    }
    const double m = 0.5 * (a + b);
    const int vm = sign_changes(seq, m);
    isolate(seq, a, m, va, vm, out);
    isolate(seq, m, b, vm, vb, out);
}

}  // namespace

int sturm_count(const Poly1& p, double a, double b)
{
    const auto seq = sturm_sequence(p);
    return sign_changes(seq, a) - sign_changes(seq, b);
}

std::vector<double> sturm_roots_mod2(const Poly1& p, double lo, double hi)
{
    const auto seq = sturm_sequence(p);
    std::vector<double> distinct;
    if (!(lo < hi)) return distinct;
    isolate(seq, lo, hi, sign_changes(seq, lo), sign_changes(seq, hi), distinct);
    std::erase_if(distinct, [&](double r) { return !(r > lo && r < hi); });
    if (distinct.empty()) return distinct;

    // Parity from the sign of p between consecutive distinct roots.
    std::vector<double> probes;
    probes.push_back(0.5 * (lo + distinct.front()));
    for (std::size_t i = 0; i + 1 < distinct.size(); ++i) probes.push_back(0.5 * (distinct[i] + distinct[i + 1]));
    probes.push_back(0.5 * (distinct.back() + hi));
    std::vector<double> odd;
    for (std::size_t i = 0; i < distinct.size(); ++i) {
        const double left = p(probes[i]), right = p(probes[i + 1]);
        if ((left > 0) != (right > 0)) odd.push_back(distinct[i]);
    }
    return odd;
}

Poly1 restrict_to_line(const Poly2& p, const Vec& point, const Vec& direction)
{
    if (direction.size() != 2 || point.size() != 2) throw StructuralError("restrict_to_line expects planar input");
    if (direction.squaredNorm() == 0.0) throw DomainError("restrict_to_line: zero direction");
    std::vector<Poly1> xp{Poly1({1.0})}, yp{Poly1({1.0})};
    const Poly1 X({point[0], direction[0]}), Y({point[1], direction[1]});
    for (int i = 1; i <= p.d; ++i) {
        xp.push_back(xp.back() * X);
        yp.push_back(yp.back() * Y);
    }
    std::vector<double> out(p.d + 1, 0.0);
    for (int s = 0; s <= p.d; ++s)
        for (int j = 0; j <= s; ++j) {
            const double coef = p.at(s - j, j);
            if (coef == 0.0) continue;
            const Poly1 term = xp[s - j] * yp[j];
            for (std::size_t t = 0; t < term.c.size(); ++t) out[t] += coef * term.c[t];
        }
    return Poly1(std::move(out));
}

namespace {

struct Line {
    Vec normal;
    double offset;
};

Line random_line(Rng& rng)
{
    const double theta = std::numbers::pi * rng.uniform();
    const double p = rng.uniform(-1.0, 1.0);
    return {make_vec({std::cos(theta), std::sin(theta)}), p};
}

Estimate finish(const std::vector<double>& values)
{
    const MeanStat st = mean_and_stderr(values);
    return {st.mean, st.stderr_, st.count};
}

}  // namespace

Estimate crofton_length(const Poly2& p, std::size_t n_lines, std::uint64_t seed)
{
    if (n_lines < 1) throw DomainError("crofton_length needs at least one line");
    if (p.norm() == 0.0) throw DomainError("crofton_length of the zero polynomial");
    Rng rng(seed, 21);
    std::vector<double> values(n_lines);
    for (std::size_t s = 0; s < n_lines; ++s) {
        const Line L = random_line(rng);
        const double half = std::sqrt(std::max(0.0, 1.0 - L.offset * L.offset));
        const Vec base = L.offset * L.normal;
        const Vec dir = make_vec({-L.normal[1], L.normal[0]});
        const Poly1 q = restrict_to_line(p, base, dir);
        std::size_t count = 0;
        if (!q.is_zero() && half > 0.0) count = sturm_roots_mod2(q, -half, half).size();
        if (static_cast<int>(count) > p.d)
            throw Error("crofton_length: a line met a degree-" + std::to_string(p.d) + " curve " +
                        std::to_string(count) + " times");
        values[s] = std::numbers::pi * static_cast<double>(count);
    }
    return finish(values);
}

Estimate crofton_length(const SegmentCycle& c, std::size_t n_lines, std::uint64_t seed)
{
    if (n_lines < 1) throw DomainError("crofton_length needs at least one line");
    if (c.n != 2) throw CapabilityError("crofton_length supports planar cycles only");
    Rng rng(seed, 21);
    std::vector<double> values(n_lines);
    for (std::size_t s = 0; s < n_lines; ++s) {
        const Line L = random_line(rng);
        std::size_t count = 0;
        for (const auto& seg : c.segments) {
            const double sa = seg.a.dot(L.normal) - L.offset, sb = seg.b.dot(L.normal) - L.offset;
            if ((sa < 0.0) != (sb < 0.0)) ++count;
        }
        values[s] = std::numbers::pi * static_cast<double>(count);
    }
    return finish(values);
}

SegmentCycle marching_squares(const Poly2& p, int N)
{
    if (N < 4) throw DomainError("marching_squares needs N >= 4");
    SegmentCycle out;
    out.n = 2;
    const double h = 2.0 / N;
    std::vector<double> val(static_cast<std::size_t>(N + 1) * (N + 1));
    auto coord = [&](int i) { return -1.0 + i * h; };
    for (int j = 0; j <= N; ++j)
        for (int i = 0; i <= N; ++i) val[static_cast<std::size_t>(j) * (N + 1) + i] = p(coord(i), coord(j));
    auto v = [&](int i, int j) { return val[static_cast<std::size_t>(j) * (N + 1) + i]; };
    auto cut = [&](double x0, double y0, double va, double x1, double y1, double vb) {
        const double t = va / (va - vb);
        return make_vec({x0 + t * (x1 - x0), y0 + t * (y1 - y0)});
    };
    auto emit = [&](const Vec& a, const Vec& b) {
        Vec ca, cb;
        if (clip_to_ball(a, b, 1.0, ca, cb)) out.add_free(ca, cb);
    };
    for (int j = 0; j < N; ++j) {
        for (int i = 0; i < N; ++i) {
            const double x0 = coord(i), x1 = coord(i + 1), y0 = coord(j), y1 = coord(j + 1);
            const double nx = std::clamp(0.0, x0, x1), ny = std::clamp(0.0, y0, y1);
            if (nx * nx + ny * ny >= 1.0) continue;
            const double bl = v(i, j), br = v(i + 1, j), tr = v(i + 1, j + 1), tl = v(i, j + 1);
            const bool sbl = bl > 0, sbr = br > 0, str = tr > 0, stl = tl > 0;
            Vec pts[4];
            bool has[4] = {false, false, false, false};
            if (sbl != sbr) has[0] = true, pts[0] = cut(x0, y0, bl, x1, y0, br);
            if (sbr != str) has[1] = true, pts[1] = cut(x1, y0, br, x1, y1, tr);
            if (stl != str) has[2] = true, pts[2] = cut(x0, y1, tl, x1, y1, tr);
            if (sbl != stl) has[3] = true, pts[3] = cut(x0, y0, bl, x0, y1, tl);
            const int count = has[0] + has[1] + has[2] + has[3];
            if (count == 2) {
                int first = -1, second = -1;
                for (int e = 0; e < 4; ++e)
                    if (has[e]) (first < 0 ? first : second) = e;
                emit(pts[first], pts[second]);
            } else if (count == 4) {
                const bool centre = p(0.5 * (x0 + x1), 0.5 * (y0 + y1)) > 0;
                if (centre == sbl) {
                    emit(pts[0], pts[1]);
                    emit(pts[2], pts[3]);
                } else {
                    emit(pts[3], pts[0]);
                    emit(pts[1], pts[2]);
                }
            }
        }
    }
    return out;
}

Estimate sublevel_volume_mc(const Poly1& p, double delta, std::size_t samples, std::uint64_t seed)
{
    if (!(delta > 0.0)) throw DomainError("sublevel volume needs delta > 0");
    if (p.is_zero()) throw DomainError("sublevel volume of the zero polynomial");
    if (samples < 1) throw DomainError("sublevel volume needs samples >= 1");
    Rng rng(seed, 31);
    std::vector<double> values(samples);
    for (auto& x : values) x = std::abs(p(rng.uniform(-1.0, 1.0))) <= delta ? 2.0 : 0.0;
    return finish(values);
}

Estimate sublevel_volume_mc(const Poly2& p, double delta, std::size_t samples, std::uint64_t seed)
{
    if (!(delta > 0.0)) throw DomainError("sublevel volume needs delta > 0");
    if (p.norm() == 0.0) throw DomainError("sublevel volume of the zero polynomial");
    if (samples < 1) throw DomainError("sublevel volume needs samples >= 1");
    Rng rng(seed, 31);
    std::vector<double> values(samples);
    for (auto& v : values) {
        double x, y;
        do {
            x = rng.uniform(-1.0, 1.0);
            y = rng.uniform(-1.0, 1.0);
        } while (x * x + y * y >= 1.0);
        v = std::abs(p(x, y)) <= delta ? std::numbers::pi : 0.0;
    }
    return finish(values);
}

ContinuityResult continuity_experiment(int d, const std::vector<double>& etas, std::size_t trials, int rasterN,
                                       std::uint64_t seed)
{
    if (d < 1) throw DomainError("continuity experiment needs degree >= 1");
    if (etas.empty() || trials < 1) throw DomainError("continuity experiment needs etas and trials");
    for (std::size_t i = 0; i < etas.size(); ++i) {
        if (etas[i] < 0.0) throw DomainError("eta values must be nonnegative");
        if (i > 0 && etas[i] > etas[i - 1]) throw DomainError("eta values must be decreasing");
    }
    ContinuityResult res;
    res.d = d;
    res.rasterN = rasterN;
    res.seed = seed;
    const CubicalGrid grid{2, rasterN};
    Rng rng(seed, 41);
    for (double eta : etas) {
        std::vector<double> dist;
        std::size_t attempts = 0;
        while (dist.size() < trials) {
            if (++attempts > 100 * trials) throw ConvergenceError("continuity experiment: too many empty curves");
            const Poly2 P = Poly2::random_unit(d, rng);
            const Poly2 E = Poly2::random_unit(d, rng);
            Poly2 Q = P;
            for (std::size_t t = 0; t < Q.c.size(); ++t) Q.c[t] += eta * E.c[t];
            Q = Q.normalized();
            const GridChain cp = boundary(top_cells_where(grid, [&](const Vec& x) { return P(x[0], x[1]) > 0; }));
            const GridChain cq = boundary(top_cells_where(grid, [&](const Vec& x) { return Q(x[0], x[1]) > 0; }));
            if (cp.empty() && cq.empty()) {
                ++res.resampled;
                continue;
            }
            dist.push_back(area_distance_codim1(cp, cq));
        }
        const MeanStat st = mean_and_stderr(dist);
        res.rows.push_back({eta, st.mean, st.stderr_, st.count});
    }
    std::vector<double> lx, ly;
    for (const auto& r : res.rows)
        if (r.eta > 0.0 && r.mean_distance > 0.0) {
            lx.push_back(std::log(r.eta));
            ly.push_back(std::log(r.mean_distance));
        }
    if (lx.size() >= 2) {
        const LineFit f = least_squares(lx, ly);
        res.epsilon_hat = f.slope;
        res.intercept = f.intercept;
    }
    return res;
}

}  // namespace sweepout
