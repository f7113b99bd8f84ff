#include "sweepout/skeleton_squeeze.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

namespace sweepout {

void SqueezeMap::validate() const
{
    if (n < 1 || n > 4) throw StructuralError("squeeze map: n must be in [1,4]");
    if (l < 0 || l >= n) throw StructuralError("squeeze map: need 0 <= l < n");
    if (!(s > 0.0)) throw StructuralError("squeeze map: lattice side must be positive");
    if (!(eps > 0.0 && eps < 1.0)) throw StructuralError("squeeze map: core fraction must lie in (0,1)");
    if (offset.size() != n) throw StructuralError("squeeze map: offset has the wrong dimension");
}

namespace {

using Local = std::array<double, 4>;

// The squeeze on the cube [-1,1]^d onto its l-skeleton, in local coordinates.
Local local_squeeze(Local u, int d, int l, double eps)
{
    if (l >= d) return u;
    double m = 0.0;
    for (int i = 0; i < d; ++i) m = std::max(m, std::abs(u[i]));
    const double scale = std::max(eps, m);
    for (int i = 0; i < d; ++i) u[i] /= scale;
    if (l == d - 1) return u;
    double mm = 0.0;
    int a = 0;
    for (int i = 0; i < d; ++i)
        if (std::abs(u[i]) > mm) {
            mm = std::abs(u[i]);
            a = i;
        }
    if (mm == 0.0) return u;
    Local face{};
    for (int i = 0, j = 0; i < d; ++i)
        if (i != a) face[j++] = u[i] / mm;
    face = local_squeeze(face, d - 1, l, eps);
    Local out{};
    for (int i = 0, j = 0; i < d; ++i) out[i] = (i == a) ? (u[a] > 0 ? mm : -mm) : mm * face[j++];
    return out;
}

// A face of a lattice cell: fixed axes carry a sign, free axes are listed.
struct FaceCtx {
    const SqueezeMap* m = nullptr;
    std::array<std::int64_t, 4> cell{};
    std::array<int, 4> sign{};
    std::array<int, 4> free_axes{};
    int d = 0;

    double centre(int axis) const { return m->offset[axis] + m->s * (static_cast<double>(cell[axis]) + 0.5); }

    Vec global(const Local& u) const
    {
        Vec x(m->n);
        for (int i = 0; i < m->n; ++i)
            if (sign[i] != 0) x[i] = m->offset[i] + m->s * static_cast<double>(cell[i] + (sign[i] > 0 ? 1 : 0));
        for (int j = 0; j < d; ++j) x[free_axes[j]] = centre(free_axes[j]) + 0.5 * m->s * u[j];
        return x;
    }

    SkeletonKey face_key() const
    {
        SkeletonKey k;
        k.lattice = m->lattice;
        for (int j = 0; j < d; ++j) k.axes |= 1u << free_axes[j];
        for (int i = 0; i < m->n; ++i) k.anchor[i] = cell[i] + (sign[i] > 0 ? 1 : 0);
        return k;
    }

    SkeletonKey cell_key() const
    {
        SkeletonKey k;
        k.lattice = m->lattice;
        k.axes = (1u << m->n) - 1;
        for (int i = 0; i < m->n; ++i) k.anchor[i] = cell[i];
        return k;
    }
};

Local lerp(const Local& a, const Local& b, double t, int d)
{
    Local r{};
    for (int i = 0; i < d; ++i) r[i] = a[i] + t * (b[i] - a[i]);
    return r;
}

void emit(std::vector<Segment>& out, Vec a, Vec b, bool on_skeleton, const SkeletonKey& key)
{
    if ((b - a).squaredNorm() <= 1e-26) return;
    Segment s;
    s.a = std::move(a);
    s.b = std::move(b);
    s.on_skeleton = on_skeleton;
    s.key = key;
    out.push_back(std::move(s));
}

void emit_curve(const FaceCtx& ctx, const Local& pa, const Local& pb, double tol, int depth,
                std::vector<Segment>& out)
{
    const double eps = ctx.m->eps;
    auto image = [&](const Local& u) {
        Local w{};
        for (int i = 0; i < ctx.d; ++i) w[i] = u[i] / eps;
        double m = 0.0;
        int a = 0;
        for (int i = 0; i < ctx.d; ++i)
            if (std::abs(w[i]) > m) {
                m = std::abs(w[i]);
                a = i;
            }
        if (m == 0.0) return ctx.global(w);
        Local face{};
        for (int i = 0, j = 0; i < ctx.d; ++i)
            if (i != a) face[j++] = w[i] / m;
        face = local_squeeze(face, ctx.d - 1, ctx.m->l, eps);
        Local r{};
        for (int i = 0, j = 0; i < ctx.d; ++i) r[i] = (i == a) ? w[a] : m * face[j++];
        return ctx.global(r);
    };
    const Vec qa = image(pa), qb = image(pb);
    const Local pm = lerp(pa, pb, 0.5, ctx.d);
    const Vec qm = image(pm);
    if (depth >= 16 || (qm - 0.5 * (qa + qb)).norm() <= tol) {
        emit(out, qa, qb, false, ctx.cell_key());
        return;
    }
    emit_curve(ctx, pa, pm, tol, depth + 1, out);
    emit_curve(ctx, pm, pb, tol, depth + 1, out);
}

void snap(Local& u, int d)
{
    for (int i = 0; i < d; ++i) {
        u[i] = std::clamp(u[i], -1.0, 1.0);
        if (std::abs(u[i] - 1.0) < 1e-9) u[i] = 1.0;
        if (std::abs(u[i] + 1.0) < 1e-9) u[i] = -1.0;
    }
}

void push_face(const FaceCtx& ctx, Local ua, Local ub, double tol, std::vector<Segment>& out)
{
    const int d = ctx.d;
    const double eps = ctx.m->eps;
    if (d == ctx.m->l) {
        snap(ua, d);
        snap(ub, d);
        emit(out, ctx.global(ua), ctx.global(ub), true, ctx.face_key());
        return;
    }
    std::vector<double> ts{0.0, 1.0};
    auto add_root = [&](double num, double den) {
        if (den == 0.0) return;
        const double t = num / den;
        if (t > 1e-15 && t < 1.0 - 1e-15) ts.push_back(t);
    };
    for (int i = 0; i < d; ++i) {
        const double di = ub[i] - ua[i];
        add_root(eps - ua[i], di);
        add_root(-eps - ua[i], di);
        for (int j = i + 1; j < d; ++j) {
            const double dj = ub[j] - ua[j];
            add_root(ua[j] - ua[i], di - dj);
            add_root(-ua[j] - ua[i], di + dj);
        }
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    for (std::size_t q = 0; q + 1 < ts.size(); ++q) {
        const double t0 = ts[q], t1 = ts[q + 1];
        if (t1 - t0 < 1e-14) continue;
        const Local pa = lerp(ua, ub, t0, d), pb = lerp(ua, ub, t1, d), mid = lerp(ua, ub, 0.5 * (t0 + t1), d);
        double mm = 0.0;
        int a = 0;
        for (int i = 0; i < d; ++i)
            if (std::abs(mid[i]) > mm) {
                mm = std::abs(mid[i]);
                a = i;
            }
        if (mm <= eps) {
            if (ctx.m->l == d - 1) {
                Local wa{}, wb{};
                for (int i = 0; i < d; ++i) {
                    wa[i] = std::clamp(pa[i] / eps, -1.0, 1.0);
                    wb[i] = std::clamp(pb[i] / eps, -1.0, 1.0);
                }
                emit(out, ctx.global(wa), ctx.global(wb), false, ctx.cell_key());
            } else {
                emit_curve(ctx, pa, pb, tol, 0, out);
            }
            continue;
        }
        // Central projection onto the face {u_a = +-1} maps the piece to a segment.
        const int sg = mid[a] > 0 ? 1 : -1;
        FaceCtx next = ctx;
        next.sign[ctx.free_axes[a]] = sg;
        next.d = d - 1;
        Local va{}, vb{};
        for (int i = 0, j = 0; i < d; ++i) {
            if (i == a) continue;
            next.free_axes[j] = ctx.free_axes[i];
            va[j] = std::clamp(pa[i] / std::abs(pa[a]), -1.0, 1.0);
            vb[j] = std::clamp(pb[i] / std::abs(pb[a]), -1.0, 1.0);
            ++j;
        }
        push_face(next, va, vb, tol, out);
    }
}

void push_one(const SqueezeMap& m, const Vec& a, const Vec& b, double tol, std::vector<Segment>& out)
{
    const Vec dir = b - a;
    std::vector<double> ts{0.0, 1.0};
    for (int i = 0; i < m.n; ++i) {
        if (dir[i] == 0.0) continue;
        const double lo = std::min(a[i], b[i]), hi = std::max(a[i], b[i]);
        const auto j0 = static_cast<std::int64_t>(std::ceil((lo - m.offset[i]) / m.s));
        const auto j1 = static_cast<std::int64_t>(std::floor((hi - m.offset[i]) / m.s));
        for (auto j = j0; j <= j1; ++j) {
            const double t = (m.offset[i] + m.s * static_cast<double>(j) - a[i]) / dir[i];
            if (t > 0.0 && t < 1.0) ts.push_back(t);
        }
    }
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    for (std::size_t q = 0; q + 1 < ts.size(); ++q) {
        const double t0 = ts[q], t1 = ts[q + 1];
        if (t1 - t0 < 1e-15) continue;
        const Vec pa = a + t0 * dir, pb = a + t1 * dir, mid = a + (0.5 * (t0 + t1)) * dir;
        FaceCtx ctx;
        ctx.m = &m;
        ctx.d = m.n;
        for (int i = 0; i < m.n; ++i) {
            ctx.cell[i] = static_cast<std::int64_t>(std::floor((mid[i] - m.offset[i]) / m.s));
            ctx.free_axes[i] = i;
        }
        Local ua{}, ub{};
        for (int i = 0; i < m.n; ++i) {
            const double c = ctx.centre(i);
            ua[i] = std::clamp((pa[i] - c) / (0.5 * m.s), -1.0, 1.0);
            ub[i] = std::clamp((pb[i] - c) / (0.5 * m.s), -1.0, 1.0);
        }
        push_face(ctx, ua, ub, tol, out);
    }
}

}  // namespace

Vec squeeze_point(const SqueezeMap& m, const Vec& x)
{
    m.validate();
    if (x.size() != m.n) throw StructuralError("squeeze_point: dimension mismatch");
    Vec c(m.n);
    Local u{};
    for (int i = 0; i < m.n; ++i) {
        const double k = std::floor((x[i] - m.offset[i]) / m.s);
        c[i] = m.offset[i] + m.s * (k + 0.5);
        u[i] = std::clamp((x[i] - c[i]) / (0.5 * m.s), -1.0, 1.0);
    }
    const Local v = local_squeeze(u, m.n, m.l, m.eps);
    Vec y(m.n);
    for (int i = 0; i < m.n; ++i) y[i] = c[i] + 0.5 * m.s * v[i];
    return y;
}

std::vector<Segment> push_polyline(const SqueezeMap& m, const std::vector<Vec>& polyline, double tol)
{
    m.validate();
    std::vector<Segment> out;
    for (std::size_t i = 0; i + 1 < polyline.size(); ++i) {
        if (polyline[i].size() != m.n || polyline[i + 1].size() != m.n)
            throw StructuralError("push_polyline: dimension mismatch");
        push_one(m, polyline[i], polyline[i + 1], tol, out);
    }
    return out;
}

std::vector<Segment> push_segments(const SqueezeMap& m, const std::vector<Segment>& segments, double tol)
{
    m.validate();
    std::vector<Segment> out;
    for (const auto& s : segments) push_one(m, s.a, s.b, tol, out);
    return out;
}

SegmentCycle cancel_on_skeleton(const std::vector<Segment>& segments, int n)
{
    SegmentCycle out;
    out.n = n;
    struct EdgeData {
        int axis = 0;
        Vec base;
        std::vector<double> ends;
    };
    std::map<SkeletonKey, EdgeData> edges;
    std::vector<Segment> rest;
    for (const auto& s : segments) {
        if (!s.on_skeleton || s.key.dim() != 1) {
            rest.push_back(s);
            continue;
        }
        auto [it, fresh] = edges.try_emplace(s.key);
        if (fresh) {
            it->second.axis = std::countr_zero(s.key.axes);
            it->second.base = s.a;
        }
        it->second.ends.push_back(s.a[it->second.axis]);
        it->second.ends.push_back(s.b[it->second.axis]);
    }
    for (auto& [key, e] : edges) {
        std::sort(e.ends.begin(), e.ends.end());
        // Odd coverage lies between ends 2i and 2i+1; touching intervals merge.
        std::vector<std::pair<double, double>> kept;
        for (std::size_t i = 0; i + 1 < e.ends.size(); i += 2) {
            const double lo = e.ends[i], hi = e.ends[i + 1];
            if (hi - lo <= 1e-12) continue;
            if (!kept.empty() && kept.back().second == lo)
                kept.back().second = hi;
            else
                kept.emplace_back(lo, hi);
        }
        for (const auto& [lo, hi] : kept) {
            Segment s;
            s.a = e.base;
            s.b = e.base;
            s.a[e.axis] = lo;
            s.b[e.axis] = hi;
            s.on_skeleton = true;
            s.key = key;
            out.segments.push_back(std::move(s));
        }
    }
    for (auto& s : rest) out.segments.push_back(std::move(s));
    return out;
}

SegmentCycle clip_cycle(const SegmentCycle& c, double radius)
{
    SegmentCycle out;
    out.n = c.n;
    for (const auto& s : c.segments) {
        Segment t = s;
        if (clip_to_ball(s.a, s.b, radius, t.a, t.b)) out.segments.push_back(std::move(t));
    }
    return out;
}

LengthSplit length_split(const SegmentCycle& c)
{
    CompensatedSum sk, fr;
    for (const auto& s : c.segments) (s.on_skeleton ? sk : fr).add(s.length());
    return {sk.value(), fr.value()};
}

SqueezeMap SqueezeSchedule::stage(std::size_t i) const
{
    SqueezeMap m;
    m.n = n;
    m.l = n - 1 - static_cast<int>(i);
    m.s = s.at(i);
    m.eps = eps * s.at(i);
    m.offset = offsets.at(i);
    m.lattice = static_cast<std::uint32_t>(i);
    return m;
}

nlohmann::json SqueezeSchedule::to_json() const
{
    nlohmann::json offs = nlohmann::json::array();
    for (const auto& o : offsets) offs.push_back(std::vector<double>(o.data(), o.data() + o.size()));
    return {{"n", n}, {"k", k}, {"Q", Q}, {"s", s}, {"offsets", offs}, {"eps", eps}};
}

SqueezeSchedule make_schedule(int n, int k, const std::vector<int>& Q, double eps, std::uint64_t seed)
{
    if (k < 0 || k >= n) throw DomainError("schedule needs 0 <= k < n");
    if (static_cast<int>(Q.size()) != n - k) throw DomainError("schedule needs n - k exponents");
    SqueezeSchedule sch;
    sch.n = n;
    sch.k = k;
    sch.Q = Q;
    sch.eps = eps;
    Rng rng(seed, 61);
    double s = 1.0;
    for (int j = 0; j < n - k; ++j) {
        if (Q[j] < 0) throw DomainError("schedule exponents must be nonnegative");
        s *= std::pow(2.0, -static_cast<double>(Q[j]) / (n - j));
        sch.s.push_back(s);
        Vec off(n);
        for (int i = 0; i < n; ++i) off[i] = s * rng.uniform();
        sch.offsets.push_back(off);
    }
    return sch;
}

namespace {

std::vector<Segment> scaled_segments(const Cycle& c, const Rotation& rot, double R)
{
    std::vector<Segment> out;
    for (const auto& s : c.segments.segments) {
        Segment t;
        t.a = R * (rot * s.a);
        t.b = R * (rot * s.b);
        out.push_back(std::move(t));
    }
    return out;
}

}  // namespace

BentFamily bent_family(int p, double s, double eps, std::uint64_t seed)
{
    if (p < 1) throw DomainError("bent family needs p >= 1");
    if (!(s > 0.0 && s <= 1.0)) throw DomainError("bent family needs 0 < s <= 1");
    BentFamily bf;
    bf.R = 1.0 + s * std::sqrt(2.0) + 1e-6;
    Rng rng(seed, 71);
    bf.map.n = 2;
    bf.map.l = 1;
    bf.map.s = s;
    bf.map.eps = eps * s;
    bf.map.offset = make_vec({s * rng.uniform(), s * rng.uniform()});
    bf.map.validate();

    const Family base = parallel_tuples(p);
    const Rotation rot = generic_rotation(2);
    const SqueezeMap map = bf.map;
    const double R = bf.R;
    const double tol = 1e-3 * s;
    Family& f = bf.family;
    f.label = "bent_lines";
    f.k = 1;
    f.n = 2;
    f.domain = base.domain;
    auto eval = base.evaluate;
    f.evaluate = [eval, rot, map, R, tol](const Param& t) {
        const auto pushed = push_segments(map, scaled_segments(eval(t), rot, R), tol);
        Cycle c = empty_cycle(1, 2);
        c.segments = clip_cycle(cancel_on_skeleton(pushed, 2), 1.0);
        return c;
    };
    // A line through the core preimage of each point hits it exactly.
    auto w = base.witness;
    f.witness = [w, rot, map, R](const std::vector<Vec>& pts) -> std::optional<Param> {
        std::vector<Vec> pre;
        for (const auto& y : pts) {
            Vec c(2);
            for (int i = 0; i < 2; ++i)
                c[i] = map.offset[i] + map.s * (std::floor((y[i] - map.offset[i]) / map.s) + 0.5);
            const Vec x = c + map.eps * (y - c);
            pre.push_back(rot.transpose() * x / R);
        }
        return w(pre);
    };
    return bf;
}

BendReport bend_and_cancel(int p, double s, double eps, std::size_t budget, std::uint64_t seed)
{
    const BentFamily bf = bent_family(p, s, eps, seed);
    BendReport r;
    r.p = p;
    r.s = s;
    r.R = bf.R;
    r.seed = seed;
    r.stats = family_max_volume(bf.family, budget, seed);
    const LengthSplit split = length_split(bf.family.evaluate(r.stats.argmax).segments);
    r.skeleton_length = split.skeleton;
    r.free_length = split.free;
    return r;
}

Family multiscale_family(int Q0, int Q1)
{
    if (Q0 < 0 || Q1 < 0 || Q0 > 12 || Q1 > 12) throw DomainError("multiscale family needs 0 <= Q <= 12");
    Family f = suspend(sum_family(translate(point_tuples(1 << Q1)), 1 << Q0), 1);
    f.label = "multiscale_lines";
    return f;
}

StageReport piece_stats(const std::vector<Segment>& segments, int l, double s)
{
    std::map<SkeletonKey, std::pair<Vec, Vec>> boxes;
    for (const auto& seg : segments) {
        SkeletonKey key = seg.key;
        key.anchor[3] += seg.on_skeleton ? 0 : (std::int64_t{1} << 40);
        auto [it, fresh] = boxes.try_emplace(key, seg.a, seg.a);
        for (const Vec* p : {&seg.a, &seg.b}) {
            it->second.first = it->second.first.cwiseMin(*p);
            it->second.second = it->second.second.cwiseMax(*p);
        }
    }
    StageReport r;
    r.l = l;
    r.s = s;
    r.pieces = boxes.size();
    for (const auto& [key, box] : boxes) r.max_diameter = std::max(r.max_diameter, (box.second - box.first).norm());
    return r;
}

MultiscaleReport multiscale_push(const SqueezeSchedule& schedule, const Family& family, std::size_t budget,
                                 std::uint64_t seed)
{
    if (family.k != 1 || family.n != 3 || schedule.n != 3 || schedule.k != 1)
        throw CapabilityError("multiscale_push supports 1-cycles in dimension 3 only");
    MultiscaleReport rep;
    rep.schedule = schedule;
    double total = 0.0;
    for (double s : schedule.s) total += s;
    rep.R = 1.0 + total * std::sqrt(3.0) + 1e-6;
    const Rotation rot = generic_rotation(3);
    const SqueezeMap m0 = schedule.stage(0), m1 = schedule.stage(1);
    m0.validate();
    m1.validate();
    const double R = rep.R;

    struct Run {
        std::vector<Segment> stage0;
        SegmentCycle final;
    };
    auto run = [&](const Param& t) {
        Run r;
        r.stage0 = push_segments(m0, scaled_segments(family.evaluate(t), rot, R), 1e-3 * m0.s);
        const auto stage1 = push_segments(m1, r.stage0, 1e-3 * m1.s);
        r.final = clip_cycle(cancel_on_skeleton(stage1, 3), 1.0);
        return r;
    };

    Rng rng(seed, 51);
    rep.stats.seed = seed;
    rep.stats.max_volume = -1.0;
    for (std::size_t i = 0; i < budget; ++i) {
        Param pt = sample_parameter(family.domain, i, rng);
        const double v = chain_volume(run(pt).final);
        if (v > rep.stats.max_volume || (v == rep.stats.max_volume && pt < rep.stats.argmax)) {
            rep.stats.max_volume = v;
            rep.stats.argmax = std::move(pt);
        }
        ++rep.stats.samples;
    }
    const Run best = run(rep.stats.argmax);
    rep.stages.push_back(piece_stats(best.stage0, m0.l, m0.s));
    rep.stages.push_back(piece_stats(best.final.segments, m1.l, m1.s));
    return rep;
}

MultiscaleScan multiscale_scan(int q0_max, int q1_max, double eps, std::size_t budget, std::uint64_t seed)
{
    if (q0_max < 0 || q1_max < 0) throw DomainError("multiscale_scan: Q ranges must be non-negative");
    MultiscaleScan scan;
    std::vector<std::vector<double>> X;
    std::vector<double> y;
    for (int q0 = 0; q0 <= q0_max; ++q0)
        for (int q1 = 0; q1 <= q1_max; ++q1) {
            const auto schedule = make_schedule(3, 1, {q0, q1}, eps, seed);
            const auto family = multiscale_family(q0, q1);
            const auto rep = multiscale_push(schedule, family, budget, seed);
            MultiscaleRow row;
            row.Q0 = q0;
            row.Q1 = q1;
            row.max_length = rep.stats.max_volume;
            row.input_length = family.evaluate(rep.stats.argmax).volume();
            row.stages = rep.stages;
            if (row.max_length > 0.0) {
                X.push_back({static_cast<double>(q0), static_cast<double>(q1)});
                y.push_back(std::log2(row.max_length));
            } else {
                ++scan.excluded;
            }
            scan.rows.push_back(std::move(row));
        }
    if (y.size() >= 3) {
        const auto fit = least_squares_multi(X, y);
        scan.growth_Q0 = std::exp2(fit.coef[1]);
        scan.growth_Q1 = std::exp2(fit.coef[2]);
        scan.r2 = fit.r2;
    }
    return scan;
}

}  // namespace sweepout
