#include "sweepout/common.hpp"

#include <Eigen/Dense>

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sweepout {

std::uint64_t splitmix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream)
{
    std::uint64_t st = seed ^ (0x6a09e667f3bcc909ULL * (stream + 1));
    for (auto& w : s_) w = splitmix64(st);
}

static inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

std::uint64_t Rng::next()
{
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = 0.0;
    do {
        u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t Rng::below(std::uint64_t bound)
{
    if (bound == 0) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % bound;
}

Rng Rng::split(std::uint64_t stream) const
{
    std::uint64_t st = stream_ * 0x9e3779b97f4a7c15ULL + stream + 1;
    return Rng(seed_ ^ splitmix64(st), stream_ + stream + 1);
}

double radical_inverse(std::uint64_t index, unsigned base)
{
    double inv = 1.0 / base, f = inv, r = 0.0;
    while (index > 0) {
        r += f * static_cast<double>(index % base);
        index /= base;
        f *= inv;
    }
    return r;
}

const std::vector<unsigned>& small_primes()
{
    static const std::vector<unsigned> primes = [] {
        std::vector<unsigned> ps;
        for (unsigned c = 2; ps.size() < 256; ++c) {
            bool prime = true;
            for (unsigned p : ps) {
                if (p * p > c) break;
                if (c % p == 0) {
                    prime = false;
                    break;
                }
            }
            if (prime) ps.push_back(c);
        }
        return ps;
    }();
    return primes;
}

std::vector<double> halton(std::uint64_t index, int dims)
{
    const auto& primes = small_primes();
    if (dims > static_cast<int>(primes.size())) throw CapacityError("halton: at most 256 dimensions");
    std::vector<double> u(dims);
    for (int d = 0; d < dims; ++d) u[d] = radical_inverse(index, primes[d]);
    return u;
}

double normal_quantile(double u)
{
    u = std::clamp(u, 1e-15, 1.0 - 1e-15);
    return boost::math::quantile(boost::math::normal_distribution<double>(), u);
}

void CompensatedSum::add(double x)
{
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
        comp_ += (sum_ - t) + x;
    else
        comp_ += (x - t) + sum_;
    sum_ = t;
}

MeanStat mean_and_stderr(std::span<const double> xs)
{
    MeanStat st;
    st.count = xs.size();
    if (xs.empty()) return st;
    CompensatedSum s;
    for (double x : xs) s.add(x);
    st.mean = s.value() / xs.size();
    if (xs.size() > 1) {
        CompensatedSum v;
        for (double x : xs) v.add((x - st.mean) * (x - st.mean));
        st.stderr_ = std::sqrt(v.value() / (xs.size() - 1) / xs.size());
    }
    return st;
}

LineFit least_squares(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2) throw DomainError("least squares needs at least two paired values");
    const double m = static_cast<double>(x.size());
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw DomainError("least squares: all abscissae coincide");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
    return f;
}

MultiFit least_squares_multi(const std::vector<std::vector<double>>& X, std::span<const double> y)
{
    if (X.size() != y.size() || X.empty()) throw DomainError("least squares needs paired rows");
    const auto m = static_cast<Eigen::Index>(X.size());
    const auto k = static_cast<Eigen::Index>(X.front().size());
    if (m < k + 1) throw DomainError("least squares: fewer rows than unknowns");
    Eigen::MatrixXd A(m, k + 1);
    Eigen::VectorXd b(m);
    for (Eigen::Index r = 0; r < m; ++r) {
        if (static_cast<Eigen::Index>(X[r].size()) != k) throw DomainError("least squares: ragged rows");
        A(r, 0) = 1.0;
        for (Eigen::Index j = 0; j < k; ++j) A(r, j + 1) = X[r][j];
        b[r] = y[r];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    if (qr.rank() < k + 1) throw DomainError("least squares: rank deficient design");
    const Eigen::VectorXd beta = qr.solve(b);
    MultiFit f;
    f.coef.assign(beta.data(), beta.data() + beta.size());
    const double mean = b.mean();
    const double ss_tot = (b.array() - mean).square().sum();
    const double ss_res = (A * beta - b).squaredNorm();
    f.r2 = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
    return f;
}

Vec make_vec(std::initializer_list<double> xs)
{
    Vec v(static_cast<Eigen::Index>(xs.size()));
    int i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

Vec zero_vec(int n) { return Vec::Zero(n); }

double ball_volume(int n) { return std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0); }

double sphere_area(int n) { return 2.0 * std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0); }

bool clip_to_ball(const Vec& a, const Vec& b, double radius, Vec& out_a, Vec& out_b)
{
    const Vec d = b - a;
    const double A = d.squaredNorm();
    if (A == 0.0) return false;
    const double B = a.dot(d);
    const double C = a.squaredNorm() - radius * radius;
    const double disc = B * B - A * C;
    if (disc <= 0.0) return false;
    const double sq = std::sqrt(disc);
    double t0 = (-B - sq) / A, t1 = (-B + sq) / A;
    t0 = std::max(t0, 0.0);
    t1 = std::min(t1, 1.0);
    if (t1 <= t0) return false;
    out_a = (t0 == 0.0) ? a : Vec(a + t0 * d);
    out_b = (t1 == 1.0) ? b : Vec(a + t1 * d);
    return true;
}

double point_segment_distance(const Vec& p, const Vec& a, const Vec& b)
{
    const Vec d = b - a;
    const double L = d.squaredNorm();
    double t = L > 0 ? (p - a).dot(d) / L : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return (a + t * d - p).norm();
}

}  // namespace sweepout
