#pragma once

#include "sweepout/common.hpp"
#include "sweepout/mod2_chains.hpp"

#include <cstdint>
#include <vector>

namespace sweepout {

// Univariate polynomial c[0] + c[1] x + ... + c[d] x^d.
struct Poly1 {
    std::vector<double> c;

    Poly1() = default;
    explicit Poly1(std::vector<double> coeffs) : c(std::move(coeffs)) {}

    int degree() const;  // -1 for the zero polynomial
    bool is_zero() const { return degree() < 0; }
    double operator()(double x) const;
    Poly1 derivative() const;
    // Product of (x - r) over the given roots, times lead.
    static Poly1 from_roots(const std::vector<double>& roots, double lead = 1.0);
};

Poly1 operator*(const Poly1& a, const Poly1& b);

// Bivariate polynomial of total degree <= d. Coefficient of x^i y^j lives at
// index(i, j) = (i+j)(i+j+1)/2 + j.
struct Poly2 {
    int d = 0;
    std::vector<double> c;

    Poly2() = default;
    explicit Poly2(int degree);

    static std::size_t size_for(int degree) { return static_cast<std::size_t>((degree + 1) * (degree + 2) / 2); }
    static std::size_t index(int i, int j) { return static_cast<std::size_t>((i + j) * (i + j + 1) / 2 + j); }
    double& at(int i, int j) { return c[index(i, j)]; }
    double at(int i, int j) const { return c[index(i, j)]; }

    double operator()(double x, double y) const;
    double norm() const;
    double max_abs() const;
    Poly2 normalized() const;

    // Gaussian coefficients scaled to unit norm.
    static Poly2 random_unit(int degree, Rng& rng);
};

// Number of distinct real roots in (a, b] via a Sturm sequence.
int sturm_count(const Poly1& p, double a, double b);

// Sign-change roots of p in the open interval (lo, hi), ascending.
std::vector<double> sturm_roots_mod2(const Poly1& p, double lo = -1.0, double hi = 1.0);

// t -> P(point + t * direction).
Poly1 restrict_to_line(const Poly2& p, const Vec& point, const Vec& direction);

// Crofton estimate of length inside the unit disk: lines with angle uniform in
// [0, pi) and signed offset uniform in [-1, 1]; length = pi * E[#crossings].
Estimate crofton_length(const Poly2& p, std::size_t n_lines, std::uint64_t seed);
Estimate crofton_length(const SegmentCycle& c, std::size_t n_lines, std::uint64_t seed);

// Zero set of p inside the unit disk on an N x N sign grid over [-1,1]^2.
SegmentCycle marching_squares(const Poly2& p, int N = 256);

// Volume of {x in B^n : |P(x)| <= delta}, n = 1 or 2.
Estimate sublevel_volume_mc(const Poly1& p, double delta, std::size_t samples, std::uint64_t seed);
Estimate sublevel_volume_mc(const Poly2& p, double delta, std::size_t samples, std::uint64_t seed);

struct ContinuityRow {
    double eta = 0.0;
    double mean_distance = 0.0;
    double stderr_ = 0.0;
    std::size_t trials = 0;
};

struct ContinuityResult {
    int d = 0;
    int rasterN = 0;
    std::uint64_t seed = 0;
    std::vector<ContinuityRow> rows;
    double epsilon_hat = 0.0;
    double intercept = 0.0;
    std::size_t resampled = 0;
};

ContinuityResult continuity_experiment(int d, const std::vector<double>& etas, std::size_t trials, int rasterN,
                                       std::uint64_t seed);

}  // namespace sweepout
