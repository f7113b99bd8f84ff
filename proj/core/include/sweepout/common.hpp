#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sweepout {

// Points in R^n for n <= 4; fixed capacity keeps them off the heap.
using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 4, 1>;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class StructuralError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class CapacityError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

class CapabilityError : public Error {
public:
    using Error::Error;
};

// Seeded generator with explicit substreams. Uses its own uniform/normal
// transforms so streams are identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next();
    double uniform();                    // [0, 1)
    double uniform(double lo, double hi);
    double normal();
    std::uint64_t below(std::uint64_t bound);
    Rng split(std::uint64_t stream) const;

private:
    std::uint64_t s_[4];
    std::uint64_t seed_;
    std::uint64_t stream_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t& state);

double radical_inverse(std::uint64_t index, unsigned base);
const std::vector<unsigned>& small_primes();  // first 256 primes
// Halton point with index >= 1 in dimension dims (dims <= 256).
std::vector<double> halton(std::uint64_t index, int dims);

double normal_quantile(double u);

// Neumaier compensated summation.
class CompensatedSum {
public:
    void add(double x);
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct MeanStat {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t count = 0;
};

MeanStat mean_and_stderr(std::span<const double> xs);

// Monte Carlo estimate.
struct Estimate {
    double value = 0.0;
    double stderr_ = 0.0;
    std::size_t samples = 0;
};

// Ordinary least squares y = slope * x + intercept.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};
LineFit least_squares(std::span<const double> x, std::span<const double> y);

// y = coef[0] + sum_j coef[j + 1] * X[row][j].
struct MultiFit {
    std::vector<double> coef;
    double r2 = 0.0;
};
MultiFit least_squares_multi(const std::vector<std::vector<double>>& X, std::span<const double> y);

Vec make_vec(std::initializer_list<double> xs);
Vec zero_vec(int n);

// Unit n-ball volume and unit (n-1)-sphere area.
double ball_volume(int n);
double sphere_area(int n);

// Clips segment [a,b] to the closed ball of the given radius about the origin.
// Returns false when nothing of positive length remains.
bool clip_to_ball(const Vec& a, const Vec& b, double radius, Vec& out_a, Vec& out_b);

double point_segment_distance(const Vec& p, const Vec& a, const Vec& b);

}  // namespace sweepout
