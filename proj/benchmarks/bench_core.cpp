#include <benchmark/benchmark.h>

#include "sweepout/algebraic_curves.hpp"
#include "sweepout/convex_pyramid.hpp"
#include "sweepout/minimax_bounds.hpp"
#include "sweepout/mod2_chains.hpp"
#include "sweepout/polytope.hpp"
#include "sweepout/skeleton_squeeze.hpp"

#include <cmath>

using namespace sweepout;

static void BM_Chebyshev(benchmark::State& state)
{
    Rng rng(1);
    HPolytope p = ball_polytope(3);
    for (int j = 0; j < state.range(0); ++j) {
        Vec a(3);
        for (int i = 0; i < 3; ++i) a[i] = rng.normal();
        p.add(a, rng.uniform(0.3, 1.0));
    }
    for (auto _ : state) benchmark::DoNotOptimize(chebyshev(p).radius);
}
BENCHMARK(BM_Chebyshev)->Arg(4)->Arg(16)->Arg(64);

static void BM_Bisect(benchmark::State& state)
{
    const HPolytope p = ball_polytope(3);
    const Body body = Body::from(p);
    const Vec d = make_vec({0.6, 0.0, 0.8});
    for (auto _ : state) benchmark::DoNotOptimize(bisect_equal_volume(p, body, d, 1e-3).offset);
}
BENCHMARK(BM_Bisect);

static void BM_FlatNormBruteforce(benchmark::State& state)
{
    const auto cycles = all_relative_codim1_cycles({2, static_cast<int>(state.range(0))});
    std::size_t j = 0;
    for (auto _ : state) benchmark::DoNotOptimize(flat_norm_bruteforce(cycles[j++ % cycles.size()]).scaled);
}
BENCHMARK(BM_FlatNormBruteforce)->Arg(2)->Arg(3);

static void BM_Crofton(benchmark::State& state)
{
    Rng rng(2);
    const Poly2 p = Poly2::random_unit(static_cast<int>(state.range(0)), rng);
    for (auto _ : state) benchmark::DoNotOptimize(crofton_length(p, 10000, 3).value);
}
BENCHMARK(BM_Crofton)->Arg(2)->Arg(6);

static void BM_BendAndCancel(benchmark::State& state)
{
    const int p = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(bend_and_cancel(p, 1.0 / std::sqrt(double(p)), 0.1, 8, 1).stats.max_volume);
}
BENCHMARK(BM_BendAndCancel)->Arg(16)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_Pyramid(benchmark::State& state)
{
    const int P = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(build_pyramid(3, 1, 1, P, 16, 1).nodes.front().T);
}
BENCHMARK(BM_Pyramid)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_PackBalls(benchmark::State& state)
{
    const int p = static_cast<int>(state.range(0));
    const std::vector<double> r(p, 0.25 * std::pow(double(p), -1.0 / 3.0));
    for (auto _ : state) benchmark::DoNotOptimize(pack_balls(r, 3, 1).candidates_used);
}
BENCHMARK(BM_PackBalls)->Arg(100)->Arg(10000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
