#include <doctest.h>

#include "sweepout/convex_pyramid.hpp"

#include <cmath>

using namespace sweepout;

namespace {

HPolytope cube(int n, double half = 1.0) { return box_polytope(Vec::Constant(n, -half), Vec::Constant(n, half)); }

Vec random_unit(int n, Rng& rng)
{
    Vec d(n);
    for (int i = 0; i < n; ++i) d[i] = rng.normal();
    return d.normalized();
}

HPolytope random_body(int n, Rng& rng)
{
    HPolytope p = cube(n);
    for (int j = 0; j < 5; ++j) p.add(random_unit(n, rng), rng.uniform(0.4, 1.0));
    return p;
}

}  // namespace

TEST_SUITE("convex_pyramid")
{
    TEST_CASE("bisecting a cube")
    {
        const Bisection b = bisect_equal_volume(cube(3), make_vec({1, 0, 0}), 1e-6);
        CHECK(std::abs(b.offset) < 1e-6);
        CHECK(b.left_volume == doctest::Approx(4.0).epsilon(1e-5));
        CHECK(b.right_volume == doctest::Approx(4.0).epsilon(1e-5));
        CHECK(polytope_volume(b.left).value == doctest::Approx(4.0).epsilon(1e-5));
    }

    TEST_CASE("the symmetric root bisects through the origin")
    {
        Rng rng(2);
        for (int n = 2; n <= 3; ++n)
            for (int trial = 0; trial < 10; ++trial) {
                const Bisection b = bisect_equal_volume(ball_polytope(n), random_unit(n, rng), 1e-6);
                CHECK(std::abs(b.offset) < 1e-5);
            }
    }

    TEST_CASE("bisection of random bodies against a sampled oracle")
    {
        Rng rng(3);
        for (int trial = 0; trial < 20; ++trial) {
            const int n = 2 + static_cast<int>(rng.below(2));
            const HPolytope p = random_body(n, rng);
            const Vec d = random_unit(n, rng);
            const Bisection b = bisect_equal_volume(p, d, 1e-4);
            const double V = polytope_volume(p).value;
            CHECK(std::abs(b.left_volume - b.right_volume) <= 1e-4 * V);
            // Fraction of uniform samples of p on the left side.
            std::size_t in = 0, left = 0;
            for (int s = 0; s < 40000; ++s) {
                Vec x(n);
                for (int i = 0; i < n; ++i) x[i] = rng.uniform(-1, 1);
                if (!p.contains(x)) continue;
                ++in;
                left += d.dot(x) <= b.offset;
            }
            const double frac = double(left) / double(in);
            CHECK(std::abs(frac - 0.5) <= 4 * std::sqrt(0.25 / double(in)));
        }
        CHECK_THROWS_AS(bisect_equal_volume(cube(2), make_vec({2, 0}), 1e-3), DomainError);
    }

    TEST_CASE("direction sequences have orthonormal windows")
    {
        for (int n = 2; n <= 4; ++n)
            for (int i = 1; i < n; ++i) {
                const DirectionSequence s = direction_sequence(n, i, 6, DirectionMode::Random, 11);
                CHECK(s.v.size() == 6);
                CHECK_NOTHROW(s.validate());
            }
        DirectionSequence bad = direction_sequence(3, 1, 3, DirectionMode::Random, 1);
        bad.v[1] = bad.v[0];
        CHECK_THROWS_AS(bad.validate(), StructuralError);
        CHECK_THROWS_AS(direction_sequence(3, 3, 2, DirectionMode::Random, 1), DomainError);
    }

    TEST_CASE("adversarial sequences are no thicker than random ones")
    {
        const DirectionSequence r = direction_sequence(3, 1, 3, DirectionMode::Random, 5);
        const DirectionSequence a = direction_sequence(3, 1, 3, DirectionMode::Adversarial, 5);
        CHECK_NOTHROW(a.validate());
        CHECK(sequence_thickness(a, 1) <= sequence_thickness(r, 1) + 1e-12);
    }

    TEST_CASE("shallow pyramids")
    {
        const PyramidTree t0 = build_pyramid(3, 1, 1, 0, 16, 1);
        REQUIRE(t0.nodes.size() == 1);
        CHECK(t0.nodes[0].T == doctest::Approx(0.5));
        const PyramidTree t1 = build_pyramid(3, 1, 1, 1, 16, 1);
        REQUIRE(t1.nodes.size() == 3);
        // Any halving cut leaves halves of inradius about 1/2; the offset is
        // only as good as the bisection tolerance.
        CHECK(t1.nodes[0].T <= 0.5 + 1e-3);
        CHECK_THROWS_AS(build_pyramid(2, 1, 1, 1, 16, 1), DomainError);
        CHECK_THROWS_AS(build_pyramid(4, 1, 1, 1, 16, 1), CapabilityError);
    }

    TEST_CASE("pyramid nodes halve the volume at every level")
    {
        const double tol = 1e-3;
        const PyramidTree t = build_pyramid(3, 1, 1, 4, 16, 2, tol);
        CHECK(t.nodes.size() == 31);
        const double V = t.nodes[0].volume;
        for (const auto& nd : t.nodes) {
            CHECK(std::abs(nd.volume - V * std::pow(0.5, nd.depth)) <= nd.depth * tol * V * std::pow(0.5, nd.depth) + 1e-12);
            CHECK(nd.path.size() == static_cast<std::size_t>(nd.depth));
        }
        const ThicknessReport r = thickness(t);
        CHECK(r.T == doctest::Approx(r.level_T.back()));
        CHECK(r.leaf_rad.size() == 16);
    }

    TEST_CASE("T never grows as the direction grid is refined")
    {
        double prev = INFINITY;
        for (std::size_t phi : {4, 8, 16, 32}) {
            const double T = build_pyramid(3, 1, 1, 3, phi, 7).nodes[0].T;
            CHECK(T <= prev + 1e-12);
            prev = T;
        }
    }

    TEST_CASE("box approximation of a box")
    {
        const HPolytope p = box_polytope(make_vec({0, 0, 0}), make_vec({1, 2, 4}));
        const BoxApprox b = rect_approx(p);
        CHECK(b.inner_ok);
        CHECK(b.outer_ok);
        REQUIRE(b.sides.size() == 3);
        CHECK(b.sides[0] <= b.sides[1]);
        CHECK(b.sides[1] <= b.sides[2]);
        // The sweep starts along a diagonal, so the box is not the body itself.
        CHECK(b.sides[0] * b.sides[1] * b.sides[2] <= 8.0 + 1e-9);
        CHECK(b.lambda >= 1.0);
        CHECK(b.lambda <= 12.0);
        for (std::size_t x = 0; x < 3; ++x)
            for (std::size_t y = x + 1; y < 3; ++y) CHECK(std::abs(b.axes[x].dot(b.axes[y])) < 1e-9);
    }

    TEST_CASE("box approximation of random simplices and a thin slab")
    {
        Rng rng(17);
        for (int trial = 0; trial < 30; ++trial) {
            HPolytope s = simplex_corner(3);
            // Random affine image would change facet normals; random corner cuts keep it simple.
            s.add(random_unit(3, rng), rng.uniform(0.3, 0.6));
            const BoxApprox b = rect_approx(s);
            CHECK(b.inner_ok);
            CHECK(b.outer_ok);
            CHECK(b.lambda >= 1.0 - 1e-9);
            CHECK(b.lambda <= 12.0);
        }
        const BoxApprox slab = rect_approx(box_polytope(make_vec({0, 0, 0}), make_vec({1, 1, 0.01})));
        CHECK(slab.inner_ok);
        CHECK(slab.sides[0] <= 0.01 + 1e-12);
        CHECK(slab.sides[0] >= 0.01 / 4);
        CHECK(slab.lambda <= 12.0);
    }

    TEST_CASE("mean projections of a cube")
    {
        const HPolytope c = cube(3);
        CHECK(mean_projection(c, 0, 10, 1).value == 1.0);
        CHECK(mean_projection(c, 3, 10, 1).value == doctest::Approx(8.0));
        // Mean width of a cube of side a is 3a/2; mean shadow area is surface / 4.
        const Estimate w = mean_projection(c, 1, 20000, 2);
        CHECK(std::abs(w.value - 3.0) <= 4 * w.stderr_);
        const Estimate a = mean_projection(c, 2, 20000, 3);
        CHECK(std::abs(a.value - 6.0) <= 4 * a.stderr_);
        CHECK_THROWS_AS(mean_projection(c, 4, 10, 1), DomainError);
        CHECK_THROWS_AS(mean_projection(cube(4), 3, 10, 1), CapabilityError);
    }

    TEST_CASE("N functional of a cube")
    {
        const NFunctionalReport r = n_functional(cube(3), 8.0, 20000, 4);
        REQUIRE(r.values.size() == 3);
        CHECK(r.values[0] == doctest::Approx(0.75 * 8).epsilon(0.03));
        CHECK(r.values[1] == doctest::Approx(64 * std::sqrt(3.0 / 8.0)).epsilon(0.03));
        CHECK(r.values[2] == doctest::Approx(512 * 0.5).epsilon(1e-9));
        CHECK(r.argmax == 3);
        CHECK_THROWS_AS(n_functional(cube(3), 1.5, 100, 1), DomainError);

        double prev = 0.0;
        for (double beta : {2.0, 4.0, 8.0, 16.0}) {
            const double N = n_functional(cube(3), beta, 2000, 5).N;
            CHECK(N > prev);
            prev = N;
        }
    }

    TEST_CASE("exact Hölder check")
    {
        CHECK(holder_exact({0.5, 0.5}, 1));
        CHECK(holder_exact({1.0, 0.25, 0.1}, 2));
        CHECK(holder_exact({}, 1));
        CHECK_FALSE(holder_exact({1.0, 0.0}, 1));
        Rng rng(23);
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<double> r(1 + rng.below(16));
            for (double& x : r) x = rng.uniform(1e-3, 1.0);
            CHECK(holder_exact(r, 1 + static_cast<int>(rng.below(3))));
        }
    }

    TEST_CASE("star report on a small tree")
    {
        const PyramidTree t = build_pyramid(3, 1, 1, 3, 8, 3);
        const StarReport s = star_report(t, 8.0, 500, 3);
        REQUIRE(s.levels.size() == 4);
        CHECK(s.holder_all);
        CHECK(s.additivity_ok);
        CHECK(s.additivity_checks > 0);
        CHECK(s.growth_T > 0.0);
        CHECK(s.levels[0].sum_rad_inv == doctest::Approx(1.0));
        for (const auto& lv : s.levels) CHECK(lv.T_level == doctest::Approx(0.5 * lv.sum_rad_k));
        CHECK(s.to_json()["levels"].size() == 4);
        CHECK(s.to_csv().find("sum_rad_inv") != std::string::npos);
    }
}
