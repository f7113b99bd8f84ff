#include <doctest.h>

#include "sweepout/algebraic_curves.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace sweepout;

namespace {

Poly2 circle(double r)
{
    Poly2 p(2);
    p.at(2, 0) = 1;
    p.at(0, 2) = 1;
    p.at(0, 0) = -r * r;
    return p;
}

}  // namespace

TEST_SUITE("algebraic_curves")
{
    TEST_CASE("sign-change roots")
    {
        CHECK(sturm_roots_mod2(Poly1({1, 0, 1})).empty());
        CHECK(sturm_roots_mod2(Poly1({0, 0, 1})).empty());

        const auto r = sturm_roots_mod2(Poly1({-0.25, 0, 1}));
        REQUIRE(r.size() == 2);
        CHECK(r[0] == doctest::Approx(-0.5).epsilon(1e-12));
        CHECK(r[1] == doctest::Approx(0.5).epsilon(1e-12));

        const auto cube = sturm_roots_mod2(Poly1::from_roots({0.3, 0.3, 0.3}));
        REQUIRE(cube.size() == 1);
        // A triple root is only resolved to about the cube root of machine precision.
        CHECK(std::abs(cube[0] - 0.3) < 1e-4);

        const auto lin = sturm_roots_mod2(Poly1({-0.5, 1}));
        REQUIRE(lin.size() == 1);
        CHECK(lin[0] == doctest::Approx(0.5));
    }

    TEST_CASE("roots of products of known linear factors")
    {
        Rng rng(8);
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> roots;
            while (roots.size() < 5) {
                const double x = rng.uniform(-0.95, 0.95);
                if (std::all_of(roots.begin(), roots.end(), [&](double y) { return std::abs(x - y) > 0.02; }))
                    roots.push_back(x);
            }
            std::sort(roots.begin(), roots.end());
            const auto got = sturm_roots_mod2(Poly1::from_roots(roots, rng.uniform(0.5, 2.0)));
            REQUIRE(got.size() == roots.size());
            for (std::size_t i = 0; i < roots.size(); ++i) CHECK(std::abs(got[i] - roots[i]) < 1e-10);
        }
    }

    TEST_CASE("Sturm count agrees with sign changes for simple roots")
    {
        CHECK(sturm_count(Poly1::from_roots({-0.5, 0.1, 0.7}), -1.0, 1.0) == 3);
        CHECK(sturm_count(Poly1::from_roots({-0.5, 0.1, 0.7}), 0.0, 1.0) == 2);
        // A double root is one distinct root.
        CHECK(sturm_count(Poly1::from_roots({0.2, 0.2}), -1.0, 1.0) == 1);
    }

    TEST_CASE("restriction to a line")
    {
        const Poly2 p = circle(0.5);
        const Poly1 q = restrict_to_line(p, make_vec({0, 0}), make_vec({1, 0}));
        REQUIRE(q.c.size() >= 3);
        CHECK(q.c[0] == doctest::Approx(-0.25));
        CHECK(q.c[1] == doctest::Approx(0.0));
        CHECK(q.c[2] == doctest::Approx(1.0));

        Poly2 one(0);
        one.at(0, 0) = 1;
        const Poly1 c = restrict_to_line(one, make_vec({0.3, 0.1}), make_vec({0, 1}));
        CHECK(c.degree() == 0);
        CHECK(c(0.7) == doctest::Approx(1.0));

        Rng rng(4);
        for (int trial = 0; trial < 100; ++trial) {
            const int d = 1 + static_cast<int>(rng.below(6));
            const Poly2 P = Poly2::random_unit(d, rng);
            const double th = rng.uniform(0, 2 * std::numbers::pi);
            const Vec base = make_vec({rng.uniform(-1, 1), rng.uniform(-1, 1)});
            const Vec dir = make_vec({std::cos(th), std::sin(th)});
            const Poly1 Q = restrict_to_line(P, base, dir);
            CHECK(Q.degree() <= d);
            const double t = rng.uniform(-1, 1);
            const Vec x = base + t * dir;
            CHECK(Q(t) == doctest::Approx(P(x[0], x[1])).epsilon(1e-9));
        }
    }

    TEST_CASE("Crofton length of a circle and a diameter")
    {
        const Estimate c = crofton_length(circle(0.5), 100000, 1);
        CHECK(std::abs(c.value - std::numbers::pi) <= 3 * c.stderr_);

        SegmentCycle d;
        d.n = 2;
        d.add_free(make_vec({-1, 0}), make_vec({1, 0}));
        const Estimate e = crofton_length(d, 100000, 2);
        CHECK(std::abs(e.value - 2.0) <= 3 * e.stderr_);
    }

    TEST_CASE("Crofton length of random curves stays below pi d")
    {
        Rng rng(12);
        for (int d = 1; d <= 6; ++d)
            for (int j = 0; j < 10; ++j) {
                const Poly2 P = Poly2::random_unit(d, rng);
                const Estimate e = crofton_length(P, 4000, rng.next());
                CHECK(e.value <= std::numbers::pi * d + 3 * e.stderr_);
            }
    }

    TEST_CASE("marching squares")
    {
        const SegmentCycle c = marching_squares(circle(0.5), 256);
        CHECK(std::abs(chain_volume(c) - std::numbers::pi) / std::numbers::pi < 0.01);

        Poly2 far(2);
        far.at(2, 0) = 1;
        far.at(0, 2) = 1;
        far.at(0, 0) = 4;
        CHECK(marching_squares(far, 64).empty());
    }

    TEST_CASE("rasterized and Crofton lengths agree on cubics")
    {
        Rng rng(21);
        for (int j = 0; j < 20; ++j) {
            const Poly2 P = Poly2::random_unit(3, rng);
            const SegmentCycle c = marching_squares(P, 512);
            const double raster = chain_volume(c);
            const Estimate e = crofton_length(P, 200000, rng.next());
            if (raster < 0.5) continue;  // too short for a 2% comparison
            CHECK(std::abs(raster - e.value) <= std::max(0.02 * e.value, 3 * e.stderr_));
        }
    }

    TEST_CASE("sublevel volumes in one dimension")
    {
        const Estimate a = sublevel_volume_mc(Poly1({0, 1}), 0.1, 200000, 3);
        CHECK(std::abs(a.value - 0.2) <= 4 * a.stderr_);
        for (int d = 2; d <= 4; ++d) {
            std::vector<double> c(d + 1, 0.0);
            c[d] = 1.0;
            const double delta = 0.01;
            const Estimate e = sublevel_volume_mc(Poly1(c), delta, 200000, d);
            CHECK(std::abs(e.value - 2 * std::pow(delta, 1.0 / d)) <= 4 * e.stderr_);
        }
    }

    TEST_CASE("sublevel volume of a planar circle annulus")
    {
        // |x^2 + y^2 - 1/4| <= delta is an annulus of area 2 pi delta.
        const double delta = 0.05;
        const Estimate e = sublevel_volume_mc(circle(0.5), delta, 200000, 9);
        CHECK(std::abs(e.value - 2 * std::numbers::pi * delta) <= 4 * e.stderr_);
    }

    TEST_CASE("sublevel bound on random polynomials")
    {
        Rng rng(30);
        for (int d = 1; d <= 3; ++d)
            for (int j = 0; j < 5; ++j) {
                const Poly2 P = Poly2::random_unit(d, rng);
                for (double delta : {1e-1, 1e-2, 1e-3}) {
                    const Estimate e = sublevel_volume_mc(P, delta, 20000, rng.next());
                    CHECK(e.value <= 10 * std::pow(delta / P.max_abs(), 1.0 / (2 * d)));
                }
            }
    }

    TEST_CASE("continuity experiment")
    {
        const ContinuityResult r = continuity_experiment(2, {0.1, 0.01, 0.0}, 10, 64, 5);
        REQUIRE(r.rows.size() == 3);
        CHECK(r.rows[2].mean_distance == 0.0);
        CHECK(r.rows[0].mean_distance > r.rows[1].mean_distance);
        CHECK(r.epsilon_hat > 0.0);
        CHECK_THROWS_AS(continuity_experiment(2, {0.01, 0.1}, 10, 64, 5), DomainError);
    }

    TEST_CASE("domain errors")
    {
        CHECK_THROWS_AS(sublevel_volume_mc(Poly1({1}), 0.0, 10, 1), DomainError);
        CHECK_THROWS_AS(crofton_length(Poly2(2), 10, 1), DomainError);
    }
}
