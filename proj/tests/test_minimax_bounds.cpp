#include <doctest.h>

#include "sweepout/minimax_bounds.hpp"

#include <cmath>

using namespace sweepout;

TEST_SUITE("minimax_bounds")
{
    TEST_CASE("packing small examples")
    {
        const Packing four = pack_balls({0.125, 0.125, 0.125, 0.125}, 2, 1);
        CHECK_NOTHROW(verify_packing(four));
        CHECK(four.centres.size() == 4);
        const Packing one = pack_balls({0.25}, 2, 1);
        CHECK(one.centres[0].norm() < 0.5);
        CHECK_THROWS_AS(pack_balls({0.2, 0.2}, 2, 1), DomainError);
        CHECK_THROWS_AS(pack_balls({}, 2, 1), DomainError);
        CHECK_THROWS_AS(pack_balls({-0.1}, 2, 1), DomainError);
    }

    TEST_CASE("equal radii at the budget pack in every dimension")
    {
        for (int n = 1; n <= 4; ++n)
            for (int p : {1, 10, 100}) {
                const double r = 0.25 * std::pow(double(p), -1.0 / n);
                const Packing pk = pack_balls(std::vector<double>(p, r), n, 5);
                CHECK_NOTHROW(verify_packing(pk));
            }
    }

    TEST_CASE("verify_packing catches overlaps and escapes")
    {
        Packing p;
        p.n = 2;
        p.centres = {make_vec({0, 0}), make_vec({0.1, 0})};
        p.radii = {0.1, 0.1};
        CHECK_THROWS_AS(verify_packing(p), StructuralError);
        p.centres = {make_vec({0.95, 0})};
        p.radii = {0.1};
        CHECK_THROWS_AS(verify_packing(p), StructuralError);
        p.radii = {0.1, 0.2};
        CHECK_THROWS_AS(verify_packing(p), StructuralError);
    }

    TEST_CASE("optimal radii")
    {
        const OptimalRadii eq = optimal_radii(std::vector<double>(16, 1.0), 2, 1);
        for (double r : eq.radii) CHECK(r == doctest::Approx(1.0 / 16));
        CHECK(eq.achieved == doctest::Approx(1.0));
        CHECK(optimal_radii({1.0}, 3, 1).radii[0] == doctest::Approx(0.25));

        // The closed form beats any other radii meeting the budget.
        Rng rng(3);
        for (int trial = 0; trial < 100; ++trial) {
            const int n = 2 + static_cast<int>(rng.below(2));
            const int k = 1 + static_cast<int>(rng.below(n - 1));
            std::vector<double> V(1 + rng.below(10));
            for (double& v : V) v = rng.uniform(0.1, 2.0);
            const OptimalRadii opt = optimal_radii(V, n, k);
            CHECK(packing_value(V, opt.radii, k) == doctest::Approx(opt.achieved));
            std::vector<double> r(V.size());
            double budget = 0;
            for (double& x : r) {
                x = rng.uniform();
                budget += std::pow(x, n);
            }
            const double scale = 0.25 * std::pow(budget, -1.0 / n);
            for (double& x : r) x *= scale;
            CHECK(packing_value(V, r, k) <= opt.achieved * (1 + 1e-12));
        }
        CHECK_THROWS_AS(optimal_radii({1.0}, 2, 2), DomainError);
    }

    TEST_CASE("cup lower bound")
    {
        CHECK(cup_lower_bound(1, BoundConfig::defaults(2, 1)) == doctest::Approx(0.25));
        for (int n = 2; n <= 4; ++n)
            for (int k = 1; k < n; ++k) {
                const BoundConfig c = BoundConfig::defaults(n, k);
                for (int p : {1, 7, 64})
                    CHECK(cup_lower_bound(2 * p, c) / cup_lower_bound(p, c) ==
                          doctest::Approx(std::pow(2.0, double(n - k) / n)));
            }
        CHECK_FALSE(BoundConfig::defaults(3, 1).constant_known);
        CHECK_THROWS_AS(cup_lower_bound(0, BoundConfig::defaults(2, 1)), DomainError);
        BoundConfig bad = BoundConfig::defaults(2, 1);
        bad.eps = 1.0;
        CHECK_THROWS_AS(cup_lower_bound(1, bad), DomainError);
    }

    TEST_CASE("hypersurface bound")
    {
        CHECK(hypersurface_bound(2) == doctest::Approx(1.30129).epsilon(1e-5));
        CHECK(hypersurface_bound(3) == doctest::Approx(1.63313).epsilon(1e-5));
        CHECK_THROWS_AS(hypersurface_bound(1), DomainError);
    }

    TEST_CASE("scaling fit recovers a power law")
    {
        std::vector<std::pair<double, double>> rows;
        for (double p : {4.0, 16.0, 64.0, 256.0}) rows.push_back({p, 3.0 * std::pow(p, 0.5)});
        const LineFit f = scaling_fit(rows);
        CHECK(f.slope == doctest::Approx(0.5));
        CHECK(std::exp(f.intercept) == doctest::Approx(3.0));
        CHECK(f.r2 == doctest::Approx(1.0));
        CHECK_THROWS_AS(scaling_fit({{1, 1}, {2, 2}}), DomainError);
        CHECK_THROWS_AS(scaling_fit({{1, 1}, {2, 0}, {3, 3}}), DomainError);
    }

    TEST_CASE("point coverage")
    {
        Rng rng(9);
        for (int q = 1; q <= 8; ++q) {
            std::vector<Vec> pts;
            for (int j = 0; j < q; ++j) pts.push_back(make_vec({rng.uniform(-0.6, 0.6), rng.uniform(-0.6, 0.6)}));
            const CoverageResult r = point_coverage(parallel_tuples(q), pts, 1e-9, 0, 1);
            CHECK(r.found);
            CHECK(r.from_witness);
        }
        const std::vector<Vec> two{make_vec({0.1, 0.0}), make_vec({0.5, 0.2})};
        const CoverageResult v = point_coverage(vertical_lines(), two, 0.05, 200, 2);
        CHECK_FALSE(v.found);
        CHECK(v.max_distance >= 0.2 - 0.05);
        CHECK_THROWS_AS(point_coverage(vertical_lines(), {make_vec({1.0, 0.0})}, 0.1, 0, 1), DomainError);
    }

    TEST_CASE("antipodal coverage of a level circle")
    {
        std::vector<Vec> loop;
        for (int j = 0; j < 64; ++j) {
            const double th = 2 * M_PI * j / 64.0;
            loop.push_back(make_vec({0.5 * std::cos(th), 0.5 * std::sin(th), 0.3}));
        }
        const CoverageResult r = antipodal_coverage(translate(planar_curves(1)), loop, 0.02, 0, 1);
        CHECK(r.found);
        CHECK_THROWS_AS(antipodal_coverage(translate(planar_curves(1)), std::vector<Vec>(3, make_vec({0, 0, 0})), 0.1, 0, 1),
                        DomainError);
    }

    TEST_CASE("random loops stay inside the ball")
    {
        Rng rng(12);
        for (int trial = 0; trial < 20; ++trial) {
            const auto loop = random_loop(3, 3, 0.9, 128, rng);
            REQUIRE(loop.size() == 128);
            for (const auto& x : loop) CHECK(x.norm() <= 0.9 + 1e-12);
        }
    }

    TEST_CASE("packing json")
    {
        const auto j = pack_balls({0.1, 0.05}, 2, 3).to_json();
        CHECK(j["radii"].size() == 2);
        CHECK(j["centers"].size() == 2);
    }
}
