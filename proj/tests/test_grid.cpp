// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include "helpers.hpp"
#include "olv/errors.hpp"
#include "olv/grid.hpp"

using namespace olv;
using Catch::Approx;

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(Grid2D({0.0, 1.0}, {0.0, 1.0, 2.0}), InvalidArgument);
    CHECK_THROWS_AS(Grid2D({0.0, 0.5, 1.0}, {0.0, 2.0, 1.0}), InvalidArgument);
    CHECK_THROWS_AS(Grid2D({0.0, 0.5, 1.5}, {0.0, 1.0, 2.0}), InvalidArgument);
    const Grid2D g = Grid2D::uniform(1.0, 5.0, 0.01, 0.1);
    CHECK(g.n_tau() == 101);
    CHECK(g.n_y() == 101);
    CHECK(g.y_min() == Approx(-5.0));
    CHECK(g.T() == Approx(1.0));
}

TEST_CASE("surface shape and finiteness") {
    auto g = make_grid(1.0, 1.0, 0.5, 0.5);
    CHECK_THROWS_AS(Surface(g, std::vector<double>(4, 0.0)), InvalidArgument);
    Surface s(g, 1.0);
    CHECK(s.all_finite());
    s(1, 1) = std::nan("");
    CHECK_FALSE(s.all_finite());
}

TEST_CASE("make_payoff") {
    auto g = make_grid(1.0, 5.0, 0.5, 0.1);
    const Surface p1 = make_payoff(g, 1.0);
    const Surface p = make_payoff(g, 30.0);
    CHECK(p1(0, 50) == 0.0);  // y = 0
    CHECK(p(0, 0) == Approx(30.0 * (1.0 - std::exp(-5.0))).epsilon(1e-12));
    CHECK(p(0, 0) == Approx(29.7979).margin(1e-4));
    CHECK(p(0, 70) == 0.0);  // y = 2
}

TEST_CASE("interpolate_surface") {
    auto src_grid = make_grid(1.0, 1.0, 0.05, 0.01);
    SECTION("identical grid copies bitwise") {
        std::mt19937_64 rng(1);
        const Surface s = test::random_surface(src_grid, rng, -1, 1);
        CHECK(interpolate_surface(s, make_grid(1.0, 1.0, 0.05, 0.01)) == s);
    }
    SECTION("affine fields are reproduced") {
        auto f = [](double t, double y) { return 1.5 + 2.0 * t - 0.7 * y; };
        const Surface s = test::field(src_grid, f);
        auto dst = std::make_shared<const Grid2D>(std::vector<double>{0.0, 0.33, 0.66, 0.99},
                                                  std::vector<double>{-0.97, -0.32, 0.33, 0.98});
        const Surface out = interpolate_surface(s, dst);
        CHECK(test::max_abs_diff(out, test::field(dst, f)) <= 1e-12);
    }
    SECTION("smooth field within second-order error") {
        auto f = [](double t, double y) { return t * y * y; };
        const Surface s = test::field(src_grid, f);
        auto dst = make_grid(1.0, 1.0, 0.1, 0.1);
        // Nodes coincide here, so also test an offset grid.
        CHECK(test::max_abs_diff(interpolate_surface(s, dst), test::field(dst, f)) <= 1e-12);
        auto off = std::make_shared<const Grid2D>(std::vector<double>{0.0, 0.3, 0.6, 0.9},
                                                  std::vector<double>{-0.995, -0.405, 0.185, 0.775});
        CHECK(test::max_abs_diff(interpolate_surface(s, off), test::field(off, f)) <= 0.25 * 0.01 * 0.01 + 1e-12);
    }
    SECTION("outside the source domain") {
        const Surface s(src_grid, 1.0);
        auto far = std::make_shared<const Grid2D>(std::vector<double>{0.0, 1.0, 2.0}, std::vector<double>{-1.0, 0.0, 1.0});
        CHECK_THROWS_AS(interpolate_surface(s, far), DomainError);
    }
}

TEST_CASE("family norms") {
    auto g = make_grid(1.0, 0.5, 0.01, 0.01);
    SECTION("zero family") {
        const SpotAxis ax(0.0, 1.0, 11);
        CHECK(family_l2_norm(SurfaceFamily::zeros(ax, g)) == 0.0);
    }
    SECTION("constant family") {
        const SpotAxis ax(10.0, 13.0, 7);
        const double c = 0.7;
        const auto fam = SurfaceFamily::constant(ax, Surface(g, c));
        CHECK(family_l2_norm(fam) == Approx(c * std::sqrt(1.0 * 1.0 * 3.0)).epsilon(1e-12));
    }
    SECTION("values = s") {
        const SpotAxis ax(0.0, 1.0, 101);
        std::vector<Surface> slices;
        for (double s : ax.nodes()) slices.emplace_back(g, s);
        const SurfaceFamily fam(ax, std::move(slices));
        CHECK(std::abs(family_l2_norm(fam) - 1.0 / std::sqrt(3.0)) <= ax.ds() * ax.ds());
    }
    SECTION("homogeneity and triangle inequality") {
        std::mt19937_64 rng(7);
        const SpotAxis ax(0.0, 2.0, 5);
        for (int trial = 0; trial < 20; ++trial) {
            const auto a = test::random_family(ax, g, rng, -1, 1);
            const auto b = test::random_family(ax, g, rng, -1, 1);
            const double c = -3.7;
            CHECK(family_l2_norm(c * a) == Approx(std::abs(c) * family_l2_norm(a)).epsilon(1e-12));
            CHECK(family_l2_norm(a + b) <= family_l2_norm(a) + family_l2_norm(b) + 1e-12);
        }
    }
}

TEST_CASE("spot axis") {
    const SpotAxis ax = SpotAxis::with_step(29.5, 32.5, 0.5);
    CHECK(ax.size() == 7);
    CHECK(ax.nodes().front() == 0.0);
    CHECK(ax.nodes().back() == Approx(3.0));
    CHECK(ax.spot(2) == Approx(30.5));
    const SpotAxis one = SpotAxis::single(30.0);
    CHECK(one.size() == 1);
    CHECK(one.weights()[0] == 1.0);
    CHECK(ax.prefix(1) == SpotAxis::single(29.5));
    CHECK(ax.prefix(3).length() == Approx(1.0));
    CHECK_THROWS_AS(SpotAxis(1.0, 0.0, 3), InvalidArgument);
}

TEST_CASE("families share one grid") {
    auto g1 = make_grid(1.0, 1.0, 0.5, 0.5);
    auto g2 = make_grid(1.0, 1.0, 0.25, 0.5);
    const SpotAxis ax(0.0, 1.0, 2);
    CHECK_THROWS_AS(SurfaceFamily(ax, {Surface(g1), Surface(g2)}), InvalidArgument);
    CHECK_THROWS_AS(SurfaceFamily(ax, {Surface(g1)}), InvalidArgument);
}
