// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "helpers.hpp"
#include "olv/adjoint.hpp"
#include "olv/dupire.hpp"

using namespace olv;

namespace {

// Dense backward Euler for w_t = a w_yy + (a - b) w_y + r on [0, T] with
// w(0) = 0 and w = 0 at both ends; w(t) is the adjoint at tau = T - t.
std::vector<std::vector<double>> dense_reference(double a, double b, double r, double T, double Y, double dt, double dy) {
    const int nt = static_cast<int>(std::lround(T / dt)) + 1;
    const int ny = static_cast<int>(std::lround(2 * Y / dy)) + 1;
    const int n = ny - 2;
    std::vector<std::vector<double>> w(nt, std::vector<double>(ny, 0.0));
    for (int k = 1; k < nt; ++k) {
        std::vector<std::vector<double>> m(n, std::vector<double>(n + 1, 0.0));
        for (int i = 0; i < n; ++i) {
            m[i][i] = 1 + dt * 2 * a / (dy * dy);
            if (i > 0) m[i][i - 1] = -dt * (a / (dy * dy) - (a - b) / (2 * dy));
            if (i < n - 1) m[i][i + 1] = -dt * (a / (dy * dy) + (a - b) / (2 * dy));
            m[i][n] = w[k - 1][i + 1] + dt * r;
        }
        for (int c = 0; c < n; ++c) {
            for (int row = c + 1; row < n; ++row) {
                const double f = m[row][c] / m[c][c];
                for (int q = c; q <= n; ++q) m[row][q] -= f * m[c][q];
            }
        }
        for (int row = n - 1; row >= 0; --row) {
            double s = m[row][n];
            for (int q = row + 1; q < n; ++q) s -= m[row][q] * w[k][q + 1];
            w[k][row + 1] = s / m[row][row];
        }
    }
    return w;
}

struct SmallProblem {
    GridPtr grid = make_grid(1.0, 2.0, 0.1, 0.2);  // 11 x 21
    SpotAxis axis{29.5, 30.5, 3};
    Surface prior{grid, 0.08};
    double b = 0.03;
    SurfaceFamily a;
    SurfaceFamily obs;

    explicit SmallProblem(std::uint64_t seed) : a(SurfaceFamily::zeros(axis, grid)), obs(SurfaceFamily::zeros(axis, grid)) {
        std::mt19937_64 rng(seed);
        a = test::random_family(axis, grid, rng, 0.05, 0.3);
        const SurfaceFamily truth = test::random_family(axis, grid, rng, 0.05, 0.3);
        obs = forward_operator(truth, prior, b);
    }
};

}  // namespace

TEST_CASE("adjoint vanishes for exact data") {
    auto g = make_grid(1.0, 2.0, 0.05, 0.1);
    std::mt19937_64 rng(11);
    const Surface a = test::random_surface(g, rng, 0.05, 0.4);
    const Surface u = solve_dupire(a, {0.03, 30.0});
    const Surface v = solve_adjoint(a, u, u, 0.03);
    for (double x : v.values()) CHECK(x == 0.0);
}

TEST_CASE("adjoint is linear in the source") {
    auto g = make_grid(1.0, 2.0, 0.05, 0.1);
    std::mt19937_64 rng(12);
    const Surface a = test::random_surface(g, rng, 0.05, 0.4);
    const Surface u = solve_dupire(a, {0.03, 30.0});
    const Surface noise = test::random_surface(g, rng, -0.1, 0.1);
    const Surface v1 = solve_adjoint(a, u, u - noise, 0.03);
    const Surface v3 = solve_adjoint(a, u, u - 3.0 * noise, 0.03);
    const double scale = std::max(std::abs(v1.min()), std::abs(v1.max()));
    CHECK(test::max_abs_diff(v3, 3.0 * v1) <= 1e-12 * 3.0 * scale);
}

TEST_CASE("adjoint matches a refined dense backward-Euler solve") {
    const double T = 1.0, Y = 2.0, dt = 0.05, dy = 0.1, a0 = 0.08, b = 0.0;
    auto g = make_grid(T, Y, dt, dy);
    const Surface a(g, a0);
    const Surface u = solve_dupire(a, {b, 30.0});
    Surface obs = u;
    for (double& x : obs.values()) x -= 1.0;  // residual u - obs == 1
    const Surface v = solve_adjoint(a, u, obs, b);
    const auto ref = dense_reference(a0, b, 1.0, T, Y, dt / 4, dy / 4);

    double err = 0.0, scale = 0.0;
    const std::size_t nt = g->n_tau();
    for (std::size_t i = 0; i < nt; ++i) {
        for (std::size_t j = 0; j < g->n_y(); ++j) {
            const double r = ref[(nt - 1 - i) * 4][j * 4];
            scale = std::max(scale, std::abs(r));
            err = std::max(err, std::abs(v(i, j) - r));
        }
    }
    CHECK(err / scale <= 0.02);
}

TEST_CASE("misfit gradient vanishes at exact data") {
    SmallProblem p(21);
    const ForwardModel model(p.axis, p.prior, p.b);
    const auto mg = misfit_gradient(model, p.a, model.apply(p.a));
    CHECK(mg.residual_sq == 0.0);
    CHECK(family_l2_norm(mg.gradient) <= 1e-12);
}

TEST_CASE("misfit gradient is linear in the residual") {
    SmallProblem p(22);
    const ForwardModel model(p.axis, p.prior, p.b);
    const SurfaceFamily u = model.apply(p.a);
    const SurfaceFamily r = u - p.obs;
    const auto g1 = misfit_gradient(model, p.a, u - r).gradient;
    const auto g2 = misfit_gradient(model, p.a, u - 2.0 * r).gradient;
    CHECK(family_l2_norm(g2 - 2.0 * g1) <= 1e-12 * family_l2_norm(g2));
}

TEST_CASE("directional derivatives match central differences") {
    SmallProblem p(23);
    const ForwardModel model(p.axis, p.prior, p.b);
    const auto mg = misfit_gradient(model, p.a, p.obs);
    CHECK(mg.residual_sq == Catch::Approx(misfit_value(model, p.a, p.obs)).epsilon(1e-12));

    std::mt19937_64 rng(99);
    const double eps = 1e-4;
    for (int trial = 0; trial < 10; ++trial) {
        SurfaceFamily h = test::random_family(p.axis, p.grid, rng, -1.0, 1.0);
        const double fd =
            (misfit_value(model, p.a + eps * h, p.obs) - misfit_value(model, p.a - eps * h, p.obs)) / (2 * eps);
        const double an = family_inner(mg.gradient, h);
        INFO("trial " << trial << " fd " << fd << " adjoint " << an);
        CHECK(std::abs(fd - an) <= 1e-3 * std::abs(fd));
    }
}

TEST_CASE("single-node bumps match the representer") {
    SmallProblem p(24);
    const ForwardModel model(p.axis, p.prior, p.b);
    const auto g = misfit_gradient(model, p.a, p.obs).gradient;
    const double eps = 1e-4;
    const std::size_t m = 1;
    for (auto [i, j] : {std::pair<std::size_t, std::size_t>{3, 10}, {5, 7}, {9, 12}, {10, 4}}) {
        SurfaceFamily plus = p.a, minus = p.a;
        plus[m](i, j) += eps;
        minus[m](i, j) -= eps;
        const double fd = (misfit_value(model, plus, p.obs) - misfit_value(model, minus, p.obs)) / (2 * eps);
        const double w = p.axis.weights()[m] * p.grid->tau_weights()[i] * p.grid->y_weights()[j];
        INFO("node " << i << "," << j);
        CHECK(std::abs(fd / w - g[m](i, j)) <= 1e-2 * std::abs(g[m](i, j)));
    }
}
