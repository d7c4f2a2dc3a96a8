// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include "helpers.hpp"
#include "olv/data_io.hpp"
#include "olv/errors.hpp"
#include "olv/regularization.hpp"

using namespace olv;
using Catch::Approx;

namespace {

const GridPtr kGrid = make_grid(1.0, 3.0, 0.05, 0.2);
const SpotAxis kAxis(29.5, 30.5, 3);

AdmissibleSet box(double lo, double hi, double prior) {
    return {lo, hi, SurfaceFamily::constant(kAxis, Surface(kGrid, prior))};
}

bool non_increasing(const std::vector<double>& v) {
    for (std::size_t k = 1; k < v.size(); ++k) {
        if (v[k] > v[k - 1]) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("project_Q") {
    const AdmissibleSet q = box(0.1, 0.32, 0.2);
    SECTION("inside the box is untouched") {
        std::mt19937_64 rng(1);
        const auto fam = test::random_family(kAxis, kGrid, rng, 0.1, 0.32);
        CHECK(project_Q(fam, q) == fam);
    }
    SECTION("upper clamp") {
        const auto out = project_Q(SurfaceFamily::constant(kAxis, Surface(kGrid, 10.0)), q);
        for (const auto& s : out.slices()) CHECK(s.min() == 0.32);
    }
    SECTION("mixed values") {
        auto fam = SurfaceFamily::constant(kAxis, Surface(kGrid, 0.2));
        fam[0](0, 0) = 0.05;
        fam[0](0, 1) = 0.9;
        const auto out = project_Q(fam, q);
        CHECK(out[0](0, 0) == 0.1);
        CHECK(out[0](0, 2) == 0.2);
        CHECK(out[0](0, 1) == 0.32);
    }
    SECTION("idempotent and non-expansive") {
        std::mt19937_64 rng(2);
        for (int trial = 0; trial < 10; ++trial) {
            const auto a = test::random_family(kAxis, kGrid, rng, -1, 1);
            const auto b = test::random_family(kAxis, kGrid, rng, -1, 1);
            const auto pa = project_Q(a, q);
            CHECK(project_Q(pa, q) == pa);
            double sup_in = 0, sup_out = 0;
            for (std::size_t m = 0; m < kAxis.size(); ++m) {
                sup_in = std::max(sup_in, test::max_abs_diff(a[m], b[m]));
                sup_out = std::max(sup_out, test::max_abs_diff(pa[m], project_Q(b, q)[m]));
            }
            CHECK(sup_out <= sup_in);
        }
    }
}

TEST_CASE("admissible set validation") {
    CHECK_THROWS_AS(box(0.0, 0.5, 0.2).validate(), InvalidArgument);
    CHECK_THROWS_AS(box(0.3, 0.2, 0.25).validate(), InvalidArgument);
    CHECK_THROWS_AS(box(0.1, 0.2, 0.4).validate(), InvalidArgument);
}

TEST_CASE("tikhonov objective") {
    const AdmissibleSet q = box(0.05, 0.6, 0.08);
    TikhonovConfig cfg;
    cfg.alpha = 0.7;
    std::mt19937_64 rng(3);
    SECTION("prior with zero data") {
        const TikhonovProblem p(SurfaceFamily::zeros(kAxis, kGrid), q, 0.03);
        const auto v = tikhonov_objective(p, q.prior, cfg);
        CHECK(v.objective == 0.0);
    }
    SECTION("prior with arbitrary data") {
        const auto obs = test::random_family(kAxis, kGrid, rng, -1, 1);
        const TikhonovProblem p(obs, q, 0.03);
        CHECK(tikhonov_objective(p, q.prior, cfg).objective == Approx(std::pow(family_l2_norm(obs), 2)).epsilon(1e-12));
    }
    SECTION("alpha zero drops the penalty") {
        const auto obs = test::random_family(kAxis, kGrid, rng, -1, 1);
        const TikhonovProblem p(obs, q, 0.03);
        const auto fam = test::random_family(kAxis, kGrid, rng, 0.05, 0.6);
        cfg.alpha = 0.0;
        const auto v = tikhonov_objective(p, fam, cfg);
        CHECK(v.objective == v.residual_sq);
        CHECK(v.penalty > 0.0);
    }
    SECTION("outside Q is rejected") {
        const TikhonovProblem p(SurfaceFamily::zeros(kAxis, kGrid), q, 0.03);
        CHECK_THROWS_AS(tikhonov_objective(p, SurfaceFamily::constant(kAxis, Surface(kGrid, 0.9)), cfg),
                        InvalidArgument);
    }
}

TEST_CASE("minimize") {
    const AdmissibleSet q = box(0.05, 0.6, 0.08);
    std::mt19937_64 rng(4);
    SECTION("data generated by the prior") {
        const TikhonovProblem p(SurfaceFamily::zeros(kAxis, kGrid), q, 0.03);
        TikhonovConfig cfg;
        cfg.alpha = 0.1;
        const auto r = minimize(p, cfg);
        CHECK(r.family == q.prior);
        CHECK(r.iterations == 1);
        REQUIRE(r.objective_trace.size() == 1);
        CHECK(r.objective_trace[0] == 0.0);
        CHECK(r.converged);
    }
    SECTION("trace non-increasing and iterates admissible") {
        const auto truth = test::random_family(kAxis, kGrid, rng, 0.05, 0.6);
        const TikhonovProblem p(forward_operator(truth, q.prior[0], 0.03), q, 0.03);
        for (double alpha : {0.0, 1e-4, 1e-1}) {
            TikhonovConfig cfg;
            cfg.alpha = alpha;
            cfg.max_iters = 60;
            const auto r = minimize(p, cfg);
            CHECK(non_increasing(r.objective_trace));
            CHECK(q.contains(r.family, 1e-12));
            CHECK(static_cast<int>(r.objective_trace.size()) == r.iterations);
        }
    }
    SECTION("large alpha pins the prior") {
        const auto truth = test::random_family(kAxis, kGrid, rng, 0.05, 0.6);
        const TikhonovProblem p(forward_operator(truth, q.prior[0], 0.03), q, 0.03);
        const auto init = test::random_family(kAxis, kGrid, rng, 0.05, 0.6);
        TikhonovConfig cfg;
        const double scale = std::pow(family_l2_norm(p.obs()), 2);
        cfg.alpha = 1e3 * scale;
        cfg.max_iters = 500;
        const auto r = minimize(p, cfg, init);
        CHECK(x_norm(r.family, q.prior, cfg.bochner) <= 1e-3 * x_norm(init, q.prior, cfg.bochner));
    }
}

TEST_CASE("noiseless recovery on the inversion grid") {
    SyntheticSpec spec;
    spec.noise_std = 0.0;
    spec.coarse_dtau = 0.01;
    spec.coarse_dy = 0.1;
    spec.ds = 1.5;  // three slices keep the run short
    const SyntheticData data = generate_synthetic(spec);
    const AdmissibleSet q = spec.admissible();
    const TikhonovProblem p(data.data.obs, q, spec.b);
    TikhonovConfig cfg;
    cfg.alpha = 1e-8;
    cfg.max_iters = 300;
    const auto r = minimize(p, cfg);
    const double before = mean_slice_distance(q.prior, data.truth_on_coarse);
    const double after = mean_slice_distance(r.family, data.truth_on_coarse);
    INFO("initial " << before << " recovered " << after);
    CHECK(after <= 0.5 * before);
}

TEST_CASE("bregman distance") {
    const AdmissibleSet q = box(0.05, 0.6, 0.08);
    const TikhonovConfig cfg;
    std::mt19937_64 rng(5);
    const auto x = test::random_family(kAxis, kGrid, rng, 0.05, 0.6);
    CHECK(bregman_distance(x, x, q, cfg) == 0.0);
    const Surface phi = test::random_surface(kGrid, rng, -0.01, 0.01);
    const auto xt = x + SurfaceFamily::constant(kAxis, phi);
    CHECK(bregman_distance(xt, x, q, cfg) == Approx(std::pow(h_norm(phi), 2)).epsilon(1e-10));
    for (int trial = 0; trial < 5; ++trial) {
        const auto y = test::random_family(kAxis, kGrid, rng, 0.05, 0.6);
        const double d = bregman_distance(y, x, q, cfg);
        CHECK(d == Approx(std::pow(x_norm(y, x, cfg.bochner), 2)).epsilon(1e-10));
    }
}
