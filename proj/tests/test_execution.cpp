// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <stdexcept>

#include "helpers.hpp"
#include "olv/adjoint.hpp"
#include "olv/execution.hpp"
#include "olv/regularization.hpp"

using namespace olv;

namespace {

struct Fixture {
    GridPtr grid = make_grid(1.0, 2.0, 0.05, 0.1);
    SpotAxis axis{29.0, 31.0, 5};
    Surface prior{grid, 0.08};
    SurfaceFamily fam = SurfaceFamily::zeros(axis, grid);
    SurfaceFamily obs = SurfaceFamily::zeros(axis, grid);

    Fixture() {
        set_thread_count(4);
        std::mt19937_64 rng(21);
        fam = test::random_family(axis, grid, rng, 0.05, 0.4);
        obs = forward_operator(test::random_family(axis, grid, rng, 0.05, 0.4), prior, 0.03);
    }
};

}  // namespace

TEST_CASE("forward operator is identical on both paths") {
    Fixture f;
    CHECK(forward_operator(f.fam, f.prior, 0.03, Execution::serial) ==
          forward_operator(f.fam, f.prior, 0.03, Execution::parallel));
}

TEST_CASE("misfit gradient is identical on both paths") {
    Fixture f;
    const ForwardModel serial(f.axis, f.prior, 0.03, Execution::serial);
    const ForwardModel parallel(f.axis, f.prior, 0.03, Execution::parallel);
    const auto gs = misfit_gradient(serial, f.fam, f.obs);
    const auto gp = misfit_gradient(parallel, f.fam, f.obs);
    CHECK(gs.gradient == gp.gradient);
    CHECK(gs.residual_sq == gp.residual_sq);
}

TEST_CASE("minimize is identical on both paths") {
    Fixture f;
    const AdmissibleSet q{0.05, 0.6, SurfaceFamily::constant(f.axis, f.prior)};
    TikhonovConfig cfg;
    cfg.alpha = 1e-3;
    cfg.max_iters = 15;
    const auto rs = minimize(TikhonovProblem(f.obs, q, 0.03, Execution::serial), cfg);
    const auto rp = minimize(TikhonovProblem(f.obs, q, 0.03, Execution::parallel), cfg);
    CHECK(rs.family == rp.family);
    CHECK(rs.objective_trace == rp.objective_trace);
}

TEST_CASE("exceptions propagate from parallel slices") {
    set_thread_count(4);
    for (Execution exec : {Execution::serial, Execution::parallel}) {
        try {
            for_each_slice(8, exec, [](std::size_t m) {
                if (m == 3 || m == 6) throw std::runtime_error("slice " + std::to_string(m));
            });
            FAIL("expected an exception");
        } catch (const std::runtime_error& e) {
            CHECK(std::string(e.what()) == "slice 3");
        }
    }
}

TEST_CASE("numerical errors carry the slice index") {
    Fixture f;
    f.fam[2](3, 4) = -1.0;
    for (Execution exec : {Execution::serial, Execution::parallel}) {
        CHECK_THROWS_WITH(forward_operator(f.fam, f.prior, 0.03, exec), Catch::Matchers::ContainsSubstring("slice 2"));
    }
}
