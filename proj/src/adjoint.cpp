// SPDX-License-Identifier: Apache-2.0
#include "olv/adjoint.hpp"

#include <cmath>
#include <sstream>

#include "olv/errors.hpp"
#include "stepping.hpp"

namespace olv {

namespace {

/// Lagrange multipliers of the discrete step equations. Row k (1-based)
/// holds the multiplier of the step mapping row k-1 to row k; row 0 is
/// unused. Source is d(sum_k sum_j W_kj r_kj^2)/du_k = 2 W_k r_k.
Surface step_multipliers(const Surface& a, const Surface& residual, double b) {
    const Grid2D& g = a.grid();
    const std::size_t nt = g.n_tau();
    const std::size_t n = g.n_y();
    const double dt = g.dtau();
    const auto wt = g.tau_weights();
    const auto wy = g.y_weights();

    Surface lam(a.grid_ptr(), 0.0);
    detail::Stencil cur, nxt;
    std::vector<double> lo(n), di(n), up(n), rhs(n), scratch;

    for (std::size_t k = nt - 1; k >= 1; --k) {
        detail::assemble_stencil(a, k, b, cur);
        const double theta = detail::step_theta(k);
        const auto r = residual.row(k);

        for (std::size_t j = 1; j + 1 < n; ++j) rhs[j] = 2.0 * wt[k] * wy[j] * r[j];

        if (k + 1 < nt) {
            // + Q_{k+1}^T lambda_{k+1}
            detail::assemble_stencil(a, k + 1, b, nxt);
            const double explicit_weight = (1.0 - detail::step_theta(k + 1)) * dt;
            const auto ln = lam.row(k + 1);
            for (std::size_t j = 1; j + 1 < n; ++j) {
                double at = nxt.diag[j] * ln[j];
                if (j > 1) at += nxt.upper[j - 1] * ln[j - 1];
                if (j + 2 < n) at += nxt.lower[j + 1] * ln[j + 1];
                rhs[j] += ln[j] + explicit_weight * at;
            }
        }

        // P_k^T: sub-diagonal from P's super-diagonal and vice versa.
        for (std::size_t j = 1; j + 1 < n; ++j) {
            lo[j] = j > 1 ? -theta * dt * cur.upper[j - 1] : 0.0;
            di[j] = 1.0 - theta * dt * cur.diag[j];
            up[j] = j + 2 < n ? -theta * dt * cur.lower[j + 1] : 0.0;
        }
        if (!detail::solve_tridiagonal(lo, di, up, rhs, 1, n - 2, scratch)) {
            std::ostringstream os;
            os << "zero pivot in adjoint tridiagonal solve at step " << k;
            throw NumericalError(os.str(), static_cast<std::ptrdiff_t>(k));
        }
        auto out = lam.row(k);
        for (std::size_t j = 1; j + 1 < n; ++j) out[j] = rhs[j];
    }
    return lam;
}

void check_same_grid(const Surface& a, const Surface& u, const Surface& u_obs) {
    if (!a.same_grid(u) || !a.same_grid(u_obs)) throw InvalidArgument("adjoint inputs must share one grid");
    if (!a.all_finite() || !(a.min() > 0.0)) throw InvalidArgument("local variance must be strictly positive");
}

/// dJ/da per node divided by the (tau, y) quadrature weight.
Surface slice_representer(const Surface& a, const Surface& u, const Surface& lam, double spot) {
    const Grid2D& g = a.grid();
    const std::size_t nt = g.n_tau();
    const std::size_t n = g.n_y();
    const double dt = g.dtau();
    const double h = g.dy();
    const auto wt = g.tau_weights();
    const auto wy = g.y_weights();
    const std::vector<double> start = detail::initial_row(g, spot);

    // dJ/dc at the half level of each step.
    Surface dc(a.grid_ptr(), 0.0);
    for (std::size_t k = 1; k < nt; ++k) {
        const double theta = detail::step_theta(k);
        const std::span<const double> prev = k == 1 ? std::span<const double>(start) : u.row(k - 1);
        const auto next = u.row(k);
        const auto l = lam.row(k);
        auto out = dc.row(k);
        for (std::size_t j = 1; j + 1 < n; ++j) {
            out[j] = l[j] * dt *
                     (theta * detail::diffusion_term(next, j, h) + (1.0 - theta) * detail::diffusion_term(prev, j, h));
        }
    }

    Surface grad(a.grid_ptr(), 0.0);
    for (std::size_t i = 0; i < nt; ++i) {
        auto out = grad.row(i);
        for (std::size_t j = 1; j + 1 < n; ++j) {
            double d = 0.0;
            if (i >= 1) d += 0.5 * dc(i, j);
            if (i + 1 < nt) d += 0.5 * dc(i + 1, j);
            out[j] = d / (wt[i] * wy[j]);
        }
    }
    return grad;
}

double weighted_sq(const Surface& r) { return surface_inner(r, r); }

}  // namespace

Surface solve_adjoint(const Surface& a, const Surface& u, const Surface& u_obs, double b) {
    check_same_grid(a, u, u_obs);
    if (!std::isfinite(b)) throw InvalidArgument("cost of carry b must be finite");
    const Surface lam = step_multipliers(a, u - u_obs, b);

    // lambda_k belongs to the step ending at row k; it approximates
    // 2 dy v(tau_{k-1/2}). Average neighbours to land on nodes.
    const Grid2D& g = a.grid();
    const std::size_t nt = g.n_tau();
    const double scale = 1.0 / (2.0 * g.dy());
    Surface v(a.grid_ptr(), 0.0);
    for (std::size_t i = 0; i + 1 < nt; ++i) {
        auto out = v.row(i);
        const auto l1 = lam.row(i + 1);
        if (i == 0) {
            // Linear extrapolation from the first two half levels.
            const auto l2 = lam.row(nt > 2 ? 2 : 1);
            const double w2 = nt > 2 ? 0.5 : 0.0;
            for (std::size_t j = 0; j < out.size(); ++j) out[j] = scale * ((1.0 + w2) * l1[j] - w2 * l2[j]);
        } else {
            const auto l0 = lam.row(i);
            for (std::size_t j = 0; j < out.size(); ++j) out[j] = 0.5 * scale * (l0[j] + l1[j]);
        }
    }
    return v;
}

MisfitGradient misfit_gradient(const ForwardModel& model, const SurfaceFamily& fam_a, const SurfaceFamily& obs) {
    if (!fam_a.compatible(obs)) throw InvalidArgument("observations must share the family axis and grid");
    const SurfaceFamily prices = model.prices(fam_a);
    std::vector<Surface> grads(fam_a.size());
    std::vector<double> partial(fam_a.size(), 0.0);

    for_each_slice(fam_a.size(), model.execution(), [&](std::size_t m) {
        // residual = u(a) - u(a0) - obs
        Surface residual = prices[m] - model.prior_prices()[m];
        residual -= obs[m];
        partial[m] = weighted_sq(residual);
        try {
            const Surface lam = step_multipliers(fam_a[m], residual, model.b());
            grads[m] = slice_representer(fam_a[m], prices[m], lam, model.axis().spot(m));
        } catch (const NumericalError& e) {
            std::ostringstream os;
            os << e.what() << " (slice " << m << ")";
            throw NumericalError(os.str(), e.step(), static_cast<std::ptrdiff_t>(m));
        }
    });

    MisfitGradient out{0.0, SurfaceFamily(fam_a.axis(), std::move(grads))};
    const auto ws = fam_a.axis().weights();
    for (std::size_t m = 0; m < partial.size(); ++m) out.residual_sq += ws[m] * partial[m];
    return out;
}

SurfaceFamily misfit_gradient(const SurfaceFamily& fam_a, const SurfaceFamily& fam_obs, const Surface& prior_a0, double b,
                              Execution exec) {
    const ForwardModel model(fam_a.axis(), prior_a0, b, exec);
    return misfit_gradient(model, fam_a, fam_obs).gradient;
}

double misfit_value(const ForwardModel& model, const SurfaceFamily& fam_a, const SurfaceFamily& obs) {
    SurfaceFamily r = model.apply(fam_a);
    r -= obs;
    return family_inner(r, r);
}

}  // namespace olv
