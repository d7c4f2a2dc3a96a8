// SPDX-License-Identifier: Apache-2.0
#include "olv/dupire.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "olv/errors.hpp"
#include "stepping.hpp"

namespace olv {

void MarketParams::validate() const {
    if (!(spot > 0.0) || !std::isfinite(spot)) throw InvalidArgument("spot must be positive");
    if (!std::isfinite(b)) throw InvalidArgument("cost of carry b must be finite");
}

Surface solve_dupire(const Surface& a, const MarketParams& params) {
    params.validate();
    if (!a.all_finite() || !(a.min() > 0.0)) throw InvalidArgument("local variance must be strictly positive");

    const Grid2D& g = a.grid();
    const std::size_t nt = g.n_tau();
    const std::size_t n = g.n_y();
    const double dt = g.dtau();

    Surface u = make_payoff(a.grid_ptr(), params.spot);
    detail::Stencil st;
    std::vector<double> lo(n), di(n), up(n), rhs(n), scratch;
    const std::vector<double> start = detail::initial_row(g, params.spot);

    for (std::size_t k = 1; k < nt; ++k) {
        detail::assemble_stencil(a, k, params.b, st);
        const double theta = detail::step_theta(k);
        const std::span<const double> prev = k == 1 ? std::span<const double>(start) : u.row(k - 1);
        auto next = u.row(k);
        next[0] = params.spot;
        next[n - 1] = 0.0;

        for (std::size_t j = 1; j + 1 < n; ++j) {
            const double lu = st.lower[j] * prev[j - 1] + st.diag[j] * prev[j] + st.upper[j] * prev[j + 1];
            rhs[j] = prev[j] + (1.0 - theta) * dt * lu;
            lo[j] = -theta * dt * st.lower[j];
            di[j] = 1.0 - theta * dt * st.diag[j];
            up[j] = -theta * dt * st.upper[j];
        }
        // Dirichlet values of the new row move to the right-hand side.
        rhs[1] -= lo[1] * next[0];
        rhs[n - 2] -= up[n - 2] * next[n - 1];

        if (!detail::solve_tridiagonal(lo, di, up, rhs, 1, n - 2, scratch)) {
            std::ostringstream os;
            os << "zero pivot in forward tridiagonal solve at step " << k;
            throw NumericalError(os.str(), static_cast<std::ptrdiff_t>(k));
        }
        for (std::size_t j = 1; j + 1 < n; ++j) next[j] = rhs[j];
    }
    return u;
}

namespace {

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace

double bs_price(double sigma, const MarketParams& params, double strike, double tau) {
    params.validate();
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidArgument("sigma must be positive");
    if (!(strike > 0.0) || !std::isfinite(strike)) throw InvalidArgument("strike must be positive");
    if (!(tau >= 0.0) || !std::isfinite(tau)) throw InvalidArgument("tau must be non-negative");

    const double s0 = params.spot;
    if (tau == 0.0) return std::max(s0 - strike, 0.0);
    const double vol = sigma * std::sqrt(tau);
    const double d1 = (std::log(s0 / strike) - params.b * tau + 0.5 * sigma * sigma * tau) / vol;
    const double d2 = d1 - vol;
    return s0 * norm_cdf(d1) - strike * std::exp(params.b * tau) * norm_cdf(d2);
}

OracleError bs_oracle_error(const Surface& u, double sigma, const MarketParams& params, double y_window) {
    const Grid2D& g = u.grid();
    const std::size_t last = g.n_tau() - 1;
    double err = 0.0, ref = 0.0;
    for (std::size_t j = 0; j < g.n_y(); ++j) {
        const double y = g.y()[j];
        if (std::abs(y) > y_window) continue;
        const double bs = bs_price(sigma, params, params.spot * std::exp(y), g.T());
        err = std::max(err, std::abs(u(last, j) - bs));
        ref = std::max(ref, std::abs(bs));
    }
    if (!(ref > 0.0)) throw InvalidArgument("oracle window contains no strikes");
    return {err / ref, err};
}

Surface bs_surface(double sigma, const MarketParams& params, GridPtr grid) {
    Surface out(grid, 0.0);
    const auto tau = grid->tau();
    const auto y = grid->y();
    for (std::size_t i = 0; i < tau.size(); ++i) {
        for (std::size_t j = 0; j < y.size(); ++j) out(i, j) = bs_price(sigma, params, params.spot * std::exp(y[j]), tau[i]);
    }
    return out;
}

ForwardModel::ForwardModel(SpotAxis axis, const Surface& prior, double b, Execution exec)
    : ForwardModel(SurfaceFamily::constant(std::move(axis), prior), b, exec) {}

ForwardModel::ForwardModel(SurfaceFamily prior, double b, Execution exec)
    : prior_(std::move(prior)), b_(b), exec_(exec) {
    if (!std::isfinite(b_)) throw InvalidArgument("cost of carry b must be finite");
    for (const auto& s : prior_.slices()) {
        if (!(s.min() > 0.0)) throw InvalidArgument("prior variance must be strictly positive");
    }
    prior_prices_.resize(prior_.size());
    for_each_slice(prior_.size(), exec_, [&](std::size_t m) {
        prior_prices_[m] = solve_dupire(prior_[m], params(m));
    });
}

void ForwardModel::check_family(const SurfaceFamily& fam) const {
    if (!fam.compatible(prior_)) throw InvalidArgument("family axis or grid does not match the forward model");
}

SurfaceFamily ForwardModel::prices(const SurfaceFamily& fam) const {
    check_family(fam);
    std::vector<Surface> out(fam.size());
    for_each_slice(fam.size(), exec_, [&](std::size_t m) {
        try {
            out[m] = solve_dupire(fam[m], params(m));
        } catch (const NumericalError& e) {
            std::ostringstream os;
            os << e.what() << " (slice " << m << ")";
            throw NumericalError(os.str(), e.step(), static_cast<std::ptrdiff_t>(m));
        } catch (const InvalidArgument& e) {
            std::ostringstream os;
            os << e.what() << " (slice " << m << ")";
            throw InvalidArgument(os.str());
        }
    });
    return SurfaceFamily(fam.axis(), std::move(out));
}

SurfaceFamily ForwardModel::apply(const SurfaceFamily& fam) const {
    SurfaceFamily u = prices(fam);
    for (std::size_t m = 0; m < u.size(); ++m) u[m] -= prior_prices_[m];
    return u;
}

SurfaceFamily forward_operator(const SurfaceFamily& fam_a, const Surface& prior_a0, double b, Execution exec) {
    return ForwardModel(fam_a.axis(), prior_a0, b, exec).apply(fam_a);
}

}  // namespace olv
