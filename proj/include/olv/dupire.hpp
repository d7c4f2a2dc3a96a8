// SPDX-License-Identifier: Apache-2.0
/**
 * @file dupire.hpp
 * @brief Crank-Nicolson solver for Dupire's forward equation in
 *        log-moneyness, and the forward operator over a spot family.
 *
 * The price u(tau, y) of a call with strike K = S0 e^y solves
 *
 *     u_tau = a (u_yy - u_y) + b u_y,   u(0, y) = S0 (1 - e^y)^+,
 *
 * with u -> S0 as y -> -inf and u -> 0 as y -> +inf. The drift enters with
 * a plus sign; for constant a = sigma^2/2 the solution is the Black-Scholes
 * call with interest rate -b and no dividends (see bs_price).
 */

#pragma once

#include <vector>

#include "olv/execution.hpp"
#include "olv/grid.hpp"

namespace olv {

struct MarketParams {
    double b = 0.0;     ///< cost of carry (1/year), coefficient of u_y
    double spot = 1.0;  ///< S0

    void validate() const;
};

/// Number of fully implicit startup steps applied before Crank-Nicolson.
inline constexpr std::size_t kImplicitStartupSteps = 2;

/// Prices on the grid of `a`. Row 0 is the payoff; columns y_min and y_max
/// hold S0 and 0 for tau > 0.
/// @throws InvalidArgument if a is not strictly positive
/// @throws NumericalError on a zero pivot in the tridiagonal solve
Surface solve_dupire(const Surface& a, const MarketParams& params);

/// Closed-form constant-variance solution of the equation above:
///     S0 N(d1) - K e^{b tau} N(d2),  d1 = (ln(S0/K) - b tau + sigma^2 tau / 2) / (sigma sqrt(tau)).
/// At tau = 0 returns (S0 - K)^+.
double bs_price(double sigma, const MarketParams& params, double strike, double tau);

/// bs_price evaluated at every node of a grid (strike = S0 e^y).
Surface bs_surface(double sigma, const MarketParams& params, GridPtr grid);

struct OracleError {
    double relative = 0.0;  ///< max |u - bs| / max |bs|
    double max_abs = 0.0;   ///< max |u - bs|
};

/// Compares a constant-variance solve (a = sigma^2 / 2) with bs_price on
/// the maturity row tau = T, strikes with |y| <= y_window. Deep
/// out-of-the-money prices are tiny, so the error is normalized by the
/// largest reference price in the window rather than node by node.
OracleError bs_oracle_error(const Surface& u, double sigma, const MarketParams& params, double y_window = 1.0);

/// F(s, a) = u(s, a) - u(s, a0(s)) per spot node, with S0 = s_min + s.
///
/// Prior prices are computed once at construction and reused by every
/// apply() call. The prior is usually one surface a0 shared by all nodes.
class ForwardModel {
public:
    ForwardModel(SpotAxis axis, const Surface& prior, double b, Execution exec = Execution::parallel);
    ForwardModel(SurfaceFamily prior, double b, Execution exec = Execution::parallel);

    const SpotAxis& axis() const noexcept { return prior_.axis(); }
    const SurfaceFamily& prior() const noexcept { return prior_; }
    double b() const noexcept { return b_; }
    Execution execution() const noexcept { return exec_; }
    const std::vector<Surface>& prior_prices() const noexcept { return prior_prices_; }
    MarketParams params(std::size_t m) const { return {b_, prior_.axis().spot(m)}; }

    /// Raw prices u(s, a(s)) per slice.
    SurfaceFamily prices(const SurfaceFamily& fam) const;
    /// Price differences u(s, a(s)) - u(s, a0).
    SurfaceFamily apply(const SurfaceFamily& fam) const;

private:
    void check_family(const SurfaceFamily& fam) const;

    SurfaceFamily prior_;
    double b_;
    Execution exec_;
    std::vector<Surface> prior_prices_;
};

SurfaceFamily forward_operator(const SurfaceFamily& fam_a, const Surface& prior_a0, double b,
                               Execution exec = Execution::parallel);

}  // namespace olv
