// SPDX-License-Identifier: Apache-2.0
/**
 * @file adjoint.hpp
 * @brief Adjoint state and L2 gradient of the data misfit
 *
 *     J(A) = || U(A) - U_obs ||^2_{L2(0,S; L2(D))}
 *
 * The adjoint is the exact transpose of the discrete forward scheme (same
 * stencil, same half-level coefficients, same implicit startup), so the
 * gradient is the derivative of the discrete J rather than a discretization
 * of the continuous one.
 *
 * Sign conventions: the adjoint returned here solves, backward from v(T) = 0
 * with v = 0 on both y boundaries,
 *
 *     v_tau + (a v)_yy + (a v)_y - b v_y = -(u - u_obs),
 *
 * and the gradient representer is g = 2 v (u_yy - u_y). The drift sign is the
 * transpose of +b u_y in the forward equation; the source sign makes g the
 * ascent direction of J.
 */

#pragma once

#include "olv/dupire.hpp"
#include "olv/execution.hpp"
#include "olv/grid.hpp"

namespace olv {

/// Adjoint field on the grid of `a`, node-centred in tau.
/// `u` must be the solve_dupire output for `a`.
Surface solve_adjoint(const Surface& a, const Surface& u, const Surface& u_obs, double b);

/// Misfit value and its L2 representer, from one forward and one adjoint
/// solve per slice.
struct MisfitGradient {
    double residual_sq = 0.0;  ///< J(A)
    SurfaceFamily gradient;    ///< g with <g, H>_{L2} = J'(A) H
};

/// `obs` is in operator convention: observed prices minus prior prices.
MisfitGradient misfit_gradient(const ForwardModel& model, const SurfaceFamily& fam_a, const SurfaceFamily& obs);

SurfaceFamily misfit_gradient(const SurfaceFamily& fam_a, const SurfaceFamily& fam_obs, const Surface& prior_a0, double b,
                              Execution exec = Execution::parallel);

/// J(A) alone, one forward solve per slice.
double misfit_value(const ForwardModel& model, const SurfaceFamily& fam_a, const SurfaceFamily& obs);

}  // namespace olv
