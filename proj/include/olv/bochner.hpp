// SPDX-License-Identifier: Apache-2.0
/**
 * @file bochner.hpp
 * @brief Fourier-weighted norm on spot-indexed surface families.
 *
 * A family s -> a(s) on [0, S] is extended evenly to [-S, S] and expanded in
 * e^{i k pi s / S}. By evenness the coefficients are real and symmetric,
 *
 *     a^(k) = (1/S) int_0^S a(s) cos(k pi s / S) ds,   a^(-k) = a^(k),
 *
 * and the norm is  sum_{k in Z} (1 + |k|^l)^2 ||a^(k)||_H^2.
 *
 * On an axis with M + 1 nodes the trapezoid rule turns the coefficient map
 * into a DCT-I, which is exactly invertible with modes 0..M. Mode M is the
 * Nyquist mode: k = M and k = -M alias to one discrete mode, so it is
 * counted once. Per slice, H is the discrete H1 space: trapezoid L2 plus
 * squared first differences along tau and y.
 */

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "olv/grid.hpp"

namespace olv {

struct BochnerParams {
    double l = 1.0;         ///< smoothness exponent, > 1/2
    std::size_t k_max = 0;  ///< highest mode kept; 0 means all modes (nodes - 1)

    void validate() const;
    /// Highest mode actually used on this axis.
    std::size_t modes(const SpotAxis& axis) const;
    double weight(std::size_t k) const;  ///< (1 + k^l)^2
};

/// Number of times mode k appears in the sum over Z (1 for k = 0 and for
/// the Nyquist mode, 2 otherwise).
double mode_multiplicity(std::size_t k, std::size_t nyquist) noexcept;

/// Coefficient surfaces a^(k), k = 0..modes.
std::vector<Surface> fourier_coeffs(const SurfaceFamily& fam, const BochnerParams& params);

/// Family with the given coefficients on `axis` (inverse of fourier_coeffs
/// when all modes are present).
SurfaceFamily fourier_synthesis(const std::vector<Surface>& coeffs, const SpotAxis& axis);

/// Discrete H1 inner product and norm on one slice.
double h_inner(const Surface& a, const Surface& b);
double h_norm(const Surface& a);
/// G a with <a, b>_H = sum_ij b_ij (G a)_ij.
Surface h_gram(const Surface& a);

/// (1/S) int_0^S <a(s), b(s)>_H ds by the trapezoid rule; the left-hand
/// side of the Parseval identity.
double mean_h_inner(const SurfaceFamily& a, const SurfaceFamily& b);
/// sum_{k in Z} <a^(k), b^(k)>_H; the right-hand side.
double coefficient_inner(const SurfaceFamily& a, const SurfaceFamily& b, const BochnerParams& params);

double x_inner(const SurfaceFamily& a, const SurfaceFamily& b, const BochnerParams& params);
/// sqrt(sum_k (1 + |k|^l)^2 ||c^(k)||_H^2) for c = fam - prior.
double x_norm(const SurfaceFamily& fam, const std::optional<SurfaceFamily>& prior, const BochnerParams& params);
double x_norm(const SurfaceFamily& fam, const BochnerParams& params);

/// L2 representer of A -> ||A - prior||_X^2.
SurfaceFamily x_norm_sq_gradient(const SurfaceFamily& fam, const SurfaceFamily& prior, const BochnerParams& params);

struct SupEstimate {
    double lhs = 0.0;  ///< max_s ||a(s)||_H
    double rhs = 0.0;  ///< ||A||_X (2 sum_k (1 + k^l)^-2)^{1/2}
};

/// Both sides of the embedding bound sup_s ||a(s)||_H <= C_l ||A||_X. The
/// series is summed to the mode count and closed with an integral tail
/// bound, so rhs never underestimates the true constant.
SupEstimate sup_estimate_check(const SurfaceFamily& fam, const BochnerParams& params);

/// Maps an L2 gradient to a smoother descent direction: Fourier modes are
/// divided by (1 + |k|^l)^2, then each coefficient surface is solved
/// against (I - kappa Laplacian) with kappa = dy^2 and reflecting
/// boundaries. Linear, symmetric and positive definite in the family L2
/// inner product; constants are fixed points of the spatial solve.
class RieszSmoother {
public:
    RieszSmoother(GridPtr grid, BochnerParams params);

    SurfaceFamily apply(const SurfaceFamily& g) const;
    /// Spatial solve only.
    Surface smooth(const Surface& g) const;

    const BochnerParams& params() const noexcept { return params_; }

private:
    struct Axis {
        std::size_t n = 0;                ///< node count
        std::vector<double> cosines;      ///< n x n, cos(pi p i / (n - 1))
        std::vector<double> eigenvalues;  ///< of minus the Neumann second difference
    };
    static Axis make_axis(std::size_t n, double h);

    GridPtr grid_;
    BochnerParams params_;
    Axis tau_;
    Axis y_;
    double kappa_;
};

SurfaceFamily riesz_smooth(const SurfaceFamily& l2_grad, const BochnerParams& params);

}  // namespace olv
