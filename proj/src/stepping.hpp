// SPDX-License-Identifier: Apache-2.0
// Shared time-stepping pieces of the forward and adjoint solvers. The adjoint
// is the exact transpose of the forward scheme, so both must use the same
// stencil, coefficient averaging and theta sequence.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "olv/dupire.hpp"
#include "olv/errors.hpp"
#include "olv/grid.hpp"

namespace olv::detail {

/// theta of step k (1-based, step k maps row k-1 to row k).
inline double step_theta(std::size_t k) noexcept { return k <= kImplicitStartupSteps ? 1.0 : 0.5; }

/// Stencil of L = c (D_yy - D_y) + b D_y at interior node j:
///     (L u)_j = lower_j u_{j-1} + diag_j u_j + upper_j u_{j+1}.
struct Stencil {
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;
    std::vector<double> coeff;  ///< c_j, the half-level variance
};

/// Variance at the half level of step k, averaged from rows k-1 and k.
/// Entries 0 and n-1 (boundary columns) are unused and left at zero.
inline void assemble_stencil(const Surface& a, std::size_t k, double b, Stencil& st) {
    const std::size_t n = a.grid().n_y();
    const double h = a.grid().dy();
    const double ih2 = 1.0 / (h * h);
    const double i2h = 0.5 / h;
    st.lower.assign(n, 0.0);
    st.diag.assign(n, 0.0);
    st.upper.assign(n, 0.0);
    st.coeff.assign(n, 0.0);
    const auto prev = a.row(k - 1);
    const auto next = a.row(k);
    for (std::size_t j = 1; j + 1 < n; ++j) {
        const double c = 0.5 * (prev[j] + next[j]);
        st.coeff[j] = c;
        st.lower[j] = c * ih2 + c * i2h - b * i2h;
        st.diag[j] = -2.0 * c * ih2;
        st.upper[j] = c * ih2 - c * i2h + b * i2h;
    }
}

/// Initial vector the time stepper starts from. Equal to the payoff except
/// at the node whose cell [y - h/2, y + h/2] contains the kink at y = 0,
/// which takes the cell average of the payoff.
inline std::vector<double> initial_row(const Grid2D& g, double spot) {
    const auto y = g.y();
    const double h = g.dy();
    std::vector<double> row(y.size());
    for (std::size_t j = 0; j < y.size(); ++j) {
        row[j] = spot * std::max(1.0 - std::exp(y[j]), 0.0);
        const double lo = y[j] - 0.5 * h;
        const double hi = y[j] + 0.5 * h;
        if (j > 0 && j + 1 < y.size() && lo < 0.0 && hi > 0.0) {
            row[j] = spot * ((0.0 - lo) - (1.0 - std::exp(lo))) / h;
        }
    }
    return row;
}

/// (D_yy - D_y) u at interior node j, full-row stencil.
inline double diffusion_term(std::span<const double> u, std::size_t j, double h) noexcept {
    return (u[j + 1] - 2.0 * u[j] + u[j - 1]) / (h * h) - (u[j + 1] - u[j - 1]) / (2.0 * h);
}

/// Thomas algorithm on unknowns [first, last] of the given bands. The
/// solution overwrites rhs[first..last]. Returns false on a zero pivot.
inline bool solve_tridiagonal(std::span<const double> lower, std::span<const double> diag,
                              std::span<const double> upper, std::span<double> rhs, std::size_t first,
                              std::size_t last, std::vector<double>& scratch) {
    scratch.assign(rhs.size(), 0.0);
    double pivot = diag[first];
    if (pivot == 0.0) return false;
    rhs[first] /= pivot;
    for (std::size_t j = first + 1; j <= last; ++j) {
        scratch[j] = upper[j - 1] / pivot;
        pivot = diag[j] - lower[j] * scratch[j];
        if (pivot == 0.0) return false;
        rhs[j] = (rhs[j] - lower[j] * rhs[j - 1]) / pivot;
    }
    for (std::size_t j = last; j-- > first;) rhs[j] -= scratch[j + 1] * rhs[j + 1];
    return true;
}

}  // namespace olv::detail
