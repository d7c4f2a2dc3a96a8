// SPDX-License-Identifier: Apache-2.0
/**
 * @file grid.hpp
 * @brief Discretization primitives: tensor grids in (tau, y), surfaces on them,
 *        the shifted-spot axis and spot-indexed surface families.
 *
 * Rows of a Surface run over time-to-maturity tau, columns over
 * log-moneyness y = log(K / S0). All quadrature is the composite trapezoid
 * rule on the tensor grid.
 */

#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace olv {

/// Uniform tensor grid on [0, T] x [y_min, y_max].
class Grid2D {
public:
    /// Validates strict monotonicity, uniform spacing and >= 3 nodes per axis.
    Grid2D(std::vector<double> tau_nodes, std::vector<double> y_nodes);

    /// Grid on [0, T] x [-Y, Y] with the given steps. Node counts are rounded
    /// to the nearest integer number of steps.
    static Grid2D uniform(double T, double Y, double dtau, double dy);

    std::size_t n_tau() const noexcept { return tau_.size(); }
    std::size_t n_y() const noexcept { return y_.size(); }
    std::size_t size() const noexcept { return tau_.size() * y_.size(); }

    std::span<const double> tau() const noexcept { return tau_; }
    std::span<const double> y() const noexcept { return y_; }

    double dtau() const noexcept { return dtau_; }
    double dy() const noexcept { return dy_; }
    double T() const noexcept { return tau_.back(); }
    double y_min() const noexcept { return y_.front(); }
    double y_max() const noexcept { return y_.back(); }

    /// Trapezoid weights along each axis.
    std::span<const double> tau_weights() const noexcept { return wtau_; }
    std::span<const double> y_weights() const noexcept { return wy_; }

    bool operator==(const Grid2D& other) const noexcept;

private:
    std::vector<double> tau_;
    std::vector<double> y_;
    std::vector<double> wtau_;
    std::vector<double> wy_;
    double dtau_ = 0.0;
    double dy_ = 0.0;
};

using GridPtr = std::shared_ptr<const Grid2D>;

inline GridPtr make_grid(double T, double Y, double dtau, double dy) {
    return std::make_shared<const Grid2D>(Grid2D::uniform(T, Y, dtau, dy));
}

/// Real field on a Grid2D, row-major (tau rows, y columns).
class Surface {
public:
    Surface() = default;
    explicit Surface(GridPtr grid, double fill = 0.0);
    Surface(GridPtr grid, std::vector<double> values);

    const GridPtr& grid_ptr() const noexcept { return grid_; }
    const Grid2D& grid() const noexcept { return *grid_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return values_[i * ny_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * ny_ + j]; }

    std::span<double> row(std::size_t i) noexcept { return {values_.data() + i * ny_, ny_}; }
    std::span<const double> row(std::size_t i) const noexcept { return {values_.data() + i * ny_, ny_}; }

    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }

    /// Same grid object or an equal grid.
    bool same_grid(const Surface& other) const noexcept;

    bool all_finite() const noexcept;
    double min() const noexcept;
    double max() const noexcept;

    Surface& operator+=(const Surface& rhs);
    Surface& operator-=(const Surface& rhs);
    Surface& operator*=(double c) noexcept;
    /// this += c * x
    Surface& axpy(double c, const Surface& x);

    bool operator==(const Surface& other) const noexcept;

private:
    GridPtr grid_;
    std::size_t ny_ = 0;
    std::vector<double> values_;
};

Surface operator+(Surface lhs, const Surface& rhs);
Surface operator-(Surface lhs, const Surface& rhs);
Surface operator*(double c, Surface s);

/// Shifted spot axis s = S - s_min on [0, S], S = s_max - s_min.
///
/// A single-node axis (s_min == s_max) is a degenerate family of one
/// surface; its quadrature weight is 1 so that family norms reduce to the
/// per-surface L2(D) norm.
class SpotAxis {
public:
    SpotAxis(double s_min, double s_max, std::size_t n_nodes);

    /// Axis with step ds; the node count is rounded to the nearest integer.
    static SpotAxis with_step(double s_min, double s_max, double ds);
    static SpotAxis single(double spot) { return SpotAxis(spot, spot, 1); }

    double s_min() const noexcept { return s_min_; }
    double s_max() const noexcept { return s_max_; }
    double length() const noexcept { return s_max_ - s_min_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    double ds() const noexcept { return ds_; }

    /// Shifted nodes s_m in [0, S].
    std::span<const double> nodes() const noexcept { return nodes_; }
    /// Spot level s_min + s_m.
    double spot(std::size_t m) const noexcept { return s_min_ + nodes_[m]; }
    std::span<const double> weights() const noexcept { return weights_; }

    /// Axis made of the first n nodes of this one.
    SpotAxis prefix(std::size_t n) const;

    bool operator==(const SpotAxis& other) const noexcept;

private:
    double s_min_;
    double s_max_;
    double ds_ = 0.0;
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

/// One surface per spot node, all on one grid.
class SurfaceFamily {
public:
    SurfaceFamily(SpotAxis axis, std::vector<Surface> slices);
    /// Every slice a copy of `slice`.
    static SurfaceFamily constant(SpotAxis axis, const Surface& slice);
    static SurfaceFamily zeros(SpotAxis axis, GridPtr grid);

    const SpotAxis& axis() const noexcept { return axis_; }
    const Grid2D& grid() const noexcept { return slices_.front().grid(); }
    const GridPtr& grid_ptr() const noexcept { return slices_.front().grid_ptr(); }
    std::size_t size() const noexcept { return slices_.size(); }

    Surface& operator[](std::size_t m) noexcept { return slices_[m]; }
    const Surface& operator[](std::size_t m) const noexcept { return slices_[m]; }
    std::span<const Surface> slices() const noexcept { return slices_; }
    std::span<Surface> slices() noexcept { return slices_; }

    /// Family of the first n slices on the matching prefix axis.
    SurfaceFamily prefix(std::size_t n) const;

    /// Same axis and grid.
    bool compatible(const SurfaceFamily& other) const noexcept;

    SurfaceFamily& operator+=(const SurfaceFamily& rhs);
    SurfaceFamily& operator-=(const SurfaceFamily& rhs);
    SurfaceFamily& operator*=(double c) noexcept;
    SurfaceFamily& axpy(double c, const SurfaceFamily& x);

    bool operator==(const SurfaceFamily& other) const noexcept;

private:
    SpotAxis axis_;
    std::vector<Surface> slices_;
};

SurfaceFamily operator+(SurfaceFamily lhs, const SurfaceFamily& rhs);
SurfaceFamily operator-(SurfaceFamily lhs, const SurfaceFamily& rhs);
SurfaceFamily operator*(double c, SurfaceFamily f);

/// Payoff row spot * (1 - e^y)^+ at tau = 0; all later rows zero.
Surface make_payoff(GridPtr grid, double spot);

/// Bilinear interpolation of src at the nodes of dst_grid. dst must lie in
/// the src domain up to one src spacing; points in that margin are clamped
/// onto the src boundary.
Surface interpolate_surface(const Surface& src, GridPtr dst_grid);

/// Trapezoid quadrature over (tau, y).
double surface_inner(const Surface& a, const Surface& b);
double surface_l2_norm(const Surface& a);

/// Trapezoid quadrature over s of surface_inner.
double family_inner(const SurfaceFamily& a, const SurfaceFamily& b);
/// L2(0, S; L2(D)) norm.
double family_l2_norm(const SurfaceFamily& fam);

/// Mean over slices of the per-slice L2(D) distance.
double mean_slice_distance(const SurfaceFamily& a, const SurfaceFamily& b);

}  // namespace olv
