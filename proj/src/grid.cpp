// SPDX-License-Identifier: Apache-2.0
#include "olv/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "olv/errors.hpp"

namespace olv {

namespace {

void check_axis(const std::vector<double>& nodes, const char* name) {
    if (nodes.size() < 3) {
        std::ostringstream os;
        os << name << " axis needs at least 3 nodes, got " << nodes.size();
        throw InvalidArgument(os.str());
    }
    for (double v : nodes) {
        if (!std::isfinite(v)) throw InvalidArgument(std::string(name) + " axis has non-finite node");
    }
    const double h = (nodes.back() - nodes.front()) / static_cast<double>(nodes.size() - 1);
    if (!(h > 0.0)) throw InvalidArgument(std::string(name) + " axis is not increasing");
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        const double d = nodes[i] - nodes[i - 1];
        if (!(d > 0.0)) throw InvalidArgument(std::string(name) + " axis is not strictly increasing");
        if (std::abs(d - h) > 1e-12 * std::max(1.0, std::abs(h)) + 1e-12 * std::abs(nodes[i])) {
            throw InvalidArgument(std::string(name) + " axis is not uniform");
        }
    }
}

std::vector<double> trapezoid_weights(std::size_t n, double h) {
    std::vector<double> w(n, h);
    w.front() = 0.5 * h;
    w.back() = 0.5 * h;
    return w;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    const double h = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) v[i] = lo + h * static_cast<double>(i);
    v.back() = hi;
    return v;
}

std::size_t step_count(double length, double step, const char* name) {
    if (!(step > 0.0) || !(length > 0.0) || !std::isfinite(length / step)) {
        throw InvalidArgument(std::string("invalid ") + name + " step or extent");
    }
    const double n = std::round(length / step);
    if (std::abs(n * step - length) > 1e-9 * length) {
        throw InvalidArgument(std::string(name) + " step does not divide the extent");
    }
    return static_cast<std::size_t>(n);
}

}  // namespace

Grid2D::Grid2D(std::vector<double> tau_nodes, std::vector<double> y_nodes)
    : tau_(std::move(tau_nodes)), y_(std::move(y_nodes)) {
    check_axis(tau_, "tau");
    check_axis(y_, "y");
    dtau_ = (tau_.back() - tau_.front()) / static_cast<double>(tau_.size() - 1);
    dy_ = (y_.back() - y_.front()) / static_cast<double>(y_.size() - 1);
    wtau_ = trapezoid_weights(tau_.size(), dtau_);
    wy_ = trapezoid_weights(y_.size(), dy_);
}

Grid2D Grid2D::uniform(double T, double Y, double dtau, double dy) {
    const std::size_t nt = step_count(T, dtau, "tau");
    const std::size_t ny = step_count(2.0 * Y, dy, "y");
    return Grid2D(linspace(0.0, T, nt + 1), linspace(-Y, Y, ny + 1));
}

bool Grid2D::operator==(const Grid2D& other) const noexcept {
    return tau_ == other.tau_ && y_ == other.y_;
}

Surface::Surface(GridPtr grid, double fill) : grid_(std::move(grid)) {
    if (!grid_) throw InvalidArgument("surface requires a grid");
    ny_ = grid_->n_y();
    values_.assign(grid_->size(), fill);
}

Surface::Surface(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw InvalidArgument("surface requires a grid");
    ny_ = grid_->n_y();
    if (values_.size() != grid_->size()) {
        std::ostringstream os;
        os << "surface has " << values_.size() << " values, grid has " << grid_->size() << " nodes";
        throw InvalidArgument(os.str());
    }
    if (!all_finite()) throw InvalidArgument("surface values must be finite");
}

bool Surface::same_grid(const Surface& other) const noexcept {
    return grid_ && other.grid_ && (grid_ == other.grid_ || *grid_ == *other.grid_);
}

bool Surface::all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double Surface::min() const noexcept { return *std::min_element(values_.begin(), values_.end()); }
double Surface::max() const noexcept { return *std::max_element(values_.begin(), values_.end()); }

Surface& Surface::operator+=(const Surface& rhs) { return axpy(1.0, rhs); }
Surface& Surface::operator-=(const Surface& rhs) { return axpy(-1.0, rhs); }

Surface& Surface::operator*=(double c) noexcept {
    for (double& v : values_) v *= c;
    return *this;
}

Surface& Surface::axpy(double c, const Surface& x) {
    if (!same_grid(x)) throw InvalidArgument("surface grid mismatch");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += c * x.values_[k];
    return *this;
}

bool Surface::operator==(const Surface& other) const noexcept {
    return same_grid(other) && values_ == other.values_;
}

Surface operator+(Surface lhs, const Surface& rhs) { return lhs += rhs; }
Surface operator-(Surface lhs, const Surface& rhs) { return lhs -= rhs; }
Surface operator*(double c, Surface s) { return s *= c; }

SpotAxis::SpotAxis(double s_min, double s_max, std::size_t n_nodes) : s_min_(s_min), s_max_(s_max) {
    if (!std::isfinite(s_min) || !std::isfinite(s_max)) throw InvalidArgument("spot axis bounds must be finite");
    if (n_nodes == 0) throw InvalidArgument("spot axis needs at least one node");
    if (n_nodes == 1) {
        if (s_max != s_min) throw InvalidArgument("single-node spot axis needs s_min == s_max");
        nodes_ = {0.0};
        weights_ = {1.0};
        return;
    }
    if (!(s_max > s_min)) throw InvalidArgument("spot axis needs s_max > s_min");
    nodes_ = linspace(0.0, s_max - s_min, n_nodes);
    ds_ = (s_max - s_min) / static_cast<double>(n_nodes - 1);
    weights_ = trapezoid_weights(n_nodes, ds_);
}

SpotAxis SpotAxis::with_step(double s_min, double s_max, double ds) {
    if (s_max == s_min) return single(s_min);
    return SpotAxis(s_min, s_max, step_count(s_max - s_min, ds, "spot") + 1);
}

SpotAxis SpotAxis::prefix(std::size_t n) const {
    if (n == 0 || n > size()) throw InvalidArgument("spot axis prefix out of range");
    if (n == 1) return single(s_min_);
    return SpotAxis(s_min_, s_min_ + nodes_[n - 1], n);
}

bool SpotAxis::operator==(const SpotAxis& other) const noexcept {
    return s_min_ == other.s_min_ && s_max_ == other.s_max_ && nodes_.size() == other.nodes_.size();
}

SurfaceFamily::SurfaceFamily(SpotAxis axis, std::vector<Surface> slices)
    : axis_(std::move(axis)), slices_(std::move(slices)) {
    if (slices_.size() != axis_.size()) {
        std::ostringstream os;
        os << "family has " << slices_.size() << " slices for " << axis_.size() << " spot nodes";
        throw InvalidArgument(os.str());
    }
    for (const auto& s : slices_) {
        if (!s.grid_ptr()) throw InvalidArgument("family slice without grid");
        if (!s.same_grid(slices_.front())) throw InvalidArgument("family slices must share one grid");
    }
}

SurfaceFamily SurfaceFamily::constant(SpotAxis axis, const Surface& slice) {
    std::vector<Surface> slices(axis.size(), slice);
    return SurfaceFamily(std::move(axis), std::move(slices));
}

SurfaceFamily SurfaceFamily::zeros(SpotAxis axis, GridPtr grid) {
    return constant(std::move(axis), Surface(std::move(grid), 0.0));
}

SurfaceFamily SurfaceFamily::prefix(std::size_t n) const {
    SpotAxis ax = axis_.prefix(n);
    return SurfaceFamily(std::move(ax), std::vector<Surface>(slices_.begin(), slices_.begin() + static_cast<std::ptrdiff_t>(n)));
}

bool SurfaceFamily::compatible(const SurfaceFamily& other) const noexcept {
    return axis_ == other.axis_ && slices_.front().same_grid(other.slices_.front());
}

SurfaceFamily& SurfaceFamily::operator+=(const SurfaceFamily& rhs) { return axpy(1.0, rhs); }
SurfaceFamily& SurfaceFamily::operator-=(const SurfaceFamily& rhs) { return axpy(-1.0, rhs); }

SurfaceFamily& SurfaceFamily::operator*=(double c) noexcept {
    for (auto& s : slices_) s *= c;
    return *this;
}

SurfaceFamily& SurfaceFamily::axpy(double c, const SurfaceFamily& x) {
    if (!compatible(x)) throw InvalidArgument("family axis or grid mismatch");
    for (std::size_t m = 0; m < slices_.size(); ++m) slices_[m].axpy(c, x.slices_[m]);
    return *this;
}

bool SurfaceFamily::operator==(const SurfaceFamily& other) const noexcept {
    return axis_ == other.axis_ && slices_ == other.slices_;
}

SurfaceFamily operator+(SurfaceFamily lhs, const SurfaceFamily& rhs) { return lhs += rhs; }
SurfaceFamily operator-(SurfaceFamily lhs, const SurfaceFamily& rhs) { return lhs -= rhs; }
SurfaceFamily operator*(double c, SurfaceFamily f) { return f *= c; }

Surface make_payoff(GridPtr grid, double spot) {
    if (!(spot > 0.0) || !std::isfinite(spot)) throw InvalidArgument("spot must be positive");
    Surface u(grid, 0.0);
    const auto y = grid->y();
    for (std::size_t j = 0; j < y.size(); ++j) u(0, j) = spot * std::max(1.0 - std::exp(y[j]), 0.0);
    return u;
}

namespace {

/// Cell index and weight of x on a uniform axis, clamped to the axis.
struct Bracket {
    std::size_t lo;
    double t;
};

Bracket locate(std::span<const double> nodes, double h, double x) {
    const std::size_t n = nodes.size();
    x = std::clamp(x, nodes.front(), nodes.back());
    auto lo = static_cast<std::size_t>(std::floor((x - nodes.front()) / h));
    lo = std::min(lo, n - 2);
    // correct for rounding in the division
    while (lo > 0 && x < nodes[lo]) --lo;
    while (lo + 2 < n && x >= nodes[lo + 1]) ++lo;
    const double t = std::clamp((x - nodes[lo]) / (nodes[lo + 1] - nodes[lo]), 0.0, 1.0);
    return {lo, t};
}

}  // namespace

Surface interpolate_surface(const Surface& src, GridPtr dst_grid) {
    const Grid2D& sg = src.grid();
    const Grid2D& dg = *dst_grid;
    if (sg == dg) return Surface(dst_grid, std::vector<double>(src.values().begin(), src.values().end()));

    const double tol_t = sg.dtau() * (1.0 + 1e-9);
    const double tol_y = sg.dy() * (1.0 + 1e-9);
    if (dg.tau().front() < sg.tau().front() - tol_t || dg.T() > sg.T() + tol_t ||
        dg.y_min() < sg.y_min() - tol_y || dg.y_max() > sg.y_max() + tol_y) {
        throw DomainError("destination grid exceeds the source domain");
    }

    std::vector<Bracket> bt(dg.n_tau());
    std::vector<Bracket> by(dg.n_y());
    for (std::size_t i = 0; i < dg.n_tau(); ++i) bt[i] = locate(sg.tau(), sg.dtau(), dg.tau()[i]);
    for (std::size_t j = 0; j < dg.n_y(); ++j) by[j] = locate(sg.y(), sg.dy(), dg.y()[j]);

    Surface out(dst_grid, 0.0);
    for (std::size_t i = 0; i < dg.n_tau(); ++i) {
        const auto [i0, ti] = bt[i];
        for (std::size_t j = 0; j < dg.n_y(); ++j) {
            const auto [j0, tj] = by[j];
            const double v00 = src(i0, j0);
            const double v01 = src(i0, j0 + 1);
            const double v10 = src(i0 + 1, j0);
            const double v11 = src(i0 + 1, j0 + 1);
            out(i, j) = (1.0 - ti) * ((1.0 - tj) * v00 + tj * v01) + ti * ((1.0 - tj) * v10 + tj * v11);
        }
    }
    return out;
}

double surface_inner(const Surface& a, const Surface& b) {
    if (!a.same_grid(b)) throw InvalidArgument("surface grid mismatch");
    const auto wt = a.grid().tau_weights();
    const auto wy = a.grid().y_weights();
    double acc = 0.0;
    for (std::size_t i = 0; i < wt.size(); ++i) {
        const auto ra = a.row(i);
        const auto rb = b.row(i);
        double row = 0.0;
        for (std::size_t j = 0; j < wy.size(); ++j) row += wy[j] * ra[j] * rb[j];
        acc += wt[i] * row;
    }
    return acc;
}

double surface_l2_norm(const Surface& a) { return std::sqrt(surface_inner(a, a)); }

double family_inner(const SurfaceFamily& a, const SurfaceFamily& b) {
    if (!a.compatible(b)) throw InvalidArgument("family axis or grid mismatch");
    const auto ws = a.axis().weights();
    double acc = 0.0;
    for (std::size_t m = 0; m < a.size(); ++m) acc += ws[m] * surface_inner(a[m], b[m]);
    return acc;
}

double family_l2_norm(const SurfaceFamily& fam) { return std::sqrt(std::max(family_inner(fam, fam), 0.0)); }

double mean_slice_distance(const SurfaceFamily& a, const SurfaceFamily& b) {
    if (!a.compatible(b)) throw InvalidArgument("family axis or grid mismatch");
    double acc = 0.0;
    for (std::size_t m = 0; m < a.size(); ++m) acc += surface_l2_norm(a[m] - b[m]);
    return acc / static_cast<double>(a.size());
}

}  // namespace olv
