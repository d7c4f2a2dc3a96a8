// SPDX-License-Identifier: Apache-2.0
#include "olv/bochner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "olv/errors.hpp"

namespace olv {

void BochnerParams::validate() const {
    if (!(l > 0.5) || !std::isfinite(l)) throw InvalidArgument("bochner.l must exceed 1/2");
}

std::size_t BochnerParams::modes(const SpotAxis& axis) const {
    const std::size_t nyquist = axis.size() - 1;
    return k_max == 0 ? nyquist : std::min(k_max, nyquist);
}

double BochnerParams::weight(std::size_t k) const {
    const double w = 1.0 + std::pow(static_cast<double>(k), l);
    return w * w;
}

double mode_multiplicity(std::size_t k, std::size_t nyquist) noexcept {
    return (k == 0 || k == nyquist) ? 1.0 : 2.0;
}

namespace {

/// cos(k pi m / M) with the single-node axis mapped to 1.
double basis(std::size_t k, std::size_t m, std::size_t nyquist) {
    if (nyquist == 0) return 1.0;
    return std::cos(std::numbers::pi * static_cast<double>(k * m % (2 * nyquist)) / static_cast<double>(nyquist));
}

/// Quadrature weights of (1/S) int_0^S ds.
std::vector<double> mean_weights(const SpotAxis& axis) {
    std::vector<double> w(axis.weights().begin(), axis.weights().end());
    if (axis.size() > 1) {
        for (double& v : w) v /= axis.length();
    }
    return w;
}

}  // namespace

std::vector<Surface> fourier_coeffs(const SurfaceFamily& fam, const BochnerParams& params) {
    params.validate();
    const std::size_t nyquist = fam.size() - 1;
    const std::size_t kmax = params.modes(fam.axis());
    const std::vector<double> mu = mean_weights(fam.axis());
    std::vector<Surface> out;
    out.reserve(kmax + 1);
    for (std::size_t k = 0; k <= kmax; ++k) {
        Surface c(fam.grid_ptr(), 0.0);
        for (std::size_t m = 0; m < fam.size(); ++m) c.axpy(mu[m] * basis(k, m, nyquist), fam[m]);
        out.push_back(std::move(c));
    }
    return out;
}

SurfaceFamily fourier_synthesis(const std::vector<Surface>& coeffs, const SpotAxis& axis) {
    if (coeffs.empty()) throw InvalidArgument("no Fourier coefficients");
    const std::size_t nyquist = axis.size() - 1;
    if (coeffs.size() > nyquist + 1) throw InvalidArgument("more Fourier modes than the spot axis resolves");
    std::vector<Surface> slices(axis.size(), Surface(coeffs.front().grid_ptr(), 0.0));
    for (std::size_t m = 0; m < axis.size(); ++m) {
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            slices[m].axpy(mode_multiplicity(k, nyquist) * basis(k, m, nyquist), coeffs[k]);
        }
    }
    return SurfaceFamily(axis, std::move(slices));
}

double h_inner(const Surface& a, const Surface& b) {
    if (!a.same_grid(b)) throw InvalidArgument("surface grid mismatch");
    const Grid2D& g = a.grid();
    const auto wt = g.tau_weights();
    const auto wy = g.y_weights();
    const double dt = g.dtau();
    const double dy = g.dy();
    double acc = surface_inner(a, b);
    for (std::size_t i = 0; i + 1 < g.n_tau(); ++i) {
        for (std::size_t j = 0; j < g.n_y(); ++j) {
            acc += wy[j] / dt * (a(i + 1, j) - a(i, j)) * (b(i + 1, j) - b(i, j));
        }
    }
    for (std::size_t i = 0; i < g.n_tau(); ++i) {
        for (std::size_t j = 0; j + 1 < g.n_y(); ++j) {
            acc += wt[i] / dy * (a(i, j + 1) - a(i, j)) * (b(i, j + 1) - b(i, j));
        }
    }
    return acc;
}

double h_norm(const Surface& a) { return std::sqrt(std::max(h_inner(a, a), 0.0)); }

Surface h_gram(const Surface& a) {
    const Grid2D& g = a.grid();
    const auto wt = g.tau_weights();
    const auto wy = g.y_weights();
    const double dt = g.dtau();
    const double dy = g.dy();
    Surface out(a.grid_ptr(), 0.0);
    for (std::size_t i = 0; i < g.n_tau(); ++i) {
        for (std::size_t j = 0; j < g.n_y(); ++j) out(i, j) = wt[i] * wy[j] * a(i, j);
    }
    for (std::size_t i = 0; i + 1 < g.n_tau(); ++i) {
        for (std::size_t j = 0; j < g.n_y(); ++j) {
            const double f = wy[j] / dt * (a(i + 1, j) - a(i, j));
            out(i + 1, j) += f;
            out(i, j) -= f;
        }
    }
    for (std::size_t i = 0; i < g.n_tau(); ++i) {
        for (std::size_t j = 0; j + 1 < g.n_y(); ++j) {
            const double f = wt[i] / dy * (a(i, j + 1) - a(i, j));
            out(i, j + 1) += f;
            out(i, j) -= f;
        }
    }
    return out;
}

double mean_h_inner(const SurfaceFamily& a, const SurfaceFamily& b) {
    if (!a.compatible(b)) throw InvalidArgument("family axis or grid mismatch");
    const std::vector<double> mu = mean_weights(a.axis());
    double acc = 0.0;
    for (std::size_t m = 0; m < a.size(); ++m) acc += mu[m] * h_inner(a[m], b[m]);
    return acc;
}

namespace {

double weighted_coefficient_inner(const SurfaceFamily& a, const SurfaceFamily& b, const BochnerParams& params,
                                  bool weighted) {
    if (!a.compatible(b)) throw InvalidArgument("family axis or grid mismatch");
    const auto ca = fourier_coeffs(a, params);
    const auto cb = fourier_coeffs(b, params);
    const std::size_t nyquist = a.size() - 1;
    double acc = 0.0;
    for (std::size_t k = 0; k < ca.size(); ++k) {
        const double w = weighted ? params.weight(k) : 1.0;
        acc += mode_multiplicity(k, nyquist) * w * h_inner(ca[k], cb[k]);
    }
    return acc;
}

}  // namespace

double coefficient_inner(const SurfaceFamily& a, const SurfaceFamily& b, const BochnerParams& params) {
    return weighted_coefficient_inner(a, b, params, false);
}

double x_inner(const SurfaceFamily& a, const SurfaceFamily& b, const BochnerParams& params) {
    return weighted_coefficient_inner(a, b, params, true);
}

double x_norm(const SurfaceFamily& fam, const std::optional<SurfaceFamily>& prior, const BochnerParams& params) {
    if (!prior) return x_norm(fam, params);
    if (!fam.compatible(*prior)) throw InvalidArgument("prior family axis or grid mismatch");
    return x_norm(fam - *prior, params);
}

double x_norm(const SurfaceFamily& fam, const BochnerParams& params) {
    return std::sqrt(std::max(x_inner(fam, fam, params), 0.0));
}

SurfaceFamily x_norm_sq_gradient(const SurfaceFamily& fam, const SurfaceFamily& prior, const BochnerParams& params) {
    if (!fam.compatible(prior)) throw InvalidArgument("prior family axis or grid mismatch");
    const SpotAxis& axis = fam.axis();
    auto coeffs = fourier_coeffs(fam - prior, params);
    const Grid2D& g = fam.grid();
    const auto wt = g.tau_weights();
    const auto wy = g.y_weights();

    // d/de_m sum_k c_k w_k ||e^(k)||_H^2 = 2 sum_k c_k w_k mu_m cos(k pi m / M) G e^(k);
    // dividing by the L2 weight ws_m wt_i wy_j leaves mu_m / ws_m = 1 / S.
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        Surface gk = h_gram(coeffs[k]);
        for (std::size_t i = 0; i < g.n_tau(); ++i) {
            for (std::size_t j = 0; j < g.n_y(); ++j) gk(i, j) /= wt[i] * wy[j];
        }
        gk *= 2.0 * params.weight(k);
        coeffs[k] = std::move(gk);
    }
    SurfaceFamily out = fourier_synthesis(coeffs, axis);
    if (axis.size() > 1) out *= 1.0 / axis.length();
    return out;
}

SupEstimate sup_estimate_check(const SurfaceFamily& fam, const BochnerParams& params) {
    params.validate();
    SupEstimate out;
    for (const auto& s : fam.slices()) out.lhs = std::max(out.lhs, h_norm(s));

    const std::size_t kt = std::max<std::size_t>(params.modes(fam.axis()), 1);
    double series = 0.0;
    for (std::size_t k = 0; k <= kt; ++k) series += 1.0 / params.weight(k);
    // sum_{k > kt} (1 + k^l)^-2 <= int_kt^inf x^{-2l} dx
    series += std::pow(static_cast<double>(kt), 1.0 - 2.0 * params.l) / (2.0 * params.l - 1.0);
    out.rhs = x_norm(fam, params) * std::sqrt(2.0 * series);
    return out;
}

RieszSmoother::Axis RieszSmoother::make_axis(std::size_t n, double h) {
    Axis ax;
    ax.n = n;
    const std::size_t intervals = n - 1;
    ax.cosines.resize(n * n);
    ax.eigenvalues.resize(n);
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t i = 0; i < n; ++i) {
            ax.cosines[p * n + i] = std::cos(std::numbers::pi * static_cast<double>(p * i % (2 * intervals)) /
                                             static_cast<double>(intervals));
        }
        const double s = std::sin(0.5 * std::numbers::pi * static_cast<double>(p) / static_cast<double>(intervals));
        ax.eigenvalues[p] = 4.0 * s * s / (h * h);
    }
    return ax;
}

RieszSmoother::RieszSmoother(GridPtr grid, BochnerParams params)
    : grid_(std::move(grid)), params_(params) {
    params_.validate();
    tau_ = make_axis(grid_->n_tau(), grid_->dtau());
    y_ = make_axis(grid_->n_y(), grid_->dy());
    kappa_ = grid_->dy() * grid_->dy();
}

Surface RieszSmoother::smooth(const Surface& g) const {
    const std::size_t nt = tau_.n;
    const std::size_t ny = y_.n;
    const double it = 1.0 / static_cast<double>(nt - 1);
    const double iy = 1.0 / static_cast<double>(ny - 1);
    auto mult = [](std::size_t p, std::size_t n) { return (p == 0 || p + 1 == n) ? 1.0 : 2.0; };
    auto half = [](std::size_t i, std::size_t n) { return (i == 0 || i + 1 == n) ? 0.5 : 1.0; };

    // forward DCT-I along y, then along tau
    std::vector<double> tmp(nt * ny, 0.0);
    for (std::size_t i = 0; i < nt; ++i) {
        const auto row = g.row(i);
        for (std::size_t q = 0; q < ny; ++q) {
            const double* c = &y_.cosines[q * ny];
            double acc = 0.0;
            for (std::size_t j = 0; j < ny; ++j) acc += half(j, ny) * row[j] * c[j];
            tmp[i * ny + q] = acc * iy;
        }
    }
    std::vector<double> spec(nt * ny, 0.0);
    for (std::size_t p = 0; p < nt; ++p) {
        const double* c = &tau_.cosines[p * nt];
        for (std::size_t i = 0; i < nt; ++i) {
            const double w = half(i, nt) * c[i] * it;
            for (std::size_t q = 0; q < ny; ++q) spec[p * ny + q] += w * tmp[i * ny + q];
        }
    }
    for (std::size_t p = 0; p < nt; ++p) {
        for (std::size_t q = 0; q < ny; ++q) {
            spec[p * ny + q] *= mult(p, nt) * mult(q, ny) / (1.0 + kappa_ * (tau_.eigenvalues[p] + y_.eigenvalues[q]));
        }
    }
    // inverse along tau, then y
    std::fill(tmp.begin(), tmp.end(), 0.0);
    for (std::size_t p = 0; p < nt; ++p) {
        const double* c = &tau_.cosines[p * nt];
        for (std::size_t i = 0; i < nt; ++i) {
            for (std::size_t q = 0; q < ny; ++q) tmp[i * ny + q] += c[i] * spec[p * ny + q];
        }
    }
    Surface out(g.grid_ptr(), 0.0);
    for (std::size_t i = 0; i < nt; ++i) {
        auto row = out.row(i);
        for (std::size_t q = 0; q < ny; ++q) {
            const double v = tmp[i * ny + q];
            const double* c = &y_.cosines[q * ny];
            for (std::size_t j = 0; j < ny; ++j) row[j] += v * c[j];
        }
    }
    return out;
}

SurfaceFamily RieszSmoother::apply(const SurfaceFamily& g) const {
    if (!(g.grid() == *grid_)) throw InvalidArgument("smoother grid mismatch");
    auto coeffs = fourier_coeffs(g, params_);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        Surface s = smooth(coeffs[k]);
        s *= 1.0 / params_.weight(k);
        coeffs[k] = std::move(s);
    }
    return fourier_synthesis(coeffs, g.axis());
}

SurfaceFamily riesz_smooth(const SurfaceFamily& l2_grad, const BochnerParams& params) {
    return RieszSmoother(l2_grad.grid_ptr(), params).apply(l2_grad);
}

}  // namespace olv
