// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "olv/grid.hpp"

namespace olv::test {

/// Uniform random values in [lo, hi] on every node.
inline Surface random_surface(GridPtr grid, std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    Surface s(grid);
    for (double& v : s.values()) v = u(rng);
    return s;
}

inline SurfaceFamily random_family(const SpotAxis& axis, GridPtr grid, std::mt19937_64& rng, double lo, double hi) {
    std::vector<Surface> slices;
    for (std::size_t m = 0; m < axis.size(); ++m) slices.push_back(random_surface(grid, rng, lo, hi));
    return SurfaceFamily(axis, std::move(slices));
}

/// sum_{k <= kmax} cos(pi k s / S) phi_k with random smooth-ish phi_k.
inline SurfaceFamily band_limited_family(const SpotAxis& axis, GridPtr grid, std::mt19937_64& rng, std::size_t kmax) {
    std::vector<Surface> phi;
    for (std::size_t k = 0; k <= kmax; ++k) phi.push_back(random_surface(grid, rng, -1.0, 1.0));
    std::vector<Surface> slices;
    const double S = axis.length();
    for (std::size_t m = 0; m < axis.size(); ++m) {
        Surface s(grid);
        for (std::size_t k = 0; k <= kmax; ++k) s.axpy(std::cos(std::numbers::pi * k * axis.nodes()[m] / S), phi[k]);
        slices.push_back(std::move(s));
    }
    return SurfaceFamily(axis, std::move(slices));
}

inline Surface field(GridPtr grid, auto&& f) {
    Surface s(grid);
    for (std::size_t i = 0; i < grid->n_tau(); ++i) {
        for (std::size_t j = 0; j < grid->n_y(); ++j) s(i, j) = f(grid->tau()[i], grid->y()[j]);
    }
    return s;
}

inline double max_abs_diff(const Surface& a, const Surface& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < a.values().size(); ++k) m = std::max(m, std::abs(a.values()[k] - b.values()[k]));
    return m;
}

}  // namespace olv::test
