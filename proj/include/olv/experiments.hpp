// SPDX-License-Identifier: Apache-2.0
/**
 * @file experiments.hpp
 * @brief Synthetic reconstruction studies behind the `experiment` command.
 *
 * All studies select alpha with select_alpha and are deterministic for a
 * fixed seed.
 */

#pragma once

#include <vector>

#include "olv/config.hpp"
#include "olv/data_io.hpp"
#include "olv/morozov.hpp"

namespace olv {

/// Error of the reconstruction on slice 0 as the number of calibrated
/// surfaces grows. Online with n surfaces calibrates the first n spot nodes
/// jointly; standard calibrates slice 0 alone, once, and repeats that value.
struct SurfaceCountRow {
    std::size_t n_surfaces = 0;
    double online_error = 0.0;    ///< L2(D) distance to the truth on slice 0
    double standard_error = 0.0;
    double online_alpha = 0.0;
    Rule online_rule = Rule::relaxed;
    double online_residual = 0.0;
    double online_delta = 0.0;
};

struct SurfaceCountStudy {
    std::vector<SurfaceCountRow> rows;
    std::vector<Selection> selections;  ///< one per online run, then the standard run
    CalibrationResult standard;         ///< slice 0 alone
    CalibrationResult online;           ///< all slices
    SurfaceFamily truth;                ///< truth on the inversion grid
};

/// Data are generated once from `spec` (its noise_std is used as is) and
/// truncated to the first n slices for each online run.
SurfaceCountStudy surface_count_study(const SyntheticSpec& spec, const TikhonovConfig& cfg, const MorozovConfig& mcfg,
                                      Execution exec = Execution::parallel);

/// n_surfaces, online_error, standard_error, online_alpha, online_rule,
/// online_residual, online_delta
Table surface_count_table(const SurfaceCountStudy& study);

/// Long-format slice 0 reconstructions: mode, tau, y, truth, estimate.
Table reconstruction_table(const SurfaceCountStudy& study);

/// err(n+1) <= (1 + tol) err(n) for every consecutive pair.
bool non_increasing_within(const std::vector<double>& v, double tol);

/// Non-increasing after dropping at most `inversions` offending entries.
bool monotone_up_to(const std::vector<double>& v, std::size_t inversions);

}  // namespace olv
