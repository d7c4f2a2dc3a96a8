// SPDX-License-Identifier: Apache-2.0
/**
 * @file config.hpp
 * @brief JSON run configuration shared by the command-line tool.
 *
 * Every section is optional and falls back to the defaults below. Unknown
 * keys and wrongly typed values are rejected with the dotted field name in
 * the message, e.g. "config field 'tikhonov.max_iters': expected an integer".
 *
 *     {
 *       "price":      {"T", "Y", "dtau", "dy", "b", "spot",
 *                      "variance": "constant"|"synthetic"|"file",
 *                      "sigma", "variance_file", "s"},
 *       "synthetic":  {"T", "Y", "fine_dtau", "fine_dy", "coarse_dtau", "coarse_dy",
 *                      "s_min", "s_max", "ds", "noise_std", "b", "seed",
 *                      "a_lower", "a_upper", "prior"},
 *       "tikhonov":   {"max_iters", "step0", "armijo_c", "step_shrink", "grad_tol",
 *                      "max_shrinks", "l", "k_max"},
 *       "morozov":    {"tau1", "tau2", "tau_tilde", "q", "alpha0", "scale_alpha0",
 *                      "max_steps", "bracket_iters", "max_bracket_steps"},
 *       "experiment": {"fig1_levels", "rate_levels", "fig3_noise"}
 *     }
 */

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "olv/data_io.hpp"
#include "olv/morozov.hpp"
#include "olv/regularization.hpp"

namespace olv {

struct PriceConfig {
    double T = 1.0;
    double Y = 5.0;
    double dtau = 0.01;
    double dy = 0.1;
    double b = 0.03;
    double spot = 30.0;
    std::string variance = "constant";  ///< constant, synthetic or file
    double sigma = 0.4;                 ///< constant variance a = sigma^2 / 2
    std::string variance_file;          ///< surface JSON for variance = file
    double s = 0.0;                     ///< shifted spot for variance = synthetic

    void validate() const;
};

struct ExperimentLevels {
    std::vector<double> fig1_levels{0.035, 0.01};
    std::vector<double> rate_levels{0.08, 0.035, 0.01};
    double fig3_noise = 0.035;

    void validate() const;
};

struct AppConfig {
    PriceConfig price;
    SyntheticSpec synthetic;
    TikhonovConfig tikhonov;
    MorozovConfig morozov;
    ExperimentLevels experiment;

    /// @throws InvalidArgument naming the offending field
    void validate() const;

    /// Experiment scale of the reference study: dtau = 0.01, dy = 0.1,
    /// ds = 0.25 on the inversion grid.
    static AppConfig full_scale();
};

/// Overrides fields of `base` with the ones present in the JSON text.
AppConfig parse_config(std::string_view json_text, AppConfig base = {});
AppConfig load_config(const std::filesystem::path& path, AppConfig base = {});

}  // namespace olv
