// SPDX-License-Identifier: Apache-2.0
/**
 * @file morozov.hpp
 * @brief Regularization parameter choice by the relaxed discrepancy
 *        principle, with the sequential principle as fallback.
 *
 * Relaxed rule: accept alpha with tau1 delta <= L(alpha) <= tau2 delta.
 * Sequential rule: on alpha_n = q^n alpha_0 accept the first n >= 1 with
 * L(alpha_n) <= tau_tilde delta < L(alpha_{n-1}).
 * Here L(alpha) = || U(A_alpha) - U_obs ||.
 */

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "olv/data_io.hpp"
#include "olv/errors.hpp"
#include "olv/regularization.hpp"

namespace olv {

struct MorozovConfig {
    double tau1 = 1.1;
    double tau2 = 1.5;
    double tau_tilde = 1.3;
    double q = 0.5;
    double alpha0 = 1e-2;
    /// Multiply alpha0 by ||U_obs||^2 / ||a_upper - a_lower||_X^2 so the
    /// starting point does not depend on the units of the data.
    bool scale_alpha0 = true;
    int max_steps = 40;           ///< sequential ladder length
    int bracket_iters = 30;       ///< bisection budget
    int max_bracket_steps = 12;   ///< 10x expansions in each direction

    void validate() const;
};

enum class Rule { relaxed, sequential, prior_fits };
std::string to_string(Rule rule);

using ResidualOracle = std::function<double(double alpha)>;

struct Selection {
    double alpha = 0.0;
    Rule rule = Rule::relaxed;
    double residual = 0.0;
    /// L(alpha_{n-1}) for the sequential rule, NaN otherwise.
    double previous_residual = 0.0;
    std::vector<NoSelectionError::Probe> trace;
};

/// Selection against an arbitrary residual function. prior_residual is
/// L(infinity) = ||U(A0) - U_obs||; mcfg.alpha0 is used unscaled.
/// @throws NoSelectionError when neither rule succeeds
Selection select_alpha_with(const ResidualOracle& residual, double delta, double prior_residual,
                            const MorozovConfig& mcfg);

/// Sequential rule alone, starting from alpha0.
Selection sequential_morozov(const ResidualOracle& residual, double delta, double alpha0, const MorozovConfig& mcfg,
                             std::vector<NoSelectionError::Probe> trace = {});

struct DiscrepancyValue {
    double residual = 0.0;
    CalibrationResult result;
};

/// Runs minimize at alpha and returns L(A_alpha) with the result.
DiscrepancyValue discrepancy(double alpha, const TikhonovProblem& problem, const TikhonovConfig& cfg,
                             const std::optional<SurfaceFamily>& init = std::nullopt);

struct MorozovResult {
    Selection selection;
    CalibrationResult result;
};

/// Full selection on a calibration problem. Each minimize call starts from
/// the previous minimizer.
MorozovResult select_alpha(const TikhonovProblem& problem, double delta, const TikhonovConfig& cfg,
                           const MorozovConfig& mcfg);

/// Effective starting parameter for select_alpha.
double initial_alpha(const TikhonovProblem& problem, const TikhonovConfig& cfg, const MorozovConfig& mcfg);

/// Throws std::logic_error unless the returned residual satisfies the
/// defining inequalities of the rule that produced it.
void check_selection(const Selection& sel, double delta, const MorozovConfig& mcfg);

struct RateRow {
    double noise_std = 0.0;
    double delta = 0.0;
    double alpha = 0.0;
    Rule rule = Rule::relaxed;
    double residual = 0.0;        ///< || U(A) - U_obs ||
    double previous_residual = 0.0;  ///< as in Selection
    double residual_exact = 0.0;  ///< || U(A) - U_exact ||
    double bregman = 0.0;         ///< D(truth, A)
    double l2_error = 0.0;        ///< mean per-slice L2(D) distance to the truth
};

/// For each pointwise noise level, generates data from spec (with that
/// noise_std), selects alpha and records the convergence quantities.
std::vector<RateRow> rate_diagnostics(const std::vector<double>& noise_levels, const SyntheticSpec& spec,
                                      const TikhonovConfig& cfg, const MorozovConfig& mcfg,
                                      Execution exec = Execution::parallel);

Table rate_table(const std::vector<RateRow>& rows);

}  // namespace olv
