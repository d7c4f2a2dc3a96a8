// SPDX-License-Identifier: Apache-2.0
/**
 * @file regularization.hpp
 * @brief Tikhonov functional over spot families, box projection and a
 *        projected-gradient minimizer.
 *
 *     F(A) = || U_obs - U(A) ||^2 + alpha f(A),   f(A) = || A - A0 ||_X^2,
 *
 * minimized over the box a_lower <= a(s) <= a_upper.
 */

#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "olv/bochner.hpp"
#include "olv/dupire.hpp"
#include "olv/grid.hpp"

namespace olv {

struct AdmissibleSet {
    double a_lower = 0.0;
    double a_upper = 0.0;
    SurfaceFamily prior;  ///< A0

    /// Bounds ordered and positive; every prior value inside the box.
    void validate() const;
    bool contains(const SurfaceFamily& fam, double tol = 1e-12) const;
};

struct TikhonovConfig {
    double alpha = 0.0;
    int max_iters = 200;
    double step0 = 0.25;       ///< first trial step, as a fraction of the box width in max-norm
    double armijo_c = 1e-4;    ///< sufficient-decrease constant in (0, 1)
    double step_shrink = 0.5;  ///< backtracking factor in (0, 1)
    double grad_tol = 1e-6;    ///< projected-gradient norm, relative to the first iteration
    int max_shrinks = 50;
    BochnerParams bochner;

    void validate() const;
};

struct CalibrationResult {
    SurfaceFamily family;
    double alpha = 0.0;
    double residual_norm = 0.0;  ///< || U(A) - U_obs ||
    double penalty = 0.0;        ///< f(A)
    std::vector<double> objective_trace;
    int iterations = 0;
    bool converged = false;
};

struct ObjectiveValue {
    double objective = 0.0;
    double residual_sq = 0.0;
    double penalty = 0.0;
};

/// Convex penalty f. Only the quadratic Bochner penalty is provided; other
/// penalties must also satisfy f(A) = 0 only for A = A0.
class Penalty {
public:
    virtual ~Penalty() = default;
    virtual double value(const SurfaceFamily& fam) const = 0;
    /// L2 representer of f'(A).
    virtual SurfaceFamily l2_gradient(const SurfaceFamily& fam) const = 0;
    /// Gradient in the smoothed descent coordinates used by minimize().
    virtual SurfaceFamily descent_gradient(const SurfaceFamily& fam) const = 0;
};

/// f(A) = ||A - A0||_X^2. Its gradient in X is 2 (A - A0).
class QuadraticPenalty final : public Penalty {
public:
    QuadraticPenalty(SurfaceFamily prior, BochnerParams params);
    double value(const SurfaceFamily& fam) const override;
    SurfaceFamily l2_gradient(const SurfaceFamily& fam) const override;
    SurfaceFamily descent_gradient(const SurfaceFamily& fam) const override;

private:
    SurfaceFamily prior_;
    BochnerParams params_;
};

/// Observations, admissible set and forward model of one calibration.
class TikhonovProblem {
public:
    /// `obs` is in operator convention (observed minus prior prices). The
    /// forward model is built from q.prior.
    TikhonovProblem(SurfaceFamily obs, AdmissibleSet q, double b, Execution exec = Execution::parallel);

    const SurfaceFamily& obs() const noexcept { return obs_; }
    const AdmissibleSet& admissible() const noexcept { return q_; }
    const ForwardModel& model() const noexcept { return *model_; }
    double b() const noexcept { return model_->b(); }

private:
    SurfaceFamily obs_;
    AdmissibleSet q_;
    std::shared_ptr<const ForwardModel> model_;
};

/// Pointwise clamp into [a_lower, a_upper].
SurfaceFamily project_Q(const SurfaceFamily& fam, const AdmissibleSet& q);

/// @throws InvalidArgument if fam is outside Q by more than 1e-12
ObjectiveValue tikhonov_objective(const TikhonovProblem& problem, const SurfaceFamily& fam, const TikhonovConfig& cfg);

/// Projected gradient descent with Armijo backtracking. The descent
/// direction is the Riesz-smoothed misfit gradient plus 2 alpha (A - A0);
/// when that fails to be a descent direction for the full objective the
/// smoothed full L2 gradient is used instead. Starts from `init`, or from
/// the prior when absent.
CalibrationResult minimize(const TikhonovProblem& problem, const TikhonovConfig& cfg,
                           const std::optional<SurfaceFamily>& init = std::nullopt);

/// D(x_tilde, x) = f(x_tilde) - f(x) - <2 (x - A0), x_tilde - x>_X for the
/// quadratic penalty.
double bregman_distance(const SurfaceFamily& x_tilde, const SurfaceFamily& x, const AdmissibleSet& q,
                        const TikhonovConfig& cfg);

}  // namespace olv
