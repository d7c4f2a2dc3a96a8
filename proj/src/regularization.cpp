// SPDX-License-Identifier: Apache-2.0
#include "olv/regularization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "olv/adjoint.hpp"
#include "olv/errors.hpp"

namespace olv {

void AdmissibleSet::validate() const {
    if (!(a_lower > 0.0) || !(a_upper >= a_lower) || !std::isfinite(a_upper)) {
        throw InvalidArgument("admissible box needs 0 < a_lower <= a_upper < inf");
    }
    if (!contains(prior, 0.0)) throw InvalidArgument("prior family lies outside the admissible box");
}

bool AdmissibleSet::contains(const SurfaceFamily& fam, double tol) const {
    for (const auto& s : fam.slices()) {
        if (s.min() < a_lower - tol || s.max() > a_upper + tol) return false;
    }
    return true;
}

void TikhonovConfig::validate() const {
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw InvalidArgument("tikhonov.alpha must be >= 0");
    if (max_iters < 1) throw InvalidArgument("tikhonov.max_iters must be positive");
    if (!(step0 > 0.0)) throw InvalidArgument("tikhonov.step0 must be positive");
    if (!(armijo_c > 0.0 && armijo_c < 1.0)) throw InvalidArgument("tikhonov.armijo_c must lie in (0, 1)");
    if (!(step_shrink > 0.0 && step_shrink < 1.0)) throw InvalidArgument("tikhonov.step_shrink must lie in (0, 1)");
    if (!(grad_tol >= 0.0)) throw InvalidArgument("tikhonov.grad_tol must be >= 0");
    if (max_shrinks < 1) throw InvalidArgument("tikhonov.max_shrinks must be positive");
    bochner.validate();
}

QuadraticPenalty::QuadraticPenalty(SurfaceFamily prior, BochnerParams params)
    : prior_(std::move(prior)), params_(params) {}

double QuadraticPenalty::value(const SurfaceFamily& fam) const {
    const SurfaceFamily e = fam - prior_;
    return x_inner(e, e, params_);
}

SurfaceFamily QuadraticPenalty::l2_gradient(const SurfaceFamily& fam) const {
    return x_norm_sq_gradient(fam, prior_, params_);
}

SurfaceFamily QuadraticPenalty::descent_gradient(const SurfaceFamily& fam) const { return 2.0 * (fam - prior_); }

TikhonovProblem::TikhonovProblem(SurfaceFamily obs, AdmissibleSet q, double b, Execution exec)
    : obs_(std::move(obs)), q_(std::move(q)) {
    q_.validate();
    if (!obs_.compatible(q_.prior)) throw InvalidArgument("observations and prior must share axis and grid");
    model_ = std::make_shared<const ForwardModel>(q_.prior, b, exec);
}

SurfaceFamily project_Q(const SurfaceFamily& fam, const AdmissibleSet& q) {
    SurfaceFamily out = fam;
    for (auto& s : out.slices()) {
        for (double& v : s.values()) v = std::clamp(v, q.a_lower, q.a_upper);
    }
    return out;
}

namespace {

double max_abs(const SurfaceFamily& f) {
    double m = 0.0;
    for (const auto& s : f.slices()) {
        for (double v : s.values()) m = std::max(m, std::abs(v));
    }
    return m;
}

ObjectiveValue evaluate(const TikhonovProblem& problem, const Penalty& penalty, const SurfaceFamily& fam, double alpha) {
    ObjectiveValue v;
    v.residual_sq = misfit_value(problem.model(), fam, problem.obs());
    v.penalty = penalty.value(fam);
    v.objective = v.residual_sq + alpha * v.penalty;
    return v;
}

void mask_active(SurfaceFamily& dir, const SurfaceFamily& x, const AdmissibleSet& q) {
    for (std::size_t m = 0; m < dir.size(); ++m) {
        auto d = dir[m].values();
        const auto v = x[m].values();
        for (std::size_t k = 0; k < d.size(); ++k) {
            if ((v[k] <= q.a_lower && d[k] > 0.0) || (v[k] >= q.a_upper && d[k] < 0.0)) d[k] = 0.0;
        }
    }
}

}  // namespace

ObjectiveValue tikhonov_objective(const TikhonovProblem& problem, const SurfaceFamily& fam, const TikhonovConfig& cfg) {
    cfg.validate();
    if (!problem.admissible().contains(fam, 1e-12)) throw InvalidArgument("family lies outside the admissible set");
    const QuadraticPenalty penalty(problem.admissible().prior, cfg.bochner);
    return evaluate(problem, penalty, fam, cfg.alpha);
}

CalibrationResult minimize(const TikhonovProblem& problem, const TikhonovConfig& cfg,
                           const std::optional<SurfaceFamily>& init) {
    cfg.validate();
    const AdmissibleSet& q = problem.admissible();
    const double alpha = cfg.alpha;
    SurfaceFamily current = init ? *init : q.prior;
    if (!current.compatible(q.prior)) throw InvalidArgument("initial family must share axis and grid with the prior");
    if (!q.contains(current, 1e-12)) throw InvalidArgument("initial family lies outside the admissible set");
    current = project_Q(current, q);

    const QuadraticPenalty penalty(q.prior, cfg.bochner);
    const RieszSmoother smoother(current.grid_ptr(), cfg.bochner);
    const double width = std::max(q.a_upper - q.a_lower, std::numeric_limits<double>::min());

    CalibrationResult result{current, alpha, 0.0, 0.0, {}, 0, false};
    ObjectiveValue value = evaluate(problem, penalty, current, alpha);

    std::optional<SurfaceFamily> prev_point;
    std::optional<SurfaceFamily> prev_dir;
    double step = 0.0;
    double pg_first = -1.0;

    for (int it = 1; it <= cfg.max_iters; ++it) {
        result.iterations = it;
        MisfitGradient mg = misfit_gradient(problem.model(), current, problem.obs());

        SurfaceFamily full = mg.gradient;
        SurfaceFamily dir = smoother.apply(mg.gradient);
        if (alpha > 0.0) {
            full.axpy(alpha, penalty.l2_gradient(current));
            dir.axpy(alpha, penalty.descent_gradient(current));
        }
        if (!(family_inner(full, dir) > 0.0)) dir = smoother.apply(full);

        const SurfaceFamily pg = current - project_Q(current - dir, q);
        const double pg_norm = family_l2_norm(pg);
        if (pg_first < 0.0) pg_first = pg_norm;
        if (pg_norm == 0.0 || pg_norm <= cfg.grad_tol * pg_first) {
            result.converged = true;
            result.objective_trace.push_back(value.objective);
            break;
        }

        // Components pushing against an active bound are dropped so the
        // smoothed direction stays a descent direction after projection.
        mask_active(dir, current, q);

        // Barzilai-Borwein trial step, capped so the first trial moves at
        // most one box width.
        double trial = 0.0;
        if (prev_point && prev_dir) {
            const SurfaceFamily s = current - *prev_point;
            const SurfaceFamily y = dir - *prev_dir;
            const double sy = family_inner(s, y);
            trial = sy > 0.0 ? family_inner(s, s) / sy : 2.0 * step;
        }

        bool accepted = false;
        SurfaceFamily candidate = current;
        ObjectiveValue cand_value;
        // Second pass uses the raw L2 gradient, which always yields descent
        // for a non-stationary projected point.
        for (int pass = 0; pass < 2 && !accepted; ++pass) {
            if (pass == 1) {
                dir = full;
                trial = 0.0;
            }
            const double dmax = max_abs(dir);
            if (dmax == 0.0) continue;
            if (trial <= 0.0) trial = cfg.step0 * width / dmax;
            trial = std::min(trial, width / dmax);
            for (int shrink = 0; shrink <= cfg.max_shrinks; ++shrink) {
                candidate = project_Q(current - trial * dir, q);
                const double decrease = family_inner(full, current - candidate);
                cand_value = evaluate(problem, penalty, candidate, alpha);
                if (decrease > 0.0 && cand_value.objective <= value.objective - cfg.armijo_c * decrease) {
                    accepted = true;
                    break;
                }
                trial *= cfg.step_shrink;
            }
        }
        if (!accepted) {
            result.objective_trace.push_back(value.objective);
            break;
        }

        step = trial;
        prev_point = std::move(current);
        prev_dir = std::move(dir);
        current = std::move(candidate);
        value = cand_value;
        result.objective_trace.push_back(value.objective);
    }

    result.family = std::move(current);
    result.residual_norm = std::sqrt(std::max(value.residual_sq, 0.0));
    result.penalty = value.penalty;
    return result;
}

double bregman_distance(const SurfaceFamily& x_tilde, const SurfaceFamily& x, const AdmissibleSet& q,
                        const TikhonovConfig& cfg) {
    if (!x_tilde.compatible(x) || !x.compatible(q.prior)) throw InvalidArgument("bregman inputs must share axis and grid");
    const QuadraticPenalty f(q.prior, cfg.bochner);
    const SurfaceFamily xi = 2.0 * (x - q.prior);
    return f.value(x_tilde) - f.value(x) - x_inner(xi, x_tilde - x, cfg.bochner);
}

}  // namespace olv
