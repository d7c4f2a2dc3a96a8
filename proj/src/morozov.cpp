// SPDX-License-Identifier: Apache-2.0
#include "olv/morozov.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace olv {

void MorozovConfig::validate() const {
    if (!(tau1 > 1.0)) throw InvalidArgument("morozov.tau1 must be > 1");
    if (!(tau2 >= tau1)) throw InvalidArgument("morozov.tau2 must be >= tau1");
    if (!(tau_tilde > 1.0)) throw InvalidArgument("morozov.tau_tilde must be > 1");
    if (!(q > 0.0 && q < 1.0)) throw InvalidArgument("morozov.q must lie in (0, 1)");
    if (!(alpha0 > 0.0) || !std::isfinite(alpha0)) throw InvalidArgument("morozov.alpha0 must be positive");
    if (max_steps < 1) throw InvalidArgument("morozov.max_steps must be positive");
    if (bracket_iters < 0) throw InvalidArgument("morozov.bracket_iters must be >= 0");
    if (max_bracket_steps < 0) throw InvalidArgument("morozov.max_bracket_steps must be >= 0");
}

std::string to_string(Rule rule) {
    switch (rule) {
        case Rule::relaxed: return "relaxed";
        case Rule::sequential: return "sequential";
        case Rule::prior_fits: return "prior_fits";
    }
    return "unknown";
}

Selection sequential_morozov(const ResidualOracle& residual, double delta, double alpha0, const MorozovConfig& mcfg,
                             std::vector<NoSelectionError::Probe> trace) {
    const double target = mcfg.tau_tilde * delta;
    double alpha = alpha0;
    double prev = residual(alpha);
    trace.push_back({alpha, prev});
    for (int n = 1; n <= mcfg.max_steps; ++n) {
        alpha *= mcfg.q;
        const double r = residual(alpha);
        trace.push_back({alpha, r});
        if (r <= target && target < prev) {
            return {alpha, Rule::sequential, r, prev, std::move(trace)};
        }
        prev = r;
    }
    throw NoSelectionError("sequential discrepancy ladder exhausted without a selection", std::move(trace));
}

Selection select_alpha_with(const ResidualOracle& residual, double delta, double prior_residual,
                            const MorozovConfig& mcfg) {
    mcfg.validate();
    if (!(delta > 0.0)) throw InvalidArgument("noise level delta must be positive");
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double lo_t = mcfg.tau1 * delta;
    const double hi_t = mcfg.tau2 * delta;
    if (prior_residual <= hi_t) {
        return {std::numeric_limits<double>::infinity(), Rule::prior_fits, prior_residual, nan, {}};
    }

    std::vector<NoSelectionError::Probe> trace;
    auto probe = [&](double a) {
        const double r = residual(a);
        trace.push_back({a, r});
        return r;
    };
    auto in_band = [&](double r) { return lo_t <= r && r <= hi_t; };

    double a = mcfg.alpha0;
    double r = probe(a);
    if (in_band(r)) return {a, Rule::relaxed, r, nan, std::move(trace)};

    std::optional<double> alpha_lo, alpha_hi;
    (r < lo_t ? alpha_lo : alpha_hi) = a;
    for (int k = 0; k < mcfg.max_bracket_steps && !(alpha_lo && alpha_hi); ++k) {
        a = alpha_lo ? a * 10.0 : a / 10.0;
        r = probe(a);
        if (in_band(r)) return {a, Rule::relaxed, r, nan, std::move(trace)};
        if (r < lo_t) alpha_lo = alpha_lo ? std::max(*alpha_lo, a) : a;
        else alpha_hi = alpha_hi ? std::min(*alpha_hi, a) : a;
    }

    if (alpha_lo && alpha_hi) {
        double lo = *alpha_lo, hi = *alpha_hi;
        for (int k = 0; k < mcfg.bracket_iters; ++k) {
            const double mid = std::sqrt(lo * hi);
            r = probe(mid);
            if (in_band(r)) return {mid, Rule::relaxed, r, nan, std::move(trace)};
            (r < lo_t ? lo : hi) = mid;
        }
    }

    // The band was missed. Fall back to the sequential rule from the
    // smallest parameter known to overshoot the band.
    return sequential_morozov(residual, delta, alpha_hi.value_or(mcfg.alpha0), mcfg, std::move(trace));
}

void check_selection(const Selection& sel, double delta, const MorozovConfig& mcfg) {
    switch (sel.rule) {
        case Rule::relaxed:
            if (!(mcfg.tau1 * delta <= sel.residual && sel.residual <= mcfg.tau2 * delta)) {
                throw std::logic_error("relaxed selection outside the discrepancy band");
            }
            break;
        case Rule::sequential:
            if (!(sel.residual <= mcfg.tau_tilde * delta && mcfg.tau_tilde * delta < sel.previous_residual)) {
                throw std::logic_error("sequential selection violates its defining inequality");
            }
            break;
        case Rule::prior_fits:
            if (!(sel.residual <= mcfg.tau2 * delta)) throw std::logic_error("prior does not fit the data");
            break;
    }
}

DiscrepancyValue discrepancy(double alpha, const TikhonovProblem& problem, const TikhonovConfig& cfg,
                             const std::optional<SurfaceFamily>& init) {
    if (!(alpha > 0.0)) throw InvalidArgument("discrepancy needs alpha > 0");
    TikhonovConfig c = cfg;
    c.alpha = alpha;
    CalibrationResult res = minimize(problem, c, init);
    const double r = res.residual_norm;
    return {r, std::move(res)};
}

double initial_alpha(const TikhonovProblem& problem, const TikhonovConfig& cfg, const MorozovConfig& mcfg) {
    if (!mcfg.scale_alpha0) return mcfg.alpha0;
    const AdmissibleSet& q = problem.admissible();
    const SurfaceFamily width =
        SurfaceFamily::constant(q.prior.axis(), Surface(q.prior.grid_ptr(), q.a_upper - q.a_lower));
    const double denom = x_inner(width, width, cfg.bochner);
    const double obs = family_l2_norm(problem.obs());
    if (!(denom > 0.0) || !(obs > 0.0)) return mcfg.alpha0;
    return mcfg.alpha0 * obs * obs / denom;
}

MorozovResult select_alpha(const TikhonovProblem& problem, double delta, const TikhonovConfig& cfg,
                           const MorozovConfig& mcfg) {
    mcfg.validate();
    cfg.validate();
    MorozovConfig m = mcfg;
    m.alpha0 = initial_alpha(problem, cfg, mcfg);

    std::map<double, CalibrationResult> cache;
    std::optional<SurfaceFamily> warm;
    auto oracle = [&](double alpha) {
        if (auto it = cache.find(alpha); it != cache.end()) return it->second.residual_norm;
        DiscrepancyValue d = discrepancy(alpha, problem, cfg, warm);
        warm = d.result.family;
        cache.emplace(alpha, std::move(d.result));
        return d.residual;
    };

    // U(A0) = 0, so the prior residual is the data norm.
    const double prior_residual = family_l2_norm(problem.obs());
    Selection sel = select_alpha_with(oracle, delta, prior_residual, m);
    check_selection(sel, delta, m);

    if (sel.rule == Rule::prior_fits) {
        CalibrationResult res{problem.admissible().prior, sel.alpha, prior_residual, 0.0, {}, 0, true};
        return {std::move(sel), std::move(res)};
    }
    CalibrationResult res = cache.at(sel.alpha);
    return {std::move(sel), std::move(res)};
}

std::vector<RateRow> rate_diagnostics(const std::vector<double>& noise_levels, const SyntheticSpec& spec,
                                      const TikhonovConfig& cfg, const MorozovConfig& mcfg, Execution exec) {
    for (std::size_t k = 0; k < noise_levels.size(); ++k) {
        if (!(noise_levels[k] > 0.0)) throw InvalidArgument("noise levels must be positive");
        if (k > 0 && !(noise_levels[k] < noise_levels[k - 1])) throw InvalidArgument("noise levels must decrease");
    }
    std::vector<RateRow> rows;
    for (double level : noise_levels) {
        SyntheticSpec s = spec;
        s.noise_std = level;
        const SyntheticData data = generate_synthetic(s, exec);
        const AdmissibleSet q = s.admissible();
        const TikhonovProblem problem(data.data.obs, q, s.b, exec);
        const MorozovResult sel = select_alpha(problem, data.data.delta, cfg, mcfg);
        const SurfaceFamily& fam = sel.result.family;

        RateRow row;
        row.noise_std = level;
        row.delta = data.data.delta;
        row.alpha = sel.selection.alpha;
        row.rule = sel.selection.rule;
        row.residual = sel.result.residual_norm;
        row.previous_residual = sel.selection.previous_residual;
        row.residual_exact = family_l2_norm(problem.model().apply(fam) - data.noiseless_obs);
        row.bregman = bregman_distance(data.truth_on_coarse, fam, q, cfg);
        row.l2_error = mean_slice_distance(fam, data.truth_on_coarse);
        rows.push_back(row);
    }
    return rows;
}

Table rate_table(const std::vector<RateRow>& rows) {
    Table t;
    t.columns = {"noise_std", "delta", "alpha", "rule_used", "residual", "residual_exact", "bregman", "l2_error"};
    for (const auto& r : rows) {
        t.rows.push_back({r.noise_std, r.delta, r.alpha, to_string(r.rule), r.residual, r.residual_exact, r.bregman,
                          r.l2_error});
    }
    return t;
}

}  // namespace olv
