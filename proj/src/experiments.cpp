// SPDX-License-Identifier: Apache-2.0
#include "olv/experiments.hpp"

#include <algorithm>

namespace olv {

namespace {

MorozovResult calibrate_prefix(const SyntheticData& data, const SyntheticSpec& spec, std::size_t n,
                               const TikhonovConfig& cfg, const MorozovConfig& mcfg, Execution exec, double& delta) {
    const SurfaceFamily obs = data.data.obs.prefix(n);
    delta = family_l2_norm(obs - data.noiseless_obs.prefix(n));
    const AdmissibleSet full = spec.admissible();
    const AdmissibleSet q{full.a_lower, full.a_upper, full.prior.prefix(n)};
    const TikhonovProblem problem(obs, q, spec.b, exec);
    return select_alpha(problem, delta, cfg, mcfg);
}

}  // namespace

SurfaceCountStudy surface_count_study(const SyntheticSpec& spec, const TikhonovConfig& cfg, const MorozovConfig& mcfg,
                                      Execution exec) {
    const SyntheticData data = generate_synthetic(spec, exec);
    const std::size_t n_total = data.data.obs.size();
    const Surface& truth0 = data.truth_on_coarse[0];

    double delta = 0.0;
    MorozovResult standard = calibrate_prefix(data, spec, 1, cfg, mcfg, exec, delta);
    const double standard_error = surface_l2_norm(standard.result.family[0] - truth0);

    SurfaceCountStudy study{{}, {}, standard.result, standard.result, data.truth_on_coarse};
    for (std::size_t n = 1; n <= n_total; ++n) {
        // n = 1 is the standard run itself.
        MorozovResult run = n == 1 ? standard : calibrate_prefix(data, spec, n, cfg, mcfg, exec, delta);
        if (n == 1) delta = family_l2_norm(data.data.obs.prefix(1) - data.noiseless_obs.prefix(1));
        SurfaceCountRow row;
        row.n_surfaces = n;
        row.online_error = surface_l2_norm(run.result.family[0] - truth0);
        row.standard_error = standard_error;
        row.online_alpha = run.selection.alpha;
        row.online_rule = run.selection.rule;
        row.online_residual = run.result.residual_norm;
        row.online_delta = delta;
        study.rows.push_back(row);
        study.selections.push_back(run.selection);
        if (n == n_total) study.online = run.result;
    }
    study.selections.push_back(standard.selection);
    return study;
}

Table surface_count_table(const SurfaceCountStudy& study) {
    Table t;
    t.columns = {"n_surfaces",  "online_error",    "standard_error", "online_alpha",
                 "online_rule", "online_residual", "online_delta"};
    for (const auto& r : study.rows) {
        t.rows.push_back({static_cast<long long>(r.n_surfaces), r.online_error, r.standard_error, r.online_alpha,
                          to_string(r.online_rule), r.online_residual, r.online_delta});
    }
    return t;
}

Table reconstruction_table(const SurfaceCountStudy& study) {
    Table t;
    t.columns = {"mode", "tau", "y", "truth", "estimate"};
    const Grid2D& g = study.truth.grid();
    const Surface& truth = study.truth[0];
    for (const auto& [mode, fam] : {std::pair<const char*, const SurfaceFamily*>{"standard", &study.standard.family},
                                    {"online", &study.online.family}}) {
        const Surface& est = (*fam)[0];
        for (std::size_t i = 0; i < g.n_tau(); ++i) {
            for (std::size_t j = 0; j < g.n_y(); ++j) {
                t.rows.push_back({std::string(mode), g.tau()[i], g.y()[j], truth(i, j), est(i, j)});
            }
        }
    }
    return t;
}

bool non_increasing_within(const std::vector<double>& v, double tol) {
    for (std::size_t k = 1; k < v.size(); ++k) {
        if (v[k] > (1.0 + tol) * v[k - 1]) return false;
    }
    return true;
}

bool monotone_up_to(const std::vector<double>& v, std::size_t inversions) {
    // Longest non-increasing subsequence; the rest are the dropped entries.
    std::vector<std::size_t> best(v.size(), 1);
    std::size_t longest = v.empty() ? 0 : 1;
    for (std::size_t k = 0; k < v.size(); ++k) {
        for (std::size_t j = 0; j < k; ++j) {
            if (v[k] <= v[j]) best[k] = std::max(best[k], best[j] + 1);
        }
        longest = std::max(longest, best[k]);
    }
    return v.size() - longest <= inversions;
}

}  // namespace olv
