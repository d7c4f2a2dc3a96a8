// SPDX-License-Identifier: Apache-2.0
//
// olv: pricing, calibration and reconstruction experiments for spot-indexed
// local variance surfaces.
//
// Exit codes: 0 success, 2 configuration or input error, 3 numerical
// failure, 4 no regularization parameter selected.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "olv/config.hpp"
#include "olv/data_io.hpp"
#include "olv/dupire.hpp"
#include "olv/errors.hpp"
#include "olv/experiments.hpp"
#include "olv/morozov.hpp"

namespace fs = std::filesystem;
using namespace olv;

namespace {

enum Exit { kOk = 0, kConfig = 2, kNumerical = 3, kNoSelection = 4 };

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    int threads = 0;
    std::string out;
};

void add_common(CLI::App* app, Common& c) {
    app->add_option("--config", c.config, "JSON configuration file");
    app->add_option("--seed", c.seed, "random seed for synthetic data");
    app->add_option("--threads", c.threads, "worker threads (0 = OpenMP default)")->check(CLI::NonNegativeNumber);
    app->add_option("--out", c.out, "output path")->required();
}

AppConfig load(const Common& c, AppConfig base = {}) {
    AppConfig cfg = c.config.empty() ? std::move(base) : load_config(c.config, std::move(base));
    if (c.seed) cfg.synthetic.seed = *c.seed;
    return cfg;
}

void require_parent(const fs::path& out) {
    const fs::path parent = out.has_parent_path() ? out.parent_path() : fs::path(".");
    if (!fs::is_directory(parent)) throw InvalidArgument("--out: directory " + parent.string() + " does not exist");
}

// ---------------------------------------------------------------- price

struct PriceArgs {
    Common common;
    std::optional<double> sigma;
    bool oracle = false;
};

int cmd_price(const PriceArgs& args) {
    AppConfig cfg = load(args.common);
    if (args.sigma) cfg.price.sigma = *args.sigma;
    cfg.validate();
    const PriceConfig& p = cfg.price;
    if (args.oracle && p.variance != "constant") throw InvalidArgument("--oracle requires price.variance = \"constant\"");
    require_parent(args.common.out);

    Surface a;
    if (p.variance == "constant") {
        a = Surface(make_grid(p.T, p.Y, p.dtau, p.dy), 0.5 * p.sigma * p.sigma);
    } else if (p.variance == "synthetic") {
        a = sample_truth(cfg.synthetic.truth, make_grid(p.T, p.Y, p.dtau, p.dy), p.s, cfg.synthetic.a_lower,
                         cfg.synthetic.a_upper);
    } else {
        a = load_surface(p.variance_file);
    }
    const MarketParams params{p.b, p.spot};
    const Surface u = solve_dupire(a, params);
    emit_surface(u, args.common.out, {{"spot", p.spot}, {"b", p.b}});

    std::printf("wrote %s (%zu x %zu nodes)\n", args.common.out.c_str(), u.grid().n_tau(), u.grid().n_y());
    if (args.oracle) {
        const OracleError e = bs_oracle_error(u, p.sigma, params, 1.0);
        std::printf("oracle: max relative error vs bs_price at tau=T, |y|<=1: %.6e (max abs %.6e)\n", e.relative,
                    e.max_abs);
    }
    return kOk;
}

// ---------------------------------------------------------------- calibrate

struct CalibrateArgs {
    Common common;
    std::string data = "synthetic";
    std::string mode = "online";
    std::size_t slice = 0;
    std::string alpha;
    std::optional<double> delta;
};

int cmd_calibrate(const CalibrateArgs& args) {
    AppConfig cfg = load(args.common);
    if (args.delta) {
        if (!(*args.delta >= 0.0)) throw InvalidArgument("--delta must be >= 0");
        cfg.synthetic.noise_std = *args.delta;
    }
    cfg.validate();
    if (args.mode != "online" && args.mode != "standard") throw InvalidArgument("--mode must be online or standard");
    const bool morozov = args.alpha == "morozov";
    std::optional<double> alpha;
    if (!args.alpha.empty() && !morozov) {
        try {
            std::size_t used = 0;
            alpha = std::stod(args.alpha, &used);
            if (used != args.alpha.size()) throw std::invalid_argument(args.alpha);
        } catch (const std::exception&) {
            throw InvalidArgument("--alpha must be a number or 'morozov'");
        }
        if (!(*alpha >= 0.0) || !std::isfinite(*alpha)) throw InvalidArgument("--alpha must be >= 0");
    }
    require_parent(args.common.out);

    const SyntheticSpec& spec = cfg.synthetic;
    ResultMetadata meta;
    meta.mode = args.mode;

    std::optional<SurfaceFamily> obs, truth, clean;
    double delta = 0.0;
    double pointwise = 0.0;
    if (args.data == "synthetic") {
        if (args.mode == "standard" && args.slice >= spec.axis().size()) {
            throw InvalidArgument("--slice out of range for " + std::to_string(spec.axis().size()) + " slices");
        }
        SyntheticData d = generate_synthetic(spec);
        obs = std::move(d.data.obs);
        truth = std::move(d.truth_on_coarse);
        clean = std::move(d.noiseless_obs);
        delta = d.data.delta;
        pointwise = spec.noise_std;
    } else {
        const auto quotes = load_market_quotes(args.data);
        const GridPtr grid = spec.coarse_grid();
        MarketData m = quotes_to_family(quotes, grid, Surface(grid, spec.prior_value), spec.b);
        if (args.mode == "standard" && args.slice >= m.data.obs.size()) {
            throw InvalidArgument("--slice out of range for " + std::to_string(m.data.obs.size()) + " slices");
        }
        pointwise = args.delta.value_or(m.data.pointwise_std);
        const SurfaceFamily ones = SurfaceFamily::constant(m.data.obs.axis(), Surface(grid, 1.0));
        delta = pointwise * family_l2_norm(ones);
        obs = std::move(m.data.obs);
        meta.extrapolated = m.extrapolated;
        meta.warnings = std::move(m.warnings);
        for (const auto& w : meta.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    }

    if (args.mode == "standard") {
        const SpotAxis one = SpotAxis::single(obs->axis().spot(args.slice));
        auto pick = [&](const SurfaceFamily& f) { return SurfaceFamily(one, {f[args.slice]}); };
        obs = pick(*obs);
        if (truth) truth = pick(*truth);
        if (clean) {
            clean = pick(*clean);
            delta = family_l2_norm(*obs - *clean);
        } else {
            delta = pointwise * surface_l2_norm(Surface((*obs).grid_ptr(), 1.0));
        }
    }
    meta.delta = delta;

    const AdmissibleSet q{spec.a_lower, spec.a_upper,
                          SurfaceFamily::constant(obs->axis(), Surface(obs->grid_ptr(), spec.prior_value))};
    const TikhonovProblem problem(*obs, q, spec.b);

    CalibrationResult result = [&] {
        if (morozov) {
            MorozovResult r = select_alpha(problem, delta, cfg.tikhonov, cfg.morozov);
            meta.rule_used = to_string(r.selection.rule);
            return std::move(r.result);
        }
        TikhonovConfig t = cfg.tikhonov;
        t.alpha = alpha.value_or(delta);
        meta.rule_used = "fixed";
        return minimize(problem, t);
    }();

    meta.diagnostics.emplace_back("pointwise_noise", pointwise);
    if (truth) meta.diagnostics.emplace_back("l2_error", mean_slice_distance(result.family, *truth));
    emit_results(result, meta, args.common.out);
    std::printf("wrote %s: alpha=%.6g rule=%s residual=%.6g delta=%.6g iterations=%d\n", args.common.out.c_str(),
                result.alpha, meta.rule_used.c_str(), result.residual_norm, delta, result.iterations);
    return kOk;
}

// ---------------------------------------------------------------- experiment

struct ExperimentArgs {
    Common common;
    std::string name;
    bool full = false;
};

int cmd_experiment(const ExperimentArgs& args) {
    AppConfig cfg = load(args.common, args.full ? AppConfig::full_scale() : AppConfig{});
    cfg.validate();
    const fs::path dir = args.common.out;
    if (fs::exists(dir) && !fs::is_directory(dir)) throw InvalidArgument("--out must be a directory");
    fs::create_directories(dir);

    if (args.name == "fig1" || args.name == "rates") {
        const auto& levels = args.name == "fig1" ? cfg.experiment.fig1_levels : cfg.experiment.rate_levels;
        const auto rows = rate_diagnostics(levels, cfg.synthetic, cfg.tikhonov, cfg.morozov);
        emit_table(rate_table(rows), dir / (args.name + ".csv"));
        for (const auto& r : rows) {
            std::printf("noise %.4g: delta=%.6g alpha=%.6g rule=%s residual=%.6g exact=%.6g bound=%.6g l2_error=%.6g\n",
                        r.noise_std, r.delta, r.alpha, to_string(r.rule).c_str(), r.residual, r.residual_exact,
                        (cfg.morozov.tau2 + 1.0) * r.delta, r.l2_error);
        }
    } else {
        SyntheticSpec spec = cfg.synthetic;
        spec.noise_std = cfg.experiment.fig3_noise;
        const SurfaceCountStudy study = surface_count_study(spec, cfg.tikhonov, cfg.morozov);
        emit_table(surface_count_table(study), dir / (args.name + ".csv"));
        if (args.name == "fig2") emit_table(reconstruction_table(study), dir / "fig2_surfaces.csv");
        for (const auto& r : study.rows) {
            std::printf("n=%zu online=%.6g standard=%.6g alpha=%.6g rule=%s\n", r.n_surfaces, r.online_error,
                        r.standard_error, r.online_alpha, to_string(r.online_rule).c_str());
        }
    }
    std::printf("wrote %s tables to %s\n", args.name.c_str(), dir.c_str());
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Local variance calibration over spot-indexed surface families"};
    app.require_subcommand(1);

    PriceArgs price;
    auto* p = app.add_subcommand("price", "solve the forward equation and write the price surface");
    add_common(p, price.common);
    p->add_option("--sigma", price.sigma, "constant volatility (variance sigma^2/2)");
    p->add_flag("--oracle", price.oracle, "compare against the closed-form price");

    CalibrateArgs cal;
    auto* c = app.add_subcommand("calibrate", "calibrate a local variance family");
    add_common(c, cal.common);
    c->add_option("--data", cal.data, "'synthetic' or a quote CSV");
    c->add_option("--mode", cal.mode, "online or standard")->check(CLI::IsMember({"online", "standard"}));
    c->add_option("--slice", cal.slice, "slice used in standard mode");
    c->add_option("--alpha", cal.alpha, "regularization parameter or 'morozov' (default: delta)");
    c->add_option("--delta", cal.delta, "pointwise noise level");

    ExperimentArgs exp;
    auto* e = app.add_subcommand("experiment", "run a reconstruction study and write CSV tables");
    add_common(e, exp.common);
    e->add_option("name", exp.name, "fig1, fig2, fig3 or rates")
        ->required()
        ->check(CLI::IsMember({"fig1", "fig2", "fig3", "rates"}));
    e->add_flag("--full", exp.full, "reference-scale grids instead of desk scale");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        const int rc = app.exit(err);
        return rc == 0 ? kOk : kConfig;
    }

    try {
        if (*p) {
            set_thread_count(price.common.threads);
            return cmd_price(price);
        }
        if (*c) {
            set_thread_count(cal.common.threads);
            return cmd_calibrate(cal);
        }
        set_thread_count(exp.common.threads);
        return cmd_experiment(exp);
    } catch (const NoSelectionError& err) {
        std::fprintf(stderr, "error: %s\nresidual trace:\n", err.what());
        for (const auto& pr : err.trace()) std::fprintf(stderr, "  alpha=%.6g residual=%.6g\n", pr.alpha, pr.residual);
        return kNoSelection;
    } catch (const NumericalError& err) {
        std::fprintf(stderr, "numerical failure: %s (step %td, slice %td)\n", err.what(), err.step(), err.slice());
        return kNumerical;
    } catch (const DomainError& err) {
        std::fprintf(stderr, "numerical failure: %s\n", err.what());
        return kNumerical;
    } catch (const ParseError& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return kConfig;
    } catch (const ValidationError& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return kConfig;
    } catch (const InvalidArgument& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return kConfig;
    } catch (const IoError& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return kConfig;
    } catch (const std::exception& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 1;
    }
}
