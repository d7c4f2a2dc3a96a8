// SPDX-License-Identifier: Apache-2.0
/**
 * @file data_io.hpp
 * @brief Synthetic data generation, market quote ingestion and result files.
 *
 * Observations are always kept in operator convention: observed call prices
 * minus the prices of the prior variance at the same spot, so that the data
 * of a family is directly comparable with U(A) = u(A) - u(A0).
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "olv/execution.hpp"
#include "olv/grid.hpp"
#include "olv/regularization.hpp"

namespace olv {

struct NoisyData {
    SurfaceFamily obs;           ///< U_delta
    double delta = 0.0;          ///< noise level in the family L2 norm
    double pointwise_std = 0.0;  ///< per-node noise scale it was derived from
};

/// Local variance test surface in shifted spot s, maturity tau and
/// log-moneyness y:
///     (2/5)(1 - (2/5) e^{-(tau - s)/2}) cos(1.25 pi y)   for (tau, y) in (0, 1] x [-2/5, 2/5],
///     2/5                                               otherwise.
/// Not clamped; callers clamp into the admissible box.
double synth_truth_surface(double s, double tau, double y);

using TruthFunction = std::function<double(double s, double tau, double y)>;

/// Truth sampled on a grid at shifted spot s and clamped into [lo, hi].
Surface sample_truth(const TruthFunction& truth, GridPtr grid, double s, double lo, double hi);

struct SyntheticSpec {
    double T = 1.0;
    double Y = 5.0;
    double fine_dtau = 0.002;
    double fine_dy = 0.01;
    double coarse_dtau = 0.02;
    double coarse_dy = 0.1;
    double s_min = 29.5;
    double s_max = 32.5;
    double ds = 0.5;
    double noise_std = 0.035;
    double b = 0.03;
    std::uint64_t seed = 42;
    double a_lower = 0.05;
    double a_upper = 0.6;
    double prior_value = 0.4;  ///< constant prior variance a0
    /// Experiment runs require distinct generation and inversion grids
    /// whenever noise is present.
    bool experiment_run = true;
    TruthFunction truth = synth_truth_surface;

    void validate() const;
    GridPtr fine_grid() const;
    GridPtr coarse_grid() const;
    SpotAxis axis() const;
    /// Box and constant prior on the coarse grid.
    AdmissibleSet admissible() const;
};

struct SyntheticData {
    NoisyData data;                 ///< noisy observations on the coarse grid
    SurfaceFamily truth_on_coarse;  ///< clamped truth sampled at coarse nodes
    SurfaceFamily noiseless_obs;    ///< U(A_true) interpolated to the coarse grid
    double slice_delta = 0.0;       ///< max_s of the per-slice L2(D) noise norm
    double fine_noise_std = 0.0;    ///< empirical std of the fine-grid noise
};

/// Per slice: truth on the fine grid, forward operator on the fine grid,
/// i.i.d. N(0, noise_std^2) added at every fine node, bilinear transfer to
/// the coarse grid. delta is the realized family norm of the coarse noise.
/// Each slice draws from its own stream seeded by (seed, slice index).
SyntheticData generate_synthetic(const SyntheticSpec& spec, Execution exec = Execution::parallel);

struct MarketQuote {
    std::string quote_date;
    double maturity = 0.0;  ///< years
    double strike = 0.0;
    double bid = 0.0;
    double ask = 0.0;
    double underlying = 0.0;
};

/// Exact CSV header: quote_date,maturity_years,strike,bid,ask,underlying
inline constexpr const char* kQuoteHeader = "quote_date,maturity_years,strike,bid,ask,underlying";

/// @throws ParseError with the offending line number
/// @throws ValidationError listing crossed or otherwise invalid quotes
std::vector<MarketQuote> parse_market_quotes(std::istream& in);
std::vector<MarketQuote> load_market_quotes(const std::filesystem::path& path);

/// Half the mean bid-ask spread.
double spread_noise_level(const std::vector<MarketQuote>& quotes);

struct MarketData {
    NoisyData data;
    std::vector<std::string> dates;  ///< one per source surface, ascending underlying
    std::vector<double> underlyings;
    bool extrapolated = false;       ///< nearest-value extension was used somewhere
    std::vector<std::string> warnings;
};

/// Groups quotes into one surface per quote date, orders the dates by
/// underlying level and maps them to a uniform spot axis over
/// [min underlying, max underlying] with one node per date. Mid prices
/// become differences against prior prices, interpolated linearly in y and
/// tau with nearest-value extension outside the quoted hull, and linearly in
/// spot (after normalizing by spot) between dates.
MarketData quotes_to_family(const std::vector<MarketQuote>& quotes, GridPtr grid, const Surface& prior, double b);

/// Table cell for CSV output.
using Cell = std::variant<double, long long, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct ResultMetadata {
    double delta = 0.0;
    std::string rule_used;  ///< relaxed, sequential, prior_fits, fixed
    std::string mode;       ///< online or standard
    bool extrapolated = false;
    std::vector<std::string> warnings;
    /// Named scalars written under "diagnostics".
    std::vector<std::pair<std::string, double>> diagnostics;
};

struct LoadedResult {
    CalibrationResult result;
    ResultMetadata meta;
};

/// Writes atomically (temporary file, then rename).
void emit_results(const CalibrationResult& result, const ResultMetadata& meta, const std::filesystem::path& path);
LoadedResult load_results(const std::filesystem::path& path);
void emit_table(const Table& table, const std::filesystem::path& path);
Table load_table(const std::filesystem::path& path);

/// Surface as JSON: {<extra fields>, grid: {tau_nodes, y_nodes}, values: [...]}
/// with values row-major.
void emit_surface(const Surface& surface, const std::filesystem::path& path,
                  const std::vector<std::pair<std::string, double>>& extra = {});

Surface load_surface(const std::filesystem::path& path);

/// Writes `text` to `path` through a temporary file in the same directory.
void write_file_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace olv
