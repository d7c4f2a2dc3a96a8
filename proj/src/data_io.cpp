// SPDX-License-Identifier: Apache-2.0
#include "olv/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "olv/dupire.hpp"
#include "olv/errors.hpp"

namespace olv {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

double synth_truth_surface(double s, double tau, double y) {
    if (tau > 0.0 && tau <= 1.0 && y >= -0.4 && y <= 0.4) {
        return 0.4 * (1.0 - 0.4 * std::exp(-(tau - s) / 2.0)) * std::cos(1.25 * std::numbers::pi * y);
    }
    return 0.4;
}

Surface sample_truth(const TruthFunction& truth, GridPtr grid, double s, double lo, double hi) {
    Surface out(grid);
    const auto tau = grid->tau();
    const auto y = grid->y();
    for (std::size_t i = 0; i < tau.size(); ++i) {
        for (std::size_t j = 0; j < y.size(); ++j) out(i, j) = std::clamp(truth(s, tau[i], y[j]), lo, hi);
    }
    return out;
}

// ---------------------------------------------------------------- synthetic

void SyntheticSpec::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string(name) + " must be positive");
    };
    positive(T, "T");
    positive(Y, "Y");
    positive(fine_dtau, "fine_dtau");
    positive(fine_dy, "fine_dy");
    positive(coarse_dtau, "coarse_dtau");
    positive(coarse_dy, "coarse_dy");
    if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) throw InvalidArgument("noise_std must be >= 0");
    if (!std::isfinite(b)) throw InvalidArgument("b must be finite");
    if (!(s_min > 0.0) || !(s_max >= s_min)) throw InvalidArgument("spot axis needs 0 < s_min <= s_max");
    if (s_max > s_min) positive(ds, "ds");
    if (fine_dtau > coarse_dtau || fine_dy > coarse_dy) {
        throw InvalidArgument("fine grid must not be coarser than the inversion grid");
    }
    if (experiment_run && noise_std > 0.0 && (fine_dtau == coarse_dtau || fine_dy == coarse_dy)) {
        throw InvalidArgument("noisy experiment data must be generated on a strictly finer grid than the inversion grid");
    }
    if (!truth) throw InvalidArgument("truth function is empty");
    admissible().validate();
}

GridPtr SyntheticSpec::fine_grid() const { return make_grid(T, Y, fine_dtau, fine_dy); }
GridPtr SyntheticSpec::coarse_grid() const { return make_grid(T, Y, coarse_dtau, coarse_dy); }

SpotAxis SyntheticSpec::axis() const {
    if (s_max == s_min) return SpotAxis::single(s_min);
    return SpotAxis::with_step(s_min, s_max, ds);
}

AdmissibleSet SyntheticSpec::admissible() const {
    const SpotAxis ax = axis();
    const GridPtr g = coarse_grid();
    return {a_lower, a_upper, SurfaceFamily::constant(ax, Surface(g, prior_value))};
}

SyntheticData generate_synthetic(const SyntheticSpec& spec, Execution exec) {
    spec.validate();
    const GridPtr fine = spec.fine_grid();
    const GridPtr coarse = spec.coarse_grid();
    if (spec.experiment_run && spec.noise_std > 0.0 && *fine == *coarse) {
        throw InvalidArgument("inverse crime: generation and inversion grids coincide");
    }
    const SpotAxis axis = spec.axis();
    const std::size_t n = axis.size();
    const Surface fine_prior(fine, spec.prior_value);

    std::vector<Surface> noisy(n), clean(n), truth(n);
    std::vector<double> noise_sq(n, 0.0);
    std::vector<std::size_t> noise_count(n, 0);

    for_each_slice(n, exec, [&](std::size_t m) {
        const double s = axis.nodes()[m];
        const MarketParams params{spec.b, axis.spot(m)};
        const Surface a_fine = sample_truth(spec.truth, fine, s, spec.a_lower, spec.a_upper);
        Surface diff = solve_dupire(a_fine, params) - solve_dupire(fine_prior, params);
        clean[m] = interpolate_surface(diff, coarse);
        truth[m] = sample_truth(spec.truth, coarse, s, spec.a_lower, spec.a_upper);
        if (spec.noise_std > 0.0) {
            std::seed_seq seq{static_cast<std::uint32_t>(spec.seed & 0xffffffffu),
                              static_cast<std::uint32_t>(spec.seed >> 32), static_cast<std::uint32_t>(m)};
            std::mt19937_64 rng(seq);
            std::normal_distribution<double> normal(0.0, spec.noise_std);
            for (double& v : diff.values()) {
                const double e = normal(rng);
                v += e;
                noise_sq[m] += e * e;
            }
            noise_count[m] = diff.values().size();
        }
        noisy[m] = interpolate_surface(diff, coarse);
    });

    SyntheticData out{
        NoisyData{SurfaceFamily(axis, std::move(noisy)), 0.0, spec.noise_std},
        SurfaceFamily(axis, std::move(truth)),
        SurfaceFamily(axis, std::move(clean)),
        0.0,
        0.0,
    };
    if (spec.noise_std > 0.0) {
        const SurfaceFamily noise = out.data.obs - out.noiseless_obs;
        out.data.delta = family_l2_norm(noise);
        for (const auto& slice : noise.slices()) out.slice_delta = std::max(out.slice_delta, surface_l2_norm(slice));
        double sq = 0.0;
        std::size_t count = 0;
        for (std::size_t m = 0; m < n; ++m) {
            sq += noise_sq[m];
            count += noise_count[m];
        }
        out.fine_noise_std = std::sqrt(sq / static_cast<double>(count));
    }
    return out;
}

// ---------------------------------------------------------------- quotes

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

bool parse_double(std::string_view s, double& out) {
    if (s.empty()) return false;
    if (s.front() == '+') s.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

bool iso_date(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9}) {
        if (s[i] < '0' || s[i] > '9') return false;
    }
    return true;
}

}  // namespace

std::vector<MarketQuote> parse_market_quotes(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    bool header = false;
    std::vector<MarketQuote> quotes;
    std::vector<std::string> offenders;

    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view row = trim(line);
        if (row.empty()) continue;
        if (!header) {
            if (row != kQuoteHeader) {
                throw ParseError("line " + std::to_string(lineno) + ": expected header '" + kQuoteHeader + "'", lineno);
            }
            header = true;
            continue;
        }
        const auto f = split(row, ',');
        if (f.size() != 6) {
            throw ParseError("line " + std::to_string(lineno) + ": expected 6 fields, got " + std::to_string(f.size()),
                             lineno);
        }
        MarketQuote q;
        q.quote_date = std::string(f[0]);
        if (!iso_date(f[0])) throw ParseError("line " + std::to_string(lineno) + ": quote_date is not YYYY-MM-DD", lineno);
        const char* names[] = {"maturity_years", "strike", "bid", "ask", "underlying"};
        double* slots[] = {&q.maturity, &q.strike, &q.bid, &q.ask, &q.underlying};
        for (int k = 0; k < 5; ++k) {
            if (!parse_double(f[k + 1], *slots[k])) {
                throw ParseError("line " + std::to_string(lineno) + ": bad number in " + names[k], lineno);
            }
        }
        std::string why;
        if (!(q.maturity > 0.0)) why = "maturity_years <= 0";
        else if (!(q.strike > 0.0)) why = "strike <= 0";
        else if (!(q.underlying > 0.0)) why = "underlying <= 0";
        else if (q.bid < 0.0) why = "bid < 0";
        else if (q.bid > q.ask) why = "crossed quote (bid > ask)";
        if (!why.empty()) offenders.push_back("line " + std::to_string(lineno) + ": " + why);
        quotes.push_back(std::move(q));
    }
    if (!header) throw ParseError("missing header '" + std::string(kQuoteHeader) + "'", 0);
    if (!offenders.empty()) {
        std::string msg = "invalid quotes:";
        for (const auto& o : offenders) msg += "\n  " + o;
        throw ValidationError(msg);
    }
    if (quotes.empty()) throw ValidationError("quote file contains no quotes");
    return quotes;
}

std::vector<MarketQuote> load_market_quotes(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open quote file " + path.string());
    try {
        return parse_market_quotes(in);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), e.line());
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

double spread_noise_level(const std::vector<MarketQuote>& quotes) {
    if (quotes.empty()) throw ValidationError("no quotes");
    double sum = 0.0;
    for (const auto& q : quotes) sum += q.ask - q.bid;
    return 0.5 * sum / static_cast<double>(quotes.size());
}

namespace {

// Bilinear value of a surface at an arbitrary (tau, y), clamped to the grid.
double bilinear_at(const Surface& s, double tau, double y) {
    const Grid2D& g = s.grid();
    auto locate = [](std::span<const double> nodes, double h, double x, std::size_t& k, double& w) {
        x = std::clamp(x, nodes.front(), nodes.back());
        k = std::min(static_cast<std::size_t>((x - nodes.front()) / h), nodes.size() - 2);
        w = (x - nodes[k]) / h;
    };
    std::size_t i = 0, j = 0;
    double wt = 0.0, wy = 0.0;
    locate(g.tau(), g.dtau(), tau, i, wt);
    locate(g.y(), g.dy(), y, j, wy);
    return (1 - wt) * ((1 - wy) * s(i, j) + wy * s(i, j + 1)) + wt * ((1 - wy) * s(i + 1, j) + wy * s(i + 1, j + 1));
}

struct Curve {
    std::vector<double> x, v;

    // Piecewise linear with nearest-value extension.
    double at(double t, bool& extrapolated) const {
        if (t < x.front() || t > x.back()) extrapolated = true;
        if (t <= x.front()) return v.front();
        if (t >= x.back()) return v.back();
        const auto k = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), t) - x.begin()) - 1;
        const double w = (t - x[k]) / (x[k + 1] - x[k]);
        return (1 - w) * v[k] + w * v[k + 1];
    }
};

// Sorts by x and averages duplicate abscissae.
Curve make_curve(std::vector<std::pair<double, double>> pts) {
    std::sort(pts.begin(), pts.end());
    Curve c;
    for (std::size_t k = 0; k < pts.size();) {
        std::size_t e = k;
        double sum = 0.0;
        while (e < pts.size() && pts[e].first == pts[k].first) sum += pts[e++].second;
        c.x.push_back(pts[k].first);
        c.v.push_back(sum / static_cast<double>(e - k));
        k = e;
    }
    return c;
}

struct DateSurface {
    std::string date;
    double underlying = 0.0;
    Surface diff;
};

}  // namespace

MarketData quotes_to_family(const std::vector<MarketQuote>& quotes, GridPtr grid, const Surface& prior, double b) {
    if (quotes.empty()) throw ValidationError("no quotes");
    if (!prior.grid_ptr() || !(prior.grid() == *grid)) throw InvalidArgument("prior must live on the calibration grid");

    struct {
        std::vector<std::string> dates;
        std::vector<double> underlyings;
        bool extrapolated = false;
        std::vector<std::string> warnings;
    } out;
    std::map<std::string, std::vector<const MarketQuote*>> by_date;
    for (const auto& q : quotes) by_date[q.quote_date].push_back(&q);

    std::vector<DateSurface> dates;
    for (const auto& [date, qs] : by_date) {
        double under = 0.0;
        for (const auto* q : qs) under += q->underlying;
        under /= static_cast<double>(qs.size());
        for (const auto* q : qs) {
            if (std::abs(q->underlying - under) > 1e-9 * under) {
                out.warnings.push_back(date + ": underlying varies within the date; using the mean");
                break;
            }
        }

        const Surface prior_prices = solve_dupire(prior, {b, under});
        std::map<double, std::vector<const MarketQuote*>> by_maturity;
        for (const auto* q : qs) by_maturity[q->maturity].push_back(q);

        std::vector<double> mats;
        std::vector<Curve> curves;
        for (auto& [mat, group] : by_maturity) {
            std::sort(group.begin(), group.end(), [](auto* l, auto* r) { return l->strike < r->strike; });
            for (std::size_t k = 1; k < group.size(); ++k) {
                const double mid0 = 0.5 * (group[k - 1]->bid + group[k - 1]->ask);
                const double mid1 = 0.5 * (group[k]->bid + group[k]->ask);
                const double tol = 0.5 * (group[k - 1]->ask - group[k - 1]->bid) + 0.5 * (group[k]->ask - group[k]->bid);
                if (mid1 > mid0 + tol) {
                    std::ostringstream w;
                    w << date << " T=" << mat << ": mid price increases in strike between K=" << group[k - 1]->strike
                      << " and K=" << group[k]->strike;
                    out.warnings.push_back(w.str());
                }
            }
            std::vector<std::pair<double, double>> pts;
            for (const auto* q : group) {
                const double y = std::log(q->strike / under);
                const double mid = 0.5 * (q->bid + q->ask);
                pts.emplace_back(y, mid - bilinear_at(prior_prices, mat, y));
            }
            mats.push_back(mat);
            curves.push_back(make_curve(std::move(pts)));
        }

        Surface diff(grid, 0.0);
        const auto tau = grid->tau();
        const auto y = grid->y();
        for (std::size_t i = 1; i < tau.size(); ++i) {
            std::size_t lo = 0, hi = 0;
            double w = 0.0;
            if (tau[i] <= mats.front()) {
                out.extrapolated |= tau[i] < mats.front();
            } else if (tau[i] >= mats.back()) {
                out.extrapolated |= tau[i] > mats.back();
                lo = hi = mats.size() - 1;
            } else {
                hi = static_cast<std::size_t>(std::upper_bound(mats.begin(), mats.end(), tau[i]) - mats.begin());
                lo = hi - 1;
                w = (tau[i] - mats[lo]) / (mats[hi] - mats[lo]);
            }
            for (std::size_t j = 1; j + 1 < y.size(); ++j) {
                const double vlo = curves[lo].at(y[j], out.extrapolated);
                const double vhi = curves[hi].at(y[j], out.extrapolated);
                diff(i, j) = (1 - w) * vlo + w * vhi;
            }
        }
        dates.push_back({date, under, std::move(diff)});
    }

    std::stable_sort(dates.begin(), dates.end(), [](const auto& l, const auto& r) { return l.underlying < r.underlying; });
    for (const auto& d : dates) {
        out.dates.push_back(d.date);
        out.underlyings.push_back(d.underlying);
    }

    const double s_lo = dates.front().underlying;
    const double s_hi = dates.back().underlying;
    std::vector<Surface> slices;
    std::optional<SpotAxis> axis;
    if (dates.size() == 1 || s_hi == s_lo) {
        if (dates.size() > 1) out.warnings.push_back("all quote dates share one underlying level; averaging into one surface");
        axis = SpotAxis::single(s_lo);
        Surface avg(grid, 0.0);
        for (const auto& d : dates) avg.axpy(1.0 / static_cast<double>(dates.size()), d.diff);
        slices.push_back(std::move(avg));
    } else {
        axis = SpotAxis(s_lo, s_hi, dates.size());
        for (std::size_t m = 0; m < axis->size(); ++m) {
            const double spot = axis->spot(m);
            std::size_t hi = 1;
            while (hi + 1 < dates.size() && dates[hi].underlying < spot) ++hi;
            const auto& a = dates[hi - 1];
            const auto& c = dates[hi];
            const double w =
                c.underlying > a.underlying ? std::clamp((spot - a.underlying) / (c.underlying - a.underlying), 0.0, 1.0) : 0.5;
            Surface s(grid, 0.0);
            s.axpy((1 - w) * spot / a.underlying, a.diff);
            s.axpy(w * spot / c.underlying, c.diff);
            slices.push_back(std::move(s));
        }
    }

    const double level = spread_noise_level(quotes);
    const SurfaceFamily ones = SurfaceFamily::constant(*axis, Surface(grid, 1.0));
    if (out.extrapolated) out.warnings.push_back("nearest-value extension used outside the quoted strike/maturity hull");
    return {NoisyData{SurfaceFamily(*axis, std::move(slices)), level * family_l2_norm(ones), level},
            std::move(out.dates), std::move(out.underlyings), out.extrapolated, std::move(out.warnings)};
}

// ---------------------------------------------------------------- results

void write_file_atomic(const fs::path& path, const std::string& text) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out << text;
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

namespace {

json grid_json(const Grid2D& g) {
    return {{"tau_nodes", std::vector<double>(g.tau().begin(), g.tau().end())},
            {"y_nodes", std::vector<double>(g.y().begin(), g.y().end())}};
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string format_cell(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) {
        if (std::isnan(*d)) return "nan";
        if (std::isinf(*d)) return *d > 0 ? "inf" : "-inf";
        char buf[64];
        const auto r = std::to_chars(buf, buf + sizeof buf, *d);
        return std::string(buf, r.ptr);
    }
    if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
    const std::string& s = std::get<std::string>(c);
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
}

}  // namespace

void emit_results(const CalibrationResult& result, const ResultMetadata& meta, const fs::path& path) {
    const SurfaceFamily& fam = result.family;
    json j;
    // The prior-fits selection corresponds to alpha = infinity, stored as null.
    if (std::isfinite(result.alpha)) j["alpha"] = result.alpha;
    else j["alpha"] = nullptr;
    j["delta"] = meta.delta;
    j["residual_norm"] = result.residual_norm;
    j["penalty"] = result.penalty;
    j["iterations"] = result.iterations;
    j["converged"] = result.converged;
    j["rule_used"] = meta.rule_used;
    j["mode"] = meta.mode;
    j["objective_trace"] = result.objective_trace;
    j["extrapolated"] = meta.extrapolated;
    j["warnings"] = meta.warnings;
    json diag = json::object();
    for (const auto& [k, v] : meta.diagnostics) diag[k] = v;
    j["diagnostics"] = std::move(diag);
    j["axis"] = {{"s_min", fam.axis().s_min()}, {"s_max", fam.axis().s_max()}, {"s_nodes", fam.axis().size()}};
    j["grid"] = grid_json(fam.grid());
    json slices = json::array();
    for (const auto& s : fam.slices()) slices.push_back(std::vector<double>(s.values().begin(), s.values().end()));
    j["slices"] = std::move(slices);
    write_file_atomic(path, j.dump(1) + "\n");
}

LoadedResult load_results(const fs::path& path) {
    json j;
    try {
        j = json::parse(read_file(path));
        const auto tau = j.at("grid").at("tau_nodes").get<std::vector<double>>();
        const auto y = j.at("grid").at("y_nodes").get<std::vector<double>>();
        auto grid = std::make_shared<const Grid2D>(tau, y);
        const auto& ax = j.at("axis");
        const SpotAxis axis(ax.at("s_min").get<double>(), ax.at("s_max").get<double>(), ax.at("s_nodes").get<std::size_t>());
        std::vector<Surface> slices;
        for (const auto& s : j.at("slices")) slices.emplace_back(grid, s.get<std::vector<double>>());
        ResultMetadata meta{j.at("delta").get<double>(), j.value("rule_used", std::string()),
                            j.value("mode", std::string()), j.value("extrapolated", false),
                            j.value("warnings", std::vector<std::string>{}), {}};
        if (j.contains("diagnostics")) {
            for (const auto& [k, v] : j.at("diagnostics").items()) meta.diagnostics.emplace_back(k, v.get<double>());
        }
        LoadedResult out{
            CalibrationResult{SurfaceFamily(axis, std::move(slices)),
                              j.at("alpha").is_null() ? HUGE_VAL : j.at("alpha").get<double>(),
                              j.at("residual_norm").get<double>(), j.at("penalty").get<double>(),
                              j.at("objective_trace").get<std::vector<double>>(), j.at("iterations").get<int>(),
                              j.at("converged").get<bool>()},
            std::move(meta),
        };
        return out;
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what(), 0);
    }
}

void emit_table(const Table& table, const fs::path& path) {
    std::string text;
    for (std::size_t c = 0; c < table.columns.size(); ++c) text += (c ? "," : "") + format_cell(table.columns[c]);
    text += "\n";
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size()) throw InvalidArgument("table row width does not match the header");
        for (std::size_t c = 0; c < row.size(); ++c) text += (c ? "," : "") + format_cell(row[c]);
        text += "\n";
    }
    write_file_atomic(path, text);
}

Table load_table(const fs::path& path) {
    std::istringstream in(read_file(path));
    std::string line;
    Table t;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        // Quoted fields are only produced for strings with separators; split
        // on commas outside quotes.
        std::vector<std::string> fields(1);
        bool quoted = false;
        for (std::size_t k = 0; k < line.size(); ++k) {
            const char ch = line[k];
            if (ch == '"') {
                if (quoted && k + 1 < line.size() && line[k + 1] == '"') {
                    fields.back() += '"';
                    ++k;
                } else {
                    quoted = !quoted;
                }
            } else if (ch == ',' && !quoted) {
                fields.emplace_back();
            } else if (ch != '\r') {
                fields.back() += ch;
            }
        }
        if (t.columns.empty() && lineno == 1) {
            t.columns = std::move(fields);
            continue;
        }
        if (fields.size() != t.columns.size()) throw ParseError(path.string() + ": ragged row", lineno);
        std::vector<Cell> row;
        for (const auto& f : fields) {
            double d = 0.0;
            if (f == "nan") row.emplace_back(std::nan(""));
            else if (f == "inf" || f == "-inf") row.emplace_back(f[0] == '-' ? -HUGE_VAL : HUGE_VAL);
            else if (parse_double(f, d)) row.emplace_back(d);
            else row.emplace_back(f);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

void emit_surface(const Surface& surface, const fs::path& path, const std::vector<std::pair<std::string, double>>& extra) {
    json j;
    for (const auto& [k, v] : extra) j[k] = v;
    j["grid"] = grid_json(surface.grid());
    j["values"] = std::vector<double>(surface.values().begin(), surface.values().end());
    write_file_atomic(path, j.dump(1) + "\n");
}

Surface load_surface(const fs::path& path) {
    try {
        const json j = json::parse(read_file(path));
        const auto tau = j.at("grid").at("tau_nodes").get<std::vector<double>>();
        const auto y = j.at("grid").at("y_nodes").get<std::vector<double>>();
        return Surface(std::make_shared<const Grid2D>(tau, y), j.at("values").get<std::vector<double>>());
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what(), 0);
    }
}

}  // namespace olv
