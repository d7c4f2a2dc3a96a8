// SPDX-License-Identifier: Apache-2.0
#include "olv/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "olv/errors.hpp"

namespace olv {

using json = nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& what) {
    throw InvalidArgument("config field '" + field + "': " + what);
}

// Reads the members of one JSON object into typed slots, rejecting
// unknown keys.
class Section {
public:
    Section(const json& root, std::string name) : name_(std::move(name)) {
        if (!root.contains(name_)) return;
        obj_ = &root.at(name_);
        if (!obj_->is_object()) bad(name_, "expected an object");
    }

    void number(const char* key, double& out) {
        if (const json* v = get(key)) {
            if (!v->is_number()) bad(field(key), "expected a number");
            out = v->get<double>();
        }
    }
    template <class Int>
    void integer(const char* key, Int& out) {
        if (const json* v = get(key)) {
            if (!v->is_number_integer()) bad(field(key), "expected an integer");
            if (v->is_number_unsigned()) out = static_cast<Int>(v->get<std::uint64_t>());
            else out = static_cast<Int>(v->get<std::int64_t>());
        }
    }
    void boolean(const char* key, bool& out) {
        if (const json* v = get(key)) {
            if (!v->is_boolean()) bad(field(key), "expected true or false");
            out = v->get<bool>();
        }
    }
    void string(const char* key, std::string& out) {
        if (const json* v = get(key)) {
            if (!v->is_string()) bad(field(key), "expected a string");
            out = v->get<std::string>();
        }
    }
    void numbers(const char* key, std::vector<double>& out) {
        if (const json* v = get(key)) {
            if (!v->is_array()) bad(field(key), "expected an array of numbers");
            out.clear();
            for (const auto& e : *v) {
                if (!e.is_number()) bad(field(key), "expected an array of numbers");
                out.push_back(e.get<double>());
            }
        }
    }

    /// Call after all reads.
    void finish() const {
        if (!obj_) return;
        for (const auto& [key, _] : obj_->items()) {
            if (std::find(seen_.begin(), seen_.end(), key) == seen_.end()) bad(field(key.c_str()), "unknown field");
        }
    }

private:
    const json* get(const char* key) {
        seen_.emplace_back(key);
        if (!obj_ || !obj_->contains(key)) return nullptr;
        return &obj_->at(key);
    }
    std::string field(const char* key) const { return name_ + "." + key; }

    std::string name_;
    const json* obj_ = nullptr;
    std::vector<std::string> seen_;
};

void positive(const std::string& field, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) bad(field, "must be positive");
}

template <class F>
void prefixed(const std::string& section, F&& f) {
    try {
        f();
    } catch (const InvalidArgument& e) {
        const std::string msg = e.what();
        if (msg.rfind("config field", 0) == 0) throw;
        throw InvalidArgument("config section '" + section + "': " + msg);
    }
}

}  // namespace

void PriceConfig::validate() const {
    positive("price.T", T);
    positive("price.Y", Y);
    positive("price.dtau", dtau);
    positive("price.dy", dy);
    positive("price.spot", spot);
    if (!std::isfinite(b)) bad("price.b", "must be finite");
    if (variance == "constant") {
        positive("price.sigma", sigma);
    } else if (variance == "file") {
        if (variance_file.empty()) bad("price.variance_file", "required when price.variance is \"file\"");
    } else if (variance == "synthetic") {
        if (!(s >= 0.0) || !std::isfinite(s)) bad("price.s", "must be >= 0");
    } else {
        bad("price.variance", "expected \"constant\", \"synthetic\" or \"file\"");
    }
}

void ExperimentLevels::validate() const {
    auto ladder = [](const std::string& field, const std::vector<double>& v) {
        if (v.empty()) bad(field, "must not be empty");
        for (std::size_t k = 0; k < v.size(); ++k) {
            positive(field, v[k]);
            if (k > 0 && !(v[k] < v[k - 1])) bad(field, "must be strictly decreasing");
        }
    };
    ladder("experiment.fig1_levels", fig1_levels);
    ladder("experiment.rate_levels", rate_levels);
    positive("experiment.fig3_noise", fig3_noise);
}

void AppConfig::validate() const {
    price.validate();
    prefixed("synthetic", [&] { synthetic.validate(); });
    prefixed("tikhonov", [&] { tikhonov.validate(); });
    prefixed("morozov", [&] { morozov.validate(); });
    experiment.validate();
}

AppConfig AppConfig::full_scale() {
    AppConfig c;
    c.synthetic.coarse_dtau = 0.01;
    c.synthetic.coarse_dy = 0.1;
    c.synthetic.ds = 0.25;
    return c;
}

AppConfig parse_config(std::string_view json_text, AppConfig base) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("config is not valid JSON: ") + e.what(), 0);
    }
    if (!root.is_object()) throw InvalidArgument("config must be a JSON object");
    for (const auto& [key, _] : root.items()) {
        if (key != "price" && key != "synthetic" && key != "tikhonov" && key != "morozov" && key != "experiment") {
            bad(key, "unknown section");
        }
    }

    AppConfig c = std::move(base);
    {
        Section s(root, "price");
        s.number("T", c.price.T);
        s.number("Y", c.price.Y);
        s.number("dtau", c.price.dtau);
        s.number("dy", c.price.dy);
        s.number("b", c.price.b);
        s.number("spot", c.price.spot);
        s.string("variance", c.price.variance);
        s.number("sigma", c.price.sigma);
        s.string("variance_file", c.price.variance_file);
        s.number("s", c.price.s);
        s.finish();
    }
    {
        Section s(root, "synthetic");
        auto& p = c.synthetic;
        s.number("T", p.T);
        s.number("Y", p.Y);
        s.number("fine_dtau", p.fine_dtau);
        s.number("fine_dy", p.fine_dy);
        s.number("coarse_dtau", p.coarse_dtau);
        s.number("coarse_dy", p.coarse_dy);
        s.number("s_min", p.s_min);
        s.number("s_max", p.s_max);
        s.number("ds", p.ds);
        s.number("noise_std", p.noise_std);
        s.number("b", p.b);
        s.integer("seed", p.seed);
        s.number("a_lower", p.a_lower);
        s.number("a_upper", p.a_upper);
        s.number("prior", p.prior_value);
        s.finish();
    }
    {
        Section s(root, "tikhonov");
        auto& t = c.tikhonov;
        s.integer("max_iters", t.max_iters);
        s.number("step0", t.step0);
        s.number("armijo_c", t.armijo_c);
        s.number("step_shrink", t.step_shrink);
        s.number("grad_tol", t.grad_tol);
        s.integer("max_shrinks", t.max_shrinks);
        s.number("l", t.bochner.l);
        s.integer("k_max", t.bochner.k_max);
        s.finish();
    }
    {
        Section s(root, "morozov");
        auto& m = c.morozov;
        s.number("tau1", m.tau1);
        s.number("tau2", m.tau2);
        s.number("tau_tilde", m.tau_tilde);
        s.number("q", m.q);
        s.number("alpha0", m.alpha0);
        s.boolean("scale_alpha0", m.scale_alpha0);
        s.integer("max_steps", m.max_steps);
        s.integer("bracket_iters", m.bracket_iters);
        s.integer("max_bracket_steps", m.max_bracket_steps);
        s.finish();
    }
    {
        Section s(root, "experiment");
        s.numbers("fig1_levels", c.experiment.fig1_levels);
        s.numbers("rate_levels", c.experiment.rate_levels);
        s.number("fig3_noise", c.experiment.fig3_noise);
        s.finish();
    }
    return c;
}

AppConfig load_config(const std::filesystem::path& path, AppConfig base) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), std::move(base));
}

}  // namespace olv
