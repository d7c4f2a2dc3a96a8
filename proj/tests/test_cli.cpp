// SPDX-License-Identifier: Apache-2.0
#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "olv/data_io.hpp"
#include "olv/dupire.hpp"

using namespace olv;
namespace fs = std::filesystem;

namespace {

const fs::path kDir = fs::temp_directory_path() / "olv_test_cli";

struct Run {
    int code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Run run(const std::string& args) {
    fs::create_directories(kDir);
    const fs::path o = kDir / "stdout.txt", e = kDir / "stderr.txt";
    const std::string cmd = std::string(OLV_CLI_PATH) + " " + args + " >" + o.string() + " 2>" + e.string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(o), slurp(e)};
}

fs::path write_config(const std::string& name, const std::string& text) {
    fs::create_directories(kDir);
    const fs::path p = kDir / name;
    std::ofstream(p) << text;
    return p;
}

// Small grids so each calibration finishes in well under a second.
const std::string kSmall = R"({
  "synthetic": {"Y": 2, "fine_dtau": 0.01, "fine_dy": 0.05, "coarse_dtau": 0.05, "coarse_dy": 0.2,
                "s_min": 29.5, "s_max": 30.5, "ds": 0.5},
  "tikhonov": {"max_iters": 30}
})";

}  // namespace

TEST_CASE("price with the closed-form oracle") {
    const fs::path out = kDir / "price.json";
    const Run r = run("price --sigma 0.3 --oracle --out " + out.string());
    REQUIRE(r.code == 0);
    CHECK_THAT(r.out, Catch::Matchers::ContainsSubstring("oracle:"));
    const Surface u = load_surface(out);
    const OracleError e = bs_oracle_error(u, 0.3, MarketParams{0.03, 30.0});
    CHECK(e.relative <= 0.005);
    SECTION("maturity zero row is the payoff") {
        const Surface payoff = make_payoff(u.grid_ptr(), 30.0);
        for (std::size_t j = 0; j < u.grid().n_y(); ++j) CHECK(u(0, j) == payoff(0, j));
    }
}

TEST_CASE("calibrate synthetic data") {
    const fs::path cfg = write_config("small.json", kSmall);
    SECTION("standard mode writes one slice") {
        const fs::path out = kDir / "standard.json";
        const Run r = run("calibrate --mode standard --slice 1 --config " + cfg.string() + " --out " + out.string());
        REQUIRE(r.code == 0);
        const LoadedResult res = load_results(out);
        CHECK(res.result.family.size() == 1);
        CHECK(res.result.family.axis().s_min() == 30.0);
        CHECK(res.meta.mode == "standard");
    }
    SECTION("fixed alpha is echoed") {
        const fs::path out = kDir / "fixed.json";
        const Run r = run("calibrate --alpha 0.25 --config " + cfg.string() + " --out " + out.string());
        REQUIRE(r.code == 0);
        const LoadedResult res = load_results(out);
        CHECK(res.result.alpha == 0.25);
        CHECK(res.meta.rule_used == "fixed");
        CHECK(res.result.family.size() == 3);
    }
    SECTION("morozov selection") {
        const fs::path out = kDir / "morozov.json";
        const Run r = run("calibrate --alpha morozov --config " + cfg.string() + " --out " + out.string());
        REQUIRE(r.code == 0);
        const LoadedResult res = load_results(out);
        CHECK((res.meta.rule_used == "relaxed" || res.meta.rule_used == "sequential"));
    }
}

TEST_CASE("configuration and input errors exit with 2") {
    SECTION("malformed config names the field and writes nothing") {
        const fs::path cfg = write_config("bad.json", R"({"tikhonov": {"max_iters": "many"}})");
        const fs::path out = kDir / "never.json";
        fs::remove(out);
        const Run r = run("calibrate --config " + cfg.string() + " --out " + out.string());
        CHECK(r.code == 2);
        CHECK_THAT(r.err, Catch::Matchers::ContainsSubstring("tikhonov.max_iters"));
        CHECK_FALSE(fs::exists(out));
    }
    SECTION("unknown config key") {
        const fs::path cfg = write_config("unknown.json", R"({"morozov": {"tau3": 2}})");
        const Run r = run("calibrate --config " + cfg.string() + " --out " + (kDir / "x.json").string());
        CHECK(r.code == 2);
        CHECK_THAT(r.err, Catch::Matchers::ContainsSubstring("morozov.tau3"));
    }
    SECTION("negative sigma") {
        CHECK(run("price --sigma -1 --out " + (kDir / "p.json").string()).code == 2);
    }
    SECTION("missing output directory") {
        CHECK(run("price --out " + (kDir / "no_such_dir" / "p.json").string()).code == 2);
    }
    SECTION("unknown subcommand and missing --out") {
        CHECK(run("bogus").code == 2);
        CHECK(run("price").code == 2);
    }
    SECTION("bad alpha") {
        CHECK(run("calibrate --alpha abc --out " + (kDir / "x.json").string()).code == 2);
    }
    SECTION("missing quote file") {
        CHECK(run("calibrate --data " + (kDir / "none.csv").string() + " --out " + (kDir / "x.json").string()).code ==
              2);
    }
}

TEST_CASE("failed parameter selection exits with 4") {
    std::string text = kSmall;
    text.insert(text.rfind('}'), R"(, "morozov": {"alpha0": 1e6, "max_bracket_steps": 0, "max_steps": 1})");
    const fs::path cfg = write_config("nosel.json", text);
    const fs::path out = kDir / "nosel.json.out";
    fs::remove(out);
    const Run r = run("calibrate --alpha morozov --config " + cfg.string() + " --out " + out.string());
    CHECK(r.code == 4);
    CHECK_THAT(r.err, Catch::Matchers::ContainsSubstring("residual trace"));
    CHECK_FALSE(fs::exists(out));
}

TEST_CASE("help exits cleanly") {
    CHECK(run("--help").code == 0);
}
