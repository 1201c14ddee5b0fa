// SPDX-License-Identifier: Apache-2.0
//
// mimo-estim: reduced-complexity MMSE channel estimation for large-scale MIMO
// Copyright (C) 2026 The mimo-estim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <sstream>
#include <string>

#include "mimo_estim/experiments.hpp"
#include "mimo_estim/scenario_config.hpp"

using namespace mimo_estim;

namespace {

ScenarioConfig small_config() {
    return parse_config(R"(
[geometry]
n_h = 4
n_v = 4
[experiment]
ue_draws = 5
nsae_shapes = [[4, 4], [2, 8]]
sigma_theta_sweep_deg = [0.0, 10.0]
n_sweep_upa = [16, 64]
spread_sweep_deg = [10.0, 30.0]
m_sweep = [5, 20]
eta_sweep = [1.0, 0.0]
n_sweep_m = [16]
k_ues = 3
se_shape = [4, 4]
num_drops = 3
blocks_per_drop = 20
se_m_sweep = [10]
rho_sweep_dbm = [10.0]
complexity_n = [64]
)");
}

std::size_t column(const CsvTable& t, const std::string& name) {
    for (std::size_t i = 0; i < t.header().size(); ++i)
        if (t.header()[i] == name)
            return i;
    FAIL("no column " << name);
    return 0;
}

double num(const std::string& s) { return std::stod(s); }

std::string written(const CsvTable& t) {
    std::ostringstream os;
    t.write(os);
    return os.str();
}

}  // namespace

TEST_CASE("default config file matches built-in defaults") {
    const ScenarioConfig loaded = load_config(MIMO_ESTIM_DEFAULT_CONFIG);
    CHECK(loaded == ScenarioConfig{});
    CHECK_NOTHROW(validate(loaded));
}

TEST_CASE("config serialization round trip") {
    ScenarioConfig c = small_config();
    c.simulation.spread_azimuth_deg = 12.345678901234567;
    c.experiment.seed = 18446744073709551615ull;
    c.experiment.combiners = {"mr"};
    CHECK(parse_config(serialize_config(c)) == c);
    CHECK(parse_config(serialize_config(ScenarioConfig{})) == ScenarioConfig{});
    CHECK(parse_config("") == ScenarioConfig{});
}

TEST_CASE("config rejects unknown keys, wrong types and invalid values") {
    CHECK_THROWS_AS(parse_config("[geometry]\nnh = 4\n"), InvalidInput);
    CHECK_THROWS_AS(parse_config("[geometry]\nn_h = \"4\"\n"), InvalidInput);
    CHECK_THROWS_AS(parse_config("[geometry]\nn_h = 4.5\n"), InvalidInput);
    CHECK_THROWS_AS(parse_config("[extra]\na = 1\n"), InvalidInput);
    CHECK_THROWS_AS(parse_config("geometry = 3\n"), InvalidInput);
    CHECK_THROWS_AS(parse_config("[geometry\n"), InvalidInput);
    CHECK_THROWS_AS(parse_config("[geometry]\nn_h = 0\n"), InvalidInput);
    CHECK_THROWS_AS(parse_config("[simulation]\nd_min_m = 50.0\nd_max_m = 10.0\n"), InvalidInput);
    CHECK_THROWS_AS(parse_config("[simulation]\ndistribution = \"laplace\"\n"), InvalidInput);
    CHECK_THROWS_AS(parse_config("[experiment]\nn_sweep_upa = [15]\n"), InvalidInput);
    CHECK_THROWS_AS(parse_config("[experiment]\neta = 1.5\n"), InvalidInput);
    CHECK_THROWS_AS(parse_config("[experiment]\nk_ues = 11\n"), InvalidInput);
    CHECK_THROWS_AS(parse_config("[experiment]\nse_shape = [4]\n"), InvalidInput);
    CHECK_THROWS_AS(parse_config("[geometry]\nn_h = 4294967297\n"), InvalidInput);
    CHECK_THROWS_AS(parse_config("[experiment]\nseed = \"12x\"\n"), InvalidInput);
    CHECK(parse_config("[experiment]\nseed = \"7\"\n").experiment.seed == 7);
    CHECK_THROWS_AS(load_config("/nonexistent/config.toml"), InvalidInput);
}

TEST_CASE("CSV helpers") {
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(csv_escape("two\nlines") == "\"two\nlines\"");
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0, 123456789.123})
        CHECK(std::stod(format_double(v)) == v);
    CHECK(format_double(0.5) == "0.5");

    CsvTable t("test/v1", {"k", "v"});
    t.add_row({"10", "x,y"});
    t.add_row({"9", "z"});
    t.sort_rows(1);
    CHECK(t.rows()[0][0] == "9");
    CHECK(written(t) == "# schema=test/v1\nk,v\n9,z\n10,\"x,y\"\n");
    CHECK_THROWS_AS(t.add_row({"1"}), std::invalid_argument);
}

TEST_CASE("every experiment runs on a small config with its schema line") {
    const ScenarioConfig c = small_config();
    CHECK(experiment_names().size() == 7);
    CHECK(written(exp_nsae(c)).rfind("# schema=mimo-estim/nsae/v1\n", 0) == 0);
    CHECK(written(exp_nmse_vs_n(c)).rfind("# schema=mimo-estim/nmse-vs-n/v1\n", 0) == 0);
    CHECK(written(exp_nmse_vs_spread(c)).rfind("# schema=mimo-estim/nmse-vs-spread/v1\n", 0) == 0);
    CHECK(written(exp_nmse_cdf(c)).rfind("# schema=mimo-estim/nmse-cdf/v1\n", 0) == 0);
    CHECK(written(exp_nmse_vs_m(c)).rfind("# schema=mimo-estim/nmse-vs-m/v1\n", 0) == 0);
    const SeTables se = exp_se(c);
    CHECK(written(se.summary).rfind("# schema=mimo-estim/se/v1\n", 0) == 0);
    CHECK(written(se.detail).rfind("# schema=mimo-estim/se-detail/v1\n", 0) == 0);
    CHECK(written(exp_complexity(c)).rfind("# schema=mimo-estim/complexity/v1\n", 0) == 0);
}

TEST_CASE("nsae table") {
    const CsvTable t = exp_nsae(small_config());
    // 2 shapes x 2 elevations x 2 spreads x 3 methods.
    CHECK(t.rows().size() == 24);
    const std::size_t method = column(t, "method");
    const std::size_t sigma = column(t, "sigma_theta_deg");
    const std::size_t r = column(t, "nsae_r");
    const std::size_t a = column(t, "nsae_a");
    for (std::size_t i = 0; i < t.rows().size(); i += 3) {
        const auto& kba = t.rows()[i];
        const auto& nkp = t.rows()[i + 1];
        REQUIRE(kba[method] == "kba");
        REQUIRE(nkp[method] == "nkp");
        CHECK(t.rows()[i + 2][method] == "kba-dft");
        CHECK(num(nkp[r]) <= num(kba[r]) + 1e-12);
        if (num(kba[sigma]) == 0.0) {
            CHECK(num(kba[r]) <= 1e-8);
            CHECK(num(kba[a]) <= 1e-8);
        }
    }
}

TEST_CASE("NMSE sweeps respect MMSE optimality") {
    const ScenarioConfig c = small_config();
    for (const CsvTable& t : {exp_nmse_vs_n(c), exp_nmse_vs_spread(c)}) {
        const std::size_t est = column(t, "estimator");
        const std::size_t mean = column(t, "nmse_mean");
        double mmse = 0.0;
        for (const auto& row : t.rows()) {
            if (row[est] == "mmse") {
                mmse = num(row[mean]);
                CHECK(mmse > 0.0);
                CHECK(mmse < 1.0);
            } else {
                CHECK(num(row[mean]) >= mmse - 1e-12);
            }
        }
    }
    const CsvTable n = exp_nmse_vs_n(c);
    const std::size_t gap = column(n, "gap_vs_mmse");
    for (const auto& row : n.rows())
        CHECK(num(row[gap]) >= -1e-12);
}

TEST_CASE("nmse-cdf rows coincide at eta = 0") {
    const CsvTable t = exp_nmse_cdf(small_config());
    const std::size_t policy = column(t, "policy");
    const std::size_t draw = column(t, "draw");
    const std::size_t nmse = column(t, "nmse");
    std::map<std::string, std::map<std::string, std::string>> by_policy;
    for (const auto& row : t.rows())
        by_policy[row[policy]][row[draw]] = row[nmse];
    REQUIRE(by_policy.count("mmse/sample(eta=0)"));
    REQUIRE(by_policy.count("mmse/structured(eta=0)"));
    CHECK(by_policy["mmse/sample(eta=0)"] == by_policy["mmse/structured(eta=0)"]);
    CHECK(by_policy["mmse/perfect"].size() == 5);
    CHECK(by_policy.size() == 6);
    for (const auto& [d, v] : by_policy["mmse/perfect"])
        for (const auto& [label, values] : by_policy)
            CHECK(num(values.at(d)) >= num(v) - 1e-12);
}

TEST_CASE("nmse-vs-m and complexity tables") {
    const ScenarioConfig c = small_config();
    const CsvTable m = exp_nmse_vs_m(c);
    CHECK(m.rows().size() == 2 * 3);
    const CsvTable cx = exp_complexity(c);
    CHECK(cx.rows().size() == (7 * 2 + 2) * 3);
    const std::size_t measured = column(cx, "measured_multiplies");
    const std::size_t phase = column(cx, "phase");
    for (const auto& row : cx.rows())
        if (row[phase] == "apply")
            CHECK_FALSE(row[measured].empty());
}

TEST_CASE("se table") {
    const SeTables se = exp_se(small_config());
    const std::size_t sum = column(se.summary, "sum_se_mean");
    for (const auto& row : se.summary.rows())
        CHECK(num(row[sum]) > 0.0);
    // m sweep: 2 combiners, rho sweep: rzf only.
    const std::size_t policies = se_policies(0.8).size();
    CHECK(se.summary.rows().size() == 3 * policies);
    CHECK(se.detail.rows().size() == 3 * policies * 3 * 3);
}

TEST_CASE("desk caps reject large arrays unless full") {
    ScenarioConfig c = small_config();
    c.geometry.n_h = 32;
    c.geometry.n_v = 16;
    CHECK_THROWS_AS(exp_nmse_cdf(c), InvalidInput);
    CHECK_THROWS_AS(exp_nmse_vs_spread(c), InvalidInput);
    c.experiment.se_shape = {32, 16};
    CHECK_THROWS_AS(exp_se(c), InvalidInput);
}

TEST_CASE("experiments are deterministic under a fixed seed") {
    ScenarioConfig c = small_config();
    const std::string first = written(exp_nmse_cdf(c)) + written(exp_se(c).summary);
    CHECK(first == written(exp_nmse_cdf(c)) + written(exp_se(c).summary));
    setenv("MIMO_ESTIM_THREADS", "2", 1);
    CHECK(first == written(exp_nmse_cdf(c)) + written(exp_se(c).summary));
    unsetenv("MIMO_ESTIM_THREADS");
    c.experiment.seed = 99;
    CHECK(first != written(exp_nmse_cdf(c)) + written(exp_se(c).summary));
}
