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
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mimo_estim/experiments.hpp"

namespace {

using namespace mimo_estim;

struct Args {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    bool full = false;
};

void write_table(const CsvTable& table, const std::string& path) {
    if (path.empty()) {
        table.write(std::cout);
        return;
    }
    std::ofstream os(path);
    if (!os)
        throw InvalidInput("cannot open output file " + path);
    table.write(os);
    if (!os)
        throw std::runtime_error("failed writing " + path);
}

int run(const std::string& name, const Args& args) {
    ScenarioConfig config = load_config(args.config);
    if (args.seed)
        config.experiment.seed = *args.seed;
    const RunOptions options{args.full};
    if (name == "nsae")
        write_table(exp_nsae(config, options), args.out);
    else if (name == "nmse-vs-n")
        write_table(exp_nmse_vs_n(config, options), args.out);
    else if (name == "nmse-vs-spread")
        write_table(exp_nmse_vs_spread(config, options), args.out);
    else if (name == "nmse-cdf")
        write_table(exp_nmse_cdf(config, options), args.out);
    else if (name == "nmse-vs-m")
        write_table(exp_nmse_vs_m(config, options), args.out);
    else if (name == "se") {
        const SeTables tables = exp_se(config, options);
        write_table(tables.summary, args.out);
        if (!args.out.empty())
            write_table(tables.detail, args.out + ".detail.csv");
    } else if (name == "complexity")
        write_table(exp_complexity(config, options), args.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Channel estimation experiments for massive MIMO arrays"};
    app.require_subcommand(1);
    Args args;
    for (const std::string& name : experiment_names()) {
        CLI::App* sub = app.add_subcommand(name, "Run the " + name + " experiment");
        sub->add_option("--config", args.config, "TOML scenario file")->required()->check(CLI::ExistingFile);
        sub->add_option("--seed", args.seed, "Override experiment.seed");
        sub->add_option("--out", args.out, "Output CSV path (stdout when omitted)");
        sub->add_flag("--full", args.full, "Lift the desk-scale array size caps");
    }
    CLI11_PARSE(app, argc, argv);

    const std::string name = app.get_subcommands().front()->get_name();
    try {
        return run(name, args);
    } catch (const InvalidInput& err) {
        std::cerr << "mimo-estim: " << err.what() << '\n';
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "mimo-estim: " << err.what() << '\n';
        return 1;
    }
}
