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
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mimo_estim/csv_writer.hpp"
#include "mimo_estim/estimators.hpp"
#include "mimo_estim/link_level.hpp"
#include "mimo_estim/scenario_config.hpp"

namespace mimo_estim {

struct RunOptions {
    bool full = false;  // lift the desk-scale caps on array size
};

/// Largest N run without --full.
inline constexpr int kDeskCapUpa = 256;
inline constexpr int kDeskCapUla = 128;

/// One array size (and optionally an elevation-spread override) of an NMSE sweep.
struct NmsePoint {
    int n_h = 16;
    int n_v = 16;
    std::optional<double> spread_elevation_rad;
};

/// Analytic NMSE per [point][estimator][draw]. Draw d places the UE with the
/// same placement stream at every point, so points are paired.
using NmseCube = std::vector<std::vector<std::vector<double>>>;

NmseCube nmse_sweep(const ScenarioConfig& config, const std::vector<NmsePoint>& points,
                    const std::vector<EstimatorKind>& estimators, int draws);

/// Observation-based NMSE per [m index][policy][draw] at one array shape.
/// Observations for draw d are nested: the first M columns are shared by all
/// M values. Perfect-covariance policies repeat the same value for every M.
NmseCube learned_nmse_sweep(const ScenarioConfig& config, int n_h, int n_v, const std::vector<int>& m_values,
                            const std::vector<EstimatorPolicy>& policies, int draws);

/// Mean and standard error of the mean.
struct SampleStats {
    double mean = 0.0;
    double std_error = 0.0;
};

SampleStats sample_stats(const std::vector<double>& values);

/// Statistics of the per-draw difference a - b.
SampleStats paired_stats(const std::vector<double>& a, const std::vector<double>& b);

/// Uplink scenario for the se subcommand at one M and transmit power.
UplinkScenario make_uplink_scenario(const ScenarioConfig& config, int m_observations, double rho_dbm,
                                    const std::vector<EstimatorPolicy>& policies);

/// Policies compared by the se subcommand.
std::vector<EstimatorPolicy> se_policies(double eta);

CsvTable exp_nsae(const ScenarioConfig& config, const RunOptions& options = {});
CsvTable exp_nmse_vs_n(const ScenarioConfig& config, const RunOptions& options = {});
CsvTable exp_nmse_vs_spread(const ScenarioConfig& config, const RunOptions& options = {});
CsvTable exp_nmse_cdf(const ScenarioConfig& config, const RunOptions& options = {});
CsvTable exp_nmse_vs_m(const ScenarioConfig& config, const RunOptions& options = {});

struct SeTables {
    CsvTable summary;
    CsvTable detail;  // per drop and UE
};

SeTables exp_se(const ScenarioConfig& config, const RunOptions& options = {});
CsvTable exp_complexity(const ScenarioConfig& config, const RunOptions& options = {});

/// Subcommand names in CLI order.
const std::vector<std::string>& experiment_names();

}  // namespace mimo_estim
