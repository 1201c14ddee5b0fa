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

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mimo_estim/array_geometry.hpp"
#include "mimo_estim/channel_sim.hpp"
#include "mimo_estim/link_level.hpp"

namespace mimo_estim {

struct GeometryConfig {
    int n_h = 16;
    int n_v = 16;
    double carrier_frequency_hz = 3.0e9;
    double wavelength_m = 0.1;
    double delta_h_wavelengths = 0.25;
    double delta_v_wavelengths = 0.25;
    double bs_height_m = 10.0;

    bool operator==(const GeometryConfig&) const = default;
};

struct SimulationConfig {
    double d_min_m = 5.0;
    double d_max_m = 100.0;
    double azimuth_range_deg = 60.0;
    double spread_azimuth_deg = 10.0;
    double spread_elevation_deg = 10.0;
    std::string distribution = "gaussian";
    double path_loss_ref_distance_m = 1000.0;
    double path_loss_ref_db = -148.1;
    double path_loss_exponent = 3.76;
    double bandwidth_hz = 100.0e6;
    double rho_dbm = 20.0;
    double noise_dbm = -87.0;
    int tau_p = 10;
    int tau_c = 200;

    bool operator==(const SimulationConfig&) const = default;
};

struct ExperimentConfig {
    std::uint64_t seed = 1;
    int ue_draws = 100;

    // nsae
    std::vector<std::array<int, 2>> nsae_shapes{{16, 16}, {1, 256}, {4, 64}};  // (n_h, n_v)
    std::vector<double> nsae_mean_elevation_deg{0.0, 60.0};
    double nsae_mean_azimuth_deg = 0.0;
    std::vector<double> sigma_theta_sweep_deg{0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0};
    double nsae_gamma_db = 10.0;

    // nmse-vs-n
    std::string nmse_vs_n_array = "upa";  // "upa" (square) or "ula" (horizontal)
    std::vector<int> n_sweep_upa{16, 64, 256, 1024};
    std::vector<int> n_sweep_ula{16, 32, 64, 128, 256};

    // nmse-vs-spread
    std::vector<double> spread_sweep_deg{10.0, 20.0, 30.0, 40.0};

    // covariance learning (nmse-cdf, nmse-vs-m, se)
    int m_observations = 50;
    std::vector<int> m_sweep{5, 10, 20, 50, 100};
    double eta = 0.8;
    std::vector<double> eta_sweep{1.0, 0.8, 0.0};
    std::vector<int> n_sweep_m{16, 64, 256};

    // se
    int k_ues = 10;
    std::array<int, 2> se_shape{8, 8};  // (n_h, n_v)
    int num_drops = 100;
    int blocks_per_drop = 200;
    std::vector<std::string> combiners{"rzf", "mr"};
    std::vector<int> se_m_sweep{10, 20, 50, 100};
    std::vector<double> rho_sweep_dbm{0.0, 5.0, 10.0, 15.0, 20.0, 25.0};

    // complexity
    std::vector<int> complexity_n{4096, 256};
    int complexity_measure_limit = 1024;

    bool operator==(const ExperimentConfig&) const = default;
};

/// Everything a subcommand needs; defaults are the reference scenario.
struct ScenarioConfig {
    GeometryConfig geometry;
    SimulationConfig simulation;
    ExperimentConfig experiment;

    bool operator==(const ScenarioConfig&) const = default;
};

void validate(const ScenarioConfig& config);

/// Parses TOML text with [geometry], [simulation] and [experiment] tables.
/// Missing keys keep their defaults; unknown keys are rejected.
ScenarioConfig parse_config(const std::string& toml_text, const std::string& source = "<string>");
ScenarioConfig load_config(const std::filesystem::path& path);

/// TOML text that parses back to `config`.
std::string serialize_config(const ScenarioConfig& config);

ArrayGeometry make_geometry(const GeometryConfig& g, int n_h, int n_v);
ArrayGeometry make_geometry(const GeometryConfig& g);
PilotConfig make_pilot(const SimulationConfig& s);
PilotConfig make_pilot(const SimulationConfig& s, double rho_dbm);
UePlacement make_placement(const ScenarioConfig& c);

}  // namespace mimo_estim
