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
#include "mimo_estim/scenario_config.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <fstream>
#include <set>
#include <sstream>

#define TOML_EXCEPTIONS 1
#include "toml.hpp"

#include "mimo_estim/csv_writer.hpp"

namespace mimo_estim {

namespace {

class TableReader {
  public:
    TableReader(const toml::table* table, std::string name) : table_(table), name_(std::move(name)) {}

    template <class T>
    void read(const char* key, T& out) {
        known_.insert(key);
        if (!table_)
            return;
        const toml::node* node = table_->get(key);
        if (!node)
            return;
        convert(*node, out, name_ + "." + key);
    }

    void reject_unknown() const {
        if (!table_)
            return;
        for (const auto& [key, value] : *table_)
            if (!known_.count(std::string(key.str())))
                throw InvalidInput("config: unknown key '" + name_ + "." + std::string(key.str()) + "'");
    }

  private:
    static void convert(const toml::node& node, double& out, const std::string& where) {
        if (auto v = node.as_floating_point())
            out = v->get();
        else if (auto i = node.as_integer())
            out = static_cast<double>(i->get());
        else
            throw InvalidInput("config: " + where + " must be a number");
    }
    static void convert(const toml::node& node, int& out, const std::string& where) {
        const auto i = node.as_integer();
        if (!i)
            throw InvalidInput("config: " + where + " must be an integer");
        if (i->get() < std::numeric_limits<int>::min() || i->get() > std::numeric_limits<int>::max())
            throw InvalidInput("config: " + where + " is out of range");
        out = static_cast<int>(i->get());
    }
    static void convert(const toml::node& node, std::uint64_t& out, const std::string& where) {
        // Values above the TOML integer range are written as decimal strings.
        if (const auto s = node.as_string()) {
            const std::string& text = s->get();
            const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
            if (ec != std::errc{} || end != text.data() + text.size() || text.empty())
                throw InvalidInput("config: " + where + " must be a non-negative integer");
            return;
        }
        const auto i = node.as_integer();
        if (!i || i->get() < 0)
            throw InvalidInput("config: " + where + " must be a non-negative integer");
        out = static_cast<std::uint64_t>(i->get());
    }
    static void convert(const toml::node& node, std::string& out, const std::string& where) {
        const auto s = node.as_string();
        if (!s)
            throw InvalidInput("config: " + where + " must be a string");
        out = s->get();
    }
    template <class T>
    static void convert(const toml::node& node, std::vector<T>& out, const std::string& where) {
        const auto a = node.as_array();
        if (!a)
            throw InvalidInput("config: " + where + " must be an array");
        std::vector<T> v;
        for (std::size_t k = 0; k < a->size(); ++k) {
            T item{};
            convert(*a->get(k), item, where + "[" + std::to_string(k) + "]");
            v.push_back(std::move(item));
        }
        out = std::move(v);
    }
    static void convert(const toml::node& node, std::array<int, 2>& out, const std::string& where) {
        std::vector<int> v;
        convert(node, v, where);
        if (v.size() != 2)
            throw InvalidInput("config: " + where + " must be a pair [n_h, n_v]");
        out = {v[0], v[1]};
    }

    const toml::table* table_;
    std::string name_;
    std::set<std::string> known_;
};

const toml::table* section(const toml::table& root, const char* name) {
    const toml::node* node = root.get(name);
    if (!node)
        return nullptr;
    const toml::table* t = node->as_table();
    if (!t)
        throw InvalidInput(std::string("config: [") + name + "] must be a table");
    return t;
}

std::string toml_double(double v) {
    std::string s = format_double(v);
    if (s.find_first_of(".eEn") == std::string::npos)
        s += ".0";
    return s;
}

std::string toml_value(double v) { return toml_double(v); }
std::string toml_value(int v) { return std::to_string(v); }
std::string toml_value(std::uint64_t v) {
    const std::string digits = std::to_string(v);
    return v > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()) ? "\"" + digits + "\"" : digits;
}
std::string toml_value(const std::string& v) {
    std::string out = "\"";
    for (char c : v) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out + "\"";
}
std::string toml_value(const std::array<int, 2>& v) {
    return "[" + std::to_string(v[0]) + ", " + std::to_string(v[1]) + "]";
}
template <class T>
std::string toml_value(const std::vector<T>& v) {
    std::string out = "[";
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k)
            out += ", ";
        out += toml_value(v[k]);
    }
    return out + "]";
}

void positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw InvalidInput(std::string("config: ") + what + " must be positive");
}

}  // namespace

void validate(const ScenarioConfig& c) {
    const GeometryConfig& g = c.geometry;
    if (g.n_h < 1 || g.n_v < 1)
        throw InvalidInput("config: geometry.n_h and geometry.n_v must be positive");
    positive(g.wavelength_m, "geometry.wavelength_m");
    positive(g.carrier_frequency_hz, "geometry.carrier_frequency_hz");
    positive(g.delta_h_wavelengths, "geometry.delta_h_wavelengths");
    positive(g.delta_v_wavelengths, "geometry.delta_v_wavelengths");
    positive(g.bs_height_m, "geometry.bs_height_m");

    const SimulationConfig& s = c.simulation;
    positive(s.d_min_m, "simulation.d_min_m");
    if (s.d_max_m < s.d_min_m)
        throw InvalidInput("config: simulation.d_max_m must be at least d_min_m");
    if (!(s.azimuth_range_deg >= 0.0 && s.azimuth_range_deg <= 90.0))
        throw InvalidInput("config: simulation.azimuth_range_deg must lie in [0, 90]");
    if (s.spread_azimuth_deg < 0.0 || s.spread_elevation_deg < 0.0)
        throw InvalidInput("config: angular spreads must be non-negative");
    if (s.distribution != "gaussian")
        throw InvalidInput("config: simulation.distribution must be \"gaussian\"");
    positive(s.path_loss_ref_distance_m, "simulation.path_loss_ref_distance_m");
    positive(s.bandwidth_hz, "simulation.bandwidth_hz");
    if (s.tau_p < 1 || s.tau_c < s.tau_p)
        throw InvalidInput("config: need 1 <= simulation.tau_p <= simulation.tau_c");

    const ExperimentConfig& e = c.experiment;
    if (e.ue_draws < 1)
        throw InvalidInput("config: experiment.ue_draws must be positive");
    for (const auto& shape : e.nsae_shapes)
        if (shape[0] < 1 || shape[1] < 1)
            throw InvalidInput("config: experiment.nsae_shapes entries must be positive");
    if (e.nmse_vs_n_array != "upa" && e.nmse_vs_n_array != "ula")
        throw InvalidInput("config: experiment.nmse_vs_n_array must be \"upa\" or \"ula\"");
    for (int n : e.n_sweep_upa) {
        const int root = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
        if (n < 1 || root * root != n)
            throw InvalidInput("config: experiment.n_sweep_upa entries must be perfect squares");
    }
    for (int n : e.n_sweep_m) {
        const int root = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
        if (n < 1 || root * root != n)
            throw InvalidInput("config: experiment.n_sweep_m entries must be perfect squares");
    }
    for (int n : e.n_sweep_ula)
        if (n < 1)
            throw InvalidInput("config: experiment.n_sweep_ula entries must be positive");
    if (e.m_observations < 1)
        throw InvalidInput("config: experiment.m_observations must be positive");
    for (int m : e.m_sweep)
        if (m < 1)
            throw InvalidInput("config: experiment.m_sweep entries must be positive");
    for (int m : e.se_m_sweep)
        if (m < 1)
            throw InvalidInput("config: experiment.se_m_sweep entries must be positive");
    for (double eta : e.eta_sweep)
        if (!(eta >= 0.0 && eta <= 1.0))
            throw InvalidInput("config: experiment.eta_sweep entries must lie in [0, 1]");
    if (!(e.eta >= 0.0 && e.eta <= 1.0))
        throw InvalidInput("config: experiment.eta must lie in [0, 1]");
    if (e.k_ues < 1 || e.k_ues > s.tau_p)
        throw InvalidInput("config: experiment.k_ues must lie in [1, tau_p]");
    if (e.se_shape[0] < 1 || e.se_shape[1] < 1)
        throw InvalidInput("config: experiment.se_shape entries must be positive");
    if (e.num_drops < 1 || e.blocks_per_drop < 1)
        throw InvalidInput("config: experiment.num_drops and blocks_per_drop must be positive");
    for (const std::string& comb : e.combiners)
        parse_combiner_kind(comb);
    for (int n : e.complexity_n)
        if (n < 1)
            throw InvalidInput("config: experiment.complexity_n entries must be positive");
}

ScenarioConfig parse_config(const std::string& toml_text, const std::string& source) {
    toml::table root;
    try {
        root = toml::parse(toml_text, source);
    } catch (const toml::parse_error& err) {
        std::ostringstream os;
        os << "config: " << err.description() << " (" << source << ":" << err.source().begin.line << ")";
        throw InvalidInput(os.str());
    }
    for (const auto& [key, value] : root) {
        const std::string k(key.str());
        if (k != "geometry" && k != "simulation" && k != "experiment")
            throw InvalidInput("config: unknown section '" + k + "'");
    }

    ScenarioConfig c;
    {
        GeometryConfig& g = c.geometry;
        TableReader r(section(root, "geometry"), "geometry");
        r.read("n_h", g.n_h);
        r.read("n_v", g.n_v);
        r.read("carrier_frequency_hz", g.carrier_frequency_hz);
        r.read("wavelength_m", g.wavelength_m);
        r.read("delta_h_wavelengths", g.delta_h_wavelengths);
        r.read("delta_v_wavelengths", g.delta_v_wavelengths);
        r.read("bs_height_m", g.bs_height_m);
        r.reject_unknown();
    }
    {
        SimulationConfig& s = c.simulation;
        TableReader r(section(root, "simulation"), "simulation");
        r.read("d_min_m", s.d_min_m);
        r.read("d_max_m", s.d_max_m);
        r.read("azimuth_range_deg", s.azimuth_range_deg);
        r.read("spread_azimuth_deg", s.spread_azimuth_deg);
        r.read("spread_elevation_deg", s.spread_elevation_deg);
        r.read("distribution", s.distribution);
        r.read("path_loss_ref_distance_m", s.path_loss_ref_distance_m);
        r.read("path_loss_ref_db", s.path_loss_ref_db);
        r.read("path_loss_exponent", s.path_loss_exponent);
        r.read("bandwidth_hz", s.bandwidth_hz);
        r.read("rho_dbm", s.rho_dbm);
        r.read("noise_dbm", s.noise_dbm);
        r.read("tau_p", s.tau_p);
        r.read("tau_c", s.tau_c);
        r.reject_unknown();
    }
    {
        ExperimentConfig& e = c.experiment;
        TableReader r(section(root, "experiment"), "experiment");
        r.read("seed", e.seed);
        r.read("ue_draws", e.ue_draws);
        r.read("nsae_shapes", e.nsae_shapes);
        r.read("nsae_mean_elevation_deg", e.nsae_mean_elevation_deg);
        r.read("nsae_mean_azimuth_deg", e.nsae_mean_azimuth_deg);
        r.read("sigma_theta_sweep_deg", e.sigma_theta_sweep_deg);
        r.read("nsae_gamma_db", e.nsae_gamma_db);
        r.read("nmse_vs_n_array", e.nmse_vs_n_array);
        r.read("n_sweep_upa", e.n_sweep_upa);
        r.read("n_sweep_ula", e.n_sweep_ula);
        r.read("spread_sweep_deg", e.spread_sweep_deg);
        r.read("m_observations", e.m_observations);
        r.read("m_sweep", e.m_sweep);
        r.read("eta", e.eta);
        r.read("eta_sweep", e.eta_sweep);
        r.read("n_sweep_m", e.n_sweep_m);
        r.read("k_ues", e.k_ues);
        r.read("se_shape", e.se_shape);
        r.read("num_drops", e.num_drops);
        r.read("blocks_per_drop", e.blocks_per_drop);
        r.read("combiners", e.combiners);
        r.read("se_m_sweep", e.se_m_sweep);
        r.read("rho_sweep_dbm", e.rho_sweep_dbm);
        r.read("complexity_n", e.complexity_n);
        r.read("complexity_measure_limit", e.complexity_measure_limit);
        r.reject_unknown();
    }
    validate(c);
    return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is)
        throw InvalidInput("config: cannot open " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str(), path.string());
}

std::string serialize_config(const ScenarioConfig& c) {
    std::ostringstream os;
    auto kv = [&os](const char* key, const auto& value) { os << key << " = " << toml_value(value) << '\n'; };
    const GeometryConfig& g = c.geometry;
    os << "[geometry]\n";
    kv("n_h", g.n_h);
    kv("n_v", g.n_v);
    kv("carrier_frequency_hz", g.carrier_frequency_hz);
    kv("wavelength_m", g.wavelength_m);
    kv("delta_h_wavelengths", g.delta_h_wavelengths);
    kv("delta_v_wavelengths", g.delta_v_wavelengths);
    kv("bs_height_m", g.bs_height_m);

    const SimulationConfig& s = c.simulation;
    os << "\n[simulation]\n";
    kv("d_min_m", s.d_min_m);
    kv("d_max_m", s.d_max_m);
    kv("azimuth_range_deg", s.azimuth_range_deg);
    kv("spread_azimuth_deg", s.spread_azimuth_deg);
    kv("spread_elevation_deg", s.spread_elevation_deg);
    kv("distribution", s.distribution);
    kv("path_loss_ref_distance_m", s.path_loss_ref_distance_m);
    kv("path_loss_ref_db", s.path_loss_ref_db);
    kv("path_loss_exponent", s.path_loss_exponent);
    kv("bandwidth_hz", s.bandwidth_hz);
    kv("rho_dbm", s.rho_dbm);
    kv("noise_dbm", s.noise_dbm);
    kv("tau_p", s.tau_p);
    kv("tau_c", s.tau_c);

    const ExperimentConfig& e = c.experiment;
    os << "\n[experiment]\n";
    kv("seed", e.seed);
    kv("ue_draws", e.ue_draws);
    kv("nsae_shapes", e.nsae_shapes);
    kv("nsae_mean_elevation_deg", e.nsae_mean_elevation_deg);
    kv("nsae_mean_azimuth_deg", e.nsae_mean_azimuth_deg);
    kv("sigma_theta_sweep_deg", e.sigma_theta_sweep_deg);
    kv("nsae_gamma_db", e.nsae_gamma_db);
    kv("nmse_vs_n_array", e.nmse_vs_n_array);
    kv("n_sweep_upa", e.n_sweep_upa);
    kv("n_sweep_ula", e.n_sweep_ula);
    kv("spread_sweep_deg", e.spread_sweep_deg);
    kv("m_observations", e.m_observations);
    kv("m_sweep", e.m_sweep);
    kv("eta", e.eta);
    kv("eta_sweep", e.eta_sweep);
    kv("n_sweep_m", e.n_sweep_m);
    kv("k_ues", e.k_ues);
    kv("se_shape", e.se_shape);
    kv("num_drops", e.num_drops);
    kv("blocks_per_drop", e.blocks_per_drop);
    kv("combiners", e.combiners);
    kv("se_m_sweep", e.se_m_sweep);
    kv("rho_sweep_dbm", e.rho_sweep_dbm);
    kv("complexity_n", e.complexity_n);
    kv("complexity_measure_limit", e.complexity_measure_limit);
    return os.str();
}

ArrayGeometry make_geometry(const GeometryConfig& g, int n_h, int n_v) {
    return ArrayGeometry::with_spacing_in_wavelengths(n_h, n_v, g.delta_h_wavelengths, g.delta_v_wavelengths,
                                                      g.wavelength_m);
}

ArrayGeometry make_geometry(const GeometryConfig& g) { return make_geometry(g, g.n_h, g.n_v); }

PilotConfig make_pilot(const SimulationConfig& s) { return make_pilot(s, s.rho_dbm); }

PilotConfig make_pilot(const SimulationConfig& s, double rho_dbm) {
    return PilotConfig::from_dbm(s.tau_p, rho_dbm, s.noise_dbm);
}

UePlacement make_placement(const ScenarioConfig& c) {
    UePlacement p;
    p.d_min_m = c.simulation.d_min_m;
    p.d_max_m = c.simulation.d_max_m;
    p.azimuth_range_rad = deg_to_rad(c.simulation.azimuth_range_deg);
    p.bs_height_m = c.geometry.bs_height_m;
    p.spread_azimuth_rad = deg_to_rad(c.simulation.spread_azimuth_deg);
    p.spread_elevation_rad = deg_to_rad(c.simulation.spread_elevation_deg);
    p.path_loss_ref_db = c.simulation.path_loss_ref_db;
    p.path_loss_exponent = c.simulation.path_loss_exponent;
    p.path_loss_ref_distance_m = c.simulation.path_loss_ref_distance_m;
    return p;
}

}  // namespace mimo_estim
