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
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <stdexcept>
#include <string>

#include "mimo_estim/array_geometry.hpp"
#include "mimo_estim/channel_sim.hpp"
#include "mimo_estim/complexity.hpp"
#include "mimo_estim/correlation_models.hpp"
#include "mimo_estim/covariance_learning.hpp"
#include "mimo_estim/estimators.hpp"
#include "mimo_estim/experiments.hpp"
#include "mimo_estim/scenario_config.hpp"

namespace py = pybind11;
using namespace mimo_estim;

namespace {

std::string table_text(const CsvTable& table) {
    std::ostringstream os;
    table.write(os);
    return os.str();
}

std::string run_experiment(const std::string& name, const std::string& toml_text, std::optional<std::uint64_t> seed,
                           bool full) {
    ScenarioConfig config = parse_config(toml_text);
    if (seed)
        config.experiment.seed = *seed;
    const RunOptions options{full};
    py::gil_scoped_release release;
    if (name == "nsae")
        return table_text(exp_nsae(config, options));
    if (name == "nmse-vs-n")
        return table_text(exp_nmse_vs_n(config, options));
    if (name == "nmse-vs-spread")
        return table_text(exp_nmse_vs_spread(config, options));
    if (name == "nmse-cdf")
        return table_text(exp_nmse_cdf(config, options));
    if (name == "nmse-vs-m")
        return table_text(exp_nmse_vs_m(config, options));
    if (name == "se")
        return table_text(exp_se(config, options).summary);
    if (name == "complexity")
        return table_text(exp_complexity(config, options));
    throw InvalidInput("unknown experiment '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Channel estimators and covariance models for massive MIMO arrays";

    py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
    py::register_exception<DegenerateInput>(m, "DegenerateInput", PyExc_ValueError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

    py::class_<ArrayGeometry>(m, "ArrayGeometry")
        .def(py::init<int, int, double, double, double>(), py::arg("n_h"), py::arg("n_v"), py::arg("delta_h"),
             py::arg("delta_v"), py::arg("wavelength"))
        .def_static("with_spacing_in_wavelengths", &ArrayGeometry::with_spacing_in_wavelengths, py::arg("n_h"),
                    py::arg("n_v"), py::arg("delta_h_over_lambda") = 0.25, py::arg("delta_v_over_lambda") = 0.25,
                    py::arg("wavelength") = 0.1)
        .def_property_readonly("n_h", &ArrayGeometry::n_h)
        .def_property_readonly("n_v", &ArrayGeometry::n_v)
        .def_property_readonly("size", &ArrayGeometry::size)
        .def_property_readonly("is_ula", &ArrayGeometry::is_ula);

    py::class_<PilotConfig>(m, "PilotConfig")
        .def(py::init([](int tau_p, double rho_w, double sigma2_w) { return PilotConfig{tau_p, rho_w, sigma2_w}; }),
             py::arg("tau_p"), py::arg("rho_w"), py::arg("sigma2_w"))
        .def_static("from_dbm", &PilotConfig::from_dbm, py::arg("tau_p"), py::arg("rho_dbm"), py::arg("noise_dbm"))
        .def_readwrite("tau_p", &PilotConfig::tau_p)
        .def_readwrite("rho_w", &PilotConfig::rho_w)
        .def_readwrite("sigma2_w", &PilotConfig::sigma2_w)
        .def_property_readonly("gamma", &PilotConfig::gamma);

    m.def(
        "array_response",
        [](const ArrayGeometry& g, double azimuth, double elevation) { return array_response(g, {azimuth, elevation}); },
        py::arg("geometry"), py::arg("azimuth"), py::arg("elevation"));

    m.def(
        "synthesize_correlation",
        [](const ArrayGeometry& g, double mean_azimuth, double mean_elevation, double spread_azimuth,
           double spread_elevation, double gain_beta) {
            ScatteringProfile p;
            p.mean_azimuth = mean_azimuth;
            p.mean_elevation = mean_elevation;
            p.spread_azimuth = spread_azimuth;
            p.spread_elevation = spread_elevation;
            p.gain_beta = gain_beta;
            py::gil_scoped_release release;
            return synthesize_correlation(g, p).entries();
        },
        py::arg("geometry"), py::arg("mean_azimuth"), py::arg("mean_elevation"), py::arg("spread_azimuth"),
        py::arg("spread_elevation"), py::arg("gain_beta") = 1.0, "Local scattering correlation (angles in radians).");

    m.def("iso_correlation", [](const ArrayGeometry& g) { return iso_correlation(g).entries(); }, py::arg("geometry"));

    const auto factors_tuple = [](const KroneckerFactors& f) { return py::make_tuple(f.r_h, f.r_v); };
    m.def(
        "kba_factors", [factors_tuple](const CMatrix& r, int n_h, int n_v) { return factors_tuple(kba_factors(r, n_h, n_v)); },
        py::arg("r"), py::arg("n_h"), py::arg("n_v"), "Returns (r_h, r_v).");
    m.def(
        "nkp_factors", [factors_tuple](const CMatrix& r, int n_h, int n_v) { return factors_tuple(nkp_factors(r, n_h, n_v)); },
        py::arg("r"), py::arg("n_h"), py::arg("n_v"), "Returns (r_h, r_v).");
    m.def(
        "nsae_r",
        [](const CMatrix& r, const CMatrix& r_h, const CMatrix& r_v) {
            return nsae_r(r, KroneckerFactors{r_h, r_v, KroneckerMethod::Kba});
        },
        py::arg("r"), py::arg("r_h"), py::arg("r_v"));
    m.def("kronecker_product", &kronecker_product, py::arg("outer"), py::arg("inner"));

    m.def(
        "estimator_matrix",
        [](const std::string& kind, const CMatrix& r, const ArrayGeometry& g, const PilotConfig& pilot,
           double nominal_azimuth, double nominal_elevation) {
            return build_estimator(parse_estimator_kind(kind), r, g, pilot, {nominal_azimuth, nominal_elevation})
                .materialize();
        },
        py::arg("kind"), py::arg("r"), py::arg("geometry"), py::arg("pilot"), py::arg("nominal_azimuth") = 0.0,
        py::arg("nominal_elevation") = 0.0, "Dense estimator matrix A for mmse, ls, los, iso, kba, nkp, dft or kba-dft.");
    m.def("analytic_nmse", &analytic_nmse, py::arg("a"), py::arg("r"), py::arg("pilot"));

    m.def(
        "estimate_covariance",
        [](const CMatrix& observations, const PilotConfig& pilot, int n_h, int n_v, const std::string& method,
           double eta) {
            CovarianceMethod kind;
            if (method == "sample")
                kind = CovarianceMethod::Sample;
            else if (method == "regularized")
                kind = CovarianceMethod::Regularized;
            else if (method == "structured")
                kind = CovarianceMethod::Structured;
            else
                throw InvalidInput("estimate_covariance: unknown method '" + method + "'");
            const CovarianceEstimate e = estimate_covariance(observations, pilot, n_h, n_v, {kind, eta});
            return py::make_tuple(e.q_hat, e.r_hat);
        },
        py::arg("observations"), py::arg("pilot"), py::arg("n_h"), py::arg("n_v"), py::arg("method") = "sample",
        py::arg("eta") = 1.0, "Returns (q_hat, r_hat).");

    m.def(
        "theoretical_counts",
        [](const std::string& scheme, int n_h, int n_v, int m_obs) {
            const PhaseCounts c = theoretical_counts(parse_estimator_kind(scheme), n_h, n_v, m_obs);
            return py::dict(py::arg("build_q") = c.build_q, py::arg("build_a") = c.build_a, py::arg("apply") = c.apply);
        },
        py::arg("scheme"), py::arg("n_h"), py::arg("n_v"), py::arg("m_obs") = 0);

    m.def("experiment_names", &experiment_names);
    m.def("run_experiment", &run_experiment, py::arg("name"), py::arg("config_toml") = "",
          py::arg("seed") = py::none(), py::arg("full") = false, "Runs a subcommand and returns its CSV text.");
    m.def("default_config_toml", [] { return serialize_config(ScenarioConfig{}); });
}
