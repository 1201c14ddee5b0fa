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
#include "mimo_estim/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "mimo_estim/complexity.hpp"
#include "mimo_estim/covariance_learning.hpp"
#include "mimo_estim/parallel.hpp"

namespace mimo_estim {

namespace {

std::string fmt(double v) { return format_double(v); }
std::string fmt(int v) { return std::to_string(v); }
std::string fmt(std::size_t v) { return std::to_string(v); }

std::string shape_label(int n_h, int n_v) { return std::to_string(n_h) + "x" + std::to_string(n_v); }

int square_side(int n) {
    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    if (side * side != n)
        throw InvalidInput("square UPA needs a perfect-square N, got " + std::to_string(n));
    return side;
}

std::vector<int> capped(const std::vector<int>& values, int cap, bool full) {
    std::vector<int> out;
    for (int v : values)
        if (full || v <= cap)
            out.push_back(v);
    return out;
}

CMatrix policy_correlation(const EstimatorPolicy& policy, const CMatrix& r_true, const CMatrix& observations,
                           const PilotConfig& pilot, int n_h, int n_v) {
    if (policy.covariance == CovariancePolicy::Perfect)
        return r_true;
    const CovarianceMethodSpec spec{policy.covariance == CovariancePolicy::Structured ? CovarianceMethod::Structured
                                                                                       : CovarianceMethod::Regularized,
                                    policy.eta};
    return estimate_covariance(observations, pilot, n_h, n_v, spec).r_hat;
}

std::vector<EstimatorKind> upa_estimators() {
    return {EstimatorKind::Mmse, EstimatorKind::Ls,  EstimatorKind::Los,   EstimatorKind::Iso,
            EstimatorKind::Kba,  EstimatorKind::Nkp, EstimatorKind::KbaDft};
}

std::vector<EstimatorKind> ula_estimators() {
    return {EstimatorKind::Mmse, EstimatorKind::Ls, EstimatorKind::Los, EstimatorKind::Iso, EstimatorKind::Dft};
}

}  // namespace

SampleStats sample_stats(const std::vector<double>& values) {
    SampleStats s;
    const std::size_t n = values.size();
    if (n == 0)
        return s;
    for (double v : values)
        s.mean += v;
    s.mean /= static_cast<double>(n);
    if (n > 1) {
        double ss = 0.0;
        for (double v : values)
            ss += (v - s.mean) * (v - s.mean);
        s.std_error = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
    }
    return s;
}

SampleStats paired_stats(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw InvalidInput("paired_stats: samples differ in length");
    std::vector<double> d(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        d[i] = a[i] - b[i];
    return sample_stats(d);
}

NmseCube nmse_sweep(const ScenarioConfig& config, const std::vector<NmsePoint>& points,
                    const std::vector<EstimatorKind>& estimators, int draws) {
    if (draws < 1)
        throw InvalidInput("nmse_sweep: need at least one draw");
    const PilotConfig pilot = make_pilot(config.simulation);
    const UePlacement placement = make_placement(config);
    const std::uint64_t seed = config.experiment.seed;

    std::vector<ArrayGeometry> geometries;
    std::vector<std::vector<std::optional<CMatrix>>> fixed(points.size());
    for (std::size_t p = 0; p < points.size(); ++p) {
        geometries.push_back(make_geometry(config.geometry, points[p].n_h, points[p].n_v));
        for (EstimatorKind kind : estimators) {
            if (kind == EstimatorKind::Dft && !geometries.back().is_ula())
                throw InvalidInput("nmse_sweep: the DFT estimator needs a ULA");
            std::optional<CMatrix> a;
            if (kind == EstimatorKind::Iso)
                a = build_iso(geometries.back(), pilot).materialize();
            else if (kind == EstimatorKind::Ls)
                a = build_ls(geometries.back().size(), pilot).materialize();
            fixed[p].push_back(std::move(a));
        }
    }

    NmseCube cube(points.size(), std::vector<std::vector<double>>(estimators.size(),
                                                                  std::vector<double>(static_cast<std::size_t>(draws))));
    const std::size_t n_draws = static_cast<std::size_t>(draws);
    parallel_for(points.size() * n_draws, [&](std::size_t job) {
        const std::size_t p = job / n_draws;
        const std::size_t d = job % n_draws;
        RngStream rng(seed, StreamPurpose::Placement, {d});
        UeDrop ue = draw_ue(placement, rng);
        if (points[p].spread_elevation_rad)
            ue.profile.spread_elevation = *points[p].spread_elevation_rad;
        const CMatrix r = synthesize_correlation(geometries[p], ue.profile).entries();
        const AnglePair nominal{ue.profile.mean_azimuth, ue.profile.mean_elevation};
        for (std::size_t e = 0; e < estimators.size(); ++e) {
            const CMatrix a = fixed[p][e] ? *fixed[p][e]
                                          : build_estimator(estimators[e], r, geometries[p], pilot, nominal).materialize();
            cube[p][e][d] = analytic_nmse(a, r, pilot);
        }
    });
    return cube;
}

NmseCube learned_nmse_sweep(const ScenarioConfig& config, int n_h, int n_v, const std::vector<int>& m_values,
                            const std::vector<EstimatorPolicy>& policies, int draws) {
    if (draws < 1 || m_values.empty())
        throw InvalidInput("learned_nmse_sweep: need draws and at least one M");
    for (int m : m_values)
        if (m < 1)
            throw InvalidInput("learned_nmse_sweep: M must be positive");
    const PilotConfig pilot = make_pilot(config.simulation);
    const UePlacement placement = make_placement(config);
    const ArrayGeometry geometry = make_geometry(config.geometry, n_h, n_v);
    const std::uint64_t seed = config.experiment.seed;
    const int m_max = *std::max_element(m_values.begin(), m_values.end());

    NmseCube cube(m_values.size(), std::vector<std::vector<double>>(policies.size(),
                                                                    std::vector<double>(static_cast<std::size_t>(draws))));
    parallel_for(static_cast<std::size_t>(draws), [&](std::size_t d) {
        RngStream placement_rng(seed, StreamPurpose::Placement, {d});
        const UeDrop ue = draw_ue(placement, placement_rng);
        const CMatrix r = synthesize_correlation(geometry, ue.profile).entries();
        const ChannelSampler sampler = channel_factor(r);
        const AnglePair nominal{ue.profile.mean_azimuth, ue.profile.mean_elevation};

        RngStream obs(seed, StreamPurpose::Observation, {d});
        CMatrix y(geometry.size(), m_max);
        for (int m = 0; m < m_max; ++m)
            y.col(m) = observe_pilot(sample_channel(sampler, obs), pilot, obs);

        std::vector<std::optional<double>> perfect(policies.size());
        for (std::size_t mi = 0; mi < m_values.size(); ++mi) {
            const CMatrix y_m = y.leftCols(m_values[mi]);
            for (std::size_t p = 0; p < policies.size(); ++p) {
                const EstimatorPolicy& pol = policies[p];
                if (pol.covariance == CovariancePolicy::Perfect && perfect[p]) {
                    cube[mi][p][d] = *perfect[p];
                    continue;
                }
                const CMatrix r_used = policy_correlation(pol, r, y_m, pilot, n_h, n_v);
                const CMatrix a = build_estimator(pol.estimator, r_used, geometry, pilot, nominal).materialize();
                const double value = analytic_nmse(a, r, pilot);
                if (pol.covariance == CovariancePolicy::Perfect)
                    perfect[p] = value;
                cube[mi][p][d] = value;
            }
        }
    });
    return cube;
}

std::vector<EstimatorPolicy> se_policies(double eta) {
    return {
        {EstimatorKind::Mmse, CovariancePolicy::Perfect, 1.0},
        {EstimatorKind::Kba, CovariancePolicy::Structured, 1.0},
        {EstimatorKind::Mmse, CovariancePolicy::Sample, eta},
        {EstimatorKind::Ls, CovariancePolicy::Perfect, 1.0},
    };
}

UplinkScenario make_uplink_scenario(const ScenarioConfig& config, int m_observations, double rho_dbm,
                                    const std::vector<EstimatorPolicy>& policies) {
    const ExperimentConfig& e = config.experiment;
    UplinkScenario s;
    s.geometry = make_geometry(config.geometry, e.se_shape[0], e.se_shape[1]);
    s.k_ues = e.k_ues;
    s.tau_c = config.simulation.tau_c;
    s.pilot = make_pilot(config.simulation, rho_dbm);
    s.placement = make_placement(config);
    s.combiners.clear();
    for (const std::string& c : e.combiners)
        s.combiners.push_back(parse_combiner_kind(c));
    s.policies = policies;
    s.m_observations = m_observations;
    s.num_drops = e.num_drops;
    s.blocks_per_drop = e.blocks_per_drop;
    s.seed = e.seed;
    return s;
}

CsvTable exp_nsae(const ScenarioConfig& config, const RunOptions& options) {
    const ExperimentConfig& e = config.experiment;
    PilotConfig pilot;
    pilot.tau_p = 1;
    pilot.rho_w = 1.0;
    pilot.sigma2_w = db_to_linear(-e.nsae_gamma_db);

    struct Job {
        std::array<int, 2> shape;
        double elevation_deg;
        double sigma_deg;
    };
    std::vector<Job> jobs;
    for (const auto& shape : e.nsae_shapes) {
        if (!options.full && shape[0] * shape[1] > kDeskCapUpa)
            continue;
        for (double el : e.nsae_mean_elevation_deg)
            for (double sigma : e.sigma_theta_sweep_deg)
                jobs.push_back({shape, el, sigma});
    }

    const KroneckerMethod methods[] = {KroneckerMethod::Kba, KroneckerMethod::Nkp, KroneckerMethod::KbaDft};
    std::vector<std::vector<std::vector<std::string>>> rows(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t j) {
        const Job& job = jobs[j];
        const int n_h = job.shape[0];
        const int n_v = job.shape[1];
        const ArrayGeometry geometry = make_geometry(config.geometry, n_h, n_v);
        ScatteringProfile profile;
        profile.mean_azimuth = deg_to_rad(e.nsae_mean_azimuth_deg);
        profile.mean_elevation = deg_to_rad(job.elevation_deg);
        profile.spread_azimuth = deg_to_rad(config.simulation.spread_azimuth_deg);
        profile.spread_elevation = deg_to_rad(job.sigma_deg);
        profile.gain_beta = 1.0;
        const CMatrix r = synthesize_correlation(geometry, profile).entries();
        const CMatrix a_ref = build_mmse(r, pilot).materialize();
        for (KroneckerMethod method : methods) {
            const KroneckerFactors f = method == KroneckerMethod::Kba   ? kba_factors(r, n_h, n_v)
                                       : method == KroneckerMethod::Nkp ? nkp_factors(r, n_h, n_v)
                                                                        : kba_dft_factors(r, n_h, n_v);
            const CMatrix a = build_kba(f, pilot).materialize();
            rows[j].push_back({shape_label(n_h, n_v), fmt(n_h), fmt(n_v), fmt(job.elevation_deg), fmt(job.sigma_deg),
                               to_string(method), fmt(nsae_r(r, f)), fmt(nsae_a(a_ref, a))});
        }
    });

    CsvTable table("mimo-estim/nsae/v1", {"shape", "n_h", "n_v", "mean_elevation_deg", "sigma_theta_deg", "method",
                                          "nsae_r", "nsae_a"});
    for (auto& group : rows)
        for (auto& row : group)
            table.add_row(std::move(row));
    return table;
}

CsvTable exp_nmse_vs_n(const ScenarioConfig& config, const RunOptions& options) {
    const ExperimentConfig& e = config.experiment;
    const bool ula = e.nmse_vs_n_array == "ula";
    std::vector<NmsePoint> points;
    const std::vector<int> ns = ula ? capped(e.n_sweep_ula, kDeskCapUla, options.full)
                                    : capped(e.n_sweep_upa, kDeskCapUpa, options.full);
    for (int n : ns) {
        if (ula) {
            points.push_back({n, 1, std::nullopt});
        } else {
            const int side = square_side(n);
            points.push_back({side, side, std::nullopt});
        }
    }
    const std::vector<EstimatorKind> estimators = ula ? ula_estimators() : upa_estimators();
    const NmseCube cube = nmse_sweep(config, points, estimators, e.ue_draws);

    CsvTable table("mimo-estim/nmse-vs-n/v1", {"array", "N", "n_h", "n_v", "estimator", "nmse_mean", "nmse_stderr",
                                               "gap_vs_mmse", "gap_stderr", "draws"});
    for (std::size_t p = 0; p < points.size(); ++p) {
        for (std::size_t k = 0; k < estimators.size(); ++k) {
            const SampleStats s = sample_stats(cube[p][k]);
            const SampleStats gap = paired_stats(cube[p][k], cube[p][0]);
            table.add_row({ula ? "ula" : "upa", fmt(points[p].n_h * points[p].n_v), fmt(points[p].n_h),
                           fmt(points[p].n_v), to_string(estimators[k]), fmt(s.mean), fmt(s.std_error), fmt(gap.mean),
                           fmt(gap.std_error), fmt(e.ue_draws)});
        }
    }
    return table;
}

CsvTable exp_nmse_vs_spread(const ScenarioConfig& config, const RunOptions& options) {
    const ExperimentConfig& e = config.experiment;
    const int n_h = config.geometry.n_h;
    const int n_v = config.geometry.n_v;
    if (!options.full && n_h * n_v > kDeskCapUpa)
        throw InvalidInput("nmse-vs-spread: array larger than the desk cap; pass --full");
    std::vector<NmsePoint> points;
    for (double sigma : e.spread_sweep_deg)
        points.push_back({n_h, n_v, deg_to_rad(sigma)});
    const std::vector<EstimatorKind> estimators =
        make_geometry(config.geometry).is_ula() ? ula_estimators() : upa_estimators();
    const NmseCube cube = nmse_sweep(config, points, estimators, e.ue_draws);

    CsvTable table("mimo-estim/nmse-vs-spread/v1",
                   {"sigma_theta_deg", "n_h", "n_v", "estimator", "nmse_mean", "nmse_stderr", "draws"});
    for (std::size_t p = 0; p < points.size(); ++p)
        for (std::size_t k = 0; k < estimators.size(); ++k) {
            const SampleStats s = sample_stats(cube[p][k]);
            table.add_row({fmt(e.spread_sweep_deg[p]), fmt(n_h), fmt(n_v), to_string(estimators[k]), fmt(s.mean),
                           fmt(s.std_error), fmt(e.ue_draws)});
        }
    return table;
}

CsvTable exp_nmse_cdf(const ScenarioConfig& config, const RunOptions& options) {
    const ExperimentConfig& e = config.experiment;
    const int n_h = config.geometry.n_h;
    const int n_v = config.geometry.n_v;
    if (!options.full && n_h * n_v > kDeskCapUpa)
        throw InvalidInput("nmse-cdf: array larger than the desk cap; pass --full");
    std::vector<EstimatorPolicy> policies{{EstimatorKind::Mmse, CovariancePolicy::Perfect, 1.0},
                                          {EstimatorKind::Kba, CovariancePolicy::Structured, 1.0}};
    for (double eta : e.eta_sweep) {
        policies.push_back({EstimatorKind::Mmse, CovariancePolicy::Sample, eta});
        policies.push_back({EstimatorKind::Mmse, CovariancePolicy::Structured, eta});
    }
    const NmseCube cube = learned_nmse_sweep(config, n_h, n_v, {e.m_observations}, policies, e.ue_draws);

    CsvTable table("mimo-estim/nmse-cdf/v1",
                   {"draw", "policy", "estimator", "covariance", "eta", "M", "nmse"});
    for (std::size_t p = 0; p < policies.size(); ++p)
        for (std::size_t d = 0; d < cube[0][p].size(); ++d)
            table.add_row({fmt(d), policies[p].label(), to_string(policies[p].estimator),
                           to_string(policies[p].covariance), fmt(policies[p].eta), fmt(e.m_observations),
                           fmt(cube[0][p][d])});
    return table;
}

CsvTable exp_nmse_vs_m(const ScenarioConfig& config, const RunOptions& options) {
    const ExperimentConfig& e = config.experiment;
    const std::vector<EstimatorPolicy> policies{{EstimatorKind::Kba, CovariancePolicy::Structured, 1.0},
                                                {EstimatorKind::Kba, CovariancePolicy::Perfect, 1.0},
                                                {EstimatorKind::Mmse, CovariancePolicy::Perfect, 1.0}};
    CsvTable table("mimo-estim/nmse-vs-m/v1", {"N", "n_h", "n_v", "M", "policy", "estimator", "covariance",
                                               "nmse_mean", "nmse_stderr", "draws"});
    for (int n : capped(e.n_sweep_m, kDeskCapUpa, options.full)) {
        const int side = square_side(n);
        const NmseCube cube = learned_nmse_sweep(config, side, side, e.m_sweep, policies, e.ue_draws);
        for (std::size_t mi = 0; mi < e.m_sweep.size(); ++mi)
            for (std::size_t p = 0; p < policies.size(); ++p) {
                const SampleStats s = sample_stats(cube[mi][p]);
                table.add_row({fmt(n), fmt(side), fmt(side), fmt(e.m_sweep[mi]), policies[p].label(),
                               to_string(policies[p].estimator), to_string(policies[p].covariance), fmt(s.mean),
                               fmt(s.std_error), fmt(e.ue_draws)});
            }
    }
    return table;
}

SeTables exp_se(const ScenarioConfig& config, const RunOptions& options) {
    const ExperimentConfig& e = config.experiment;
    if (!options.full && e.se_shape[0] * e.se_shape[1] > kDeskCapUpa)
        throw InvalidInput("se: array larger than the desk cap; pass --full");
    const std::vector<EstimatorPolicy> policies = se_policies(e.eta);

    struct Run {
        std::string sweep;
        int m;
        double rho_dbm;
        bool rzf_only;
    };
    std::vector<Run> runs;
    for (int m : e.se_m_sweep)
        runs.push_back({"m", m, config.simulation.rho_dbm, false});
    for (double rho : e.rho_sweep_dbm)
        runs.push_back({"rho", e.m_observations, rho, true});

    SeTables out{CsvTable("mimo-estim/se/v1", {"sweep", "combiner", "policy", "M", "rho_dbm", "sum_se_mean",
                                               "sum_se_stderr", "drops"}),
                 CsvTable("mimo-estim/se-detail/v1", {"sweep", "combiner", "policy", "M", "rho_dbm", "drop", "ue",
                                                      "sinr", "se"})};
    for (const Run& run : runs) {
        UplinkScenario s = make_uplink_scenario(config, run.m, run.rho_dbm, policies);
        if (run.rzf_only)
            s.combiners = {CombinerKind::Rzf};
        const UplinkResult result = run_uplink_experiment(s);
        for (const SeResult& r : result.results) {
            const std::string label = r.policy.label();
            out.summary.add_row({run.sweep, to_string(r.combiner), label, fmt(run.m), fmt(run.rho_dbm), fmt(r.sum_se),
                                 fmt(r.sum_se_stderr), fmt(s.num_drops)});
            for (std::size_t d = 0; d < r.drop_ue_se.size(); ++d)
                for (std::size_t k = 0; k < r.drop_ue_se[d].size(); ++k)
                    out.detail.add_row({run.sweep, to_string(r.combiner), label, fmt(run.m), fmt(run.rho_dbm), fmt(d),
                                        fmt(k), fmt(r.drop_sinr_terms[d][k].sinr), fmt(r.drop_ue_se[d][k])});
        }
    }
    return out;
}

CsvTable exp_complexity(const ScenarioConfig& config, const RunOptions&) {
    const ExperimentConfig& e = config.experiment;
    CsvTable table("mimo-estim/complexity/v1", {"N", "scheme", "n_h", "n_v", "M", "phase", "theoretical_count",
                                                "measured_multiplies", "measured_adds", "modeled"});
    CrossoverOptions opts;
    opts.m_obs = e.m_observations;
    opts.measure_limit = e.complexity_measure_limit;
    for (int n : e.complexity_n) {
        for (const ComplexityRow& row : crossover_report(n, divisors(n), opts)) {
            table.add_row({fmt(n), to_string(row.scheme), fmt(row.n_h), fmt(row.n_v), fmt(row.m_obs),
                           to_string(row.phase), fmt(row.theoretical),
                           row.measured_multiplies ? std::to_string(*row.measured_multiplies) : "",
                           row.measured_adds ? std::to_string(*row.measured_adds) : "", row.modeled ? "1" : "0"});
        }
    }
    return table;
}

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names{"nsae", "nmse-vs-n", "nmse-vs-spread", "nmse-cdf",
                                                "nmse-vs-m", "se", "complexity"};
    return names;
}

}  // namespace mimo_estim
