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
#include "mimo_estim/link_level.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include <Eigen/Cholesky>

#include "mimo_estim/parallel.hpp"

namespace mimo_estim {

CMatrix rzf_combiner(const CMatrix& h_hat_all, double noise_over_power) {
    if (!(noise_over_power > 0.0) || !std::isfinite(noise_over_power))
        throw InvalidInput("rzf_combiner: sigma2 / rho must be positive and finite");
    const Index k = h_hat_all.cols();
    CMatrix gram = h_hat_all.adjoint() * h_hat_all;
    gram.diagonal().array() += noise_over_power;
    Eigen::LLT<CMatrix> llt(gram);
    if (llt.info() != Eigen::Success)
        throw DegenerateInput("rzf_combiner: regularized Gram matrix is not positive definite");
    return h_hat_all * llt.solve(CMatrix::Identity(k, k));
}

CMatrix mr_combiner(const CMatrix& h_hat_all) { return h_hat_all; }

UatfAccumulator::UatfAccumulator(int k_ues)
    : k_(k_ues), signal_(static_cast<std::size_t>(k_ues)), cross_(static_cast<std::size_t>(k_ues) * k_ues),
      power_(static_cast<std::size_t>(k_ues)) {
    if (k_ues < 1)
        throw InvalidInput("UatfAccumulator: need at least one UE");
}

void UatfAccumulator::add(const CMatrix& v_all, const CMatrix& h_all) {
    if (v_all.cols() != k_ || h_all.cols() != k_ || v_all.rows() != h_all.rows())
        throw InvalidInput("UatfAccumulator::add: expected N x K combiners and channels");
    const CMatrix g = v_all.adjoint() * h_all;  // g(k, i) = v_k^H h_i
    for (int k = 0; k < k_; ++k) {
        const auto ku = static_cast<std::size_t>(k);
        signal_[ku] += g(k, k);
        for (int i = 0; i < k_; ++i)
            cross_[ku * static_cast<std::size_t>(k_) + static_cast<std::size_t>(i)] += std::norm(g(k, i));
        power_[ku] += v_all.col(k).squaredNorm();
    }
    ++samples_;
}

UatfStats UatfAccumulator::stats(int ue) const {
    if (ue < 0 || ue >= k_)
        throw InvalidInput("UatfAccumulator::stats: UE index out of range");
    if (samples_ == 0)
        throw DegenerateInput("UatfAccumulator::stats: no realizations accumulated");
    const double inv = 1.0 / samples_;
    const auto u = static_cast<std::size_t>(ue);
    UatfStats s;
    s.signal = signal_[u] * inv;
    s.cross_power.resize(static_cast<std::size_t>(k_));
    for (int i = 0; i < k_; ++i)
        s.cross_power[static_cast<std::size_t>(i)] = cross_[u * static_cast<std::size_t>(k_) + static_cast<std::size_t>(i)] * inv;
    s.combiner_power = power_[u] * inv;
    s.samples = samples_;
    return s;
}

SinrTerms uatf_sinr_terms(const UatfStats& stats, int ue, double noise_over_power) {
    if (stats.samples < 1)
        throw InvalidInput("uatf_sinr: expectations need at least one realization");
    if (ue < 0 || static_cast<std::size_t>(ue) >= stats.cross_power.size())
        throw InvalidInput("uatf_sinr: UE index out of range");
    if (noise_over_power < 0.0)
        throw InvalidInput("uatf_sinr: sigma2 / rho must be non-negative");
    SinrTerms t;
    t.numerator = std::norm(stats.signal);
    double total = 0.0;
    for (double c : stats.cross_power)
        total += c;
    t.interference = total - t.numerator;
    t.noise = noise_over_power * stats.combiner_power;
    const double denom = t.interference + t.noise;
    if (!(denom > 0.0))
        throw DegenerateInput("uatf_sinr: non-positive denominator; too few Monte Carlo realizations");
    t.sinr = t.numerator / denom;
    return t;
}

double uatf_sinr(const UatfStats& stats, int ue, double noise_over_power) {
    return uatf_sinr_terms(stats, ue, noise_over_power).sinr;
}

double uatf_se(double sinr, int tau_p, int tau_c) {
    if (tau_p < 1 || tau_c < tau_p)
        throw InvalidInput("uatf_se: need 1 <= tau_p <= tau_c");
    if (!(sinr >= 0.0))
        throw InvalidInput("uatf_se: SINR must be non-negative");
    return (1.0 - static_cast<double>(tau_p) / tau_c) * std::log2(1.0 + sinr);
}

const char* to_string(CombinerKind combiner) { return combiner == CombinerKind::Rzf ? "rzf" : "mr"; }

CombinerKind parse_combiner_kind(const std::string& name) {
    if (name == "rzf")
        return CombinerKind::Rzf;
    if (name == "mr")
        return CombinerKind::Mr;
    throw InvalidInput("unknown combiner '" + name + "'");
}

const char* to_string(CovariancePolicy policy) {
    switch (policy) {
    case CovariancePolicy::Perfect:
        return "perfect";
    case CovariancePolicy::Sample:
        return "sample";
    case CovariancePolicy::Structured:
        return "structured";
    }
    return "unknown";
}

CovariancePolicy parse_covariance_policy(const std::string& name) {
    for (CovariancePolicy p : {CovariancePolicy::Perfect, CovariancePolicy::Sample, CovariancePolicy::Structured})
        if (name == to_string(p))
            return p;
    throw InvalidInput("unknown covariance policy '" + name + "'");
}

std::string EstimatorPolicy::label() const {
    std::ostringstream os;
    os << to_string(estimator) << '/' << to_string(covariance);
    if (covariance != CovariancePolicy::Perfect && eta != 1.0)
        os << "(eta=" << eta << ')';
    return os.str();
}

UeDrop draw_ue(const UePlacement& placement, RngStream& rng) {
    UeDrop ue;
    ue.distance_m = rng.uniform(placement.d_min_m, placement.d_max_m);
    ue.profile.mean_azimuth = rng.uniform(-placement.azimuth_range_rad, placement.azimuth_range_rad);
    ue.profile.mean_elevation = -std::atan(placement.bs_height_m / ue.distance_m);
    ue.profile.spread_azimuth = placement.spread_azimuth_rad;
    ue.profile.spread_elevation = placement.spread_elevation_rad;
    ue.profile.gain_beta = path_loss(ue.distance_m, placement.path_loss_ref_db, placement.path_loss_exponent,
                                     placement.path_loss_ref_distance_m);
    return ue;
}

void validate(const UplinkScenario& s) {
    validate(s.pilot);
    if (s.k_ues < 1)
        throw InvalidInput("UplinkScenario: k_ues must be at least 1");
    if (s.k_ues > s.pilot.tau_p)
        throw InvalidInput("UplinkScenario: orthogonal pilots need tau_p >= K");
    if (s.tau_c < s.pilot.tau_p)
        throw InvalidInput("UplinkScenario: tau_p must not exceed tau_c");
    if (s.num_drops < 1 || s.blocks_per_drop < 1)
        throw InvalidInput("UplinkScenario: need at least one drop and one block");
    if (s.policies.empty() || s.combiners.empty())
        throw InvalidInput("UplinkScenario: need at least one policy and one combiner");
    if (!(s.placement.d_min_m > 0.0) || s.placement.d_max_m < s.placement.d_min_m)
        throw InvalidInput("UplinkScenario: need 0 < d_min <= d_max");
    for (const EstimatorPolicy& p : s.policies)
        if (p.covariance != CovariancePolicy::Perfect && s.m_observations < 1)
            throw InvalidInput("UplinkScenario: learned covariances need m_observations >= 1");
}

const SeResult& UplinkResult::find(const EstimatorPolicy& policy, CombinerKind combiner) const {
    for (const SeResult& r : results)
        if (r.combiner == combiner && r.policy.estimator == policy.estimator &&
            r.policy.covariance == policy.covariance && r.policy.eta == policy.eta)
            return r;
    throw InvalidInput("UplinkResult::find: no result for " + policy.label());
}

PairedDifference paired_difference(const SeResult& a, const SeResult& b) {
    if (a.drop_sum_se.size() != b.drop_sum_se.size() || a.drop_sum_se.empty())
        throw InvalidInput("paired_difference: results must cover the same drops");
    const std::size_t d = a.drop_sum_se.size();
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        const double x = a.drop_sum_se[i] - b.drop_sum_se[i];
        sum += x;
        sum2 += x * x;
    }
    PairedDifference out;
    out.mean = sum / d;
    if (d > 1) {
        const double var = (sum2 - d * out.mean * out.mean) / (d - 1.0);
        out.std_error = std::sqrt(std::max(var, 0.0) / d);
    }
    return out;
}

namespace {

struct DropOutcome {
    // [result index][ue]
    std::vector<std::vector<double>> ue_se;
    std::vector<std::vector<SinrTerms>> terms;
};

DropOutcome run_drop(const UplinkScenario& s, std::uint64_t drop) {
    const int k_ues = s.k_ues;
    const Index n = s.geometry.size();
    const double noise_over_power = s.pilot.sigma2_w / s.pilot.rho_w;

    RngStream placement_rng(s.seed, StreamPurpose::Placement, {drop});
    std::vector<UeDrop> ues;
    std::vector<CMatrix> r_true;
    std::vector<ChannelSampler> samplers;
    for (int k = 0; k < k_ues; ++k) {
        ues.push_back(draw_ue(s.placement, placement_rng));
        r_true.push_back(synthesize_correlation(s.geometry, ues.back().profile, s.quadrature).entries());
        samplers.push_back(channel_factor(r_true.back()));
    }

    // Observations for covariance learning, shared by every learned policy.
    bool learn = false;
    for (const EstimatorPolicy& p : s.policies)
        learn = learn || p.covariance != CovariancePolicy::Perfect;
    std::vector<CMatrix> observations(static_cast<std::size_t>(k_ues));
    if (learn) {
        for (int k = 0; k < k_ues; ++k) {
            RngStream obs(s.seed, StreamPurpose::Observation, {drop, static_cast<std::uint64_t>(k)});
            CMatrix y(n, s.m_observations);
            for (int m = 0; m < s.m_observations; ++m)
                y.col(m) = observe_pilot(sample_channel(samplers[static_cast<std::size_t>(k)], obs), s.pilot, obs);
            observations[static_cast<std::size_t>(k)] = std::move(y);
        }
    }

    std::vector<std::vector<LinearEstimator>> estimators(s.policies.size());
    for (std::size_t p = 0; p < s.policies.size(); ++p) {
        const EstimatorPolicy& pol = s.policies[p];
        for (int k = 0; k < k_ues; ++k) {
            const auto ku = static_cast<std::size_t>(k);
            CMatrix r_used;
            if (pol.covariance == CovariancePolicy::Perfect) {
                r_used = r_true[ku];
            } else {
                const CovarianceMethodSpec spec{pol.covariance == CovariancePolicy::Structured
                                                    ? CovarianceMethod::Structured
                                                    : CovarianceMethod::Regularized,
                                                pol.eta};
                r_used = estimate_covariance(observations[ku], s.pilot, s.geometry.n_h(), s.geometry.n_v(), spec).r_hat;
            }
            const AnglePair nominal{ues[ku].profile.mean_azimuth, ues[ku].profile.mean_elevation};
            estimators[p].push_back(build_estimator(pol.estimator, r_used, s.geometry, s.pilot, nominal));
        }
    }

    const std::size_t n_results = s.policies.size() * s.combiners.size();
    std::vector<UatfAccumulator> acc(n_results, UatfAccumulator(k_ues));
    CMatrix h_all(n, k_ues);
    CMatrix y_all(n, k_ues);
    CMatrix h_hat(n, k_ues);
    for (int b = 0; b < s.blocks_per_drop; ++b) {
        for (int k = 0; k < k_ues; ++k) {
            RngStream rng(s.seed, StreamPurpose::Channel,
                          {drop, static_cast<std::uint64_t>(b), static_cast<std::uint64_t>(k)});
            h_all.col(k) = sample_channel(samplers[static_cast<std::size_t>(k)], rng);
            y_all.col(k) = observe_pilot(h_all.col(k), s.pilot, rng);
        }
        for (std::size_t p = 0; p < s.policies.size(); ++p) {
            for (int k = 0; k < k_ues; ++k)
                h_hat.col(k) = estimators[p][static_cast<std::size_t>(k)].apply(y_all.col(k));
            for (std::size_t c = 0; c < s.combiners.size(); ++c) {
                const CMatrix v = s.combiners[c] == CombinerKind::Rzf ? rzf_combiner(h_hat, noise_over_power)
                                                                      : mr_combiner(h_hat);
                acc[p * s.combiners.size() + c].add(v, h_all);
            }
        }
    }

    DropOutcome out;
    out.ue_se.resize(n_results);
    out.terms.resize(n_results);
    for (std::size_t r = 0; r < n_results; ++r) {
        for (int k = 0; k < k_ues; ++k) {
            const SinrTerms t = uatf_sinr_terms(acc[r].stats(k), k, noise_over_power);
            out.terms[r].push_back(t);
            out.ue_se[r].push_back(uatf_se(t.sinr, s.pilot.tau_p, s.tau_c));
        }
    }
    return out;
}

}  // namespace

UplinkResult run_uplink_experiment(const UplinkScenario& scenario) {
    validate(scenario);
    const auto drops = static_cast<std::size_t>(scenario.num_drops);
    std::vector<std::optional<DropOutcome>> outcomes(drops);
    parallel_for(drops, [&](std::size_t d) { outcomes[d] = run_drop(scenario, d); });

    UplinkResult result;
    const int k_ues = scenario.k_ues;
    for (std::size_t p = 0; p < scenario.policies.size(); ++p) {
        for (std::size_t c = 0; c < scenario.combiners.size(); ++c) {
            const std::size_t idx = p * scenario.combiners.size() + c;
            SeResult r;
            r.policy = scenario.policies[p];
            r.combiner = scenario.combiners[c];
            r.per_ue_se.assign(static_cast<std::size_t>(k_ues), 0.0);
            double sum = 0.0, sum2 = 0.0;
            for (std::size_t d = 0; d < drops; ++d) {
                const DropOutcome& o = *outcomes[d];
                double drop_sum = 0.0;
                for (int k = 0; k < k_ues; ++k) {
                    r.per_ue_se[static_cast<std::size_t>(k)] += o.ue_se[idx][static_cast<std::size_t>(k)] / drops;
                    drop_sum += o.ue_se[idx][static_cast<std::size_t>(k)];
                }
                r.drop_ue_se.push_back(o.ue_se[idx]);
                r.drop_sinr_terms.push_back(o.terms[idx]);
                r.drop_sum_se.push_back(drop_sum);
                sum += drop_sum;
                sum2 += drop_sum * drop_sum;
            }
            r.sum_se = 0.0;
            for (double v : r.per_ue_se)
                r.sum_se += v;
            if (drops > 1) {
                const double mean = sum / drops;
                const double var = (sum2 - drops * mean * mean) / (drops - 1.0);
                r.sum_se_stderr = std::sqrt(std::max(var, 0.0) / drops);
            }
            result.results.push_back(std::move(r));
        }
    }
    return result;
}

}  // namespace mimo_estim
