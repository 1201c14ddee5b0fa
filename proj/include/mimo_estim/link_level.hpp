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

#include <cstdint>
#include <string>
#include <vector>

#include "mimo_estim/array_geometry.hpp"
#include "mimo_estim/channel_sim.hpp"
#include "mimo_estim/correlation_models.hpp"
#include "mimo_estim/covariance_learning.hpp"
#include "mimo_estim/estimators.hpp"
#include "mimo_estim/types.hpp"

namespace mimo_estim {

/// v_k = (sum_i h_i h_i^H + c I)^{-1} h_k for all k, computed as
/// H (H^H H + c I_K)^{-1}. Requires c > 0.
CMatrix rzf_combiner(const CMatrix& h_hat_all, double noise_over_power);

/// v_k = h_hat_k.
CMatrix mr_combiner(const CMatrix& h_hat_all);

/// Monte Carlo moments for one UE's combiner.
struct UatfStats {
    cd signal{0.0, 0.0};              // E[v_k^H h_k]
    std::vector<double> cross_power;  // E|v_k^H h_i|^2, i = 0..K-1
    double combiner_power = 0.0;      // E||v_k||^2
    int samples = 0;
};

struct SinrTerms {
    double numerator = 0.0;     // |E[v^H h_k]|^2
    double interference = 0.0;  // sum_i E|v^H h_i|^2 - |E[v^H h_k]|^2
    double noise = 0.0;         // (sigma2 / rho) E||v||^2
    double sinr = 0.0;
};

/// Running sums of the moments above for K UEs.
class UatfAccumulator {
  public:
    explicit UatfAccumulator(int k_ues);

    /// One realization: combiners V and true channels H, both N x K.
    void add(const CMatrix& v_all, const CMatrix& h_all);

    int k_ues() const noexcept { return k_; }
    UatfStats stats(int ue) const;

  private:
    int k_;
    int samples_ = 0;
    std::vector<cd> signal_;
    std::vector<double> cross_;  // k_ * k_, row = combiner UE
    std::vector<double> power_;
};

/// Throws DegenerateInput when the denominator is not positive.
SinrTerms uatf_sinr_terms(const UatfStats& stats, int ue, double noise_over_power);
double uatf_sinr(const UatfStats& stats, int ue, double noise_over_power);

/// (1 - tau_p / tau_c) log2(1 + sinr)
double uatf_se(double sinr, int tau_p, int tau_c);

enum class CombinerKind { Rzf, Mr };

const char* to_string(CombinerKind combiner);
CombinerKind parse_combiner_kind(const std::string& name);

/// Which correlation matrix the estimator is built from.
enum class CovariancePolicy { Perfect, Sample, Structured };

const char* to_string(CovariancePolicy policy);
CovariancePolicy parse_covariance_policy(const std::string& name);

struct EstimatorPolicy {
    EstimatorKind estimator = EstimatorKind::Mmse;
    CovariancePolicy covariance = CovariancePolicy::Perfect;
    double eta = 1.0;

    /// e.g. "mmse/perfect", "kba/structured", "mmse/sample(eta=0.8)".
    std::string label() const;
};

/// UE drop law: distance uniform in [d_min, d_max], azimuth uniform in
/// +-azimuth_range, nominal elevation -atan(bs_height / d).
struct UePlacement {
    double d_min_m = 5.0;
    double d_max_m = 100.0;
    double azimuth_range_rad = deg_to_rad(60.0);
    double bs_height_m = 10.0;
    double spread_azimuth_rad = deg_to_rad(10.0);
    double spread_elevation_rad = deg_to_rad(10.0);
    double path_loss_ref_db = -148.1;
    double path_loss_exponent = 3.76;
    double path_loss_ref_distance_m = 1000.0;
};

struct UeDrop {
    double distance_m = 0.0;
    ScatteringProfile profile;
};

/// One drop of a UE, drawn from `rng`.
UeDrop draw_ue(const UePlacement& placement, RngStream& rng);

struct UplinkScenario {
    ArrayGeometry geometry{8, 8, 0.025, 0.025, 0.1};
    int k_ues = 5;
    int tau_c = 200;
    PilotConfig pilot;
    UePlacement placement;
    std::vector<CombinerKind> combiners{CombinerKind::Rzf};
    std::vector<EstimatorPolicy> policies;
    int m_observations = 50;
    int num_drops = 100;
    int blocks_per_drop = 200;
    std::uint64_t seed = 1;
    QuadratureOptions quadrature;
};

void validate(const UplinkScenario& scenario);

/// Result for one (policy, combiner) pair.
struct SeResult {
    EstimatorPolicy policy;
    CombinerKind combiner = CombinerKind::Rzf;
    std::vector<double> per_ue_se;  // averaged over drops
    double sum_se = 0.0;            // = sum of per_ue_se
    double sum_se_stderr = 0.0;     // across drops
    std::vector<std::vector<double>> drop_ue_se;  // [drop][ue]
    std::vector<std::vector<SinrTerms>> drop_sinr_terms;  // [drop][ue]
    std::vector<double> drop_sum_se;
};

struct PairedDifference {
    double mean = 0.0;
    double std_error = 0.0;
};

struct UplinkResult {
    std::vector<SeResult> results;  // policy-major, then combiner

    const SeResult& find(const EstimatorPolicy& policy, CombinerKind combiner) const;
};

/// Per-drop difference sum_se(a) - sum_se(b) with its standard error. Both
/// results come from the same drops and realizations.
PairedDifference paired_difference(const SeResult& a, const SeResult& b);

/// Drops UEs, synthesizes their correlations, learns covariances when a
/// policy asks for it, then for each coherence block draws channels and
/// pilot noise shared by all policies, estimates, combines and accumulates
/// the UatF moments. Drops run in parallel; results are seed-deterministic.
UplinkResult run_uplink_experiment(const UplinkScenario& scenario);

}  // namespace mimo_estim
