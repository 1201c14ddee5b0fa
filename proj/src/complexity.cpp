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
#include "mimo_estim/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mimo_estim/channel_sim.hpp"
#include "mimo_estim/correlation_models.hpp"
#include "mimo_estim/covariance_learning.hpp"
#include "mimo_estim/rng.hpp"

namespace mimo_estim {

const char* to_string(Phase phase) {
    switch (phase) {
    case Phase::BuildQ:
        return "build_q";
    case Phase::BuildA:
        return "build_a";
    case Phase::Apply:
        return "apply";
    }
    return "unknown";
}

double PhaseCounts::get(Phase phase) const {
    switch (phase) {
    case Phase::BuildQ:
        return build_q;
    case Phase::BuildA:
        return build_a;
    case Phase::Apply:
        return apply;
    }
    return 0.0;
}

PhaseCounts theoretical_counts(EstimatorKind scheme, int n_h, int n_v, int m_obs) {
    if (n_h < 1 || n_v < 1)
        throw InvalidInput("theoretical_counts: n_h and n_v must be positive");
    if (m_obs < 0)
        throw InvalidInput("theoretical_counts: m_obs must be non-negative");
    const double h = n_h;
    const double v = n_v;
    const double n = h * v;
    const double m = m_obs;
    PhaseCounts c;
    switch (scheme) {
    case EstimatorKind::Mmse:
        c = {m * n * n, n * n * std::min(h, v) + n, n * n};
        break;
    case EstimatorKind::Kba:
        c = {m * n * n, std::pow(std::max(h, v), 3.0), (h + v) * n};
        break;
    case EstimatorKind::Dft:
        if (n_h != 1 && n_v != 1)
            throw InvalidInput("theoretical_counts: dft applies to linear arrays only");
        c = {n * n, n * std::log2(n), n * std::log2(n)};
        break;
    case EstimatorKind::Ls:
    case EstimatorKind::Los:
        c = {0.0, 0.0, n};
        break;
    case EstimatorKind::Iso:
        c = {0.0, 0.0, n * n};
        break;
    default:
        throw InvalidInput(std::string("theoretical_counts: no model for scheme ") + to_string(scheme));
    }
    return c;
}

bool is_modeled(EstimatorKind scheme, Phase phase) {
    if (phase == Phase::BuildA)
        return scheme == EstimatorKind::Mmse || scheme == EstimatorKind::Kba || scheme == EstimatorKind::Dft;
    if (phase == Phase::BuildQ)
        return scheme == EstimatorKind::Dft;
    return false;
}

namespace {

// Exponential correlation r(i, l) = 0.9^|i - l| exp(j 0.5 (i - l)) per axis;
// counts do not depend on the values, only on positive definiteness.
CMatrix exponential_correlation(int n) {
    CMatrix r(n, n);
    for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l)
            r(i, l) = std::pow(0.9, std::abs(i - l)) * std::polar(1.0, 0.5 * (i - l));
    return r;
}

CMatrix workload_correlation(int n_h, int n_v) {
    return kronecker_product(exponential_correlation(n_v), exponential_correlation(n_h));
}

}  // namespace

MeasuredCounts measured_counts(const WorkloadDescriptor& w) {
    if (w.n_h < 1 || w.n_v < 1)
        throw InvalidInput("measured_counts: n_h and n_v must be positive");
    const ArrayGeometry geometry = ArrayGeometry::with_spacing_in_wavelengths(w.n_h, w.n_v, 0.25, 0.25, 0.1);
    const Index n = geometry.size();
    const PilotConfig pilot{10, 0.1, 0.1};
    RngStream rng(w.seed, StreamPurpose::Generic, {static_cast<std::uint64_t>(w.n_h), static_cast<std::uint64_t>(w.n_v)});

    MeasuredCounts out;
    const CMatrix r = workload_correlation(w.n_h, w.n_v);
    if (w.m_obs > 0 && (w.scheme == EstimatorKind::Mmse || w.scheme == EstimatorKind::Kba)) {
        const ChannelSampler sampler = channel_factor(r);
        CMatrix y(n, w.m_obs);
        for (int m = 0; m < w.m_obs; ++m)
            y.col(m) = observe_pilot(sample_channel(sampler, rng), pilot, rng);
        FlopCounter fc;
        sample_covariance(y, pilot, &fc);
        out.build_q = fc;
    }

    const LinearEstimator est = build_estimator(w.scheme, r, geometry, pilot);
    const CVector y = rng.complex_normal_vector(n);
    FlopCounter fc;
    est.apply(y, &fc);
    out.apply = fc;
    return out;
}

std::vector<int> divisors(int n) {
    std::vector<int> d;
    for (int k = 1; k <= n; ++k)
        if (n % k == 0)
            d.push_back(k);
    return d;
}

std::vector<ComplexityRow> crossover_report(int n, const std::vector<int>& n_h_grid, const CrossoverOptions& options) {
    if (n < 1)
        throw InvalidInput("crossover_report: N must be positive");
    std::vector<ComplexityRow> rows;
    for (int n_h : n_h_grid) {
        if (n_h < 1 || n % n_h != 0)
            throw InvalidInput("crossover_report: n_h = " + std::to_string(n_h) + " does not divide N");
        const int n_v = n / n_h;
        std::vector<EstimatorKind> schemes{EstimatorKind::Mmse, EstimatorKind::Kba};
        if (n_h == 1 || n_v == 1)
            schemes.push_back(EstimatorKind::Dft);
        for (EstimatorKind scheme : schemes) {
            const PhaseCounts theory = theoretical_counts(scheme, n_h, n_v, options.m_obs);
            MeasuredCounts measured;
            if (n <= options.measure_limit)
                measured = measured_counts({scheme, n_h, n_v, options.m_obs, 1});
            for (Phase phase : {Phase::BuildQ, Phase::BuildA, Phase::Apply}) {
                ComplexityRow row;
                row.scheme = scheme;
                row.n_h = n_h;
                row.n_v = n_v;
                row.m_obs = options.m_obs;
                row.phase = phase;
                row.theoretical = theory.get(phase);
                row.modeled = is_modeled(scheme, phase);
                std::optional<FlopCounter> m;
                if (phase == Phase::BuildQ)
                    m = measured.build_q;
                else if (phase == Phase::Apply)
                    m = measured.apply;
                if (m) {
                    row.measured_multiplies = m->multiplies;
                    row.measured_adds = m->additions;
                }
                rows.push_back(row);
            }
        }
    }
    return rows;
}

}  // namespace mimo_estim
