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
#include "mimo_estim/channel_sim.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

namespace mimo_estim {

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watt_to_dbm(double watt) { return 10.0 * std::log10(watt) + 30.0; }
double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

PilotConfig PilotConfig::from_dbm(int tau_p, double rho_dbm, double sigma2_dbm) {
    PilotConfig p{tau_p, dbm_to_watt(rho_dbm), dbm_to_watt(sigma2_dbm)};
    validate(p);
    return p;
}

double PilotConfig::gamma() const {
    if (sigma2_w == 0.0)
        return std::numeric_limits<double>::infinity();
    return tau_p * rho_w / sigma2_w;
}

double PilotConfig::scale() const { return tau_p * std::sqrt(rho_w); }

void validate(const PilotConfig& pilot) {
    if (pilot.tau_p < 1)
        throw InvalidInput("PilotConfig: tau_p must be at least 1");
    if (!(pilot.rho_w > 0.0) || !std::isfinite(pilot.rho_w))
        throw InvalidInput("PilotConfig: rho must be positive");
    if (!(pilot.sigma2_w >= 0.0) || !std::isfinite(pilot.sigma2_w))
        throw InvalidInput("PilotConfig: sigma2 must be non-negative");
}

ChannelSampler channel_factor(const CMatrix& r, double rank_tolerance) {
    if (r.rows() != r.cols() || r.rows() == 0)
        throw InvalidInput("channel_factor: R must be a non-empty square matrix");
    if (relative_hermitian_defect(r) > 1e-12)
        throw InvalidInput("channel_factor: R must be Hermitian");
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(r));
    const RVector& ev = solver.eigenvalues();
    const double lambda_max = ev.maxCoeff();
    ChannelSampler s;
    if (!(lambda_max > 0.0)) {
        if (lambda_max < 0.0)
            throw InvalidInput("channel_factor: R is negative definite");
        s.factor = CMatrix::Zero(r.rows(), 0);
        return s;
    }
    if (ev.minCoeff() < -1e-9 * lambda_max)
        throw InvalidInput("channel_factor: R is indefinite beyond tolerance; clip it before sampling");
    const double cut = rank_tolerance * lambda_max;
    Index kept = 0;
    for (Index k = 0; k < ev.size(); ++k)
        if (ev[k] > cut)
            ++kept;
    s.factor.resize(r.rows(), kept);
    Index col = 0;
    for (Index k = 0; k < ev.size(); ++k)
        if (ev[k] > cut)
            s.factor.col(col++) = solver.eigenvectors().col(k) * std::sqrt(ev[k]);
    return s;
}

ChannelSampler channel_factor(const CorrelationMatrix& r, double rank_tolerance) {
    return channel_factor(r.entries(), rank_tolerance);
}

CVector sample_channel(const ChannelSampler& sampler, RngStream& rng) {
    if (sampler.rank() == 0)
        return CVector::Zero(sampler.size());
    return sampler.factor * rng.complex_normal_vector(sampler.rank());
}

CVector observe_pilot(const CVector& h, const PilotConfig& pilot, RngStream& rng) {
    CVector y = pilot.scale() * h;
    if (pilot.sigma2_w > 0.0) {
        const double sd = std::sqrt(pilot.tau_p * pilot.sigma2_w);
        for (Index n = 0; n < y.size(); ++n)
            y[n] += sd * rng.complex_normal();
    }
    return y;
}

CMatrix q_matrix(const CMatrix& r, double gamma) {
    if (!(gamma > 0.0))
        throw InvalidInput("q_matrix: gamma must be positive");
    if (r.rows() != r.cols())
        throw InvalidInput("q_matrix: R must be square");
    CMatrix q = r;
    if (std::isfinite(gamma))
        q.diagonal().array() += 1.0 / gamma;
    return q;
}

}  // namespace mimo_estim
