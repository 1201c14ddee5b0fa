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

#include "mimo_estim/correlation_models.hpp"
#include "mimo_estim/rng.hpp"
#include "mimo_estim/types.hpp"

namespace mimo_estim {

double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);
double db_to_linear(double db);
double linear_to_db(double linear);

/// Pilot phase parameters. `sigma2_w` may be zero, which makes gamma infinite.
struct PilotConfig {
    int tau_p = 10;
    double rho_w = 0.1;
    double sigma2_w = 1e-12;

    static PilotConfig from_dbm(int tau_p, double rho_dbm, double sigma2_dbm);

    /// tau_p rho / sigma2
    double gamma() const;
    /// tau_p sqrt(rho), the scaling of h in the observation.
    double scale() const;
};

void validate(const PilotConfig& pilot);

/// Square-root factor of a PSD correlation matrix for drawing h ~ CN(0, R).
struct ChannelSampler {
    CMatrix factor;  // N x r, factor * factor^H = R

    Index size() const noexcept { return factor.rows(); }
    Index rank() const noexcept { return factor.cols(); }
};

/// Eigen-factorization keeping eigenvalues above rank_tolerance * lambda_max.
/// Rejects R with an eigenvalue below -1e-9 * lambda_max.
ChannelSampler channel_factor(const CMatrix& r, double rank_tolerance = 1e-12);
ChannelSampler channel_factor(const CorrelationMatrix& r, double rank_tolerance = 1e-12);

/// h = factor z, z ~ CN(0, I_r)
CVector sample_channel(const ChannelSampler& sampler, RngStream& rng);

/// y = tau_p sqrt(rho) h + w, w ~ CN(0, tau_p sigma2 I)
CVector observe_pilot(const CVector& h, const PilotConfig& pilot, RngStream& rng);

/// Q = R + I / gamma
CMatrix q_matrix(const CMatrix& r, double gamma);

}  // namespace mimo_estim
