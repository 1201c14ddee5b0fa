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

#include <vector>

#include "mimo_estim/channel_sim.hpp"
#include "mimo_estim/flop_counter.hpp"
#include "mimo_estim/types.hpp"

namespace mimo_estim {

enum class CovarianceMethod { Sample, Regularized, Structured };

const char* to_string(CovarianceMethod method);

struct CovarianceMethodSpec {
    CovarianceMethod kind = CovarianceMethod::Sample;
    double eta = 1.0;  // shrinkage weight; 1 keeps the estimate as is
};

/// Estimated observation and channel covariances from M pilot observations.
struct CovarianceEstimate {
    CMatrix q_hat;  // Hermitian
    CMatrix r_hat;  // q_hat - I / gamma, possibly indefinite
    CovarianceMethodSpec method;
    int m_observations = 0;
};

/// (1/M) sum_m y_m y_m^H / (rho tau_p^2) over the columns of `observations` (N x M).
CMatrix sample_covariance(const CMatrix& observations, const PilotConfig& pilot, FlopCounter* counter = nullptr);

/// eta Q + (1 - eta) diag(Q), 0 <= eta <= 1.
CMatrix regularize(const CMatrix& q_hat, double eta);

/// Q - I / gamma without any clipping.
CMatrix r_from_q(const CMatrix& q_hat, double gamma);

/// Blocks Q_{1,j}, j = 1..n_v: the mean of the n_h x n_h blocks on block
/// diagonal j - 1 of `q_hat`.
std::vector<CMatrix> block_toeplitz_average(const CMatrix& q_hat, int n_h, int n_v);

/// Toeplitz block whose first row and column are the means of the
/// corresponding diagonals of `block`.
CMatrix toeplitz_average_block(const CMatrix& block);

/// Hermitian block-Toeplitz Q from its first block row (block (j, 1) is the
/// adjoint of block (1, j)), and R = Q - I / gamma.
CovarianceEstimate assemble_structured(const std::vector<CMatrix>& blocks_toe, int n_h, int n_v, double gamma,
                                       int m_observations = 0);

/// Full structured projection: block averaging, per-block Toeplitz
/// averaging, assembly. Idempotent.
CMatrix toeplitz_block_toeplitz_projection(const CMatrix& q_hat, int n_h, int n_v);

/// Sample, regularized-sample or structured (optionally regularized)
/// estimate from observations (N x M).
CovarianceEstimate estimate_covariance(const CMatrix& observations, const PilotConfig& pilot, int n_h, int n_v,
                                       const CovarianceMethodSpec& method);

}  // namespace mimo_estim
