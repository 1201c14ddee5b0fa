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
#include "mimo_estim/covariance_learning.hpp"

#include <cmath>
#include <cstdint>
#include <string>

namespace mimo_estim {

const char* to_string(CovarianceMethod method) {
    switch (method) {
    case CovarianceMethod::Sample:
        return "sample";
    case CovarianceMethod::Regularized:
        return "regularized";
    case CovarianceMethod::Structured:
        return "structured";
    }
    return "unknown";
}

CMatrix sample_covariance(const CMatrix& observations, const PilotConfig& pilot, FlopCounter* counter) {
    validate(pilot);
    const Index m = observations.cols();
    if (m < 1)
        throw InvalidInput("sample_covariance: need at least one observation");
    const Index n = observations.rows();
    const double norm = 1.0 / (static_cast<double>(m) * pilot.rho_w * pilot.tau_p * pilot.tau_p);
    CMatrix q = CMatrix::Zero(n, n);
    q.selfadjointView<Eigen::Lower>().rankUpdate(observations, norm);
    q = q.selfadjointView<Eigen::Lower>();
    const auto un = static_cast<std::uint64_t>(n);
    const auto um = static_cast<std::uint64_t>(m);
    count(counter, um * un * un, um * un * un);
    return q;
}

CMatrix regularize(const CMatrix& q_hat, double eta) {
    if (!(eta >= 0.0 && eta <= 1.0))
        throw InvalidInput("regularize: eta must lie in [0, 1]");
    if (q_hat.rows() != q_hat.cols())
        throw InvalidInput("regularize: matrix must be square");
    CMatrix out = eta * q_hat;
    out.diagonal() = q_hat.diagonal();
    return out;
}

CMatrix r_from_q(const CMatrix& q_hat, double gamma) {
    if (!(gamma > 0.0))
        throw InvalidInput("r_from_q: gamma must be positive");
    if (q_hat.rows() != q_hat.cols())
        throw InvalidInput("r_from_q: matrix must be square");
    CMatrix r = q_hat;
    if (std::isfinite(gamma))
        r.diagonal().array() -= 1.0 / gamma;
    return r;
}

namespace {

void check_blocks(Index size, int n_h, int n_v, const char* who) {
    if (n_h < 1 || n_v < 1 || size != static_cast<Index>(n_h) * n_v)
        throw InvalidInput(std::string(who) + ": matrix size must equal n_h * n_v");
}

}  // namespace

std::vector<CMatrix> block_toeplitz_average(const CMatrix& q_hat, int n_h, int n_v) {
    if (q_hat.rows() != q_hat.cols())
        throw InvalidInput("block_toeplitz_average: matrix must be square");
    check_blocks(q_hat.rows(), n_h, n_v, "block_toeplitz_average");
    std::vector<CMatrix> blocks;
    blocks.reserve(static_cast<std::size_t>(n_v));
    for (int j = 0; j < n_v; ++j) {
        CMatrix acc = CMatrix::Zero(n_h, n_h);
        const int count_on_diagonal = n_v - j;
        for (int m = 0; m < count_on_diagonal; ++m)
            acc += q_hat.block(static_cast<Index>(m) * n_h, static_cast<Index>(m + j) * n_h, n_h, n_h);
        blocks.push_back(acc / static_cast<double>(count_on_diagonal));
    }
    return blocks;
}

CMatrix toeplitz_average_block(const CMatrix& block) {
    if (block.rows() != block.cols())
        throw InvalidInput("toeplitz_average_block: block must be square");
    const Index n = block.rows();
    // diag[k + n - 1] holds the mean of diagonal k (k > 0 above the main one).
    CVector diag = CVector::Zero(2 * n - 1);
    for (Index k = -(n - 1); k < n; ++k) {
        const Index len = n - std::abs(k);
        cd acc{0.0, 0.0};
        for (Index m = 0; m < len; ++m)
            acc += k >= 0 ? block(m, m + k) : block(m - k, m);
        diag[k + n - 1] = acc / static_cast<double>(len);
    }
    CMatrix out(n, n);
    for (Index p = 0; p < n; ++p)
        for (Index q = 0; q < n; ++q)
            out(p, q) = diag[q - p + n - 1];
    return out;
}

CovarianceEstimate assemble_structured(const std::vector<CMatrix>& blocks_toe, int n_h, int n_v, double gamma,
                                       int m_observations) {
    if (n_h < 1 || n_v < 1 || blocks_toe.size() != static_cast<std::size_t>(n_v))
        throw InvalidInput("assemble_structured: expected n_v blocks");
    for (const CMatrix& b : blocks_toe)
        if (b.rows() != n_h || b.cols() != n_h)
            throw InvalidInput("assemble_structured: blocks must be n_h x n_h");
    const Index n = static_cast<Index>(n_h) * n_v;
    CMatrix q(n, n);
    for (int a = 0; a < n_v; ++a) {
        for (int b = 0; b < n_v; ++b) {
            auto dst = q.block(static_cast<Index>(a) * n_h, static_cast<Index>(b) * n_h, n_h, n_h);
            if (b >= a)
                dst = blocks_toe[static_cast<std::size_t>(b - a)];
            else
                dst = blocks_toe[static_cast<std::size_t>(a - b)].adjoint();
        }
    }
    // The leading block is Hermitian only up to rounding of its averages.
    q = hermitian_part(q);
    CovarianceEstimate est;
    est.q_hat = std::move(q);
    est.r_hat = r_from_q(est.q_hat, gamma);
    est.method = {CovarianceMethod::Structured, 1.0};
    est.m_observations = m_observations;
    return est;
}

CMatrix toeplitz_block_toeplitz_projection(const CMatrix& q_hat, int n_h, int n_v) {
    std::vector<CMatrix> blocks = block_toeplitz_average(q_hat, n_h, n_v);
    for (CMatrix& b : blocks)
        b = toeplitz_average_block(b);
    return assemble_structured(blocks, n_h, n_v, 1.0).q_hat;
}

CovarianceEstimate estimate_covariance(const CMatrix& observations, const PilotConfig& pilot, int n_h, int n_v,
                                       const CovarianceMethodSpec& method) {
    check_blocks(observations.rows(), n_h, n_v, "estimate_covariance");
    const double gamma = pilot.gamma();
    const CMatrix sample = sample_covariance(observations, pilot);
    CMatrix q;
    if (method.kind == CovarianceMethod::Structured) {
        if (!(method.eta >= 0.0 && method.eta <= 1.0))
            throw InvalidInput("estimate_covariance: eta must lie in [0, 1]");
        // Shrinks toward the diagonal of the sample estimate, so eta = 0
        // gives the same matrix for both methods.
        q = method.eta * toeplitz_block_toeplitz_projection(sample, n_h, n_v);
        q.diagonal() += (1.0 - method.eta) * sample.diagonal();
    } else {
        q = method.kind == CovarianceMethod::Sample && method.eta == 1.0 ? sample : regularize(sample, method.eta);
    }
    CovarianceEstimate est;
    est.q_hat = hermitian_part(q);
    est.r_hat = r_from_q(est.q_hat, gamma);
    est.method = method;
    est.m_observations = static_cast<int>(observations.cols());
    return est;
}

}  // namespace mimo_estim
