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

#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "mimo_estim/array_geometry.hpp"
#include "mimo_estim/channel_sim.hpp"
#include "mimo_estim/correlation_models.hpp"
#include "mimo_estim/fft.hpp"
#include "mimo_estim/flop_counter.hpp"
#include "mimo_estim/rng.hpp"
#include "mimo_estim/types.hpp"

namespace mimo_estim {

enum class EstimatorKind { Mmse, Ls, Los, Iso, Kba, Nkp, Dft, KbaDft };

const char* to_string(EstimatorKind kind);
/// Accepts mmse, ls, los, iso, kba, nkp, dft, kba-dft.
EstimatorKind parse_estimator_kind(std::string_view name);

/// How a Kronecker-structured estimator applies itself. Auto keeps the
/// factored form unless the dense N x N product is cheaper (ULA-like shapes).
enum class KroneckerApply { Auto, Factored, Dense };

/// Treatment of negative eigenvalue products, which arise when the factors
/// come from an indefinite covariance estimate.
enum class NegativeEigenvalues {
    Keep,       // filter lambda / (lambda + 1/gamma) as is
    Clip,       // zero gain
    Magnitude,  // filter |lambda| / (|lambda| + 1/gamma)
};

struct KroneckerOptions {
    KroneckerApply apply = KroneckerApply::Auto;
    NegativeEigenvalues negative = NegativeEigenvalues::Magnitude;
};

/// Filter entry lambda / (lambda + 1/gamma); zero when the denominator vanishes.
double spectral_filter(double lambda, double gamma);

/// A linear channel estimator h_hat = A y, kept in the factored form of its kind.
class LinearEstimator {
  public:
    struct Mmse {
        CMatrix r;
        Eigen::LLT<CMatrix> llt;
        Eigen::PartialPivLU<CMatrix> lu;
        bool positive_definite = true;
        double inv_scale = 1.0;
    };
    struct Ls {
        Index n = 0;
        double coef = 1.0;
    };
    struct Los {
        CVector a;
        double coef = 0.0;
    };
    struct Iso {
        CMatrix basis;  // N x r, orthonormal columns
        double coef = 1.0;
    };
    struct Kronecker {
        CMatrix u_v, u_h;          // eigenvectors of r_v, r_h
        CMatrix u_v_adj, u_h_adj;  // their adjoints
        CVector filter;            // per-coefficient gain, 1/scale folded in
        CMatrix dense;             // set when applying densely
        bool use_dense = false;
    };
    struct Dft {
        std::shared_ptr<const FftPlan> plan;
        CVector filter;  // 1/(scale N) folded in
    };
    using State = std::variant<Mmse, Ls, Los, Iso, Kronecker, Dft>;

    LinearEstimator(EstimatorKind kind, State state) : kind_(kind), state_(std::move(state)) {}

    EstimatorKind kind() const noexcept { return kind_; }
    Index size() const;

    /// h_hat = A y using the fast path of the kind; multiplies and additions
    /// are charged to `counter` when given.
    CVector apply(const CVector& y, FlopCounter* counter = nullptr) const;

    /// Explicit N x N matrix A.
    CMatrix materialize() const;

    const State& state() const noexcept { return state_; }

  private:
    EstimatorKind kind_;
    State state_;
};

/// A = R (R + I/gamma)^{-1} / (tau_p sqrt(rho)). R may be an indefinite
/// estimate; Q is then factored by LU instead of Cholesky.
LinearEstimator build_mmse(const CMatrix& r, const PilotConfig& pilot);

/// A = I / (tau_p sqrt(rho)).
LinearEstimator build_ls(Index n, const PilotConfig& pilot);

/// A = beta gamma / (1 + N beta gamma) a a^H / (tau_p sqrt(rho)).
LinearEstimator build_los(const ArrayGeometry& geometry, const AnglePair& angle, double beta,
                          const PilotConfig& pilot);

/// Projection onto the span of the eigenvectors of the isotropic correlation
/// with eigenvalue >= eigen_threshold * lambda_max.
LinearEstimator build_iso(const ArrayGeometry& geometry, const PilotConfig& pilot, double eigen_threshold = 1e-10);

/// Eigen-filter estimator on r_v (x) r_h. The estimator kind follows
/// factors.method (Kba, Nkp or KbaDft).
LinearEstimator build_kba(const KroneckerFactors& factors, const PilotConfig& pilot,
                          const KroneckerOptions& options = {});

/// Same construction as build_kba, labelled as the NKP estimator.
LinearEstimator build_nkp_estimator(const KroneckerFactors& factors, const PilotConfig& pilot,
                                    const KroneckerOptions& options = {});

/// Fourier-domain filter from the circulant approximation of a Hermitian
/// Toeplitz matrix with first row `first_row_r`.
LinearEstimator build_dft(const CVector& first_row_r, const PilotConfig& pilot);

/// Builds an estimator of `kind` from a (true or estimated) correlation R.
/// LoS uses `nominal` and beta = tr(R) / N; ISO ignores R; DFT requires a ULA
/// and uses the first row of R; KBA, NKP and KBA-DFT factor R on `geometry`.
LinearEstimator build_estimator(EstimatorKind kind, const CMatrix& r, const ArrayGeometry& geometry,
                                const PilotConfig& pilot, const AnglePair& nominal = {},
                                const KroneckerOptions& options = {});

/// E||h - A y||^2 / tr R for y = tau_p sqrt(rho) h + w.
double analytic_nmse(const CMatrix& a, const CMatrix& r, const PilotConfig& pilot);

struct EmpiricalNmse {
    double value = 0.0;
    double std_error = 0.0;  // delta-method standard error of the ratio
    int trials = 0;
};

/// sum ||h - h_hat||^2 / sum ||h||^2 over `trials` independent draws.
EmpiricalNmse empirical_nmse(const LinearEstimator& estimator, const ChannelSampler& sampler,
                             const PilotConfig& pilot, int trials, RngStream& rng);

}  // namespace mimo_estim
