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
#include "mimo_estim/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include <Eigen/Eigenvalues>

namespace mimo_estim {

const char* to_string(EstimatorKind kind) {
    switch (kind) {
    case EstimatorKind::Mmse:
        return "mmse";
    case EstimatorKind::Ls:
        return "ls";
    case EstimatorKind::Los:
        return "los";
    case EstimatorKind::Iso:
        return "iso";
    case EstimatorKind::Kba:
        return "kba";
    case EstimatorKind::Nkp:
        return "nkp";
    case EstimatorKind::Dft:
        return "dft";
    case EstimatorKind::KbaDft:
        return "kba-dft";
    }
    return "unknown";
}

EstimatorKind parse_estimator_kind(std::string_view name) {
    for (EstimatorKind k : {EstimatorKind::Mmse, EstimatorKind::Ls, EstimatorKind::Los, EstimatorKind::Iso,
                            EstimatorKind::Kba, EstimatorKind::Nkp, EstimatorKind::Dft, EstimatorKind::KbaDft})
        if (name == to_string(k))
            return k;
    throw InvalidInput("unknown estimator kind '" + std::string(name) + "'");
}

double spectral_filter(double lambda, double gamma) {
    const double noise = std::isfinite(gamma) ? 1.0 / gamma : 0.0;
    const double denom = lambda + noise;
    if (denom == 0.0)
        return 0.0;
    return lambda / denom;
}

namespace {

std::uint64_t u64(Index n) { return static_cast<std::uint64_t>(n); }

void check_length(const CVector& y, Index n) {
    if (y.size() != n)
        throw InvalidInput("apply: observation length " + std::to_string(y.size()) + " does not match estimator size " +
                           std::to_string(n));
}

}  // namespace

Index LinearEstimator::size() const {
    return std::visit(
        [](const auto& s) -> Index {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Mmse>)
                return s.r.rows();
            else if constexpr (std::is_same_v<T, Ls>)
                return s.n;
            else if constexpr (std::is_same_v<T, Los>)
                return s.a.size();
            else if constexpr (std::is_same_v<T, Iso>)
                return s.basis.rows();
            else if constexpr (std::is_same_v<T, Kronecker>)
                return s.filter.size();
            else
                return s.filter.size();
        },
        state_);
}

CVector LinearEstimator::apply(const CVector& y, FlopCounter* counter) const {
    const Index n = size();
    check_length(y, n);
    const std::uint64_t un = u64(n);
    return std::visit(
        [&](const auto& s) -> CVector {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, Mmse>) {
                // Solve Q x = y, then multiply by R / scale.
                CVector x;
                if (s.positive_definite) {
                    x = s.llt.solve(y);
                    count(counter, un * un + un, un * un - un);
                } else {
                    x = s.lu.solve(y);
                    count(counter, un * un, un * un - un);
                }
                return counted_matvec(s.r, x, counter);
            } else if constexpr (std::is_same_v<T, Ls>) {
                count(counter, un, 0);
                return s.coef * y;
            } else if constexpr (std::is_same_v<T, Los>) {
                count(counter, 2 * un + 1, un - 1);
                return (s.coef * s.a.dot(y)) * s.a;
            } else if constexpr (std::is_same_v<T, Iso>) {
                const CVector t = counted_matvec(s.basis.adjoint(), y, counter);
                CVector out = counted_matvec(s.basis, t, counter);
                count(counter, un, 0);
                return s.coef * out;
            } else if constexpr (std::is_same_v<T, Kronecker>) {
                if (s.use_dense)
                    return counted_matvec(s.dense, y, counter);
                CVector t = kron_matvec(s.u_v_adj, s.u_h_adj, y, counter);
                t.array() *= s.filter.array();
                count(counter, un, 0);
                return kron_matvec(s.u_v, s.u_h, t, counter);
            } else {
                CVector t = s.plan->forward(y, counter);
                t.array() *= s.filter.array();
                count(counter, un, 0);
                return s.plan->inverse(t, counter);
            }
        },
        state_);
}

CMatrix LinearEstimator::materialize() const {
    return std::visit(
        [&](const auto& s) -> CMatrix {
            using T = std::decay_t<decltype(s)>;
            const Index n = size();
            if constexpr (std::is_same_v<T, Mmse>) {
                // A = (R/scale) Q^{-1}; with Q Hermitian, A^H = Q^{-1} (R/scale)^H.
                const CMatrix rh = s.r.adjoint();
                const CMatrix t = s.positive_definite ? CMatrix(s.llt.solve(rh)) : CMatrix(s.lu.solve(rh));
                return t.adjoint();
            } else if constexpr (std::is_same_v<T, Ls>) {
                return s.coef * CMatrix::Identity(n, n);
            } else if constexpr (std::is_same_v<T, Los>) {
                return s.coef * s.a * s.a.adjoint();
            } else if constexpr (std::is_same_v<T, Iso>) {
                return s.coef * s.basis * s.basis.adjoint();
            } else if constexpr (std::is_same_v<T, Kronecker>) {
                if (s.use_dense)
                    return s.dense;
                const CMatrix u = kronecker_product(s.u_v, s.u_h);
                return u * s.filter.asDiagonal() * u.adjoint();
            } else {
                CMatrix a(n, n);
                for (Index k = 0; k < n; ++k)
                    a.col(k) = apply(CVector::Unit(n, k));
                return a;
            }
        },
        state_);
}

LinearEstimator build_mmse(const CMatrix& r, const PilotConfig& pilot) {
    validate(pilot);
    if (r.rows() != r.cols() || r.rows() == 0)
        throw InvalidInput("build_mmse: R must be a non-empty square matrix");
    LinearEstimator::Mmse s;
    s.inv_scale = 1.0 / pilot.scale();
    s.r = r * s.inv_scale;
    const CMatrix q = q_matrix(hermitian_part(r), pilot.gamma());
    s.llt.compute(q);
    s.positive_definite = s.llt.info() == Eigen::Success;
    if (!s.positive_definite) {
        s.lu.compute(q);
        if (!(s.lu.rcond() > 1e-14))
            throw DegenerateInput("build_mmse: Q = R + I/gamma is singular");
    }
    return LinearEstimator(EstimatorKind::Mmse, std::move(s));
}

LinearEstimator build_ls(Index n, const PilotConfig& pilot) {
    validate(pilot);
    if (n < 1)
        throw InvalidInput("build_ls: size must be positive");
    return LinearEstimator(EstimatorKind::Ls, LinearEstimator::Ls{n, 1.0 / pilot.scale()});
}

LinearEstimator build_los(const ArrayGeometry& geometry, const AnglePair& angle, double beta,
                          const PilotConfig& pilot) {
    validate(pilot);
    validate(angle);
    if (!(beta > 0.0))
        throw InvalidInput("build_los: beta must be positive");
    const double gamma = pilot.gamma();
    const double n = geometry.size();
    const double gain = std::isfinite(gamma) ? beta * gamma / (1.0 + n * beta * gamma) : 1.0 / n;
    return LinearEstimator(EstimatorKind::Los,
                           LinearEstimator::Los{array_response(geometry, angle), gain / pilot.scale()});
}

LinearEstimator build_iso(const ArrayGeometry& geometry, const PilotConfig& pilot, double eigen_threshold) {
    validate(pilot);
    const CorrelationMatrix r = iso_correlation(geometry);
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(r.entries());
    const RVector& ev = solver.eigenvalues();
    const double cut = eigen_threshold * ev.maxCoeff();
    Index kept = 0;
    for (Index k = 0; k < ev.size(); ++k)
        if (ev[k] >= cut)
            ++kept;
    LinearEstimator::Iso s;
    s.basis = solver.eigenvectors().rightCols(kept);
    s.coef = 1.0 / pilot.scale();
    return LinearEstimator(EstimatorKind::Iso, std::move(s));
}

namespace {

Eigen::SelfAdjointEigenSolver<CMatrix> hermitian_eigen(const CMatrix& m, const char* name) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw InvalidInput(std::string("build_kba: factor ") + name + " must be a non-empty square matrix");
    if (relative_hermitian_defect(m) > 1e-10)
        throw InvalidInput(std::string("build_kba: factor ") + name + " is not Hermitian");
    return Eigen::SelfAdjointEigenSolver<CMatrix>(hermitian_part(m));
}

LinearEstimator build_kronecker(EstimatorKind kind, const KroneckerFactors& factors, const PilotConfig& pilot,
                                const KroneckerOptions& options) {
    validate(pilot);
    const auto eh = hermitian_eigen(factors.r_h, "r_h");
    const auto ev = hermitian_eigen(factors.r_v, "r_v");
    const Index n_h = factors.r_h.rows();
    const Index n_v = factors.r_v.rows();
    const Index n = n_h * n_v;
    const double gamma = pilot.gamma();
    const double inv_scale = 1.0 / pilot.scale();

    LinearEstimator::Kronecker s;
    s.u_h = eh.eigenvectors();
    s.u_v = ev.eigenvectors();
    s.u_h_adj = s.u_h.adjoint();
    s.u_v_adj = s.u_v.adjoint();
    s.filter.resize(n);
    for (Index j = 0; j < n_v; ++j)
        for (Index i = 0; i < n_h; ++i) {
            double lambda = ev.eigenvalues()[j] * eh.eigenvalues()[i];
            if (lambda < 0.0 && options.negative == NegativeEigenvalues::Clip)
                lambda = 0.0;
            else if (lambda < 0.0 && options.negative == NegativeEigenvalues::Magnitude)
                lambda = -lambda;
            s.filter[j * n_h + i] = inv_scale * spectral_filter(lambda, gamma);
        }

    const Index factored_cost = 2 * (n_h + n_v) * n + n;
    s.use_dense = options.apply == KroneckerApply::Dense ||
                  (options.apply == KroneckerApply::Auto && n * n < factored_cost);
    if (s.use_dense) {
        const CMatrix u = kronecker_product(s.u_v, s.u_h);
        s.dense = u * s.filter.asDiagonal() * u.adjoint();
    }
    return LinearEstimator(kind, std::move(s));
}

}  // namespace

LinearEstimator build_kba(const KroneckerFactors& factors, const PilotConfig& pilot, const KroneckerOptions& options) {
    EstimatorKind kind = EstimatorKind::Kba;
    if (factors.method == KroneckerMethod::Nkp)
        kind = EstimatorKind::Nkp;
    else if (factors.method == KroneckerMethod::KbaDft)
        kind = EstimatorKind::KbaDft;
    return build_kronecker(kind, factors, pilot, options);
}

LinearEstimator build_nkp_estimator(const KroneckerFactors& factors, const PilotConfig& pilot,
                                    const KroneckerOptions& options) {
    return build_kronecker(EstimatorKind::Nkp, factors, pilot, options);
}

LinearEstimator build_dft(const CVector& first_row_r, const PilotConfig& pilot) {
    validate(pilot);
    const CirculantSpectrum spectrum = circulant_approximation(first_row_r);
    const Index n = spectrum.size();
    const double gamma = pilot.gamma();
    LinearEstimator::Dft s;
    s.plan = std::make_shared<const FftPlan>(n);
    s.filter.resize(n);
    const double norm = 1.0 / (pilot.scale() * static_cast<double>(n));
    for (Index k = 0; k < n; ++k)
        s.filter[k] = norm * spectral_filter(spectrum.eigenvalues[k].real(), gamma);
    return LinearEstimator(EstimatorKind::Dft, std::move(s));
}

LinearEstimator build_estimator(EstimatorKind kind, const CMatrix& r, const ArrayGeometry& geometry,
                                const PilotConfig& pilot, const AnglePair& nominal, const KroneckerOptions& options) {
    const Index n = geometry.size();
    if (r.rows() != n || r.cols() != n)
        throw InvalidInput("build_estimator: R does not match the array size");
    switch (kind) {
    case EstimatorKind::Mmse:
        return build_mmse(r, pilot);
    case EstimatorKind::Ls:
        return build_ls(n, pilot);
    case EstimatorKind::Los: {
        const double beta = r.trace().real() / static_cast<double>(n);
        return build_los(geometry, nominal, beta, pilot);
    }
    case EstimatorKind::Iso:
        return build_iso(geometry, pilot);
    case EstimatorKind::Kba:
        return build_kba(kba_factors(r, geometry.n_h(), geometry.n_v()), pilot, options);
    case EstimatorKind::Nkp:
        return build_nkp_estimator(nkp_factors(r, geometry.n_h(), geometry.n_v()), pilot, options);
    case EstimatorKind::KbaDft:
        return build_kba(kba_dft_factors(r, geometry.n_h(), geometry.n_v()), pilot, options);
    case EstimatorKind::Dft:
        if (!geometry.is_ula())
            throw InvalidInput("build_estimator: the DFT estimator needs a linear array; use kba-dft for planar arrays");
        return build_dft(r.row(0).transpose(), pilot);
    }
    throw InvalidInput("build_estimator: unknown kind");
}

double analytic_nmse(const CMatrix& a, const CMatrix& r, const PilotConfig& pilot) {
    validate(pilot);
    if (a.rows() != r.rows() || a.cols() != r.cols() || r.rows() != r.cols())
        throw InvalidInput("analytic_nmse: dimension mismatch");
    const double tr = r.trace().real();
    if (!(tr > 0.0))
        throw DegenerateInput("analytic_nmse: tr R must be positive");
    const double s = pilot.scale();
    const CMatrix b = CMatrix::Identity(r.rows(), r.cols()) - s * a;
    // tr(B R B^H) = sum_ij (B R)_ij conj(B_ij)
    const CMatrix br = b * r;
    double err = (br.array() * b.array().conjugate()).sum().real();
    const double gamma = pilot.gamma();
    if (std::isfinite(gamma))
        err += s * s / gamma * a.squaredNorm();
    return err / tr;
}

EmpiricalNmse empirical_nmse(const LinearEstimator& estimator, const ChannelSampler& sampler,
                             const PilotConfig& pilot, int trials, RngStream& rng) {
    if (trials < 1)
        throw InvalidInput("empirical_nmse: trials must be at least 1");
    double se = 0.0, sp = 0.0, see = 0.0, spp = 0.0, sep = 0.0;
    for (int t = 0; t < trials; ++t) {
        const CVector h = sample_channel(sampler, rng);
        const CVector y = observe_pilot(h, pilot, rng);
        const double e = (h - estimator.apply(y)).squaredNorm();
        const double p = h.squaredNorm();
        se += e;
        sp += p;
        see += e * e;
        spp += p * p;
        sep += e * p;
    }
    const double t = trials;
    EmpiricalNmse out;
    out.trials = trials;
    if (sp == 0.0)
        throw DegenerateInput("empirical_nmse: channel draws have zero energy");
    const double me = se / t, mp = sp / t;
    out.value = me / mp;
    if (trials > 1) {
        const double ve = (see / t - me * me) * t / (t - 1.0);
        const double vp = (spp / t - mp * mp) * t / (t - 1.0);
        const double cep = (sep / t - me * mp) * t / (t - 1.0);
        const double r = out.value;
        const double var = (ve - 2.0 * r * cep + r * r * vp) / (mp * mp * t);
        out.std_error = std::sqrt(std::max(var, 0.0));
    }
    return out;
}

}  // namespace mimo_estim
