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
#include "mimo_estim/correlation_models.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "mimo_estim/fft.hpp"
#include "mimo_estim/quadrature.hpp"

namespace mimo_estim {

void validate(const ScatteringProfile& profile) {
    validate(AnglePair{profile.mean_azimuth, profile.mean_elevation});
    if (!std::isfinite(profile.spread_azimuth) || !std::isfinite(profile.spread_elevation) ||
        profile.spread_azimuth < 0.0 || profile.spread_elevation < 0.0)
        throw InvalidInput("ScatteringProfile: angular spreads must be finite and non-negative");
    if (!(profile.gain_beta > 0.0) || !std::isfinite(profile.gain_beta))
        throw InvalidInput("ScatteringProfile: gain_beta must be positive");
}

namespace {

constexpr double kHalfPi = kPi / 2.0;

// Probability mass of N(mean, spread^2) inside [-pi/2, pi/2].
double truncated_mass(double mean, double spread) {
    const double s = spread * std::sqrt(2.0);
    return 0.5 * (std::erf((kHalfPi - mean) / s) - std::erf((-kHalfPi - mean) / s));
}

double truncated_gaussian(double x, double mean, double spread) {
    if (std::abs(x) > kHalfPi)
        return 0.0;
    const double z = (x - mean) / spread;
    return std::exp(-0.5 * z * z) / (spread * std::sqrt(2.0 * kPi) * truncated_mass(mean, spread));
}

// Nodes and density-weighted weights for one angular axis, normalized so the
// weights sum to one. A zero spread collapses to the mean.
struct AxisRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

AxisRule axis_rule(double mean, double spread, int n, double support_sigmas) {
    AxisRule rule;
    if (spread == 0.0) {
        rule.nodes = {mean};
        rule.weights = {1.0};
        return rule;
    }
    const double lo = std::max(-kHalfPi, mean - support_sigmas * spread);
    const double hi = std::min(kHalfPi, mean + support_sigmas * spread);
    QuadratureRule gl = gauss_legendre(n, lo, hi);
    double total = 0.0;
    for (std::size_t k = 0; k < gl.nodes.size(); ++k) {
        const double z = (gl.nodes[k] - mean) / spread;
        gl.weights[k] *= std::exp(-0.5 * z * z);
        total += gl.weights[k];
    }
    for (double& w : gl.weights)
        w /= total;
    rule.nodes = std::move(gl.nodes);
    rule.weights = std::move(gl.weights);
    return rule;
}

// T(di + n_h - 1, dj + n_v - 1) = integral for index offsets (di, dj), without beta.
CMatrix offset_table(const ArrayGeometry& geometry, const AxisRule& azimuth, const AxisRule& elevation) {
    const int n_h = geometry.n_h();
    const int n_v = geometry.n_v();
    const double kh = 2.0 * kPi * geometry.delta_h() / geometry.wavelength();
    const double kv = 2.0 * kPi * geometry.delta_v() / geometry.wavelength();

    CMatrix table = CMatrix::Zero(2 * n_h - 1, 2 * n_v - 1);
    std::vector<cd> horizontal(static_cast<std::size_t>(n_h));
    for (std::size_t q = 0; q < elevation.nodes.size(); ++q) {
        const double el = elevation.nodes[q];
        const double cos_el = std::cos(el);

        std::fill(horizontal.begin(), horizontal.end(), cd{0.0, 0.0});
        for (std::size_t p = 0; p < azimuth.nodes.size(); ++p) {
            const cd base = std::polar(1.0, kh * cos_el * std::sin(azimuth.nodes[p]));
            const double w = azimuth.weights[p];
            cd phasor{1.0, 0.0};
            for (int di = 0; di < n_h; ++di) {
                horizontal[static_cast<std::size_t>(di)] += w * phasor;
                phasor *= base;
            }
        }

        const double g = elevation.weights[q];
        const cd vbase = std::polar(1.0, kv * std::sin(el));
        cd vphasor{1.0, 0.0};
        for (int dj = 0; dj < n_v; ++dj) {
            for (int di = -(n_h - 1); di < n_h; ++di) {
                const cd h = di >= 0 ? horizontal[static_cast<std::size_t>(di)]
                                     : std::conj(horizontal[static_cast<std::size_t>(-di)]);
                table(di + n_h - 1, dj + n_v - 1) += g * vphasor * h;
                if (dj > 0)
                    table(di + n_h - 1, -dj + n_v - 1) += g * std::conj(vphasor) * h;
            }
            vphasor *= vbase;
        }
    }
    return table;
}

CMatrix expand_offsets(const ArrayGeometry& geometry, const CMatrix& table, double scale) {
    const int n_h = geometry.n_h();
    const int n_v = geometry.n_v();
    const int n = geometry.size();
    CMatrix r(n, n);
    for (int m = 0; m < n; ++m) {
        const int im = m % n_h;
        const int jm = m / n_h;
        for (int l = 0; l < n; ++l) {
            const int il = l % n_h;
            const int jl = l / n_h;
            r(m, l) = scale * table(im - il + n_h - 1, jm - jl + n_v - 1);
        }
    }
    return r;
}

}  // namespace

double angular_density(const ScatteringProfile& profile, double azimuth, double elevation) {
    validate(profile);
    if (profile.spread_azimuth == 0.0 || profile.spread_elevation == 0.0)
        throw InvalidInput("angular_density: point-mass axes have no density");
    return truncated_gaussian(azimuth, profile.mean_azimuth, profile.spread_azimuth) *
           truncated_gaussian(elevation, profile.mean_elevation, profile.spread_elevation);
}

double path_loss_db(double distance_m, double ref_db, double exponent, double ref_distance_m) {
    if (!(distance_m > 0.0))
        throw InvalidInput("path_loss: distance must be positive");
    if (!(ref_distance_m > 0.0))
        throw InvalidInput("path_loss: reference distance must be positive");
    return ref_db - 10.0 * exponent * std::log10(distance_m / ref_distance_m);
}

double path_loss(double distance_m, double ref_db, double exponent, double ref_distance_m) {
    return std::pow(10.0, path_loss_db(distance_m, ref_db, exponent, ref_distance_m) / 10.0);
}

const char* to_string(Provenance provenance) {
    switch (provenance) {
    case Provenance::Synthesized:
        return "synthesized";
    case Provenance::Iso:
        return "iso";
    case Provenance::Los:
        return "los";
    case Provenance::Estimated:
        return "estimated";
    }
    return "unknown";
}

CorrelationMatrix::CorrelationMatrix(const CMatrix& entries, Provenance provenance) : provenance_(provenance) {
    if (entries.rows() != entries.cols() || entries.rows() == 0)
        throw InvalidInput("CorrelationMatrix: entries must be a non-empty square matrix");
    entries_ = hermitian_part(entries);
}

double CorrelationMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(entries_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

bool CorrelationMatrix::is_psd(double rel_tol) const {
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(entries_, Eigen::EigenvaluesOnly);
    const RVector& ev = solver.eigenvalues();
    const double scale = std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
    return ev.minCoeff() >= -rel_tol * scale;
}

CorrelationMatrix synthesize_correlation(const ArrayGeometry& geometry, const ScatteringProfile& profile,
                                         const QuadratureOptions& quadrature) {
    validate(profile);
    const bool az_spread = profile.spread_azimuth > 0.0;
    const bool el_spread = profile.spread_elevation > 0.0;
    if ((az_spread || el_spread) && quadrature.initial_nodes < 2)
        throw InvalidInput("synthesize_correlation: need at least 2 quadrature nodes per spread axis");

    auto evaluate = [&](int nodes) {
        const AxisRule az = axis_rule(profile.mean_azimuth, profile.spread_azimuth, nodes, quadrature.support_sigmas);
        const AxisRule el =
            axis_rule(profile.mean_elevation, profile.spread_elevation, nodes, quadrature.support_sigmas);
        return offset_table(geometry, az, el);
    };

    int nodes = quadrature.initial_nodes;
    CMatrix table = evaluate(nodes);
    if (az_spread || el_spread) {
        double change = 0.0;
        Index worst_di = 0;
        Index worst_dj = 0;
        for (;;) {
            const int finer = 2 * nodes;
            if (finer > quadrature.max_nodes) {
                const int n_h = geometry.n_h();
                const int n_v = geometry.n_v();
                const Index di = worst_di - (n_h - 1);
                const Index dj = worst_dj - (n_v - 1);
                // Representative (m, l) pair carrying the worst offset, 0-based.
                const Index m = std::max<Index>(dj, 0) * n_h + std::max<Index>(di, 0);
                const Index l = std::max<Index>(-dj, 0) * n_h + std::max<Index>(-di, 0);
                throw ConvergenceError("synthesize_correlation: quadrature did not converge; worst relative change " +
                                           std::to_string(change) + " at offset (" + std::to_string(di) + ", " +
                                           std::to_string(dj) + ")",
                                       change, m, l);
            }
            CMatrix refined = evaluate(finer);
            change = (refined - table).cwiseAbs().maxCoeff(&worst_di, &worst_dj);
            table = std::move(refined);
            nodes = finer;
            if (change < quadrature.rel_tolerance)
                break;
        }
    }
    return CorrelationMatrix(expand_offsets(geometry, table, profile.gain_beta), Provenance::Synthesized);
}

CorrelationMatrix los_correlation(const ArrayGeometry& geometry, const AnglePair& angle, double gain_beta) {
    if (!(gain_beta > 0.0))
        throw InvalidInput("los_correlation: gain_beta must be positive");
    const CVector a = array_response(geometry, angle);
    return CorrelationMatrix(gain_beta * a * a.adjoint(), Provenance::Los);
}

CorrelationMatrix iso_correlation(const ArrayGeometry& geometry) {
    const int n = geometry.size();
    const double dh = geometry.delta_h() / geometry.wavelength();
    const double dv = geometry.delta_v() / geometry.wavelength();
    CMatrix r(n, n);
    for (int m = 0; m < n; ++m) {
        for (int l = 0; l < n; ++l) {
            const double oh = ((m % geometry.n_h()) - (l % geometry.n_h())) * dh;
            const double ov = ((m / geometry.n_h()) - (l / geometry.n_h())) * dv;
            const double x = 2.0 * std::sqrt(oh * oh + ov * ov);
            r(m, l) = x == 0.0 ? 1.0 : std::sin(kPi * x) / (kPi * x);
        }
    }
    return CorrelationMatrix(r, Provenance::Iso);
}

const char* to_string(KroneckerMethod method) {
    switch (method) {
    case KroneckerMethod::Kba:
        return "kba";
    case KroneckerMethod::Nkp:
        return "nkp";
    case KroneckerMethod::KbaDft:
        return "kba-dft";
    }
    return "unknown";
}

CMatrix kronecker_product(const CMatrix& outer, const CMatrix& inner) {
    CMatrix out(outer.rows() * inner.rows(), outer.cols() * inner.cols());
    for (Index a = 0; a < outer.rows(); ++a)
        for (Index b = 0; b < outer.cols(); ++b)
            out.block(a * inner.rows(), b * inner.cols(), inner.rows(), inner.cols()) = outer(a, b) * inner;
    return out;
}

CMatrix KroneckerFactors::kronecker() const { return kronecker_product(r_v, r_h); }

namespace {

void check_shape(const CMatrix& r, int n_h, int n_v, const char* who) {
    if (n_h < 1 || n_v < 1)
        throw InvalidInput(std::string(who) + ": n_h and n_v must be positive");
    if (r.rows() != r.cols() || r.rows() != static_cast<Index>(n_h) * n_v)
        throw InvalidInput(std::string(who) + ": matrix size must equal n_h * n_v");
}

}  // namespace

KroneckerFactors kba_factors(const CMatrix& r, int n_h, int n_v) {
    check_shape(r, n_h, n_v, "kba_factors");
    const cd pivot = r(0, 0);
    if (pivot == cd{0.0, 0.0})
        throw DegenerateInput("kba_factors: [R]_{1,1} is zero");
    KroneckerFactors f;
    f.method = KroneckerMethod::Kba;
    f.r_h = r.topLeftCorner(n_h, n_h);
    f.r_v.resize(n_v, n_v);
    for (int a = 0; a < n_v; ++a)
        for (int b = 0; b < n_v; ++b)
            f.r_v(a, b) = r(static_cast<Index>(a) * n_h, static_cast<Index>(b) * n_h) / pivot;
    return f;
}

CMatrix nkp_rearrange(const CMatrix& r, int n_h, int n_v) {
    check_shape(r, n_h, n_v, "nkp_rearrange");
    CMatrix out(static_cast<Index>(n_v) * n_v, static_cast<Index>(n_h) * n_h);
    for (int a = 0; a < n_v; ++a)
        for (int b = 0; b < n_v; ++b)
            for (int p = 0; p < n_h; ++p)
                for (int q = 0; q < n_h; ++q)
                    out(static_cast<Index>(a) * n_v + b, static_cast<Index>(p) * n_h + q) =
                        r(static_cast<Index>(a) * n_h + p, static_cast<Index>(b) * n_h + q);
    return out;
}

KroneckerFactors nkp_factors(const CMatrix& r, int n_h, int n_v, const NkpOptions& options) {
    const CMatrix rearranged = nkp_rearrange(r, n_h, n_v);
    KroneckerFactors f;
    f.method = KroneckerMethod::Nkp;

    // Start from the leading block, which is exact for true Kronecker input.
    CVector v(static_cast<Index>(n_h) * n_h);
    for (int p = 0; p < n_h; ++p)
        for (int q = 0; q < n_h; ++q)
            v[static_cast<Index>(p) * n_h + q] = std::conj(r(p, q));
    if (v.norm() == 0.0)
        v.setOnes();
    v.normalize();

    bool converged = false;
    double change = 0.0;
    for (int it = 0; it < options.max_iterations; ++it) {
        const CVector w = rearranged * v;
        const double sigma = w.norm();
        if (sigma == 0.0) {
            f.r_h = CMatrix::Zero(n_h, n_h);
            f.r_v = CMatrix::Zero(n_v, n_v);
            return f;
        }
        CVector next = rearranged.adjoint() * (w / sigma);
        next.normalize();
        change = (next - v).norm();
        v = std::move(next);
        if (change <= options.tolerance) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw ConvergenceError("nkp_factors: power iteration did not converge; last step " + std::to_string(change),
                               change);

    const CVector w = rearranged * v;
    const double sigma = w.norm();
    const double root = std::sqrt(sigma);
    const CVector vec_y = (w / sigma) * root;
    const CVector vec_x = v.conjugate() * root;

    f.r_v.resize(n_v, n_v);
    for (int a = 0; a < n_v; ++a)
        for (int b = 0; b < n_v; ++b)
            f.r_v(a, b) = vec_y[static_cast<Index>(a) * n_v + b];
    f.r_h.resize(n_h, n_h);
    for (int p = 0; p < n_h; ++p)
        for (int q = 0; q < n_h; ++q)
            f.r_h(p, q) = vec_x[static_cast<Index>(p) * n_h + q];

    const cd tr = f.r_v.trace();
    if (std::abs(tr) > 0.0) {
        const cd phase = tr / std::abs(tr);
        f.r_v *= std::conj(phase);
        f.r_h *= phase;
    }
    if (relative_hermitian_defect(r) <= 1e-12) {
        f.r_v = hermitian_part(f.r_v);
        f.r_h = hermitian_part(f.r_h);
    }
    return f;
}

CMatrix CirculantSpectrum::matrix() const {
    const Index n = size();
    CMatrix c(n, n);
    for (Index p = 0; p < n; ++p)
        for (Index q = 0; q < n; ++q)
            c(p, q) = first_row_c[(q - p + n) % n];
    return c;
}

CirculantSpectrum circulant_spectrum(const CVector& first_row_c) {
    if (first_row_c.size() < 1)
        throw InvalidInput("circulant_spectrum: empty first row");
    CirculantSpectrum s;
    s.first_row_c = first_row_c;
    // With C(p, q) = c((q - p) mod N), the eigenvalue on column n of F is
    // sum_m c(m) exp(+j 2 pi m n / N), i.e. the DFT of the first column.
    s.eigenvalues = FftPlan(first_row_c.size()).inverse(first_row_c);
    return s;
}

CirculantSpectrum circulant_approximation(const CVector& first_row_r) {
    const Index n = first_row_r.size();
    if (n < 1)
        throw InvalidInput("circulant_approximation: empty first row");
    CVector c(n);
    c[0] = first_row_r[0];
    for (Index k = 1; k < n; ++k)
        c[k] = (static_cast<double>(n - k) * first_row_r[k] + static_cast<double>(k) * std::conj(first_row_r[n - k])) /
               static_cast<double>(n);
    return circulant_spectrum(c);
}

KroneckerFactors kba_dft_factors(const CMatrix& r, int n_h, int n_v) {
    KroneckerFactors f = kba_factors(r, n_h, n_v);
    f.r_h = circulant_approximation(f.r_h.row(0).transpose()).matrix();
    f.r_v = circulant_approximation(f.r_v.row(0).transpose()).matrix();
    f.method = KroneckerMethod::KbaDft;
    return f;
}

double nsae_r(const CMatrix& r, const KroneckerFactors& factors) {
    if (factors.r_h.rows() * factors.r_v.rows() != r.rows() || r.rows() != r.cols())
        throw InvalidInput("nsae_r: factor sizes do not match R");
    return nsae_a(r, factors.kronecker());
}

double nsae_a(const CMatrix& a_ref, const CMatrix& a) {
    if (a_ref.rows() != a.rows() || a_ref.cols() != a.cols())
        throw InvalidInput("nsae: dimension mismatch");
    const double denom = a_ref.squaredNorm();
    if (denom == 0.0)
        throw DegenerateInput("nsae: reference matrix is zero");
    return (a_ref - a).squaredNorm() / denom;
}

}  // namespace mimo_estim
