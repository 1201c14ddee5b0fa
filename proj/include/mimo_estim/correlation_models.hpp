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

#include "mimo_estim/array_geometry.hpp"
#include "mimo_estim/types.hpp"

namespace mimo_estim {

enum class AngularDistribution { Gaussian };

/// Local scattering around a nominal direction of arrival.
///
/// The angular density is a product of two Gaussians centred on the nominal
/// angles, each truncated to [-pi/2, pi/2] and renormalized. A zero spread
/// makes that axis a point mass at the nominal angle.
struct ScatteringProfile {
    double mean_azimuth = 0.0;
    double mean_elevation = 0.0;
    double spread_azimuth = 0.0;
    double spread_elevation = 0.0;
    double gain_beta = 1.0;
    AngularDistribution distribution = AngularDistribution::Gaussian;
};

void validate(const ScatteringProfile& profile);

/// Density f(az, el) of the profile; requires both spreads to be positive.
double angular_density(const ScatteringProfile& profile, double azimuth, double elevation);

/// beta in dB at `distance_m`: ref_db - 10 exponent log10(d / ref_distance),
/// by default -148.1 - 37.6 log10(d / 1 km).
double path_loss_db(double distance_m, double ref_db = -148.1, double exponent = 3.76,
                    double ref_distance_m = 1000.0);
/// Linear-scale path loss.
double path_loss(double distance_m, double ref_db = -148.1, double exponent = 3.76, double ref_distance_m = 1000.0);

enum class Provenance { Synthesized, Iso, Los, Estimated };

const char* to_string(Provenance provenance);

/// Spatial correlation matrix. Stored entries are exactly Hermitian: the
/// constructor replaces its input with (R + R^H) / 2.
class CorrelationMatrix {
  public:
    CorrelationMatrix(const CMatrix& entries, Provenance provenance);

    const CMatrix& entries() const noexcept { return entries_; }
    Provenance provenance() const noexcept { return provenance_; }
    Index size() const noexcept { return entries_.rows(); }

    double trace() const { return entries_.trace().real(); }
    double min_eigenvalue() const;
    /// min eigenvalue >= -rel_tol * ||R||_2
    bool is_psd(double rel_tol = 1e-9) const;

  private:
    CMatrix entries_;
    Provenance provenance_;
};

struct QuadratureOptions {
    int initial_nodes = 32;   // per axis with nonzero spread
    int max_nodes = 2048;
    double rel_tolerance = 1e-6;
    // Support is [-pi/2, pi/2] clipped to mean +- support_sigmas * spread;
    // the Gaussian mass outside 10 sigma is below 1e-22.
    double support_sigmas = 10.0;
};

/// [R]_{m,l} = beta * integral of exp(j k(az, el)^T (u_m - u_l)) f(az, el).
///
/// Entries depend only on the index offsets (i_m - i_l, j_m - j_l), so the
/// integral is evaluated once per offset pair with a tensor Gauss-Legendre
/// rule (azimuth inner, elevation outer). The node count doubles until the
/// largest offset entry moves by less than `rel_tolerance * beta`; failing
/// that at `max_nodes` throws ConvergenceError naming the worst entry.
CorrelationMatrix synthesize_correlation(const ArrayGeometry& geometry, const ScatteringProfile& profile,
                                         const QuadratureOptions& quadrature = {});

/// beta a a^H for a single plane wave.
CorrelationMatrix los_correlation(const ArrayGeometry& geometry, const AnglePair& angle, double gain_beta);

/// sinc(2 sqrt(dh^2 + dv^2)) with offsets measured in wavelengths.
CorrelationMatrix iso_correlation(const ArrayGeometry& geometry);

enum class KroneckerMethod { Kba, Nkp, KbaDft };

const char* to_string(KroneckerMethod method);

/// R ~ r_v (x) r_h (vertical factor outermost).
struct KroneckerFactors {
    CMatrix r_h;
    CMatrix r_v;
    KroneckerMethod method = KroneckerMethod::Kba;

    CMatrix kronecker() const;
};

CMatrix kronecker_product(const CMatrix& outer, const CMatrix& inner);

/// r_h = leading n_h x n_h block of R, r_v = R sampled every n_h rows and
/// columns, divided by [R]_{1,1}. Throws DegenerateInput when [R]_{1,1} == 0.
KroneckerFactors kba_factors(const CMatrix& r, int n_h, int n_v);

struct NkpOptions {
    double tolerance = 1e-12;
    int max_iterations = 10000;
};

/// Van Loan rearrangement: row (a n_v + b) holds block (a, b) of R
/// flattened row-major, so ||R - Y (x) X||_F = ||rearranged - vec(Y) vec(X)^T||_F.
CMatrix nkp_rearrange(const CMatrix& r, int n_h, int n_v);

/// Frobenius-nearest Kronecker product, from the dominant singular pair of
/// the rearranged matrix found by power iteration. For Hermitian R the
/// common phase is fixed so that both factors are Hermitian with
/// trace(r_v) > 0.
KroneckerFactors nkp_factors(const CMatrix& r, int n_h, int n_v, const NkpOptions& options = {});

/// Circulant matrix given by its first row `c`, together with its spectrum
/// in the basis F = [exp(j 2 pi m n / N) / sqrt(N)]: C = F diag(eigenvalues) F^H.
struct CirculantSpectrum {
    CVector first_row_c;
    CVector eigenvalues;

    Index size() const noexcept { return first_row_c.size(); }
    CMatrix matrix() const;
};

/// c(0) = r(0), c(n) = ((N - n) r(n) + n conj(r(N - n))) / N, with `r` the first
/// row of a Hermitian Toeplitz matrix.
CirculantSpectrum circulant_approximation(const CVector& first_row_r);

/// Spectrum of the circulant whose first row is `c`.
CirculantSpectrum circulant_spectrum(const CVector& first_row_c);

/// KBA factors, each replaced by its circulant approximation.
KroneckerFactors kba_dft_factors(const CMatrix& r, int n_h, int n_v);

/// ||R - r_v (x) r_h||_F^2 / ||R||_F^2
double nsae_r(const CMatrix& r, const KroneckerFactors& factors);

/// ||A_ref - A||_F^2 / ||A_ref||_F^2
double nsae_a(const CMatrix& a_ref, const CMatrix& a);

}  // namespace mimo_estim
