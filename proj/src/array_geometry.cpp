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
#include "mimo_estim/array_geometry.hpp"

#include <cmath>
#include <string>

namespace mimo_estim {

ArrayGeometry::ArrayGeometry(int n_h, int n_v, double delta_h, double delta_v, double wavelength)
    : n_h_(n_h), n_v_(n_v), delta_h_(delta_h), delta_v_(delta_v), wavelength_(wavelength) {
    if (n_h < 1 || n_v < 1)
        throw InvalidInput("ArrayGeometry: n_h and n_v must be at least 1");
    if (!(delta_h > 0.0) || !(delta_v > 0.0))
        throw InvalidInput("ArrayGeometry: element spacings must be positive");
    if (!(wavelength > 0.0))
        throw InvalidInput("ArrayGeometry: wavelength must be positive");
}

ArrayGeometry ArrayGeometry::with_spacing_in_wavelengths(int n_h, int n_v, double delta_h_over_lambda,
                                                         double delta_v_over_lambda, double wavelength) {
    return ArrayGeometry(n_h, n_v, delta_h_over_lambda * wavelength, delta_v_over_lambda * wavelength, wavelength);
}

void validate(const AnglePair& angle) {
    constexpr double half_pi = kPi / 2.0;
    // Allow a few ulps so that +-pi/2 computed from degrees is accepted.
    constexpr double slack = 1e-12;
    if (!std::isfinite(angle.azimuth) || !std::isfinite(angle.elevation))
        throw InvalidInput("AnglePair: angles must be finite");
    if (std::abs(angle.azimuth) > half_pi + slack || std::abs(angle.elevation) > half_pi + slack)
        throw InvalidInput("AnglePair: angles must lie in [-pi/2, pi/2]");
}

AntennaIndex antenna_index(int n, const ArrayGeometry& geometry) {
    if (n < 1 || n > geometry.size())
        throw InvalidInput("antenna_index: n = " + std::to_string(n) + " outside [1, " +
                           std::to_string(geometry.size()) + "]");
    return {(n - 1) % geometry.n_h(), (n - 1) / geometry.n_h()};
}

Eigen::Vector3d antenna_position(const ArrayGeometry& geometry, int n) {
    const AntennaIndex idx = antenna_index(n, geometry);
    return {0.0, idx.i * geometry.delta_h(), idx.j * geometry.delta_v()};
}

Eigen::Vector3d wave_vector(const AnglePair& angle, double wavelength) {
    validate(angle);
    if (!(wavelength > 0.0))
        throw InvalidInput("wave_vector: wavelength must be positive");
    const double k = 2.0 * kPi / wavelength;
    const double ce = std::cos(angle.elevation);
    return {k * ce * std::cos(angle.azimuth), k * ce * std::sin(angle.azimuth), k * std::sin(angle.elevation)};
}

CVector array_response(const ArrayGeometry& geometry, const AnglePair& angle) {
    const Eigen::Vector3d k = wave_vector(angle, geometry.wavelength());
    const int n_total = geometry.size();
    CVector a(n_total);
    for (int n = 0; n < n_total; ++n) {
        const int i = n % geometry.n_h();
        const int j = n / geometry.n_h();
        // u_n has no x component, so only the y and z parts of k contribute.
        const double phase = k.y() * i * geometry.delta_h() + k.z() * j * geometry.delta_v();
        a[n] = std::polar(1.0, phase);
    }
    return a;
}

}  // namespace mimo_estim
