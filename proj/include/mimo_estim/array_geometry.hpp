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

#include <Eigen/Dense>

#include "mimo_estim/types.hpp"

namespace mimo_estim {

/// Uniform planar array in the yz-plane: `n_v` rows of `n_h` elements each.
///
/// Antenna n (1-based at the API boundary) sits at horizontal index
/// i = (n-1) mod n_h and vertical index j = floor((n-1) / n_h), so the vector
/// index runs along a row first. That ordering is what makes the channel
/// covariance approximately `R_V (x) R_H` with the vertical factor outermost.
/// A horizontal ULA is n_v == 1, a vertical ULA is n_h == 1.
class ArrayGeometry {
  public:
    ArrayGeometry(int n_h, int n_v, double delta_h, double delta_v, double wavelength);

    // Spacings given as fractions of the wavelength.
    static ArrayGeometry with_spacing_in_wavelengths(int n_h, int n_v, double delta_h_over_lambda,
                                                     double delta_v_over_lambda, double wavelength);

    int n_h() const noexcept { return n_h_; }
    int n_v() const noexcept { return n_v_; }
    int size() const noexcept { return n_h_ * n_v_; }
    double delta_h() const noexcept { return delta_h_; }
    double delta_v() const noexcept { return delta_v_; }
    double wavelength() const noexcept { return wavelength_; }

    bool is_ula() const noexcept { return n_h_ == 1 || n_v_ == 1; }

  private:
    int n_h_;
    int n_v_;
    double delta_h_;
    double delta_v_;
    double wavelength_;
};

/// Direction of arrival in radians; both angles in [-pi/2, pi/2].
struct AnglePair {
    double azimuth = 0.0;
    double elevation = 0.0;

    static AnglePair from_degrees(double azimuth_deg, double elevation_deg) {
        return {deg_to_rad(azimuth_deg), deg_to_rad(elevation_deg)};
    }
};

void validate(const AnglePair& angle);

struct AntennaIndex {
    int i = 0;  // horizontal, 0 <= i < n_h
    int j = 0;  // vertical, 0 <= j < n_v
};

AntennaIndex antenna_index(int n, const ArrayGeometry& geometry);

Eigen::Vector3d antenna_position(const ArrayGeometry& geometry, int n);

/// (2 pi / lambda) [cos(el) cos(az), cos(el) sin(az), sin(el)]
Eigen::Vector3d wave_vector(const AnglePair& angle, double wavelength);

/// Entries exp(j k(angle)^T u_n); unit modulus, first entry exactly 1.
CVector array_response(const ArrayGeometry& geometry, const AnglePair& angle);

}  // namespace mimo_estim
