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

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace mimo_estim {

using cd = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kPi = 3.14159265358979323846;

inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

// Input that violates an operation's precondition.
class InvalidInput : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Input that is well-formed but admits no answer (e.g. a zero pivot).
class DegenerateInput : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

// An iterative or adaptive routine that did not reach its tolerance.
class ConvergenceError : public std::runtime_error {
  public:
    ConvergenceError(const std::string& what, double worst_change, Index worst_row = -1, Index worst_col = -1)
        : std::runtime_error(what), worst_change_(worst_change), worst_row_(worst_row), worst_col_(worst_col) {}

    double worst_change() const noexcept { return worst_change_; }
    Index worst_row() const noexcept { return worst_row_; }
    Index worst_col() const noexcept { return worst_col_; }

  private:
    double worst_change_;
    Index worst_row_;
    Index worst_col_;
};

// (A + A^H) / 2
inline CMatrix hermitian_part(const CMatrix& a) { return (a + a.adjoint()) * 0.5; }

inline double relative_hermitian_defect(const CMatrix& a) {
    const double norm = a.norm();
    if (norm == 0.0)
        return 0.0;
    return (a - a.adjoint()).norm() / norm;
}

}  // namespace mimo_estim
