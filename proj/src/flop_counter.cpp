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
#include "mimo_estim/flop_counter.hpp"

#include <cstdint>

namespace mimo_estim {

CVector kron_matvec(const CMatrix& outer, const CMatrix& inner, const CVector& b, FlopCounter* counter) {
    const Index m = outer.rows();
    const Index n = inner.rows();
    if (outer.cols() != m || inner.cols() != n)
        throw InvalidInput("kron_matvec: factors must be square");
    if (b.size() != m * n)
        throw InvalidInput("kron_matvec: vector length must equal the product of the factor sizes");
    // Row-major reshape: Z(a, p) = b[a n + p].
    const Eigen::Map<const Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> z(b.data(), m, n);
    Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> out = outer * z * inner.transpose();
    const auto um = static_cast<std::uint64_t>(m);
    const auto un = static_cast<std::uint64_t>(n);
    count(counter, um * um * un + um * un * un, (um - 1) * um * un + um * un * (un - 1));
    return Eigen::Map<const CVector>(out.data(), m * n);
}

}  // namespace mimo_estim
