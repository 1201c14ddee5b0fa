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

#include <cstdint>

#include "mimo_estim/types.hpp"

namespace mimo_estim {

/// Complex multiply and add tallies for one measured region.
///
/// The counted kernels take a nullable `FlopCounter*`; passing nullptr turns
/// the accounting off. A real-by-complex scaling is charged as one multiply.
struct FlopCounter {
    std::uint64_t multiplies = 0;
    std::uint64_t additions = 0;

    void reset() noexcept { multiplies = additions = 0; }

    void add(std::uint64_t mul, std::uint64_t adds) noexcept {
        multiplies += mul;
        additions += adds;
    }
};

inline void count(FlopCounter* counter, std::uint64_t mul, std::uint64_t adds) {
    if (counter)
        counter->add(mul, adds);
}

/// C = A * B with (rows * inner * cols) multiplies charged.
inline CMatrix counted_product(const CMatrix& a, const CMatrix& b, FlopCounter* counter) {
    const auto rows = static_cast<std::uint64_t>(a.rows());
    const auto inner = static_cast<std::uint64_t>(a.cols());
    const auto cols = static_cast<std::uint64_t>(b.cols());
    count(counter, rows * inner * cols, inner > 0 ? rows * (inner - 1) * cols : 0);
    return a * b;
}

/// Dense y = A x.
inline CVector counted_matvec(const CMatrix& a, const CVector& x, FlopCounter* counter) {
    const auto rows = static_cast<std::uint64_t>(a.rows());
    const auto cols = static_cast<std::uint64_t>(a.cols());
    count(counter, rows * cols, cols > 0 ? rows * (cols - 1) : 0);
    return a * x;
}

/// (B (x) C) b for square B (m x m) and C (n x n) without forming the
/// Kronecker product: reshape b row-major into Z (m x n), return vec(B Z C^T).
/// Costs (m + n) m n multiplies instead of m^2 n^2.
CVector kron_matvec(const CMatrix& outer, const CMatrix& inner, const CVector& b, FlopCounter* counter);

}  // namespace mimo_estim
