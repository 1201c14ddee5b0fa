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

#include <vector>

#include "mimo_estim/flop_counter.hpp"
#include "mimo_estim/types.hpp"

namespace mimo_estim {

/// Unnormalized discrete Fourier transform of a fixed length.
///
///   forward:  X[n] = sum_m x[m] exp(-j 2 pi m n / N)
///   inverse:  x[m] = sum_n X[n] exp(+j 2 pi m n / N)   (no 1/N)
///
/// Power-of-two lengths use an iterative radix-2 kernel; other lengths go
/// through Bluestein's chirp-z identity on a padded power-of-two transform.
/// Plans are immutable after construction and may be shared across threads.
class FftPlan {
  public:
    explicit FftPlan(Index length);

    Index size() const noexcept { return n_; }

    CVector forward(const CVector& x, FlopCounter* counter = nullptr) const;
    CVector inverse(const CVector& x, FlopCounter* counter = nullptr) const;

  private:
    CVector transform(const CVector& x, bool inverse, FlopCounter* counter) const;
    void radix2_in_place(CVector& data, bool inverse, FlopCounter* counter) const;
    CVector bluestein(const CVector& x, FlopCounter* counter) const;

    Index n_;
    Index padded_;                 // power-of-two working length
    std::vector<cd> twiddles_;     // exp(-j 2 pi k / padded_), k < padded_/2
    std::vector<Index> bit_reverse_;
    CVector chirp_;                // exp(-j pi m^2 / n), Bluestein only
    CVector chirp_kernel_fft_;     // FFT of the conjugate chirp, Bluestein only
};

bool is_power_of_two(Index n) noexcept;

}  // namespace mimo_estim
