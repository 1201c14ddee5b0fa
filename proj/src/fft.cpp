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
#include "mimo_estim/fft.hpp"

#include <cmath>
#include <cstdint>

namespace mimo_estim {

bool is_power_of_two(Index n) noexcept { return n > 0 && (n & (n - 1)) == 0; }

namespace {

Index next_power_of_two(Index n) {
    Index p = 1;
    while (p < n)
        p <<= 1;
    return p;
}

}  // namespace

FftPlan::FftPlan(Index length) : n_(length) {
    if (length < 1)
        throw InvalidInput("FftPlan: length must be positive");
    padded_ = is_power_of_two(n_) ? n_ : next_power_of_two(2 * n_ - 1);

    twiddles_.resize(static_cast<std::size_t>(padded_ / 2));
    for (Index k = 0; k < padded_ / 2; ++k)
        twiddles_[static_cast<std::size_t>(k)] = std::polar(1.0, -2.0 * kPi * static_cast<double>(k) / padded_);

    bit_reverse_.resize(static_cast<std::size_t>(padded_));
    int bits = 0;
    while ((Index{1} << bits) < padded_)
        ++bits;
    for (Index i = 0; i < padded_; ++i) {
        Index r = 0;
        for (int b = 0; b < bits; ++b)
            if (i & (Index{1} << b))
                r |= Index{1} << (bits - 1 - b);
        bit_reverse_[static_cast<std::size_t>(i)] = r;
    }

    if (padded_ != n_) {
        chirp_.resize(n_);
        for (Index m = 0; m < n_; ++m) {
            // m^2 mod 2n keeps the phase argument small for long transforms.
            const auto sq = static_cast<std::int64_t>((m * m) % (2 * n_));
            chirp_[m] = std::polar(1.0, -kPi * static_cast<double>(sq) / static_cast<double>(n_));
        }
        CVector kernel = CVector::Zero(padded_);
        kernel[0] = std::conj(chirp_[0]);
        for (Index m = 1; m < n_; ++m) {
            kernel[m] = std::conj(chirp_[m]);
            kernel[padded_ - m] = std::conj(chirp_[m]);
        }
        radix2_in_place(kernel, false, nullptr);
        chirp_kernel_fft_ = std::move(kernel);
    }
}

CVector FftPlan::forward(const CVector& x, FlopCounter* counter) const { return transform(x, false, counter); }

CVector FftPlan::inverse(const CVector& x, FlopCounter* counter) const { return transform(x, true, counter); }

CVector FftPlan::transform(const CVector& x, bool inverse, FlopCounter* counter) const {
    if (x.size() != n_)
        throw InvalidInput("FftPlan: input length does not match plan");
    if (n_ == 1)
        return x;
    if (padded_ == n_) {
        CVector data = x;
        radix2_in_place(data, inverse, counter);
        return data;
    }
    if (!inverse)
        return bluestein(x, counter);
    // inverse(x) = conj(forward(conj(x)))
    return bluestein(x.conjugate(), counter).conjugate();
}

void FftPlan::radix2_in_place(CVector& data, bool inverse, FlopCounter* counter) const {
    const Index n = data.size();
    for (Index i = 0; i < n; ++i) {
        const Index r = bit_reverse_[static_cast<std::size_t>(i)];
        if (i < r)
            std::swap(data[i], data[r]);
    }
    std::uint64_t stages = 0;
    for (Index len = 2; len <= n; len <<= 1) {
        const Index half = len / 2;
        const Index step = padded_ / len;
        for (Index start = 0; start < n; start += len) {
            for (Index k = 0; k < half; ++k) {
                cd w = twiddles_[static_cast<std::size_t>(k * step)];
                if (inverse)
                    w = std::conj(w);
                const cd t = w * data[start + k + half];
                const cd u = data[start + k];
                data[start + k] = u + t;
                data[start + k + half] = u - t;
            }
        }
        ++stages;
    }
    const auto un = static_cast<std::uint64_t>(n);
    count(counter, stages * un / 2, stages * un);
}

CVector FftPlan::bluestein(const CVector& x, FlopCounter* counter) const {
    CVector work = CVector::Zero(padded_);
    for (Index m = 0; m < n_; ++m)
        work[m] = x[m] * chirp_[m];
    count(counter, static_cast<std::uint64_t>(n_), 0);

    radix2_in_place(work, false, counter);
    work = work.cwiseProduct(chirp_kernel_fft_);
    count(counter, static_cast<std::uint64_t>(padded_), 0);
    radix2_in_place(work, true, counter);

    CVector out(n_);
    const double scale = 1.0 / static_cast<double>(padded_);
    for (Index k = 0; k < n_; ++k)
        out[k] = work[k] * (chirp_[k] * scale);
    count(counter, static_cast<std::uint64_t>(n_), 0);
    return out;
}

}  // namespace mimo_estim
