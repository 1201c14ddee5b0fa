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
#include <initializer_list>
#include <random>

#include "mimo_estim/types.hpp"

namespace mimo_estim {

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Purposes used as the first stream key, so streams for different uses
/// never collide.
enum class StreamPurpose : std::uint64_t {
    Placement = 1,
    Channel = 2,
    Noise = 3,
    Observation = 4,
    Test = 5,
    Generic = 6,
};

/// Named random stream: a 64-bit Mersenne Twister seeded from a hash of the
/// root seed and a list of keys (purpose, drop, UE, block, ...). A stream is
/// owned by exactly one worker; identical keys replay identical draws.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) : engine_(mix(seed, keys)) {}

    RngStream(std::uint64_t seed, StreamPurpose purpose, std::initializer_list<std::uint64_t> keys = {})
        : engine_(mix(splitmix64(seed) ^ static_cast<std::uint64_t>(purpose), keys)) {}

    /// Uniform on [lo, hi).
    double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

    double normal() { return normal_(engine_); }

    /// Circularly-symmetric CN(0, 1): real and imaginary parts N(0, 1/2).
    cd complex_normal() {
        constexpr double s = 0.70710678118654752440;
        const double re = normal_(engine_);
        const double im = normal_(engine_);
        return {s * re, s * im};
    }

    CVector complex_normal_vector(Index n) {
        CVector z(n);
        for (Index k = 0; k < n; ++k)
            z[k] = complex_normal();
        return z;
    }

    std::mt19937_64& engine() noexcept { return engine_; }

  private:
    static std::uint64_t mix(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
        std::uint64_t h = splitmix64(seed);
        for (std::uint64_t k : keys)
            h = splitmix64(h ^ splitmix64(k + 0x632be59bd9b4e019ULL));
        return h;
    }

    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace mimo_estim
