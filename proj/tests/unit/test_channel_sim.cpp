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
#include <doctest.h>

#include <cmath>
#include <limits>

#include "mimo_estim/channel_sim.hpp"
#include "test_util.hpp"

using namespace mimo_estim;

TEST_CASE("dB conversions and pilot SNR") {
    CHECK(dbm_to_watt(30.0) == doctest::Approx(1.0));
    CHECK(dbm_to_watt(20.0) == doctest::Approx(0.1));
    CHECK(watt_to_dbm(1e-3) == doctest::Approx(0.0));
    CHECK(linear_to_db(db_to_linear(-7.5)) == doctest::Approx(-7.5));
    const PilotConfig p = PilotConfig::from_dbm(10, 20.0, -87.0);
    CHECK(linear_to_db(p.gamma()) == doctest::Approx(117.0).epsilon(1e-12));
    CHECK(p.scale() == doctest::Approx(10.0 * std::sqrt(0.1)));
    CHECK(std::isinf(PilotConfig{1, 1.0, 0.0}.gamma()));
    CHECK_THROWS_AS(PilotConfig::from_dbm(0, 20.0, -87.0), InvalidInput);
    CHECK_THROWS_AS(validate(PilotConfig{1, 0.0, 1.0}), InvalidInput);
    CHECK_THROWS_AS(validate(PilotConfig{1, 1.0, -1.0}), InvalidInput);
}

TEST_CASE("channel factor examples") {
    const ChannelSampler id = channel_factor(CMatrix::Identity(5, 5));
    CHECK(id.rank() == 5);
    CHECK(test::rel_err(CMatrix(id.factor * id.factor.adjoint()), CMatrix::Identity(5, 5)) < 1e-14);
    CHECK(test::rel_err(CMatrix(id.factor.adjoint() * id.factor), CMatrix::Identity(5, 5)) < 1e-14);

    const ArrayGeometry g(4, 2, 0.025, 0.025, 0.1);
    const CVector a = array_response(g, {0.4, -0.3});
    const ChannelSampler one = channel_factor(los_correlation(g, {0.4, -0.3}, 2.0));
    REQUIRE(one.rank() == 1);
    const CVector col = one.factor.col(0);
    const cd phase = col[0] / std::abs(col[0]);
    CHECK(test::rel_err(CVector(col / phase), CVector(std::sqrt(2.0) * a)) < 1e-12);

    RngStream rng = test::test_rng(20);
    for (int trial = 0; trial < 10; ++trial) {
        const CMatrix r = test::random_psd(8, rng, trial % 2 ? 3 : 8);
        const ChannelSampler s = channel_factor(r);
        CHECK(test::rel_err(CMatrix(s.factor * s.factor.adjoint()), r) <= 1e-10);
        if (trial % 2)
            CHECK(s.rank() == 3);
    }
}

TEST_CASE("channel factor rejects indefinite and non-Hermitian input") {
    CMatrix r = CMatrix::Identity(3, 3);
    r(2, 2) = -0.5;
    CHECK_THROWS_AS(channel_factor(r), InvalidInput);
    CMatrix ns = CMatrix::Identity(3, 3);
    ns(0, 1) = 0.5;
    CHECK_THROWS_AS(channel_factor(ns), InvalidInput);
    CHECK(channel_factor(CMatrix::Zero(3, 3)).rank() == 0);
}

TEST_CASE("sampling is deterministic and zero factors give zero channels") {
    RngStream g = test::test_rng(21);
    const ChannelSampler s = channel_factor(test::random_psd(6, g));
    RngStream a(77, StreamPurpose::Channel, {3, 4});
    RngStream b(77, StreamPurpose::Channel, {3, 4});
    RngStream c(77, StreamPurpose::Channel, {3, 5});
    const CVector ha = sample_channel(s, a);
    CHECK((ha - sample_channel(s, b)).norm() == 0.0);
    CHECK((ha - sample_channel(s, c)).norm() > 0.0);

    const ChannelSampler zero{CMatrix::Zero(6, 2)};
    CHECK(sample_channel(zero, a).norm() == 0.0);
    CHECK(sample_channel(channel_factor(CMatrix::Zero(4, 4)), a).norm() == 0.0);
}

TEST_CASE("sample covariance of channel draws matches R") {
    RngStream g = test::test_rng(22);
    const CMatrix r = test::random_psd(4, g);
    const ChannelSampler s = channel_factor(r);
    RngStream rng = test::test_rng(23);
    constexpr int kDraws = 100000;
    CMatrix samples(4, kDraws);
    for (int d = 0; d < kDraws; ++d)
        samples.col(d) = sample_channel(s, rng);
    test::check_within_3se(test::outer_moments(samples, 1.0), r);
}

TEST_CASE("pilot observation") {
    RngStream rng = test::test_rng(24);
    const CVector h = test::random_vector(6, rng);
    const PilotConfig noiseless{10, 0.1, 0.0};
    CHECK((observe_pilot(h, noiseless, rng) - noiseless.scale() * h).norm() == 0.0);

    const PilotConfig p{3, 0.5, 0.2};
    constexpr int kDraws = 100000;
    const CVector zero = CVector::Zero(4);
    RVector sum = RVector::Zero(4), sq = RVector::Zero(4);
    for (int d = 0; d < kDraws; ++d) {
        const CVector y = observe_pilot(zero, p, rng);
        for (Index n = 0; n < 4; ++n) {
            const double v = std::norm(y[n]);
            sum[n] += v;
            sq[n] += v * v;
        }
    }
    const double expected = p.tau_p * p.sigma2_w;
    for (Index n = 0; n < 4; ++n) {
        const double mean = sum[n] / kDraws;
        const double se = std::sqrt((sq[n] / kDraws - mean * mean) / kDraws);
        CHECK(std::abs(mean - expected) <= 3.0 * se);
    }
}

TEST_CASE("Q matrix") {
    CHECK(test::rel_err(q_matrix(CMatrix::Identity(3, 3), 2.0), CMatrix(1.5 * CMatrix::Identity(3, 3))) < 1e-16);
    RngStream g = test::test_rng(25);
    const CMatrix r = test::random_psd(5, g);
    CHECK((q_matrix(r, std::numeric_limits<double>::infinity()) - r).norm() == 0.0);
    CHECK_THROWS_AS(q_matrix(r, 0.0), InvalidInput);
}

TEST_CASE("observation covariance matches Q") {
    RngStream g = test::test_rng(26);
    const CMatrix r = test::random_psd(8, g);
    const PilotConfig p{4, 0.25, 0.5};  // gamma = 2
    const ChannelSampler s = channel_factor(r);
    RngStream rng = test::test_rng(27);
    constexpr int kDraws = 100000;
    CMatrix samples(8, kDraws);
    for (int d = 0; d < kDraws; ++d)
        samples.col(d) = observe_pilot(sample_channel(s, rng), p, rng);
    test::check_within_3se(test::outer_moments(samples, 1.0 / (p.rho_w * p.tau_p * p.tau_p)), q_matrix(r, p.gamma()));
}
