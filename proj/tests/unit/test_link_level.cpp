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
#include <cstdlib>
#include <string>
#include <vector>

#include "mimo_estim/link_level.hpp"
#include "test_util.hpp"

using namespace mimo_estim;

namespace {

UplinkScenario small_scenario(int k_ues, int blocks) {
    UplinkScenario s;
    s.geometry = ArrayGeometry::with_spacing_in_wavelengths(4, 4, 0.25, 0.25, 0.1);
    s.k_ues = k_ues;
    s.pilot = PilotConfig::from_dbm(10, 20.0, -87.0);
    s.combiners = {CombinerKind::Rzf, CombinerKind::Mr};
    s.policies = {{EstimatorKind::Mmse, CovariancePolicy::Perfect, 1.0},
                  {EstimatorKind::Ls, CovariancePolicy::Perfect, 1.0}};
    s.num_drops = 6;
    s.blocks_per_drop = blocks;
    s.m_observations = 20;
    s.seed = 9;
    return s;
}

}  // namespace

TEST_CASE("RZF combiner") {
    const CMatrix one = CMatrix::Ones(1, 1);
    CHECK(std::abs(rzf_combiner(one, 1.0)(0, 0) - cd(0.5, 0.0)) < 1e-15);

    RngStream rng = test::test_rng(70);
    const CMatrix h = test::random_matrix(8, 3, rng);
    const double c = 0.7;
    const CMatrix v = rzf_combiner(h, c);
    const CMatrix gram = h * h.adjoint() + c * CMatrix::Identity(8, 8);
    for (Index k = 0; k < 3; ++k) {
        const CVector res = gram * v.col(k) - h.col(k);
        CHECK(res.norm() <= 1e-9 * h.col(k).norm());
    }
    const CMatrix dense = gram.lu().solve(h);
    CHECK(test::rel_err(v, dense) < 1e-12);

    // Large regularization tends to a scaled MR combiner.
    const double big = 1e8;
    const CMatrix v_big = rzf_combiner(h, big) * big;
    CHECK(test::rel_err(v_big, h) < 1e-6);
    for (Index k = 0; k < 3; ++k) {
        const double cosine = std::abs(v_big.col(k).dot(h.col(k))) / (v_big.col(k).norm() * h.col(k).norm());
        CHECK(cosine == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK_THROWS_AS(rzf_combiner(h, 0.0), InvalidInput);
}

TEST_CASE("MR combiner") {
    RngStream rng = test::test_rng(71);
    const CMatrix h = test::random_matrix(5, 2, rng);
    CHECK((mr_combiner(h) - h).norm() == 0.0);
    CHECK(mr_combiner(CMatrix::Zero(5, 2)).norm() == 0.0);
}

TEST_CASE("UatF SINR closed forms") {
    RngStream rng = test::test_rng(72);
    const CVector h = test::random_vector(6, rng);
    UatfAccumulator acc(1);
    acc.add(h, h);
    const double noise = 0.01;
    CHECK(uatf_sinr(acc.stats(0), 0, noise) == doctest::Approx(h.squaredNorm() / noise).epsilon(1e-12));

    CVector orth = test::random_vector(6, rng);
    orth -= h * (h.dot(orth) / h.squaredNorm());
    UatfAccumulator zero(1);
    zero.add(orth, h);
    CHECK(uatf_sinr(zero.stats(0), 0, noise) == doctest::Approx(0.0).epsilon(1e-20));
    CHECK(uatf_sinr(zero.stats(0), 0, noise) < 1e-20);

    UatfAccumulator empty(1);
    CHECK_THROWS_AS(empty.stats(0), DegenerateInput);
    UatfAccumulator noiseless(1);
    noiseless.add(h, h);
    CHECK_THROWS_AS(uatf_sinr(noiseless.stats(0), 0, 0.0), DegenerateInput);
}

TEST_CASE("UatF SINR matches an exhaustive two-point expectation") {
    RngStream rng = test::test_rng(73);
    // Two equally likely realizations of (H, V) for K = 2; accumulating each
    // once gives the exact expectations.
    const CMatrix h0 = test::random_matrix(3, 2, rng), h1 = test::random_matrix(3, 2, rng);
    const CMatrix v0 = test::random_matrix(3, 2, rng), v1 = test::random_matrix(3, 2, rng);
    UatfAccumulator acc(2);
    acc.add(v0, h0);
    acc.add(v1, h1);
    const double noise = 0.3;
    for (int k = 0; k < 2; ++k) {
        const cd signal = 0.5 * (v0.col(k).dot(h0.col(k)) + v1.col(k).dot(h1.col(k)));
        double cross = 0.0;
        for (int i = 0; i < 2; ++i)
            cross += 0.5 * (std::norm(v0.col(k).dot(h0.col(i))) + std::norm(v1.col(k).dot(h1.col(i))));
        const double power = 0.5 * (v0.col(k).squaredNorm() + v1.col(k).squaredNorm());
        const double expected = std::norm(signal) / (cross - std::norm(signal) + noise * power);
        const SinrTerms t = uatf_sinr_terms(acc.stats(k), k, noise);
        CHECK(t.sinr == doctest::Approx(expected).epsilon(1e-12));
        CHECK(t.numerator == doctest::Approx(std::norm(signal)).epsilon(1e-12));
        CHECK(t.noise == doctest::Approx(noise * power).epsilon(1e-12));
    }
}

TEST_CASE("UatF SINR is invariant to combiner scaling") {
    RngStream rng = test::test_rng(74);
    UatfAccumulator a(3), b(3);
    const cd scale(-2.5, 0.7);
    for (int t = 0; t < 20; ++t) {
        const CMatrix h = test::random_matrix(4, 3, rng);
        const CMatrix v = h + 0.3 * test::random_matrix(4, 3, rng);
        a.add(v, h);
        b.add(scale * v, h);
    }
    for (int k = 0; k < 3; ++k) {
        const double sa = uatf_sinr(a.stats(k), k, 0.2);
        CHECK(std::abs(uatf_sinr(b.stats(k), k, 0.2) - sa) <= 1e-12 * sa);
    }
}

TEST_CASE("UatF spectral efficiency") {
    CHECK(uatf_se(0.0, 10, 200) == 0.0);
    CHECK(uatf_se(1.0, 10, 200) == doctest::Approx(0.95).epsilon(1e-15));
    CHECK(uatf_se(3.0, 10, 200) == doctest::Approx(1.9).epsilon(1e-15));
    CHECK_THROWS_AS(uatf_se(1.0, 20, 10), InvalidInput);
    CHECK_THROWS_AS(uatf_se(-1.0, 1, 10), InvalidInput);
}

TEST_CASE("policy labels and names") {
    CHECK(EstimatorPolicy{EstimatorKind::Mmse, CovariancePolicy::Perfect, 1.0}.label() == "mmse/perfect");
    CHECK(EstimatorPolicy{EstimatorKind::Kba, CovariancePolicy::Structured, 1.0}.label() == "kba/structured");
    CHECK(EstimatorPolicy{EstimatorKind::Mmse, CovariancePolicy::Sample, 0.8}.label() == "mmse/sample(eta=0.8)");
    CHECK(parse_combiner_kind("mr") == CombinerKind::Mr);
    CHECK(parse_covariance_policy("structured") == CovariancePolicy::Structured);
    CHECK_THROWS_AS(parse_combiner_kind("zf"), InvalidInput);
    CHECK_THROWS_AS(parse_covariance_policy("oracle"), InvalidInput);
}

TEST_CASE("UE placement law") {
    UePlacement pl;
    RngStream rng = test::test_rng(75);
    for (int t = 0; t < 1000; ++t) {
        const UeDrop ue = draw_ue(pl, rng);
        CHECK(ue.distance_m >= 5.0);
        CHECK(ue.distance_m <= 100.0);
        CHECK(std::abs(ue.profile.mean_azimuth) <= deg_to_rad(60.0));
        CHECK(ue.profile.mean_elevation <= deg_to_rad(-5.7));
        CHECK(ue.profile.mean_elevation >= deg_to_rad(-63.5));
        CHECK(ue.profile.gain_beta == doctest::Approx(path_loss(ue.distance_m)));
    }
}

TEST_CASE("scenario validation") {
    UplinkScenario s = small_scenario(2, 10);
    s.k_ues = 11;
    CHECK_THROWS_AS(validate(s), InvalidInput);
    s = small_scenario(2, 10);
    s.tau_c = 5;
    CHECK_THROWS_AS(validate(s), InvalidInput);
    s = small_scenario(2, 10);
    s.policies.push_back({EstimatorKind::Kba, CovariancePolicy::Structured, 1.0});
    s.m_observations = 0;
    CHECK_THROWS_AS(validate(s), InvalidInput);
}

TEST_CASE("uplink experiment invariants") {
    const UplinkScenario s = small_scenario(3, 40);
    const UplinkResult res = run_uplink_experiment(s);
    REQUIRE(res.results.size() == 4);
    for (const SeResult& r : res.results) {
        double sum = 0.0;
        for (double v : r.per_ue_se) {
            CHECK(v >= 0.0);
            sum += v;
        }
        CHECK(r.sum_se == doctest::Approx(sum).epsilon(1e-14));
        REQUIRE(r.drop_ue_se.size() == 6);
        for (std::size_t d = 0; d < 6; ++d) {
            double max_sinr = 0.0;
            for (const SinrTerms& t : r.drop_sinr_terms[d])
                max_sinr = std::max(max_sinr, t.sinr);
            for (double se : r.drop_ue_se[d]) {
                CHECK(se >= 0.0);
                CHECK(se <= 0.95 * std::log2(1.0 + max_sinr) + 1e-12);
            }
        }
    }
    const EstimatorPolicy mmse{EstimatorKind::Mmse, CovariancePolicy::Perfect, 1.0};
    const EstimatorPolicy ls{EstimatorKind::Ls, CovariancePolicy::Perfect, 1.0};
    CHECK(res.find(mmse, CombinerKind::Rzf).sum_se >= res.find(ls, CombinerKind::Rzf).sum_se);
    CHECK_THROWS_AS(res.find({EstimatorKind::Iso, CovariancePolicy::Perfect, 1.0}, CombinerKind::Rzf), InvalidInput);
}

TEST_CASE("uplink results do not depend on the worker count") {
    UplinkScenario s = small_scenario(2, 20);
    s.policies.push_back({EstimatorKind::Kba, CovariancePolicy::Structured, 1.0});
    setenv("MIMO_ESTIM_THREADS", "1", 1);
    const UplinkResult one = run_uplink_experiment(s);
    setenv("MIMO_ESTIM_THREADS", "3", 1);
    const UplinkResult three = run_uplink_experiment(s);
    unsetenv("MIMO_ESTIM_THREADS");
    REQUIRE(one.results.size() == three.results.size());
    for (std::size_t i = 0; i < one.results.size(); ++i) {
        CHECK(one.results[i].sum_se == three.results[i].sum_se);
        CHECK(one.results[i].drop_sum_se == three.results[i].drop_sum_se);
    }
}

TEST_CASE("MMSE beats LS for a single UE at N = 64") {
    UplinkScenario s = small_scenario(1, 100);
    s.geometry = ArrayGeometry::with_spacing_in_wavelengths(8, 8, 0.25, 0.25, 0.1);
    s.combiners = {CombinerKind::Rzf};
    s.num_drops = 10;
    const UplinkResult res = run_uplink_experiment(s);
    const PairedDifference d = paired_difference(res.results[0], res.results[1]);
    CHECK(d.mean >= -3.0 * d.std_error);
    CHECK(d.mean > 0.0);
}

TEST_CASE("doubling the blocks per drop moves sum-SE by less than 3 standard errors") {
    const UplinkResult a = run_uplink_experiment(small_scenario(3, 100));
    const UplinkResult b = run_uplink_experiment(small_scenario(3, 200));
    for (std::size_t i = 0; i < a.results.size(); ++i) {
        const double se = std::hypot(a.results[i].sum_se_stderr, b.results[i].sum_se_stderr);
        CAPTURE(a.results[i].policy.label());
        CHECK(std::abs(a.results[i].sum_se - b.results[i].sum_se) < 3.0 * se);
    }
}

TEST_CASE("paired difference") {
    SeResult a, b;
    a.drop_sum_se = {1.0, 2.0, 3.0};
    b.drop_sum_se = {0.5, 1.5, 2.0};
    const PairedDifference d = paired_difference(a, b);
    CHECK(d.mean == doctest::Approx(2.0 / 3.0));
    CHECK(d.std_error == doctest::Approx(std::sqrt((1.0 / 36 + 1.0 / 36 + 4.0 / 36) / 2.0 / 3.0)));
    b.drop_sum_se.pop_back();
    CHECK_THROWS_AS(paired_difference(a, b), InvalidInput);
}

TEST_CASE("the gap to perfect statistics shrinks as M grows") {
    const EstimatorPolicy perfect{EstimatorKind::Mmse, CovariancePolicy::Perfect, 1.0};
    const EstimatorPolicy learned{EstimatorKind::Kba, CovariancePolicy::Structured, 1.0};
    std::vector<double> gaps;
    for (int m : {20, 50, 100}) {
        UplinkScenario s = small_scenario(3, 100);
        s.geometry = ArrayGeometry::with_spacing_in_wavelengths(8, 8, 0.25, 0.25, 0.1);
        s.combiners = {CombinerKind::Rzf};
        s.policies = {perfect, learned};
        s.num_drops = 12;
        s.m_observations = m;
        const UplinkResult res = run_uplink_experiment(s);
        gaps.push_back(paired_difference(res.results[0], res.results[1]).mean);
        MESSAGE("M = " << m << ": perfect - learned sum-SE gap " << gaps.back());
    }
    CHECK(gaps[0] > gaps[1]);
    CHECK(gaps[1] > gaps[2]);
}
