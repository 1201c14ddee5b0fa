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
#include <string>
#include <vector>

#include "mimo_estim/estimators.hpp"
#include "test_util.hpp"

using namespace mimo_estim;

namespace {

ArrayGeometry table_one(int n_h, int n_v) { return ArrayGeometry::with_spacing_in_wavelengths(n_h, n_v, 0.25, 0.25, 0.1); }

// Pilot with tau_p = 1, rho = 1 and the requested gamma.
PilotConfig unit_pilot(double gamma) { return PilotConfig{1, 1.0, std::isinf(gamma) ? 0.0 : 1.0 / gamma}; }

CMatrix dense_mmse(const CMatrix& r, const PilotConfig& p) {
    const CMatrix q = q_matrix(r, p.gamma());
    return CMatrix(r * q.inverse()) / p.scale();
}

ScatteringProfile profile(double az_deg, double el_deg, double s_az_deg, double s_el_deg) {
    ScatteringProfile p;
    p.mean_azimuth = deg_to_rad(az_deg);
    p.mean_elevation = deg_to_rad(el_deg);
    p.spread_azimuth = deg_to_rad(s_az_deg);
    p.spread_elevation = deg_to_rad(s_el_deg);
    return p;
}

std::vector<LinearEstimator> all_kinds(const CMatrix& r, const ArrayGeometry& g, const PilotConfig& p,
                                       const AnglePair& nominal) {
    std::vector<LinearEstimator> out;
    for (EstimatorKind k : {EstimatorKind::Mmse, EstimatorKind::Ls, EstimatorKind::Los, EstimatorKind::Iso,
                            EstimatorKind::Kba, EstimatorKind::Nkp, EstimatorKind::KbaDft}) {
        out.push_back(build_estimator(k, r, g, p, nominal));
    }
    if (g.is_ula())
        out.push_back(build_estimator(EstimatorKind::Dft, r, g, p, nominal));
    return out;
}

}  // namespace

TEST_CASE("estimator names round trip") {
    for (const char* name : {"mmse", "ls", "los", "iso", "kba", "nkp", "dft", "kba-dft"})
        CHECK(std::string(to_string(parse_estimator_kind(name))) == name);
    CHECK_THROWS_AS(parse_estimator_kind("wiener"), InvalidInput);
}

TEST_CASE("spectral filter") {
    CHECK(spectral_filter(1.0, 10.0) == doctest::Approx(1.0 / 1.1));
    CHECK(spectral_filter(0.0, 10.0) == 0.0);
    CHECK(spectral_filter(-0.1, 10.0) == 0.0);
    CHECK(spectral_filter(-0.5, 10.0) == doctest::Approx(1.25));
    CHECK(spectral_filter(2.0, std::numeric_limits<double>::infinity()) == 1.0);
}

TEST_CASE("closed-form NMSE values") {
    RngStream rng = test::test_rng(30);
    const CMatrix r_any = test::random_psd(6, rng);
    const PilotConfig p10 = unit_pilot(10.0);
    CHECK(analytic_nmse(CMatrix::Zero(6, 6), r_any, p10) == doctest::Approx(1.0).epsilon(1e-15));

    for (double beta : {1.0, 0.3, 4.0}) {
        for (double gamma : {10.0, 0.5, 1e4}) {
            const PilotConfig p = PilotConfig{3, 0.2, 3 * 0.2 / gamma};
            const CMatrix r = beta * CMatrix::Identity(8, 8);
            const LinearEstimator mmse = build_mmse(r, p);
            const LinearEstimator ls = build_ls(8, p);
            CHECK(std::abs(analytic_nmse(mmse.materialize(), r, p) - 1.0 / (1.0 + beta * gamma)) <= 1e-12);
            CHECK(std::abs(analytic_nmse(ls.materialize(), r, p) - 1.0 / (beta * gamma)) <= 1e-12);
            const CMatrix expected = (beta * gamma / (1.0 + beta * gamma) / p.scale()) * CMatrix::Identity(8, 8);
            CHECK(test::rel_err(mmse.materialize(), expected) < 1e-13);
        }
    }
    const CMatrix eye = CMatrix::Identity(4, 4);
    CHECK(std::abs(analytic_nmse(build_mmse(eye, p10).materialize(), eye, p10) - 1.0 / 11.0) <= 1e-12);
    CHECK(std::abs(analytic_nmse(build_ls(4, p10).materialize(), eye, p10) - 0.1) <= 1e-12);
    CHECK(analytic_nmse(build_ls(6, p10).materialize(), r_any, p10) ==
          doctest::Approx(6.0 / (10.0 * r_any.trace().real())).epsilon(1e-12));
    CHECK_THROWS_AS(analytic_nmse(eye, CMatrix::Zero(4, 4), p10), DegenerateInput);
}

TEST_CASE("MMSE matches a dense oracle") {
    RngStream rng = test::test_rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        const CMatrix r = test::random_psd(8, rng, 2 + trial % 6);
        const PilotConfig p{2, 0.7, 0.7 * 2 / std::pow(10.0, rng.uniform(-1.0, 3.0))};
        CHECK(test::rel_err(build_mmse(r, p).materialize(), dense_mmse(r, p)) <= 1e-10);
    }
}

TEST_CASE("LS, LoS and ISO estimators") {
    RngStream rng = test::test_rng(32);
    const PilotConfig p{10, 0.1, 1e-3};
    const CVector y = test::random_vector(5, rng);
    CHECK(test::rel_err(build_ls(5, p).apply(y), CVector(y / p.scale())) < 1e-15);

    const LinearEstimator los1 = build_los(table_one(1, 1), {0.2, 0.1}, 1.0, p);
    const double g = p.gamma();
    CHECK(std::abs(los1.materialize()(0, 0) - cd(g / (1.0 + g) / p.scale(), 0.0)) < 1e-15);

    // A LoS estimator aimed at the wrong direction is worse than MMSE.
    const ArrayGeometry g8 = table_one(4, 2);
    const CMatrix r = los_correlation(g8, {0.5, -0.4}, 1.0).entries();
    const PilotConfig p10 = unit_pilot(10.0);
    const double wrong = analytic_nmse(build_los(g8, {-0.3, 0.2}, 1.0, p10).materialize(), r, p10);
    const double right = analytic_nmse(build_los(g8, {0.5, -0.4}, 1.0, p10).materialize(), r, p10);
    const double mmse = analytic_nmse(build_mmse(r, p10).materialize(), r, p10);
    CHECK(wrong > mmse + 0.1);
    CHECK(right == doctest::Approx(mmse).epsilon(1e-9));

    const ArrayGeometry half = ArrayGeometry::with_spacing_in_wavelengths(8, 1, 0.5, 0.5, 0.1);
    CHECK(test::rel_err(build_iso(half, p).materialize(), build_ls(8, p).materialize()) < 1e-12);
    const LinearEstimator iso = build_iso(table_one(16, 16), p);
    const auto& state = std::get<LinearEstimator::Iso>(iso.state());
    CHECK(state.basis.cols() < 256);
    CHECK(state.basis.cols() > 0);
    MESSAGE("ISO subspace dimension at 16x16, lambda/4: " << state.basis.cols());
}

TEST_CASE("KBA equals MMSE when R is a Kronecker product") {
    RngStream rng = test::test_rng(33);
    for (int trial = 0; trial < 5; ++trial) {
        const CMatrix x = test::random_psd(4, rng);
        const CMatrix y = test::random_psd(3, rng);
        const CMatrix r = kronecker_product(y, x);
        const PilotConfig p = unit_pilot(std::pow(10.0, rng.uniform(-1.0, 2.0)));
        const CMatrix a_mmse = build_mmse(r, p).materialize();
        const LinearEstimator kba = build_kba(kba_factors(r, 4, 3), p);
        CHECK(test::rel_err(kba.materialize(), a_mmse) <= 1e-9);
        const LinearEstimator nkp = build_nkp_estimator(nkp_factors(r, 4, 3), p);
        CHECK(nkp.kind() == EstimatorKind::Nkp);
        CHECK(test::rel_err(nkp.materialize(), kba.materialize()) <= 1e-9);
        // Random PSD factors: the dense Kronecker oracle of the eigen-filter.
        const KroneckerFactors f{x, y, KroneckerMethod::Kba};
        CHECK(test::rel_err(build_kba(f, p).materialize(), dense_mmse(f.kronecker(), p)) <= 1e-10);
    }
    const CMatrix ula = test::random_psd(6, rng);
    const PilotConfig p = unit_pilot(5.0);
    CHECK(test::rel_err(build_kba(kba_factors(ula, 6, 1), p).materialize(), build_mmse(ula, p).materialize()) <= 1e-9);
}

TEST_CASE("KBA on synthesized UPA without elevation spread equals MMSE") {
    const ArrayGeometry g = table_one(8, 8);
    const CMatrix r = synthesize_correlation(g, profile(20, -30, 10, 0)).entries();
    const PilotConfig p = unit_pilot(10.0);
    const CMatrix a_mmse = build_mmse(r, p).materialize();
    CHECK(test::rel_err(build_kba(kba_factors(r, 8, 8), p).materialize(), a_mmse) <= 1e-9);
}

TEST_CASE("KBA with identity factors and no noise is a scaled identity") {
    const PilotConfig p{2, 0.25, 0.0};
    const KroneckerFactors f{CMatrix::Identity(3, 3), CMatrix::Identity(2, 2), KroneckerMethod::Kba};
    for (KroneckerApply mode : {KroneckerApply::Factored, KroneckerApply::Dense}) {
        const LinearEstimator e = build_kba(f, p, {mode, NegativeEigenvalues::Magnitude});
        CHECK(test::rel_err(e.materialize(), CMatrix(CMatrix::Identity(6, 6) / p.scale())) < 1e-15);
    }
}

TEST_CASE("negative eigenvalue handling in the Kronecker filter") {
    CMatrix r_h = CMatrix::Zero(2, 2);
    r_h(0, 0) = 1.0;
    r_h(1, 1) = -0.5;
    const KroneckerFactors f{r_h, CMatrix::Identity(1, 1), KroneckerMethod::Kba};
    const PilotConfig p = unit_pilot(10.0);
    auto gain = [&](NegativeEigenvalues mode) {
        const CMatrix a = build_kba(f, p, {KroneckerApply::Factored, mode}).materialize();
        CHECK(std::abs(a(0, 1)) < 1e-15);
        CHECK(a(0, 0).real() == doctest::Approx(1.0 / 1.1));
        return a(1, 1).real();
    };
    CHECK(gain(NegativeEigenvalues::Keep) == doctest::Approx(1.25));
    CHECK(gain(NegativeEigenvalues::Clip) == 0.0);
    CHECK(gain(NegativeEigenvalues::Magnitude) == doctest::Approx(0.5 / 0.6));
}

TEST_CASE("DFT estimator") {
    const PilotConfig p = unit_pilot(10.0);
    CVector white = CVector::Zero(8);
    white[0] = 1.0;
    const LinearEstimator dft = build_dft(white, p);
    CHECK(test::rel_err(dft.materialize(), CMatrix((10.0 / 11.0) * CMatrix::Identity(8, 8))) < 1e-13);

    const ArrayGeometry g = table_one(12, 1);
    const CMatrix r = synthesize_correlation(g, profile(30, -20, 10, 10)).entries();
    const LinearEstimator e = build_estimator(EstimatorKind::Dft, r, g, p);
    const auto& s = std::get<LinearEstimator::Dft>(e.state());
    const CirculantSpectrum spec = circulant_approximation(r.row(0).transpose());
    for (Index k = 0; k < 12; ++k) {
        const double lambda = spec.eigenvalues[k].real();
        CHECK(s.filter[k].imag() == 0.0);
        if (lambda >= 0.0) {
            CHECK(s.filter[k].real() >= 0.0);
            CHECK(s.filter[k].real() * 12.0 < 1.0);
        }
    }
    // The circulant estimator is the MMSE estimator of the circulant matrix.
    CHECK(test::rel_err(e.materialize(), dense_mmse(hermitian_part(spec.matrix()), p)) <= 1e-10);
    CHECK_THROWS_AS(build_estimator(EstimatorKind::Dft, CMatrix::Identity(16, 16), table_one(4, 4), p), InvalidInput);
}

TEST_CASE("apply equals materialize and is linear for every kind") {
    RngStream rng = test::test_rng(34);
    struct Case {
        ArrayGeometry g;
        bool indefinite;
    };
    const std::vector<Case> cases{{table_one(4, 4), false}, {table_one(16, 1), false}, {table_one(3, 5), false},
                                  {table_one(4, 4), true},  {table_one(10, 1), false}};
    for (const Case& c : cases) {
        const Index n = c.g.size();
        CMatrix r = test::random_psd(n, rng);
        if (c.indefinite)
            r -= 0.3 * CMatrix::Identity(n, n);
        const PilotConfig p{2, 0.5, 0.5 * 2 / 20.0};
        for (const LinearEstimator& e : all_kinds(r, c.g, p, {0.1, -0.2})) {
            CAPTURE(to_string(e.kind()));
            const CMatrix a = e.materialize();
            for (int t = 0; t < 5; ++t) {
                const CVector y1 = test::random_vector(n, rng);
                const CVector y2 = test::random_vector(n, rng);
                const cd alpha(rng.normal(), rng.normal());
                CHECK(test::rel_err(e.apply(y1), CVector(a * y1)) <= 1e-10);
                CHECK(test::rel_err(e.apply(alpha * y1 + y2), CVector(alpha * e.apply(y1) + e.apply(y2))) <= 1e-10);
            }
        }
    }
    CHECK_THROWS_AS(build_ls(4, PilotConfig{}).apply(CVector::Zero(5)), InvalidInput);
}

TEST_CASE("Kronecker fast apply: dense oracle and multiply count") {
    RngStream rng = test::test_rng(35);
    const CMatrix x = test::random_hermitian(8, rng);
    const CMatrix y = test::random_hermitian(8, rng);
    const KroneckerFactors f{x, y, KroneckerMethod::Kba};
    const LinearEstimator e = build_kba(f, unit_pilot(3.0), {KroneckerApply::Factored, NegativeEigenvalues::Keep});
    const CMatrix a = e.materialize();
    for (int t = 0; t < 20; ++t) {
        const CVector v = test::random_vector(64, rng);
        FlopCounter counter;
        const CVector out = e.apply(v, &counter);
        CHECK(test::rel_err(out, CVector(a * v)) <= 1e-11);
        CHECK(counter.multiplies <= 2u * (8 + 8) * 64 + 64);
    }
    // Auto picks the dense path for linear arrays.
    const KroneckerFactors ula{test::random_psd(16, rng), CMatrix::Identity(1, 1), KroneckerMethod::Kba};
    CHECK(std::get<LinearEstimator::Kronecker>(build_kba(ula, unit_pilot(3.0)).state()).use_dense);
    CHECK_FALSE(std::get<LinearEstimator::Kronecker>(build_kba(f, unit_pilot(3.0)).state()).use_dense);
}

TEST_CASE("MMSE is optimal among the linear estimators") {
    RngStream rng = test::test_rng(36);
    const std::vector<ArrayGeometry> shapes{table_one(2, 2), table_one(4, 4), table_one(8, 1)};
    for (int trial = 0; trial < 30; ++trial) {
        const ArrayGeometry& g = shapes[trial % shapes.size()];
        const CMatrix r = test::random_psd(g.size(), rng, 1 + trial % g.size());
        const PilotConfig p = unit_pilot(std::pow(10.0, rng.uniform(-1.0, 3.0)));
        const double best = analytic_nmse(build_mmse(r, p).materialize(), r, p);
        for (const LinearEstimator& e : all_kinds(r, g, p, {0.2, 0.1})) {
            CAPTURE(to_string(e.kind()));
            CHECK(best <= analytic_nmse(e.materialize(), r, p) + 1e-12);
        }
    }
}

TEST_CASE("MMSE is a stationary minimum") {
    RngStream rng = test::test_rng(37);
    for (int trial = 0; trial < 10; ++trial) {
        const CMatrix r = test::random_psd(6, rng);
        const PilotConfig p = unit_pilot(std::pow(10.0, rng.uniform(-1.0, 2.0)));
        const CMatrix a = build_mmse(r, p).materialize();
        const double base = analytic_nmse(a, r, p);
        const CMatrix dir = test::random_matrix(6, 6, rng);
        for (double eps : {1e-3, -1e-3})
            CHECK(analytic_nmse(a + eps * dir, r, p) >= base);
    }
}

TEST_CASE("empirical NMSE") {
    const CMatrix r = synthesize_correlation(table_one(4, 4), profile(10, -20, 10, 10)).entries();
    const ChannelSampler s = channel_factor(r);

    const PilotConfig noiseless{3, 0.4, 0.0};
    RngStream rng0 = test::test_rng(39);
    CHECK(empirical_nmse(build_ls(16, noiseless), s, noiseless, 50, rng0).value < 1e-28);

    const PilotConfig p = unit_pilot(10.0);
    const LinearEstimator mmse = build_mmse(r, p);
    const double analytic = analytic_nmse(mmse.materialize(), r, p);
    RngStream rng1 = test::test_rng(40);
    const EmpiricalNmse mc = empirical_nmse(mmse, s, p, 10000, rng1);
    CHECK(mc.trials == 10000);
    CHECK(mc.std_error > 0.0);
    CHECK(std::abs(mc.value - analytic) <= 3.0 * mc.std_error);

    RngStream a = test::test_rng(41);
    RngStream b = test::test_rng(41);
    CHECK(empirical_nmse(mmse, s, p, 100, a).value == empirical_nmse(mmse, s, p, 100, b).value);
    CHECK_THROWS_AS(empirical_nmse(mmse, s, p, 0, a), InvalidInput);
}

TEST_CASE("KBA beats NKP in estimator-matrix error on synthesized correlations") {
    const ArrayGeometry g = table_one(8, 8);
    const PilotConfig p = unit_pilot(10.0);
    for (double s_el : {10.0, 20.0, 30.0, 40.0}) {
        const CMatrix r = synthesize_correlation(g, profile(0, 0, 10, s_el)).entries();
        const CMatrix a_ref = build_mmse(r, p).materialize();
        const double kba = nsae_a(a_ref, build_kba(kba_factors(r, 8, 8), p).materialize());
        const double nkp = nsae_a(a_ref, build_nkp_estimator(nkp_factors(r, 8, 8), p).materialize());
        CAPTURE(s_el);
        CHECK(kba <= nkp);
    }
}
