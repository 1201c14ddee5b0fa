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
#include <optional>
#include <ostream>
#include <vector>

#include "mimo_estim/estimators.hpp"
#include "mimo_estim/flop_counter.hpp"

namespace mimo_estim {

enum class Phase { BuildQ, BuildA, Apply };

const char* to_string(Phase phase);

/// Leading-order operation counts of one scheme, per phase. A phase the
/// scheme does not have is zero.
struct PhaseCounts {
    double build_q = 0.0;  // observation covariance estimate
    double build_a = 0.0;  // estimator matrix
    double apply = 0.0;    // one estimate A y

    double get(Phase phase) const;
};

/// Unit-constant orders with N = n_h n_v and M observations:
///   mmse  (M N^2, N^2 min(n_h, n_v) + N, N^2)
///   kba   (M N^2, max(n_h, n_v)^3, (n_h + n_v) N)
///   dft   (N^2, N log2 N, N log2 N)       linear arrays only
///   ls, los (0, 0, N);  iso (0, 0, N^2)
/// The +N in the MMSE build is the R = Q - I/gamma subtraction.
PhaseCounts theoretical_counts(EstimatorKind scheme, int n_h, int n_v, int m_obs);

/// Phases whose count is modelled rather than measured by an instrumented kernel.
bool is_modeled(EstimatorKind scheme, Phase phase);

struct WorkloadDescriptor {
    EstimatorKind scheme = EstimatorKind::Kba;
    int n_h = 4;
    int n_v = 4;
    int m_obs = 0;
    std::uint64_t seed = 1;
};

struct MeasuredCounts {
    std::optional<FlopCounter> build_q;
    std::optional<FlopCounter> apply;
};

/// Runs the counter-instrumented kernels of the workload on a random
/// correlation matrix: the sample covariance (when m_obs > 0) and one
/// estimator application.
MeasuredCounts measured_counts(const WorkloadDescriptor& workload);

struct ComplexityRow {
    EstimatorKind scheme = EstimatorKind::Mmse;
    int n_h = 0;
    int n_v = 0;
    int m_obs = 0;
    Phase phase = Phase::Apply;
    double theoretical = 0.0;
    std::optional<std::uint64_t> measured_multiplies;
    std::optional<std::uint64_t> measured_adds;
    bool modeled = false;
};

struct CrossoverOptions {
    int m_obs = 50;
    int measure_limit = 1024;  // measured columns only for N up to this size
};

/// Per-phase counts for mmse and kba on every n_h in `n_h_grid` (each must
/// divide n), plus dft on linear shapes.
std::vector<ComplexityRow> crossover_report(int n, const std::vector<int>& n_h_grid,
                                            const CrossoverOptions& options = {});

/// All divisors of n in increasing order.
std::vector<int> divisors(int n);

}  // namespace mimo_estim
