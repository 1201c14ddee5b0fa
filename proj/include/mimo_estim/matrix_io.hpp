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
#include <filesystem>
#include <string>

#include "mimo_estim/correlation_models.hpp"
#include "mimo_estim/types.hpp"

namespace mimo_estim {

/// "MEMX" as a little-endian u32.
inline constexpr std::uint32_t kMatrixFileMagic = 0x584D454DU;

/// Binary matrix file: a 16-byte header of little-endian u32 fields
/// (magic, columns, rows, flags) followed by rows * columns complex64
/// values in row-major order, each as (re, im) float32.
/// The low byte of `flags` carries the provenance tag plus one.
struct MatrixFile {
    CMatrix entries;
    std::uint32_t flags = 0;
};

void write_matrix_file(const std::filesystem::path& path, const CMatrix& m, std::uint32_t flags = 0);
MatrixFile read_matrix_file(const std::filesystem::path& path);

void write_correlation_file(const std::filesystem::path& path, const CorrelationMatrix& r);
CorrelationMatrix read_correlation_file(const std::filesystem::path& path);

/// Debug CSV with columns row,col,re,im (0-based indices).
void write_matrix_csv(const std::filesystem::path& path, const CMatrix& m);
CMatrix read_matrix_csv(const std::filesystem::path& path);

}  // namespace mimo_estim
