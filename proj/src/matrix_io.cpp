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
#include "mimo_estim/matrix_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace mimo_estim {

namespace {

static_assert(std::endian::native == std::endian::little, "matrix files assume a little-endian host");

void put_u32(std::ostream& os, std::uint32_t v) { os.write(reinterpret_cast<const char*>(&v), sizeof v); }

std::uint32_t get_u32(std::istream& is) {
    std::uint32_t v = 0;
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    return v;
}

}  // namespace

void write_matrix_file(const std::filesystem::path& path, const CMatrix& m, std::uint32_t flags) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    put_u32(os, kMatrixFileMagic);
    put_u32(os, static_cast<std::uint32_t>(m.cols()));
    put_u32(os, static_cast<std::uint32_t>(m.rows()));
    put_u32(os, flags);
    std::vector<float> row(static_cast<std::size_t>(2 * m.cols()));
    for (Index r = 0; r < m.rows(); ++r) {
        for (Index c = 0; c < m.cols(); ++c) {
            row[static_cast<std::size_t>(2 * c)] = static_cast<float>(m(r, c).real());
            row[static_cast<std::size_t>(2 * c + 1)] = static_cast<float>(m(r, c).imag());
        }
        os.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(row.size() * sizeof(float)));
    }
    if (!os)
        throw std::runtime_error("write failed for " + path.string());
}

MatrixFile read_matrix_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw std::runtime_error("cannot open " + path.string());
    if (get_u32(is) != kMatrixFileMagic)
        throw InvalidInput(path.string() + ": not a matrix file (bad magic)");
    const std::uint32_t cols = get_u32(is);
    const std::uint32_t rows = get_u32(is);
    MatrixFile out;
    out.flags = get_u32(is);
    if (!is)
        throw InvalidInput(path.string() + ": truncated header");
    out.entries.resize(rows, cols);
    std::vector<float> row(static_cast<std::size_t>(2) * cols);
    for (std::uint32_t r = 0; r < rows; ++r) {
        is.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row.size() * sizeof(float)));
        if (!is)
            throw InvalidInput(path.string() + ": truncated data");
        for (std::uint32_t c = 0; c < cols; ++c)
            out.entries(r, c) = cd(row[2 * c], row[2 * c + 1]);
    }
    return out;
}

void write_correlation_file(const std::filesystem::path& path, const CorrelationMatrix& r) {
    write_matrix_file(path, r.entries(), static_cast<std::uint32_t>(r.provenance()) + 1U);
}

CorrelationMatrix read_correlation_file(const std::filesystem::path& path) {
    const MatrixFile f = read_matrix_file(path);
    const std::uint32_t tag = f.flags & 0xFFU;
    if (tag < 1 || tag > 4)
        throw InvalidInput(path.string() + ": missing provenance tag");
    return CorrelationMatrix(f.entries, static_cast<Provenance>(tag - 1));
}

void write_matrix_csv(const std::filesystem::path& path, const CMatrix& m) {
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    os.precision(17);
    os << "row,col,re,im\n";
    for (Index r = 0; r < m.rows(); ++r)
        for (Index c = 0; c < m.cols(); ++c)
            os << r << ',' << c << ',' << m(r, c).real() << ',' << m(r, c).imag() << '\n';
}

CMatrix read_matrix_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is)
        throw std::runtime_error("cannot open " + path.string());
    std::string line;
    std::getline(is, line);
    if (line != "row,col,re,im")
        throw InvalidInput(path.string() + ": expected header row,col,re,im");
    struct Entry {
        Index r, c;
        double re, im;
    };
    std::vector<Entry> entries;
    Index rows = 0, cols = 0;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        std::istringstream ls(line);
        Entry e{};
        char comma = 0;
        if (!(ls >> e.r >> comma >> e.c >> comma >> e.re >> comma >> e.im) || e.r < 0 || e.c < 0)
            throw InvalidInput(path.string() + ": malformed line '" + line + "'");
        rows = std::max(rows, e.r + 1);
        cols = std::max(cols, e.c + 1);
        entries.push_back(e);
    }
    CMatrix m = CMatrix::Zero(rows, cols);
    for (const Entry& e : entries)
        m(e.r, e.c) = cd(e.re, e.im);
    return m;
}

}  // namespace mimo_estim
