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
#include "mimo_estim/csv_writer.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace mimo_estim {

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos)
        return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

CsvTable::CsvTable(std::string schema, std::vector<std::string> header)
    : schema_(std::move(schema)), header_(std::move(header)) {}

void CsvTable::add_row(std::vector<std::string> row) {
    if (row.size() != header_.size())
        throw std::invalid_argument("CsvTable::add_row: expected " + std::to_string(header_.size()) + " fields");
    rows_.push_back(std::move(row));
}

namespace {

bool parse_number(const std::string& s, double& out) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

bool field_less(const std::string& a, const std::string& b) {
    double x = 0.0, y = 0.0;
    if (parse_number(a, x) && parse_number(b, y))
        return x < y;
    return a < b;
}

}  // namespace

void CsvTable::sort_rows(std::size_t key_columns) {
    const std::size_t keys = std::min(key_columns, header_.size());
    std::stable_sort(rows_.begin(), rows_.end(), [keys](const auto& a, const auto& b) {
        for (std::size_t k = 0; k < keys; ++k) {
            if (field_less(a[k], b[k]))
                return true;
            if (field_less(b[k], a[k]))
                return false;
        }
        return false;
    });
}

void CsvTable::write(std::ostream& os) const {
    os << "# schema=" << schema_ << '\n';
    auto line = [&os](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i)
                os << ',';
            os << csv_escape(fields[i]);
        }
        os << '\n';
    };
    line(header_);
    for (const auto& row : rows_)
        line(row);
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    double back = 0.0;
    // Prefer the shortest representation that round-trips.
    for (int p = 6; p <= 17; ++p) {
        char shorter[32];
        std::snprintf(shorter, sizeof shorter, "%.*g", p, v);
        if (std::sscanf(shorter, "%lf", &back) == 1 && back == v)
            return shorter;
    }
    return buf;
}

}  // namespace mimo_estim
