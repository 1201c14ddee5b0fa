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

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace mimo_estim {

/// RFC 4180 field: quoted when it contains a comma, quote or line break.
std::string csv_escape(std::string_view field);

/// A table of string cells written as CSV after a "# schema=..." line.
class CsvTable {
  public:
    CsvTable(std::string schema, std::vector<std::string> header);

    void add_row(std::vector<std::string> row);

    /// Stable sort on the first `key_columns` fields, compared as strings
    /// field by field (numeric fields compare numerically).
    void sort_rows(std::size_t key_columns);

    const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }
    const std::vector<std::string>& header() const noexcept { return header_; }
    const std::string& schema() const noexcept { return schema_; }

    void write(std::ostream& os) const;

  private:
    std::string schema_;
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Shortest %g form that reads back as exactly `v`.
std::string format_double(double v);

}  // namespace mimo_estim
