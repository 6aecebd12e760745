// Copyright 2026 The qfbench Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace qfb::bench {

using Cell = std::variant<std::string, double, std::int64_t>;

struct ReportTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::string config_hash;
    std::map<std::string, std::uint64_t> seeds;

    void add_row(std::vector<Cell> row);
};

enum class ReportFormat { csv, json };

/// Header plus one line per row; doubles at 4 decimals, NaN as "nan". config_hash and
/// seed are appended as the last two columns.
std::string render_csv(const ReportTable& t);
/// Full-precision JSON; NaN and infinities are written as null.
std::string render_json(const ReportTable& t);
ReportTable parse_json(const std::string& text);

/// Writes <dir>/<name>.<ext>. Throws std::runtime_error when the path is not writable.
std::filesystem::path emit_report(const ReportTable& t, ReportFormat fmt, const std::filesystem::path& dir);
ReportTable load_report_json(const std::filesystem::path& path);

} // namespace qfb::bench
