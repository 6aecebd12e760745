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

#include "qfb/bench/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace qfb::bench {

using nlohmann::json;

void ReportTable::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::invalid_argument("report row width does not match the header");
    rows.push_back(std::move(row));
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string csv_cell(const Cell& c) {
    if (const auto* s = std::get_if<std::string>(&c)) return csv_escape(*s);
    if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    const double v = std::get<double>(c);
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    // Tiny magnitudes (e.g. MSE on variance scale) would print as zero at 4 decimals.
    if (v != 0.0 && std::fabs(v) < 1e-3) std::snprintf(buf, sizeof buf, "%.4e", v);
    return buf;
}

std::string seed_text(const ReportTable& t) {
    std::string s;
    for (const auto& [k, v] : t.seeds) s += (s.empty() ? "" : ";") + k + "=" + std::to_string(v);
    return s;
}

} // namespace

std::string render_csv(const ReportTable& t) {
    std::ostringstream o;
    for (const auto& c : t.columns) o << csv_escape(c) << ',';
    o << "config_hash,seed\n";
    const std::string seeds = csv_escape(seed_text(t));
    for (const auto& row : t.rows) {
        for (const auto& c : row) o << csv_cell(c) << ',';
        o << t.config_hash << ',' << seeds << '\n';
    }
    return o.str();
}

std::string render_json(const ReportTable& t) {
    json rows = json::array();
    for (const auto& row : t.rows) {
        json r = json::array();
        for (const auto& c : row) {
            if (const auto* s = std::get_if<std::string>(&c)) r.push_back(*s);
            else if (const auto* i = std::get_if<std::int64_t>(&c)) r.push_back(*i);
            else {
                const double v = std::get<double>(c);
                r.push_back(std::isfinite(v) ? json(v) : json(nullptr));
            }
        }
        rows.push_back(std::move(r));
    }
    json j{{"name", t.name}, {"config_hash", t.config_hash}, {"seeds", t.seeds}, {"columns", t.columns}, {"rows", rows}};
    return j.dump(2) + "\n";
}

ReportTable parse_json(const std::string& text) {
    const json j = json::parse(text);
    ReportTable t;
    t.name = j.at("name").get<std::string>();
    t.config_hash = j.at("config_hash").get<std::string>();
    t.seeds = j.at("seeds").get<std::map<std::string, std::uint64_t>>();
    t.columns = j.at("columns").get<std::vector<std::string>>();
    for (const auto& r : j.at("rows")) {
        std::vector<Cell> row;
        for (const auto& c : r) {
            if (c.is_string()) row.emplace_back(c.get<std::string>());
            else if (c.is_number_integer()) row.emplace_back(c.get<std::int64_t>());
            else if (c.is_null()) row.emplace_back(std::nan(""));
            else row.emplace_back(c.get<double>());
        }
        t.add_row(std::move(row));
    }
    return t;
}

std::filesystem::path emit_report(const ReportTable& t, ReportFormat fmt, const std::filesystem::path& dir) {
    if (t.rows.empty()) throw std::invalid_argument("emit_report: empty result table " + t.name);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    const auto path = dir / (t.name + (fmt == ReportFormat::csv ? ".csv" : ".json"));
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write report: " + path.string());
    out << (fmt == ReportFormat::csv ? render_csv(t) : render_json(t));
    if (!out) throw std::runtime_error("failed writing report: " + path.string());
    return path;
}

ReportTable load_report_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read report: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_json(ss.str());
}

} // namespace qfb::bench
