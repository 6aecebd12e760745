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

#include "qfb/marketdata.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "qfb/error.hpp"

namespace qfb {

// ---------------------------------------------------------------------------
// Date helpers
// ---------------------------------------------------------------------------

namespace {

// Howard Hinnant's days_from_civil / civil_from_days.
long days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const long era = (y >= 0 ? y : y - 399) / 400;
    const long yoe = y - era * 400;
    const long doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const long doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + doe - 719468;
}

int days_in_month(int y, int m) {
    static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    return m == 2 && leap ? 29 : kDays[m - 1];
}

bool parse_int(std::string_view s, int& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

} // namespace

Date Date::parse(std::string_view text) {
    Date d;
    if (text.size() != 10 || text[4] != '-' || text[7] != '-' ||
        !parse_int(text.substr(0, 4), d.year) || !parse_int(text.substr(5, 2), d.month) ||
        !parse_int(text.substr(8, 2), d.day) || d.month < 1 || d.month > 12 || d.day < 1 ||
        d.day > days_in_month(d.year, d.month))
        throw DataError("malformed date: '" + std::string(text) + "'");
    return d;
}

std::string Date::iso() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
}

long Date::serial() const { return days_from_civil(year, month, day); }

Date Date::from_serial(long z) {
    z += 719468;
    const long era = (z >= 0 ? z : z - 146096) / 146097;
    const long doe = z - era * 146097;
    const long yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const long doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const long mp = (5 * doy + 2) / 153;
    const int d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    const int m = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
    const int y = static_cast<int>(yoe + era * 400 + (m <= 2));
    return Date{y, m, d};
}

int Date::weekday() const {
    // 1970-01-01 was a Thursday.
    const long s = serial();
    return static_cast<int>(((s % 7) + 7 + 3) % 7);
}

int session_close_utc(std::string_view ticker) {
    std::string t(ticker);
    if (!t.empty() && t.front() == '^') t.erase(0, 1);
    static const std::map<std::string, int, std::less<>> kCloses = {
        {"N225", 6 * 60},       {"AORD", 6 * 60},        {"HSI", 8 * 60},
        {"GDAXI", 16 * 60 + 30}, {"FTSE", 16 * 60 + 30}, {"DJI", kUsCloseUtcMinute},
        {"NYA", kUsCloseUtcMinute}, {"GSPC", kUsCloseUtcMinute},
    };
    if (auto it = kCloses.find(t); it != kCloses.end()) return it->second;
    return kUsCloseUtcMinute;
}

namespace marketdata {

PriceField parse_price_field(const std::string& name) {
    if (name == "close") return PriceField::close;
    if (name == "adj_close") return PriceField::adj_close;
    throw ConfigError("unknown price field '" + name + "' (expected close | adj_close)");
}

bool PriceBar::valid() const {
    for (double v : {open, high, low, close, adj_close})
        if (!std::isfinite(v) || v <= 0.0) return false;
    if (!std::isfinite(volume) || volume < 0.0) return false;
    return high >= std::max(open, close) && low <= std::min(open, close);
}

std::vector<double> PriceSeries::prices() const {
    std::vector<double> out;
    out.reserve(bars.size());
    for (const auto& b : bars) out.push_back(b.price(field));
    return out;
}

std::vector<Date> PriceSeries::dates() const {
    std::vector<Date> out;
    out.reserve(bars.size());
    for (const auto& b : bars) out.push_back(b.date);
    return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        while (!cell.empty() && cell.front() == ' ') cell.erase(0, 1);
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

} // namespace

LoadResult load_price_csv(const std::filesystem::path& path, PriceField field,
                          std::string ticker) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot read price file: " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw DataError("empty price file: " + path.string());
    if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);
    const auto header = split_csv_line(line);

    static constexpr const char* kColumns[] = {"date",  "open",      "high",  "low",
                                               "close", "adj_close", "volume"};
    int col[7];
    for (int k = 0; k < 7; ++k) {
        auto it = std::find(header.begin(), header.end(), kColumns[k]);
        if (it == header.end())
            throw DataError("price file " + path.string() + " lacks column '" + kColumns[k] + "'");
        col[k] = static_cast<int>(it - header.begin());
    }

    LoadResult result;
    result.series.ticker = ticker.empty() ? path.stem().string() : std::move(ticker);
    result.series.field = field;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv_line(line);
        PriceBar bar;
        bool ok = true;
        try {
            if (static_cast<int>(cells.size()) <= *std::max_element(col, col + 7))
                throw DataError("short row");
            bar.date = Date::parse(cells[col[0]]);
        } catch (const DataError&) {
            ok = false;
        }
        double* fields[] = {&bar.open, &bar.high, &bar.low, &bar.close, &bar.adj_close,
                            &bar.volume};
        for (int k = 1; ok && k < 7; ++k) ok = parse_double(cells[col[k]], *fields[k - 1]);
        if (!ok || !bar.valid()) {
            ++result.dropped_rows;
            continue;
        }
        result.series.bars.push_back(bar);
    }

    auto& bars = result.series.bars;
    if (bars.empty()) throw DataError("no usable rows in " + path.string());
    std::stable_sort(bars.begin(), bars.end(),
                     [](const PriceBar& a, const PriceBar& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < bars.size(); ++i)
        if (bars[i].date == bars[i - 1].date)
            throw DataError("duplicate date " + bars[i].date.iso() + " in " + path.string());
    return result;
}

std::vector<PriceSeries> align_calendars(const std::vector<PriceSeries>& series) {
    if (series.empty()) throw std::invalid_argument("align_calendars: no series");
    std::set<Date> common;
    for (const auto& b : series.front().bars) common.insert(b.date);
    for (std::size_t s = 1; s < series.size(); ++s) {
        std::set<Date> next;
        for (const auto& b : series[s].bars)
            if (common.count(b.date)) next.insert(b.date);
        common = std::move(next);
    }
    if (common.empty()) throw DataError("calendars have no dates in common");

    std::vector<PriceSeries> out;
    out.reserve(series.size());
    for (const auto& s : series) {
        PriceSeries aligned{s.ticker, {}, s.field};
        for (const auto& b : s.bars)
            if (common.count(b.date)) aligned.bars.push_back(b);
        out.push_back(std::move(aligned));
    }
    return out;
}

ReturnSeries compute_returns(const PriceSeries& series, ReturnKind kind) {
    return compute_returns(series, kind, series.field);
}

ReturnSeries compute_returns(const PriceSeries& series, ReturnKind kind, PriceField field) {
    if (series.bars.size() < 2)
        throw DataError("compute_returns: need at least 2 bars for " + series.ticker);
    ReturnSeries out;
    out.kind = kind;
    out.dates.reserve(series.bars.size() - 1);
    out.values.reserve(series.bars.size() - 1);
    for (std::size_t t = 1; t < series.bars.size(); ++t) {
        const double p0 = series.bars[t - 1].price(field);
        const double p1 = series.bars[t].price(field);
        if (!(p0 > 0.0) || !(p1 > 0.0))
            throw DataError("compute_returns: non-positive price in " + series.ticker);
        out.dates.push_back(series.bars[t].date);
        out.values.push_back(kind == ReturnKind::log ? std::log(p1 / p0) : p1 / p0 - 1.0);
    }
    return out;
}

void write_price_csv(const std::filesystem::path& path, const PriceSeries& series) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << "date,open,high,low,close,adj_close,volume\n";
    out.precision(17);
    for (const auto& b : series.bars)
        out << b.date.iso() << ',' << b.open << ',' << b.high << ',' << b.low << ',' << b.close
            << ',' << b.adj_close << ',' << b.volume << '\n';
}

} // namespace marketdata
} // namespace qfb
