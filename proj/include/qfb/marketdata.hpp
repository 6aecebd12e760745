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

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "qfb/date.hpp"

namespace qfb::marketdata {

enum class PriceField { close, adj_close };
enum class ReturnKind { log, simple };

PriceField parse_price_field(const std::string& name);

struct PriceBar {
    Date date;
    double open = 0.0;
    double high = 0.0;
    double low = 0.0;
    double close = 0.0;
    double adj_close = 0.0;
    double volume = 0.0;

    double price(PriceField field) const { return field == PriceField::close ? close : adj_close; }
    /// high >= max(open, close), low <= min(open, close), prices finite and positive.
    bool valid() const;
};

struct PriceSeries {
    std::string ticker;
    std::vector<PriceBar> bars;
    PriceField field = PriceField::adj_close;

    std::size_t size() const { return bars.size(); }
    std::vector<double> prices() const;
    std::vector<Date> dates() const;
};

struct ReturnSeries {
    std::vector<Date> dates;
    std::vector<double> values;
    ReturnKind kind = ReturnKind::log;

    std::size_t size() const { return values.size(); }
};

struct LoadResult {
    PriceSeries series;
    std::size_t dropped_rows = 0;
};

/// Reads a daily bar CSV with header date,open,high,low,close,adj_close,volume
/// (column order free, extra columns ignored). Rows with missing, non-numeric or
/// inconsistent fields are dropped and counted. The ticker defaults to the file stem.
/// Throws DataError on unreadable files, missing columns, duplicate dates, or an
/// empty result.
LoadResult load_price_csv(const std::filesystem::path& path, PriceField field,
                          std::string ticker = {});

/// Restricts every series to the intersection of all date sets.
std::vector<PriceSeries> align_calendars(const std::vector<PriceSeries>& series);

/// r_t = ln(P_t/P_{t-1}) or P_t/P_{t-1} - 1, dated at t.
ReturnSeries compute_returns(const PriceSeries& series, ReturnKind kind);
ReturnSeries compute_returns(const PriceSeries& series, ReturnKind kind, PriceField field);

/// Writes bars in the loader's schema.
void write_price_csv(const std::filesystem::path& path, const PriceSeries& series);

} // namespace qfb::marketdata
