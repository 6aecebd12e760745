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

#include <compare>
#include <string>
#include <string_view>

namespace qfb {

/// Calendar day used as an opaque ordered key. No timezone arithmetic.
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    /// Parses YYYY-MM-DD. Throws DataError on malformed input.
    static Date parse(std::string_view text);

    std::string iso() const;

    /// Days since 1970-01-01 (proleptic Gregorian).
    long serial() const;
    static Date from_serial(long days);

    /// Monday = 0 ... Sunday = 6.
    int weekday() const;

    auto operator<=>(const Date&) const = default;
};

/// Instant at which a value becomes known: a date plus a session close in UTC minutes.
struct InfoTime {
    Date date;
    int minute_utc = 0;

    auto operator<=>(const InfoTime&) const = default;
};

inline constexpr int kUsCloseUtcMinute = 21 * 60;

/// Session close (UTC minutes) for the indices used by the cross-asset regimes.
/// Unknown tickers are treated as closing with the U.S. cash session.
int session_close_utc(std::string_view ticker);

} // namespace qfb
