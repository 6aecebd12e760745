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

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "qfb/error.hpp"
#include "qfb/marketdata.hpp"

using namespace qfb;
using namespace qfb::marketdata;

namespace {

std::filesystem::path write_tmp(const std::string& name, const std::string& body) {
    const auto dir = std::filesystem::temp_directory_path() / "qfb_md_test";
    std::filesystem::create_directories(dir);
    const auto p = dir / name;
    std::ofstream(p) << body;
    return p;
}

PriceSeries series(std::initializer_list<std::pair<Date, double>> xs) {
    PriceSeries s;
    for (auto [d, p] : xs) s.bars.push_back({d, p, p, p, p, p, 1});
    return s;
}

} // namespace

TEST_CASE("csv loader parses a row") {
    const auto p = write_tmp("ok.csv", "date,open,high,low,close,adj_close,volume\n2020-01-02,100,101,99,100.5,100.5,1000\n");
    const auto r = load_price_csv(p, PriceField::close);
    REQUIRE(r.series.size() == 1);
    CHECK(r.series.bars[0].close == 100.5);
    CHECK(r.series.bars[0].date == Date{2020, 1, 2});
    CHECK(r.series.ticker == "ok");
}

TEST_CASE("csv loader drops incomplete rows and rejects duplicates") {
    const auto p = write_tmp("gap.csv", "date,open,high,low,close,adj_close,volume\n"
                                        "2020-01-02,100,101,99,100.5,100.5,1000\n"
                                        "2020-01-03,100,101,99,100.5,,1000\n"
                                        "2020-01-06,100,101,99,100.7,100.7,1000\n");
    const auto r = load_price_csv(p, PriceField::adj_close);
    CHECK(r.series.size() == 2);
    CHECK(r.dropped_rows == 1);

    const auto d = write_tmp("dup.csv", "date,open,high,low,close,adj_close,volume\n"
                                        "2020-01-02,100,101,99,100.5,100.5,1000\n"
                                        "2020-01-02,100,101,99,100.5,100.5,1000\n");
    CHECK_THROWS_AS(load_price_csv(d, PriceField::close), DataError);
    CHECK_THROWS_AS(load_price_csv("/nonexistent/file.csv", PriceField::close), DataError);
}

TEST_CASE("column order is free and extra columns are ignored") {
    const auto p = write_tmp("perm.csv", "volume,extra,adj_close,close,low,high,open,date\n1000,x,100.5,100.4,99,101,100,2020-01-02\n");
    const auto r = load_price_csv(p, PriceField::adj_close);
    CHECK(r.series.bars[0].price(PriceField::adj_close) == 100.5);
    CHECK(r.series.bars[0].price(PriceField::close) == 100.4);
}

TEST_CASE("calendar alignment") {
    const Date d1{2020, 1, 1}, d2{2020, 1, 2}, d3{2020, 1, 3}, d4{2020, 1, 6};
    const auto a = series({{d1, 1}, {d2, 2}, {d3, 3}});
    const auto b = series({{d2, 1}, {d3, 2}, {d4, 3}});
    const auto out = align_calendars({a, b});
    REQUIRE(out.size() == 2);
    CHECK(out[0].dates() == std::vector<Date>{d2, d3});
    CHECK(out[1].dates() == std::vector<Date>{d2, d3});
    CHECK(align_calendars({a})[0].dates() == a.dates());
    CHECK_THROWS_AS(align_calendars({series({{d1, 1}}), series({{d4, 1}})}), DataError);
}

TEST_CASE("returns") {
    const Date d1{2020, 1, 1}, d2{2020, 1, 2}, d3{2020, 1, 3};
    const auto r = compute_returns(series({{d1, 100}, {d2, 110}}), ReturnKind::log);
    REQUIRE(r.size() == 1);
    CHECK(r.values[0] == doctest::Approx(std::log(1.1)));
    CHECK(r.dates[0] == d2);
    const auto e = compute_returns(series({{d1, 100}, {d2, 100 * std::exp(1.0)}}), ReturnKind::log);
    CHECK(e.values[0] == doctest::Approx(1.0).epsilon(1e-14));
    for (auto kind : {ReturnKind::log, ReturnKind::simple}) {
        const auto c = compute_returns(series({{d1, 5}, {d2, 5}, {d3, 5}}), kind);
        CHECK(c.values == std::vector<double>{0.0, 0.0});
    }
    CHECK(compute_returns(series({{d1, 100}, {d2, 110}}), ReturnKind::simple).values[0] == doctest::Approx(0.1));
}

TEST_CASE("writer round-trips through the loader") {
    auto s = series({{{2020, 1, 2}, 100.125}, {{2020, 1, 3}, 101.5}});
    s.ticker = "RT";
    const auto p = std::filesystem::temp_directory_path() / "qfb_md_test" / "RT.csv";
    write_price_csv(p, s);
    const auto back = load_price_csv(p, PriceField::adj_close).series;
    CHECK(back.prices() == s.prices());
    CHECK(back.dates() == s.dates());
}

TEST_CASE("dates") {
    CHECK(Date::parse("2024-02-29").iso() == "2024-02-29");
    CHECK(Date{1970, 1, 1}.serial() == 0);
    CHECK(Date::from_serial(Date{2021, 3, 14}.serial()) == Date{2021, 3, 14});
    CHECK(Date{2024, 1, 1}.weekday() == 0);
    CHECK_THROWS_AS(Date::parse("2024/01/01"), DataError);
    CHECK(session_close_utc("N225") < session_close_utc("FTSE"));
    CHECK(session_close_utc("FTSE") < session_close_utc("GSPC"));
}
