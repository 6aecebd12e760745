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
#include <sstream>

#include "qfb/bench/config.hpp"
#include "qfb/bench/report.hpp"
#include "qfb/bench/studies.hpp"
#include "qfb/bench/synth.hpp"
#include "qfb/error.hpp"

using namespace qfb;
using namespace qfb::bench;

namespace {

std::filesystem::path data_dir() {
    static const auto dir = [] {
        const auto d = std::filesystem::temp_directory_path() / "qfb_bench_data";
        SynthSpec s;
        s.days = 400;
        write_synthetic(s, d);
        return d;
    }();
    return dir;
}

std::string base_config(const std::string& study) {
    return "[run]\nstudy = " + study + "\ntickers = SYNA,SYNB\ndata_dir = " + data_dir().string() + "\nseed = 3\n";
}

} // namespace

TEST_CASE("config parsing") {
    const auto c = parse_config(base_config("classify") + "[classify]\nqnn_layers = 1,2\nfolds = 2\nepochs = 5\n");
    CHECK(c.study == Study::classify);
    CHECK(c.tickers == std::vector<std::string>{"SYNA", "SYNB"});
    CHECK(c.classify.qnn_layers == std::vector<int>{1, 2});
    CHECK(c.classify.train.epochs == 5);
    CHECK_NOTHROW(c.validate());
    CHECK(c.hash().size() == 16);
    CHECK(c.hash() == parse_config(base_config("classify") + "[classify]\nqnn_layers = 1,2\nfolds = 2\nepochs = 5\n").hash());
    CHECK(c.hash() != parse_config(base_config("classify")).hash());

    const auto t = parse_config(base_config("trade") + "[trade]\nregimes = A:2015-03-02:2016-01-29,B:2015-06-01:2016-06-30\n");
    REQUIRE(t.trade.regimes.size() == 2);
    CHECK(t.trade.regimes[1].start == Date{2015, 6, 1});

    CHECK_THROWS_AS(parse_config(base_config("classify") + "[classify]\nbogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[run]\nstudy = fly\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(base_config("classify") + "[nosuch]\nx = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config(base_config("classify") + "[classify]\nfolds = many\n"), ConfigError);

    auto missing = parse_config(base_config("classify"));
    missing.tickers.push_back("NOPE");
    CHECK_THROWS_AS(missing.validate(), DataError);
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("report rendering") {
    ReportTable t;
    t.name = "demo";
    t.columns = {"Name", "Value", "Count"};
    t.config_hash = "00000000deadbeef";
    t.seeds = {{"run", 7}};
    t.add_row({std::string("a"), 0.123456, std::int64_t{3}});
    const auto csv = render_csv(t);
    std::istringstream in(csv);
    std::string header, line, extra;
    std::getline(in, header);
    std::getline(in, line);
    CHECK_FALSE(std::getline(in, extra));
    CHECK(header == "Name,Value,Count,config_hash,seed");
    CHECK(line == "a,0.1235,3,00000000deadbeef,run=7");
    CHECK(render_csv(t) == csv);

    t.add_row({std::string("b"), 1.5e-5, std::int64_t{0}});
    t.add_row({std::string("c"), std::nan(""), std::int64_t{-1}});
    const auto csv2 = render_csv(t);
    CHECK(csv2.find("1.5000e-05") != std::string::npos);
    CHECK(csv2.find(",nan,") != std::string::npos);

    const auto back = parse_json(render_json(t));
    CHECK(back.columns == t.columns);
    CHECK(back.config_hash == t.config_hash);
    CHECK(back.seeds == t.seeds);
    REQUIRE(back.rows.size() == 3);
    CHECK(std::get<double>(back.rows[0][1]) == 0.123456);
    CHECK(std::get<double>(back.rows[1][1]) == 1.5e-5);
    CHECK(std::isnan(std::get<double>(back.rows[2][1])));
    CHECK(std::get<std::int64_t>(back.rows[2][2]) == -1);
    CHECK(render_json(back) == render_json(t));

    const auto dir = std::filesystem::temp_directory_path() / "qfb_report_test";
    const auto p = emit_report(t, ReportFormat::json, dir);
    CHECK(render_json(load_report_json(p)) == render_json(t));
    CHECK_THROWS(emit_report(t, ReportFormat::csv, "/proc/qfb_no_such_dir"));
}

TEST_CASE("study column orders") {
    const auto c = classify_columns();
    const std::vector<std::string> head{"Ticker", "Model", "Arch.", "Layers", "Hyb.", "MQR", "Accuracy", "AUC", "Precision", "Recall"};
    CHECK(std::vector<std::string>(c.begin(), c.begin() + 10) == head);
    const auto t = trade_columns();
    for (const char* col : {"Test AUC", "ARC", "ASD", "Sharpe", "Sortino"})
        CHECK(std::find(t.begin(), t.end(), col) != t.end());
    const auto v = volatility_columns();
    for (const char* col : {"QLIKE", "MSE", "DirAcc", "DM-p"}) CHECK(std::find(v.begin(), v.end(), col) != v.end());
}

TEST_CASE("dry-run plan does not train") {
    const auto c = parse_config(base_config("volatility") + "[volatility]\ninitial_train = 200\nretrain_every = 50\n");
    const auto plan = execution_plan(c);
    CHECK(plan.find("volatility") != std::string::npos);
    CHECK(plan.find(c.hash()) != std::string::npos);
}

TEST_CASE("synthetic data") {
    SynthSpec s;
    s.days = 50;
    const auto a = synthesize(s), b = synthesize(s);
    REQUIRE(a.size() == 3);
    CHECK(a[0].prices() == b[0].prices());
    CHECK(a[0].size() == 50);
    for (const auto& bar : a[1].bars) {
        CHECK(bar.valid());
        CHECK(bar.date.weekday() < 5);
    }
    s.seed = 99;
    CHECK(synthesize(s)[0].prices() != a[0].prices());
}

TEST_CASE("small classify study is reproducible") {
    auto c = parse_config(base_config("classify") +
                          "[classify]\nmodels = ann,qnn\nqnn_layers = 1\nfolds = 2\nepochs = 3\npatience = 2\ntarget = SYNA\n");
    c.output = std::filesystem::temp_directory_path() / "qfb_classify_a";
    const auto a = run_study(c);
    c.output = std::filesystem::temp_directory_path() / "qfb_classify_b";
    const auto b = run_study(c);
    REQUIRE_FALSE(a.tables.empty());
    CHECK(render_csv(a.tables[0]) == render_csv(b.tables[0]));
    CHECK(a.leakage_violations == 0);
    CHECK(std::filesystem::exists(c.output / "manifest.json"));
}
