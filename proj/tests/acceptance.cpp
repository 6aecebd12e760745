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

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <spdlog/spdlog.h>

#include "qfb/bench/config.hpp"
#include "qfb/bench/selftest.hpp"
#include "qfb/bench/studies.hpp"

using namespace qfb::bench;

namespace {

std::filesystem::path sp500_path() {
    const char* env = std::getenv("QFB_SP500_CSV");
    return env ? std::filesystem::path(env) : std::filesystem::path();
}

const ReportTable* find_table(const StudyOutput& out, const std::string& name) {
    for (const auto& t : out.tables)
        if (t.name == name) return &t;
    return nullptr;
}

std::size_t column(const ReportTable& t, const std::string& name) {
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        if (t.columns[i] == name) return i;
    return t.columns.size();
}

CheckResult smoke_run() {
    CheckResult r;
    r.id = "8";
    r.title = "end-to-end smoke run on bundled synthetic data";
    const auto t0 = std::chrono::steady_clock::now();
    const auto out_root = std::filesystem::temp_directory_path() / "qfb_acceptance";
    std::filesystem::remove_all(out_root);
    std::vector<std::string> problems;
    double min_auc = 1.0;
    try {
        const std::filesystem::path configs = std::filesystem::path(QFB_SOURCE_DIR) / "configs";
        struct Step {
            const char* file;
            const char* table;
            std::vector<std::string> columns;
        };
        const Step steps[] = {
            {"smoke_classify.ini", "classify_low3", classify_columns()},
            {"smoke_trade.ini", "trade", trade_columns()},
            {"smoke_volatility.ini", "volatility", volatility_columns()},
        };
        for (const auto& s : steps) {
            auto cfg = load_config(configs / s.file);
            cfg.output = out_root / to_string(cfg.study);
            const auto out = run_study(cfg);
            const auto* t = find_table(out, s.table);
            if (!t || t->rows.empty()) {
                problems.push_back(std::string(s.table) + " table missing");
                continue;
            }
            if (t->columns != s.columns) problems.push_back(std::string(s.table) + " columns differ");
            if (out.leakage_violations) problems.push_back(std::string(s.table) + " leakage");
            for (const char* ext : {".csv", ".json"})
                if (!std::filesystem::exists(cfg.output / (std::string(s.table) + ext)))
                    problems.push_back(std::string(s.table) + ext + " not written");
            if (cfg.study == Study::classify) {
                const std::size_t auc = column(*t, "AUC");
                for (const auto& row : t->rows) min_auc = std::min(min_auc, std::get<double>(row[auc]));
                if (!(min_auc > 0.55)) problems.push_back("classifier AUC not above 0.55");
            }
        }
    } catch (const std::exception& e) {
        problems.push_back(std::string("exception: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.seconds >= 900.0) problems.push_back("exceeded 15 minutes");
    r.passed = problems.empty();
    char buf[96];
    std::snprintf(buf, sizeof buf, "min ANN/QNN test AUC=%.4f, total %.0fs", min_auc, r.seconds);
    r.detail = buf;
    for (const auto& p : problems) r.detail += "; " + p;
    return r;
}

} // namespace

int main(int argc, char** argv) {
    spdlog::set_level(spdlog::level::warn);
    const bool regime_only = argc > 1 && std::string(argv[1]) == "--regime-only";
    if (regime_only) {
        const auto r = check_regime_statistics(sp500_path());
        std::cout << format_check(r) << std::endl;
        return r.skipped ? 77 : (r.passed ? 0 : 1);
    }

    std::vector<CheckResult> results;
    auto emit = [&](CheckResult r) {
        std::cout << format_check(r) << std::endl;
        results.push_back(std::move(r));
    };
    emit(check_formula_anchors());
    emit(check_regime_statistics(sp500_path()));
    emit(check_quantum_suite());
    emit(check_svr_oracles());
    emit(check_garch_recovery());
    emit(check_backtest_identities());
    emit(check_leakage_audit());
    emit(smoke_run());
    emit(check_metric_properties());

    int failed = 0, skipped = 0;
    for (const auto& r : results) {
        failed += !r.passed && !r.skipped;
        skipped += r.skipped;
    }
    std::cout << results.size() - failed - skipped << " passed, " << failed << " failed, " << skipped << " not run"
              << std::endl;
    return failed ? 1 : 0;
}
