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

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "qfb/bench/config.hpp"
#include "qfb/bench/selftest.hpp"
#include "qfb/bench/studies.hpp"
#include "qfb/bench/synth.hpp"
#include "qfb/error.hpp"

namespace {

struct StudyFlags {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
    bool dry_run = false;
};

void add_study_flags(CLI::App* cmd, StudyFlags& f) {
    cmd->add_option("--config", f.config, "INI run configuration")->required();
    cmd->add_option("--out", f.out, "output directory (overrides [run] output)");
    cmd->add_option("--seed", f.seed, "master seed (overrides [run] seed)");
    cmd->add_option("--jobs", f.jobs, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_flag("--dry-run", f.dry_run, "validate the config and print the execution plan");
}

int run_study_command(qfb::bench::Study study, const StudyFlags& f) {
    auto cfg = qfb::bench::load_config(f.config);
    cfg.study = study;
    if (!f.out.empty()) cfg.output = f.out;
    if (f.seed) cfg.seed = *f.seed;
    if (f.jobs) cfg.jobs = *f.jobs;
    if (f.dry_run) {
        std::cout << qfb::bench::execution_plan(cfg);
        return 0;
    }
    const auto out = qfb::bench::run_study(cfg);
    for (const auto& p : out.files) std::cout << p.string() << '\n';
    if (out.leakage_violations > 0) {
        spdlog::error("leakage audit reported {} violations", out.leakage_violations);
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"qfbench: quantum and classical forecasting benchmarks"};
    app.require_subcommand(1);
    std::string log_level = "info";
    app.add_option("--log-level", log_level, "trace|debug|info|warn|error|off");

    StudyFlags classify_flags, trade_flags, vol_flags;
    auto* classify = app.add_subcommand("classify", "next-day direction study (ANN vs QNN)");
    add_study_flags(classify, classify_flags);
    auto* trade = app.add_subcommand("trade", "regime trading study (LSTM vs QLSTM)");
    add_study_flags(trade, trade_flags);
    auto* vol = app.add_subcommand("volatility", "realised volatility forecasting study");
    add_study_flags(vol, vol_flags);

    auto* selftest = app.add_subcommand("selftest", "run the property suites");
    std::string sp500;
    selftest->add_option("--sp500", sp500, "S&P 500 daily price CSV for the regime statistics check");

    auto* synth = app.add_subcommand("synthesize", "write synthetic price CSVs");
    qfb::bench::SynthSpec spec;
    std::string synth_out = "data/synthetic";
    synth->add_option("--out", synth_out, "output directory");
    synth->add_option("--days", spec.days, "trading days per ticker");
    synth->add_option("--seed", spec.seed, "generator seed");

    CLI11_PARSE(app, argc, argv);
    spdlog::set_level(spdlog::level::from_str(log_level));

    try {
        if (*classify) return run_study_command(qfb::bench::Study::classify, classify_flags);
        if (*trade) return run_study_command(qfb::bench::Study::trade, trade_flags);
        if (*vol) return run_study_command(qfb::bench::Study::volatility, vol_flags);
        if (*synth) {
            for (const auto& p : qfb::bench::write_synthetic(spec, synth_out)) std::cout << p.string() << '\n';
            return 0;
        }
        if (*selftest) {
            if (sp500.empty())
                if (const char* env = std::getenv("QFB_SP500_CSV")) sp500 = env;
            auto checks = qfb::bench::run_property_checks();
            checks.insert(checks.begin() + 1, qfb::bench::check_regime_statistics(sp500));
            bool ok = true;
            for (const auto& c : checks) {
                std::cout << qfb::bench::format_check(c) << '\n';
                ok = ok && (c.passed || c.skipped);
            }
            return ok ? 0 : 1;
        }
    } catch (const qfb::ConfigError& e) {
        spdlog::error("config error: {}", e.what());
        return 2;
    } catch (const qfb::DataError& e) {
        spdlog::error("data error: {}", e.what());
        return 3;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return 1;
    }
    return 0;
}
