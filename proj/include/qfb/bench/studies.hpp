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

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "qfb/bench/config.hpp"
#include "qfb/bench/report.hpp"

namespace qfb::bench {

struct StudyOutput {
    std::vector<ReportTable> tables;
    std::vector<std::filesystem::path> files;
    std::size_t leakage_violations = 0;
};

/// Human-readable execution plan; validates the config without training.
std::string execution_plan(const RunConfig& cfg);

StudyOutput run_classify(const RunConfig& cfg);
StudyOutput run_trade(const RunConfig& cfg);
StudyOutput run_volatility(const RunConfig& cfg);

/// Runs the configured study and writes CSV and JSON reports into cfg.output.
StudyOutput run_study(const RunConfig& cfg);

/// Column order of the main table of each study.
std::vector<std::string> classify_columns();
std::vector<std::string> trade_columns();
std::vector<std::string> volatility_columns();

} // namespace qfb::bench
