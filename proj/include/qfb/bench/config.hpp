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
#include <vector>

#include "qfb/date.hpp"
#include "qfb/marketdata.hpp"

namespace qfb::bench {

enum class Study { classify, trade, volatility };
std::string to_string(Study s);
Study parse_study(const std::string& s);

struct TrainOptions {
    double learning_rate = 0.05;
    double momentum = 0.9;
    int epochs = 200;
    int patience = 30;
    int batch_size = 32;
};

struct ClassifyOptions {
    std::string regime = "low3";
    std::vector<std::string> models{"ann", "qnn"};
    std::string encoding = "angle";
    std::vector<int> qnn_layers{1, 2, 3, 4, 5, 6};
    std::vector<int> qnn_qubits{2, 3, 4, 5, 6};
    int folds = 5;
    std::string target; ///< empty: every ticker in turn (low3) / first ticker (mid7, high64)
    TrainOptions train;
};

struct TradeRegime {
    std::string name;
    Date start;
    Date end;
};

struct TradeOptions {
    std::vector<TradeRegime> regimes;
    std::vector<std::string> models{"lstm", "qlstm"};
    std::vector<int> hidden{3, 4, 5};
    std::vector<int> lstm_layers{2, 3, 4, 5, 6};
    std::vector<int> qlstm_layers{2, 3, 4, 5, 6};
    int window = 10;
    double fee = 0.0005;
    double grid_step = 0.05;
    TrainOptions train;
};

struct VolatilityOptions {
    std::size_t initial_train = 720;
    std::size_t retrain_every = 120;
    std::size_t max_window = 4000;
    std::vector<std::string> models{"svr_linear", "svr_poly", "svr_rbf", "qsvr_angle", "garch", "persistence"};
    int budget = 50;
    std::vector<int> qubits{6, 8, 10, 12};
    std::vector<int> layers{0, 1, 2, 3};
    std::vector<int> betas{1, 2, 3};
    int amplitude_dim = 32;
    int p = 5;
    int q = 5;
};

struct RunConfig {
    Study study = Study::classify;
    std::vector<std::string> tickers;
    std::filesystem::path data_dir;
    std::map<std::string, std::filesystem::path> data_files; ///< explicit per-ticker overrides
    marketdata::PriceField price_field = marketdata::PriceField::adj_close;
    std::uint64_t seed = 1;
    std::filesystem::path output = "out";
    int jobs = 1;
    std::filesystem::path source; ///< file the config was read from

    ClassifyOptions classify;
    TradeOptions trade;
    VolatilityOptions volatility;

    std::filesystem::path data_path(const std::string& ticker) const;
    /// Throws ConfigError on inconsistent values and DataError on missing data files.
    void validate() const;
    /// Canonical key = value listing used for hashing and dry-run output.
    std::string canonical() const;
    /// FNV-1a 64 of canonical(), as 16 hex digits.
    std::string hash() const;
};

/// INI file with [run], [data], [classify], [trade], [volatility] sections. Relative
/// paths resolve against the config file's directory. run.study is optional (the CLI
/// subcommand overrides it). Throws ConfigError.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = {});

std::uint64_t fnv1a64(const std::string& bytes);

} // namespace qfb::bench
