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
#include <string>
#include <vector>

#include "qfb/marketdata.hpp"

namespace qfb::bench {

/// Daily bars whose log returns follow r_t = phi r_{t-1} + e_t with GARCH(1,1) noise e_t.
struct SynthSpec {
    std::vector<std::string> tickers{"SYNA", "SYNB", "SYNC"};
    std::size_t days = 1500;
    double phi = 0.4;
    double omega = 2e-6;
    double alpha = 0.08;
    double beta = 0.9;
    double drift = 2e-4;
    double start_price = 100.0;
    Date start{2015, 1, 2};
    std::uint64_t seed = 2024;
};

/// Business-day calendar (Mon-Fri) starting at spec.start.
std::vector<marketdata::PriceSeries> synthesize(const SynthSpec& spec);

/// Writes <dir>/<ticker>.csv for every series; returns the paths.
std::vector<std::filesystem::path> write_synthetic(const SynthSpec& spec, const std::filesystem::path& dir);

} // namespace qfb::bench
