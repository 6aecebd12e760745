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
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace qfb::bench {

struct CheckResult {
    std::string id;
    std::string title;
    bool passed = false;
    bool skipped = false;
    std::string detail;
    double seconds = 0.0;
};

/// Formula anchors: Sharpe from ARC/ASD, GARCH forecast substitution, QLIKE(1, 1).
CheckResult check_formula_anchors();
/// Regime statistics and distribution tests on user-supplied S&P 500 closes for
/// 2008-2009 and 2018-2019 / 2020-2021. Skipped when `path` is empty or missing.
CheckResult check_regime_statistics(const std::filesystem::path& sp500_csv);
/// Statevector norm, circuit inverse, parameter shift, kernel diagonal and PSD.
CheckResult check_quantum_suite();
/// SVR line recovery and precomputed/explicit kernel equivalence.
CheckResult check_svr_oracles();
/// Median GARCH(1,1) recovery over 20 simulated paths.
CheckResult check_garch_recovery();
/// Zero-fee all-long equals buy-and-hold; fee monotonicity on 100 random sequences.
CheckResult check_backtest_identities();
/// Look-ahead audit over every fold of the three studies on synthetic data.
CheckResult check_leakage_audit();
/// AUC invariance, QLIKE minimum, DM antisymmetry, DM Monte-Carlo size.
CheckResult check_metric_properties();

/// Every property suite above except the data-dependent regime check.
std::vector<CheckResult> run_property_checks();

std::string format_check(const CheckResult& r);

} // namespace qfb::bench
