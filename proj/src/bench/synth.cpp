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

#include "qfb/bench/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace qfb::bench {

std::vector<marketdata::PriceSeries> synthesize(const SynthSpec& spec) {
    if (spec.days < 2) throw std::invalid_argument("synthesize: need at least 2 days");
    if (!(spec.alpha + spec.beta < 1.0) || spec.omega <= 0.0) throw std::invalid_argument("synthesize: non-stationary GARCH noise");
    if (std::fabs(spec.phi) >= 1.0) throw std::invalid_argument("synthesize: |phi| must be < 1");

    std::vector<Date> dates;
    for (long s = spec.start.serial(); dates.size() < spec.days; ++s) {
        const Date d = Date::from_serial(s);
        if (d.weekday() < 5) dates.push_back(d);
    }

    std::vector<marketdata::PriceSeries> out;
    for (std::size_t k = 0; k < spec.tickers.size(); ++k) {
        std::mt19937_64 rng(spec.seed + 7919 * k);
        std::normal_distribution<double> z(0.0, 1.0);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        marketdata::PriceSeries s;
        s.ticker = spec.tickers[k];
        double s2 = spec.omega / (1.0 - spec.alpha - spec.beta);
        double r_prev = 0.0, price = spec.start_price;
        for (std::size_t t = 0; t < spec.days; ++t) {
            const double e = std::sqrt(s2) * z(rng);
            const double r = t == 0 ? 0.0 : spec.drift + spec.phi * r_prev + e;
            s2 = spec.omega + spec.alpha * e * e + spec.beta * s2;
            const double open = price;
            price = open * std::exp(r);
            const double spread = std::sqrt(s2) * 0.5;
            marketdata::PriceBar bar;
            bar.date = dates[t];
            bar.open = open;
            bar.close = price;
            bar.adj_close = price;
            bar.high = std::max(open, price) * (1.0 + spread * u(rng));
            bar.low = std::min(open, price) * (1.0 - spread * u(rng));
            bar.volume = std::round(1e6 * (0.5 + u(rng)));
            s.bars.push_back(bar);
            if (t > 0) r_prev = r - spec.drift;
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<std::filesystem::path> write_synthetic(const SynthSpec& spec, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> paths;
    for (const auto& s : synthesize(spec)) {
        paths.push_back(dir / (s.ticker + ".csv"));
        marketdata::write_price_csv(paths.back(), s);
    }
    return paths;
}

} // namespace qfb::bench
