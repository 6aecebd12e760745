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

#include "qfb/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "qfb/error.hpp"

namespace qfb::metrics {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_same_length(std::span<const double> a, std::span<const double> b, const char* what) {
    if (a.size() != b.size()) throw std::invalid_argument(std::string(what) + ": length mismatch");
}

double median(std::vector<double> v) {
    const std::size_t n = v.size();
    std::sort(v.begin(), v.end());
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double normal_two_sided_p(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

// Q_KS(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2)
double kolmogorov_q(double lambda) {
    if (lambda < 1e-3) return 1.0;
    double sum = 0.0, sign = 1.0;
    for (int j = 1; j <= 200; ++j) {
        const double term = sign * std::exp(-2.0 * j * j * lambda * lambda);
        sum += term;
        if (std::abs(term) < 1e-16 * std::abs(sum)) break;
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

} // namespace

double mean(std::span<const double> x) {
    if (x.empty()) throw std::invalid_argument("mean of empty series");
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double stddev(std::span<const double> x) {
    if (x.size() < 2) throw std::invalid_argument("stddev needs at least 2 values");
    const double m = mean(x);
    double acc = 0.0;
    for (double v : x) acc += (v - m) * (v - m);
    return std::sqrt(acc / static_cast<double>(x.size() - 1));
}

// ---------------------------------------------------------------------------
// Classification
// ---------------------------------------------------------------------------

std::optional<double> roc_auc(std::span<const double> scores, std::span<const double> labels) {
    require_same_length(scores, labels, "roc_auc");
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
    std::vector<double> rank(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
        i = j + 1;
    }
    double pos = 0.0, rank_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (labels[i] > 0.5) {
            pos += 1.0;
            rank_sum += rank[i];
        }
    const double neg = static_cast<double>(n) - pos;
    if (pos == 0.0 || neg == 0.0) return std::nullopt;
    return (rank_sum - pos * (pos + 1.0) / 2.0) / (pos * neg);
}

ClassificationReport classification_metrics(std::span<const double> probs,
                                            std::span<const double> labels, double threshold) {
    require_same_length(probs, labels, "classification_metrics");
    if (probs.empty()) throw std::invalid_argument("classification_metrics: empty input");
    double tp = 0, fp = 0, tn = 0, fn = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (labels[i] != 0.0 && labels[i] != 1.0)
            throw std::invalid_argument("classification_metrics: labels must be binary");
        const bool pred = probs[i] >= threshold;
        const bool truth = labels[i] == 1.0;
        if (pred && truth) ++tp;
        else if (pred) ++fp;
        else if (truth) ++fn;
        else ++tn;
    }
    ClassificationReport r;
    r.accuracy = (tp + tn) / static_cast<double>(probs.size());
    r.precision_defined = tp + fp > 0;
    r.precision = r.precision_defined ? tp / (tp + fp) : kNaN;
    r.recall_defined = tp + fn > 0;
    r.recall = r.recall_defined ? tp / (tp + fn) : kNaN;
    const auto auc = roc_auc(probs, labels);
    r.auc_defined = auc.has_value();
    r.auc = auc.value_or(kNaN);
    return r;
}

// ---------------------------------------------------------------------------
// Trading
// ---------------------------------------------------------------------------

double sharpe_ratio(double arc, double asd, double risk_free) {
    return asd > 0.0 ? (arc - risk_free) / asd : kNaN;
}

double max_drawdown(std::span<const double> equity) {
    double peak = -std::numeric_limits<double>::infinity(), worst = 0.0;
    for (double e : equity) {
        peak = std::max(peak, e);
        worst = std::min(worst, e / peak - 1.0);
    }
    return worst;
}

TradingReport trading_metrics(std::span<const double> equity, double periods_per_year,
                              double risk_free) {
    if (equity.size() < 2) throw std::invalid_argument("trading_metrics: need >= 2 equity points");
    std::vector<double> r(equity.size() - 1);
    for (std::size_t t = 1; t < equity.size(); ++t) r[t - 1] = equity[t] / equity[t - 1] - 1.0;
    const double T = static_cast<double>(r.size());
    const double total = equity.back() / equity.front();

    TradingReport rep;
    rep.arc = std::pow(total, periods_per_year / T) - 1.0;
    rep.asd = r.size() >= 2 ? stddev(r) * std::sqrt(periods_per_year) : 0.0;
    if (rep.asd < 1e-15) rep.asd = 0.0;
    rep.sharpe_defined = rep.asd > 0.0;
    rep.sharpe = sharpe_ratio(rep.arc, rep.asd, risk_free);
    double down = 0.0;
    for (double v : r)
        if (v < 0.0) down += v * v;
    const double downside = std::sqrt(down / T) * std::sqrt(periods_per_year);
    rep.sortino_defined = downside > 0.0;
    rep.sortino = rep.sortino_defined ? (rep.arc - risk_free) / downside : kNaN;
    rep.max_drawdown = max_drawdown(equity);
    return rep;
}

// ---------------------------------------------------------------------------
// Forecasting
// ---------------------------------------------------------------------------

std::vector<double> qlike_terms(std::span<const double> rv_true, std::span<const double> rv_pred) {
    require_same_length(rv_true, rv_pred, "qlike");
    std::vector<double> out(rv_true.size());
    for (std::size_t t = 0; t < rv_true.size(); ++t) {
        if (!(rv_pred[t] > 0.0)) throw std::invalid_argument("qlike: non-positive forecast");
        if (rv_true[t] < 0.0) throw std::invalid_argument("qlike: negative realized variance");
        out[t] = std::log(rv_pred[t]) + rv_true[t] / rv_pred[t];
    }
    return out;
}

double qlike(std::span<const double> rv_true, std::span<const double> rv_pred) {
    return mean(qlike_terms(rv_true, rv_pred));
}

RegressionReport regression_metrics(std::span<const double> y, std::span<const double> yhat) {
    require_same_length(y, yhat, "regression_metrics");
    if (y.size() < 2) throw std::invalid_argument("regression_metrics: need >= 2 points");
    const double n = static_cast<double>(y.size());
    const double ybar = mean(y);
    double sse = 0, sae = 0, sst = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double e = y[i] - yhat[i];
        sse += e * e;
        sae += std::abs(e);
        sst += (y[i] - ybar) * (y[i] - ybar);
    }
    RegressionReport r;
    r.mse = sse / n;
    r.mae = sae / n;
    r.r2 = sst > 0.0 ? 1.0 - sse / sst : (sse == 0.0 ? 1.0 : kNaN);
    auto sgn = [](double v) { return (v > 0) - (v < 0); };
    std::size_t hits = 0;
    for (std::size_t t = 1; t < y.size(); ++t)
        if (sgn(yhat[t] - yhat[t - 1]) == sgn(y[t] - y[t - 1])) ++hits;
    r.dir_acc = static_cast<double>(hits) / static_cast<double>(y.size() - 1);
    return r;
}

DmResult dm_test(std::span<const double> a, std::span<const double> b, DmLoss loss, int horizon) {
    require_same_length(a, b, "dm_test");
    if (a.size() < 10) throw std::invalid_argument("dm_test: need at least 10 observations");
    if (horizon < 1) throw std::invalid_argument("dm_test: horizon must be >= 1");
    const std::size_t n = a.size();
    std::vector<double> d(n);
    for (std::size_t t = 0; t < n; ++t)
        d[t] = loss == DmLoss::squared ? b[t] * b[t] - a[t] * a[t] : b[t] - a[t];
    const double dbar = mean(d);
    auto autocov = [&](std::size_t lag) {
        double acc = 0.0;
        for (std::size_t t = lag; t < n; ++t) acc += (d[t] - dbar) * (d[t - lag] - dbar);
        return acc / static_cast<double>(n);
    };
    double lrv = autocov(0);
    for (int k = 1; k < horizon; ++k) {
        const double w = 1.0 - static_cast<double>(k) / horizon;
        lrv += 2.0 * w * autocov(static_cast<std::size_t>(k));
    }
    DmResult r;
    const double scale = std::max(1.0, std::abs(dbar));
    if (!(lrv > 1e-24 * scale * scale)) {
        r.degenerate = true;
        if (dbar == 0.0) {
            r.stat = 0.0;
            r.p_value = 1.0;
        } else {
            r.stat = std::copysign(std::numeric_limits<double>::infinity(), dbar);
            r.p_value = 0.0;
        }
        return r;
    }
    r.stat = dbar / std::sqrt(lrv / static_cast<double>(n));
    r.p_value = normal_two_sided_p(r.stat);
    return r;
}

// ---------------------------------------------------------------------------
// Regime statistics
// ---------------------------------------------------------------------------

TestResult welch_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 10 || b.size() < 10) throw DataError("welch_t_test: need >= 10 observations");
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    const double va = std::pow(stddev(a), 2) / na, vb = std::pow(stddev(b), 2) / nb;
    TestResult r;
    const double se = std::sqrt(va + vb);
    if (se == 0.0) {
        r.stat = 0.0;
        r.p_value = mean(a) == mean(b) ? 1.0 : 0.0;
        return r;
    }
    r.stat = (mean(a) - mean(b)) / se;
    const double df = (va + vb) * (va + vb) / (va * va / (na - 1) + vb * vb / (nb - 1));
    boost::math::students_t dist(df);
    r.p_value = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.stat)));
    return r;
}

TestResult brown_forsythe_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 10 || b.size() < 10)
        throw DataError("brown_forsythe_test: need >= 10 observations");
    auto deviations = [](std::span<const double> x) {
        const double m = median(std::vector<double>(x.begin(), x.end()));
        std::vector<double> z(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) z[i] = std::abs(x[i] - m);
        return z;
    };
    const auto za = deviations(a), zb = deviations(b);
    const double na = static_cast<double>(za.size()), nb = static_cast<double>(zb.size());
    const double ma = mean(za), mb = mean(zb);
    const double grand = (ma * na + mb * nb) / (na + nb);
    const double between = na * (ma - grand) * (ma - grand) + nb * (mb - grand) * (mb - grand);
    double within = 0.0;
    for (double v : za) within += (v - ma) * (v - ma);
    for (double v : zb) within += (v - mb) * (v - mb);
    const double df2 = na + nb - 2.0;
    TestResult r;
    if (within == 0.0) {
        r.stat = between == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        r.p_value = between == 0.0 ? 1.0 : 0.0;
        return r;
    }
    r.stat = between / (within / df2);
    boost::math::fisher_f dist(1.0, df2);
    r.p_value = boost::math::cdf(boost::math::complement(dist, r.stat));
    return r;
}

TestResult ks_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 10 || b.size() < 10) throw DataError("ks_test: need >= 10 observations");
    std::vector<double> sa(a.begin(), a.end()), sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());
    const double na = static_cast<double>(sa.size()), nb = static_cast<double>(sb.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < sa.size() && j < sb.size()) {
        const double x = std::min(sa[i], sb[j]);
        while (i < sa.size() && sa[i] == x) ++i;
        while (j < sb.size() && sb[j] == x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double ne = std::sqrt(na * nb / (na + nb));
    TestResult r;
    r.stat = d;
    r.p_value = kolmogorov_q((ne + 0.12 + 0.11 / ne) * d);
    return r;
}

RegimeTests regime_tests(std::span<const double> a, std::span<const double> b) {
    return {welch_t_test(a, b), brown_forsythe_test(a, b), ks_test(a, b)};
}

RegimeStats regime_stats(const marketdata::ReturnSeries& returns) {
    const auto& r = returns.values;
    if (r.size() < 10) throw DataError("regime_stats: need >= 10 observations");
    const double n = static_cast<double>(r.size());
    const double m = mean(r);
    double m2 = 0, m3 = 0, m4 = 0;
    for (double v : r) {
        const double d = v - m;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;

    RegimeStats s;
    s.mu_ann = kPeriodsPerYear * m;
    s.sigma_ann = std::sqrt(kPeriodsPerYear) * stddev(r);
    s.skew = m2 > 0 ? m3 / std::pow(m2, 1.5) : 0.0;
    s.kurtosis = m2 > 0 ? m4 / (m2 * m2) : 0.0;
    std::vector<double> equity{1.0};
    for (double v : r)
        equity.push_back(equity.back() *
                         (returns.kind == marketdata::ReturnKind::log ? std::exp(v) : 1.0 + v));
    s.max_drawdown = max_drawdown(equity);
    s.sharpe = s.sigma_ann > 0 ? s.mu_ann / s.sigma_ann : kNaN;
    return s;
}

} // namespace qfb::metrics
