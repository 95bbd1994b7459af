#include "cadkit/eval.hpp"

#include <algorithm>
#include <cmath>

#include "cadkit/common.hpp"

namespace cadkit {

namespace {

double f1_from_counts(long tp, long fp, long fn) {
    const double denom = static_cast<double>(2 * tp + fp + fn);
    if (denom == 0.0) return 0.0;  // precision+recall = 0 convention
    return 2.0 * static_cast<double>(tp) / denom;
}

}  // namespace

MetricsReport metrics(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
    if (y_true.size() != y_pred.size()) throw Error("metrics: length mismatch");
    if (y_true.empty()) throw Error("metrics: empty input");

    MetricsReport r;
    r.n = y_true.size();
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] == 1)
            (y_pred[i] == 1 ? r.tp : r.fn)++;
        else
            (y_pred[i] == 1 ? r.fp : r.tn)++;
    }
    r.pos_precision = (r.tp + r.fp) > 0
                          ? static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fp)
                          : 0.0;
    r.pos_f1 = f1_from_counts(r.tp, r.fp, r.fn);
    const double neg_f1 = f1_from_counts(r.tn, r.fn, r.fp);
    r.macro_f1 = 0.5 * (r.pos_f1 + neg_f1);
    return r;
}

McNemarResult mcnemar(const std::vector<int>& y_true, const std::vector<int>& pred_a,
                      const std::vector<int>& pred_b) {
    if (y_true.size() != pred_a.size() || y_true.size() != pred_b.size())
        throw Error("mcnemar: length mismatch");

    McNemarResult r;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const bool a_ok = pred_a[i] == y_true[i];
        const bool b_ok = pred_b[i] == y_true[i];
        if (a_ok && !b_ok) r.b++;
        if (!a_ok && b_ok) r.c++;
    }
    const long discordant = r.b + r.c;
    if (discordant == 0) {
        r.statistic = 0.0;
        r.p_value = 1.0;
        return r;
    }
    const double corrected = std::max(0.0, std::abs(static_cast<double>(r.b - r.c)) - 1.0);
    r.statistic = corrected * corrected / static_cast<double>(discordant);
    // Survival of chi-square with 1 dof at the statistic.
    r.p_value = std::erfc(std::sqrt(r.statistic / 2.0));
    return r;
}

double mcnemar_exact_p(long b, long c) {
    const long n = b + c;
    if (n == 0) return 1.0;
    const long k = std::min(b, c);
    // Two-sided exact binomial: 2 * P(X <= k) at p = 1/2, capped at 1.
    double coef = std::pow(0.5, static_cast<double>(n));  // C(n,0) * 0.5^n
    double cum = coef;
    for (long i = 1; i <= k; ++i) {
        coef *= static_cast<double>(n - i + 1) / static_cast<double>(i);
        cum += coef;
    }
    return std::min(1.0, 2.0 * cum);
}

AggregateReport aggregate_runs(const std::vector<MetricsReport>& reports) {
    if (reports.empty()) throw Error("aggregate_runs: empty input");

    auto stats = [&](auto getter) {
        RunStats s;
        double sum = 0.0;
        for (const auto& r : reports) sum += getter(r);
        s.mean = sum / static_cast<double>(reports.size());
        if (reports.size() > 1) {
            double ss = 0.0;
            for (const auto& r : reports) {
                const double dev = getter(r) - s.mean;
                ss += dev * dev;
            }
            s.stddev = std::sqrt(ss / static_cast<double>(reports.size() - 1));
            s.std_defined = true;
        }
        return s;
    };

    AggregateReport agg;
    agg.runs = reports.size();
    agg.macro_f1 = stats([](const MetricsReport& r) { return r.macro_f1; });
    agg.pos_f1 = stats([](const MetricsReport& r) { return r.pos_f1; });
    agg.pos_precision = stats([](const MetricsReport& r) { return r.pos_precision; });
    return agg;
}

}  // namespace cadkit
