#pragma once

#include <cstdint>
#include <vector>

namespace cadkit {

struct MetricsReport {
    double macro_f1 = 0.0;
    double pos_f1 = 0.0;
    double pos_precision = 0.0;
    long tp = 0, fp = 0, fn = 0, tn = 0;
    std::size_t n = 0;
};

// Per-class F1 with the 0/0 -> 0 convention; macro F1 is the unweighted
// mean of the two class F1s.
MetricsReport metrics(const std::vector<int>& y_true, const std::vector<int>& y_pred);

struct McNemarResult {
    long b = 0;  // A correct, B wrong
    long c = 0;  // A wrong, B correct
    double statistic = 0.0;
    double p_value = 1.0;
};

// Continuity-corrected chi-square McNemar: statistic =
// max(0, |b-c|-1)^2 / (b+c) (0 when b+c = 0), p = erfc(sqrt(stat/2)).
McNemarResult mcnemar(const std::vector<int>& y_true, const std::vector<int>& pred_a,
                      const std::vector<int>& pred_b);

// Exact two-sided binomial alternative for small discordant counts (b+c < 25).
double mcnemar_exact_p(long b, long c);

struct RunStats {
    double mean = 0.0;
    double stddev = 0.0;       // sample std; 0 when undefined
    bool std_defined = false;  // false for a single report
};

struct AggregateReport {
    RunStats macro_f1;
    RunStats pos_f1;
    RunStats pos_precision;
    std::size_t runs = 0;
};

AggregateReport aggregate_runs(const std::vector<MetricsReport>& reports);

}  // namespace cadkit
