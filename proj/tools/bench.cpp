#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "cadkit/explain.hpp"
#include "cadkit/grid_search.hpp"
#include "cadkit/logreg.hpp"
#include "cadkit/parallel.hpp"
#include "cadkit/synth.hpp"
#include "cadkit/tfidf.hpp"
#include "cadkit/typology.hpp"

using namespace cadkit;
using clock_type = std::chrono::steady_clock;

namespace {

double time_best_of(int reps, const std::function<void()>& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = clock_type::now();
        fn();
        const auto t1 = clock_type::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

void report(const std::string& name, double serial_ms, double parallel_ms, bool match) {
    std::printf("%-18s %10.2f ms %10.2f ms %8.2fx   %s\n", name.c_str(), serial_ms,
                parallel_ms, serial_ms / parallel_ms, match ? "bitwise-equal" : "MISMATCH");
}

bool same(const std::vector<SparseVector>& a, const std::vector<SparseVector>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].indices != b[i].indices || a[i].values != b[i].values) return false;
    return true;
}

}  // namespace

int main() {
    SynthConfig cfg;
    cfg.n_pairs = 4000;
    cfg.n_ood = 4000;
    const SynthBundle bundle = generate_sentiment_bundle(cfg);
    const Corpus& corpus = bundle.in_domain;

    std::vector<std::vector<std::string>> docs;
    std::vector<int> y;
    for (const auto& ex : corpus.examples) {
        docs.push_back(ex.doc.tokens);
        y.push_back(ex.label);
    }

    std::printf("workers: %d   examples: %zu\n\n", thread_count(), corpus.examples.size());
    std::printf("%-18s %13s %13s %9s   %s\n", "kernel", "serial", "parallel", "speedup",
                "check");

    auto [vocab, X] = fit_tfidf(docs, std::nullopt, Norm::l2);

    {
        std::vector<SparseVector> par, ser;
        const double tp = time_best_of(3, [&] { par = transform_many(vocab, docs); });
        const double ts = time_best_of(3, [&] { ser = transform_many_serial(vocab, docs); });
        report("transform_many", ts, tp, same(par, ser));
    }
    {
        std::vector<double> w(vocab.terms.size(), 0.01);
        std::vector<double> gp(w.size()), gs(w.size());
        double lp = 0, ls = 0, bp = 0, bs = 0;
        const double tp =
            time_best_of(5, [&] { lp = bce_loss_grad(X, y, w, 0.1, gp, bp, true); });
        const double ts =
            time_best_of(5, [&] { ls = bce_loss_grad_serial(X, y, w, 0.1, gs, bs); });
        report("bce_loss_grad", ts, tp, lp == ls && bp == bs && gp == gs);
    }
    {
        const auto lexica = [] {
            StrategyLexica lx;
            lx.affect_pos = lexicon_from_terms("affect_pos", synthwords::affect_pos);
            lx.affect_neg = lexicon_from_terms("affect_neg", synthwords::affect_neg);
            lx.negation = lexicon_from_terms("negation", {synthwords::negation_token});
            lx.hedge = lexicon_from_terms("hedge", synthwords::hedges);
            return lx;
        }();
        std::map<std::string, StrategyLabelSet> par, ser;
        const double tp = time_best_of(3, [&] {
            par = classify_corpus(corpus, lexica, Construct::sentiment);
        });
        const double ts = time_best_of(3, [&] {
            ser = classify_corpus_serial(corpus, lexica, Construct::sentiment);
        });
        const bool match = [&] {
            if (par.size() != ser.size()) return false;
            for (const auto& [k, v] : par) {
                const auto it = ser.find(k);
                if (it == ser.end() || it->second.strategies != v.strategies ||
                    it->second.construct_driven != v.construct_driven)
                    return false;
            }
            return true;
        }();
        report("classify_corpus", ts, tp, match);
    }
    {
        std::vector<std::pair<std::string, double>> par, ser;
        const double tp = time_best_of(3, [&] {
            par = pivot_ranking(bundle.in_domain, bundle.out_of_domain, 5, 100);
        });
        const double ts = time_best_of(3, [&] {
            ser = pivot_ranking_serial(bundle.in_domain, bundle.out_of_domain, 5, 100);
        });
        report("pivot_ranking", ts, tp, par == ser);
    }
    {
        HyperGrid grid;
        grid.stopwords = {StopwordMode::none};
        grid.norms = {Norm::l2};
        grid.Cs = {0.1, 1.0};
        grid.penalties = {Penalty::l2};
        const auto stopword_sets = make_stopword_sets(
            lexicon_from_terms("stopwords_en", synthwords::glue),
            lexicon_from_terms("negation", {synthwords::negation_token}));
        GridSearchResult par, ser;
        const double tp = time_best_of(1, [&] {
            par = grid_search_cv(docs, y, grid, 5, 7, stopword_sets, true);
        });
        const double ts = time_best_of(1, [&] {
            ser = grid_search_cv(docs, y, grid, 5, 7, stopword_sets, false);
        });
        report("grid_search_cv", ts, tp, par == ser);
    }
    return 0;
}
