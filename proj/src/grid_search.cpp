#include "cadkit/grid_search.hpp"

#include <algorithm>

#include "cadkit/common.hpp"
#include "cadkit/eval.hpp"
#include "cadkit/parallel.hpp"
#include "cadkit/rng.hpp"

namespace cadkit {

std::vector<HyperParams> HyperGrid::enumerate() const {
    std::vector<HyperParams> out;
    out.reserve(size());
    for (auto sw : stopwords)
        for (auto nrm : norms)
            for (double c : Cs)
                for (auto pen : penalties) out.push_back(HyperParams{sw, nrm, c, pen});
    return out;
}

std::size_t HyperGrid::size() const {
    return stopwords.size() * norms.size() * Cs.size() * penalties.size();
}

StopwordSets make_stopword_sets(const Lexicon& stopwords_en, const Lexicon& negation) {
    StopwordSets sets;
    sets.english = stopwords_en;
    sets.english_without_negation = stopwords_without_negation(stopwords_en, negation);
    return sets;
}

std::optional<Lexicon> resolve_stopwords(StopwordMode mode, const StopwordSets& sets) {
    switch (mode) {
        case StopwordMode::english: return sets.english;
        case StopwordMode::none: return std::nullopt;
        case StopwordMode::english_without_negation: return sets.english_without_negation;
    }
    return std::nullopt;
}

std::vector<int> stratified_folds(const std::vector<int>& y, int k, std::uint64_t seed) {
    if (k < 2) throw Error("need at least 2 folds");
    std::vector<int> fold(y.size(), -1);
    for (int cls : {0, 1}) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < y.size(); ++i)
            if (y[i] == cls) idx.push_back(i);
        if (idx.size() < static_cast<std::size_t>(k))
            throw Error("class " + std::to_string(cls) + " too small for " +
                        std::to_string(k) + "-fold stratification");
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(cls)));
        rng.shuffle(idx);
        for (std::size_t pos = 0; pos < idx.size(); ++pos)
            fold[idx[pos]] = static_cast<int>(pos % static_cast<std::size_t>(k));
    }
    return fold;
}

LinearModel fit_model(const std::vector<std::vector<std::string>>& docs,
                      const std::vector<int>& y, const HyperParams& hp,
                      const StopwordSets& stopword_sets, bool parallel) {
    const auto sw = resolve_stopwords(hp.stopwords, stopword_sets);
    auto [vocab, X] = fit_tfidf(docs, sw, hp.norm);

    TrainOptions opts;
    opts.parallel = parallel;
    opts.dim = vocab.size();
    const FitResult fit = train(X, y, hp, opts);

    LinearModel model;
    model.vocabulary = std::move(vocab);
    model.weights = fit.weights;
    model.intercept = fit.intercept;
    model.hyperparams = hp;
    model.train_fingerprint = fingerprint_training_data(docs, y);
    return model;
}

GridSearchResult grid_search_cv(const std::vector<std::vector<std::string>>& docs,
                                const std::vector<int>& y, const HyperGrid& grid,
                                int folds, std::uint64_t seed,
                                const StopwordSets& stopword_sets, bool parallel) {
    const auto configs = grid.enumerate();
    if (configs.empty()) throw Error("empty hyperparameter grid");
    const auto fold_of = stratified_folds(y, folds, seed);

    // Configs sharing (stopwords, norm) reuse one TF-IDF fit per fold; a
    // work item is one such feature group on one fold, and every fit writes
    // its score to a preassigned slot so scheduling cannot reorder results.
    struct Group {
        StopwordMode sw;
        Norm norm;
        std::vector<std::size_t> config_ids;
    };
    std::vector<Group> groups;
    for (std::size_t c = 0; c < configs.size(); ++c) {
        auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
            return g.sw == configs[c].stopwords && g.norm == configs[c].norm;
        });
        if (it == groups.end()) {
            groups.push_back({configs[c].stopwords, configs[c].norm, {c}});
        } else {
            it->config_ids.push_back(c);
        }
    }

    const std::size_t n_items = groups.size() * static_cast<std::size_t>(folds);
    std::vector<double> scores(configs.size() * static_cast<std::size_t>(folds), 0.0);

    auto run_item = [&](std::size_t item) {
        const std::size_t g = item / static_cast<std::size_t>(folds);
        const int f = static_cast<int>(item % static_cast<std::size_t>(folds));
        const Group& group = groups[g];

        std::vector<std::vector<std::string>> tr_docs, va_docs;
        std::vector<int> tr_y, va_y;
        for (std::size_t i = 0; i < docs.size(); ++i) {
            if (fold_of[i] == f) {
                va_docs.push_back(docs[i]);
                va_y.push_back(y[i]);
            } else {
                tr_docs.push_back(docs[i]);
                tr_y.push_back(y[i]);
            }
        }

        const auto sw = resolve_stopwords(group.sw, stopword_sets);
        auto [vocab, X] = fit_tfidf(tr_docs, sw, group.norm);
        const auto Xva = transform_many_serial(vocab, va_docs);

        for (std::size_t c : group.config_ids) {
            TrainOptions opts;
            opts.parallel = false;  // parallelism lives at the item level
            opts.dim = vocab.size();
            const FitResult fit = train(X, tr_y, configs[c], opts);

            LinearModel model;
            model.vocabulary = vocab;
            model.weights = fit.weights;
            model.intercept = fit.intercept;
            model.hyperparams = configs[c];
            const auto pred = predict(model, Xva);
            scores[c * static_cast<std::size_t>(folds) + static_cast<std::size_t>(f)] =
                metrics(va_y, pred).macro_f1;
        }
    };

    if (parallel)
        parallel_for(n_items, run_item);
    else
        serial_for(n_items, run_item);

    GridSearchResult result;
    result.fold_seed = seed;
    result.n_configs = configs.size();
    result.n_fits = configs.size() * static_cast<std::size_t>(folds);
    result.mean_scores.resize(configs.size());
    for (std::size_t c = 0; c < configs.size(); ++c) {
        double sum = 0.0;
        for (int f = 0; f < folds; ++f)
            sum += scores[c * static_cast<std::size_t>(folds) + static_cast<std::size_t>(f)];
        result.mean_scores[c] = sum / static_cast<double>(folds);
    }
    result.best_index = 0;
    for (std::size_t c = 1; c < configs.size(); ++c)
        if (result.mean_scores[c] > result.mean_scores[result.best_index]) result.best_index = c;
    result.best = configs[result.best_index];
    return result;
}

}  // namespace cadkit
