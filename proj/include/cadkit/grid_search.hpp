#pragma once

#include <cstdint>
#include <vector>

#include "cadkit/lexicon.hpp"
#include "cadkit/logreg.hpp"

namespace cadkit {

// Hyperparameter lattice, enumerated row-major in field order
// (stopwords, norm, C, penalty). The default lattice has 3*2*3*2 = 36
// configurations, i.e. 180 fits under 5-fold CV.
struct HyperGrid {
    std::vector<StopwordMode> stopwords{StopwordMode::english, StopwordMode::none,
                                        StopwordMode::english_without_negation};
    std::vector<Norm> norms{Norm::l1, Norm::l2};
    std::vector<double> Cs{0.01, 0.1, 1.0};
    std::vector<Penalty> penalties{Penalty::l2, Penalty::l1};

    static HyperGrid default_grid() { return HyperGrid{}; }
    std::vector<HyperParams> enumerate() const;
    std::size_t size() const;
};

struct GridSearchResult {
    HyperParams best;
    std::size_t best_index = 0;          // into grid order
    std::vector<double> mean_scores;     // mean CV macro F1 per config
    std::uint64_t fold_seed = 0;
    std::size_t n_configs = 0;
    std::size_t n_fits = 0;

    bool operator==(const GridSearchResult&) const = default;
};

// Stopword lists the grid's three modes resolve to.
struct StopwordSets {
    Lexicon english;                   // stopwords_en
    Lexicon english_without_negation;  // stopwords_en \ negation
};

StopwordSets make_stopword_sets(const Lexicon& stopwords_en, const Lexicon& negation);

std::optional<Lexicon> resolve_stopwords(StopwordMode mode, const StopwordSets& sets);

// Stratified k-fold assignment: fold index per example, each class spread
// round-robin after a seeded shuffle. Deterministic per seed.
std::vector<int> stratified_folds(const std::vector<int>& y, int k, std::uint64_t seed);

// Folds fixed once per seed and shared by every config; selection is argmax
// mean CV macro F1, ties broken by grid order. Config/fold fits run in
// parallel with results written to preassigned slots.
GridSearchResult grid_search_cv(const std::vector<std::vector<std::string>>& docs,
                                const std::vector<int>& y, const HyperGrid& grid,
                                int folds, std::uint64_t seed,
                                const StopwordSets& stopword_sets, bool parallel = true);

// TF-IDF fit + LR train for one config; used for CV fits and the final refit.
LinearModel fit_model(const std::vector<std::vector<std::string>>& docs,
                      const std::vector<int>& y, const HyperParams& hp,
                      const StopwordSets& stopword_sets, bool parallel = true);

}  // namespace cadkit
