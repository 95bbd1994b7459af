#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cadkit/corpus.hpp"
#include "cadkit/eval.hpp"
#include "cadkit/grid_search.hpp"
#include "cadkit/sampler.hpp"
#include "cadkit/typology.hpp"

namespace cadkit {

struct EvalSplit {
    std::string name;  // e.g. "id_test", "ood", "adv_swap", "orig_swap"
    std::vector<std::vector<std::string>> docs;
    std::vector<int> labels;
};

struct RunOutcome {
    LinearModel model;
    std::vector<LabeledExample> train_set;
    std::map<std::string, MetricsReport> metrics;  // split name -> report
};

// One experiment arm: for each run derive a seed, sample a training set,
// grid-search, refit the winner on the full set, evaluate every split.
std::vector<RunOutcome> run_experiment(const Corpus& train_pool, const SamplingPlan& plan,
                                       const std::vector<EvalSplit>& eval_splits,
                                       const StopwordSets& stopword_sets, const HyperGrid& grid,
                                       int runs, int folds,
                                       const std::map<std::string, StrategyLabelSet>* types = nullptr,
                                       bool parallel = true);

struct RunConfig {
    Construct construct = Construct::sentiment;
    std::string corpus_path;  // paired in-domain JSONL
    std::string ood_path;     // out-of-domain JSONL
    std::string lexica_dir;
    SamplingPlan plan;        // the CF arm; the nCF arm reuses seed/size at alpha 0
    int runs = 5;
    int folds = 5;
    double train_fraction = 0.7;
    std::uint64_t split_seed = 13;
    std::vector<double> sweep_alphas;
    std::vector<std::size_t> core_ks;
    std::size_t pivot_min_df = 10;
    int adv_max_replacements = 1;
    std::string out_dir;
    HyperGrid grid;  // config may override the default lattice
};

RunConfig load_run_config(const std::string& path);

// Full pipeline: split, typology, CF + nCF experiments over ID/OOD/
// adversarial splits, injection-proportion sweep, core-feature curves.
// Writes metrics.csv, curve.csv, core.csv, types.csv and an artifacts/
// directory (per-run training sets and models) under cfg.out_dir.
void cmd_reproduce(const RunConfig& cfg);

}  // namespace cadkit
