#include "cadkit/reproduce.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cadkit/adversarial.hpp"
#include "cadkit/common.hpp"
#include "cadkit/explain.hpp"
#include "cadkit/rng.hpp"

namespace fs = std::filesystem;

namespace cadkit {

namespace {

std::string fmt6(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", x);
    return buf;
}

std::vector<std::vector<std::string>> doc_tokens(const std::vector<LabeledExample>& examples) {
    std::vector<std::vector<std::string>> docs;
    docs.reserve(examples.size());
    for (const auto& ex : examples) docs.push_back(ex.doc.tokens);
    return docs;
}

std::vector<int> doc_labels(const std::vector<LabeledExample>& examples) {
    std::vector<int> y;
    y.reserve(examples.size());
    for (const auto& ex : examples) y.push_back(ex.label);
    return y;
}

EvalSplit make_split(std::string name, const std::vector<LabeledExample>& examples) {
    return EvalSplit{std::move(name), doc_tokens(examples), doc_labels(examples)};
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

}  // namespace

std::vector<RunOutcome> run_experiment(const Corpus& train_pool, const SamplingPlan& plan,
                                       const std::vector<EvalSplit>& eval_splits,
                                       const StopwordSets& stopword_sets, const HyperGrid& grid,
                                       int runs, int folds,
                                       const std::map<std::string, StrategyLabelSet>* types,
                                       bool parallel) {
    if (runs < 1) throw Error("runs must be >= 1");
    std::vector<RunOutcome> outcomes;
    outcomes.reserve(static_cast<std::size_t>(runs));
    for (int r = 0; r < runs; ++r) {
        SamplingPlan run_plan = plan;
        run_plan.seed = derive_seed(plan.seed, static_cast<std::uint64_t>(r));

        RunOutcome outcome;
        outcome.train_set = sample_training_set(train_pool, run_plan, types);
        const auto docs = doc_tokens(outcome.train_set);
        const auto y = doc_labels(outcome.train_set);

        const auto search =
            grid_search_cv(docs, y, grid, folds, run_plan.seed, stopword_sets, parallel);
        outcome.model = fit_model(docs, y, search.best, stopword_sets, parallel);

        for (const auto& split : eval_splits) {
            const auto X = transform_many(outcome.model.vocabulary, split.docs);
            outcome.metrics[split.name] = metrics(split.labels, predict(outcome.model, X));
        }
        outcomes.push_back(std::move(outcome));
    }
    return outcomes;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw Error(path + ": bad JSON: " + e.what());
    }

    const fs::path base = fs::path(path).parent_path();
    auto resolve = [&base](const std::string& p) {
        fs::path fp(p);
        return fp.is_absolute() ? fp.string() : (base / fp).lexically_normal().string();
    };

    RunConfig cfg;
    try {
        cfg.construct = construct_from_string(j.at("construct").get<std::string>());
        cfg.corpus_path = resolve(j.at("corpus").get<std::string>());
        cfg.ood_path = resolve(j.at("ood").get<std::string>());
        cfg.lexica_dir = resolve(j.at("lexica_dir").get<std::string>());
        cfg.out_dir = resolve(j.at("out_dir").get<std::string>());

        const auto& plan = j.at("plan");
        cfg.plan.mode = sample_mode_from_string(plan.at("mode").get<std::string>());
        cfg.plan.proportion = plan.at("alpha").get<double>();
        cfg.plan.seed = plan.at("seed").get<std::uint64_t>();
        cfg.plan.size = plan.at("size").get<std::size_t>();

        cfg.runs = j.value("runs", 5);
        cfg.folds = j.value("folds", 5);
        cfg.train_fraction = j.value("train_fraction", 0.7);
        cfg.split_seed = j.value("split_seed", std::uint64_t{13});
        cfg.sweep_alphas = j.value("sweep_alphas", std::vector<double>{});
        cfg.core_ks = j.value("core_ks", std::vector<std::size_t>{5, 10, 20, 50});
        cfg.pivot_min_df = j.value("pivot_min_df", std::size_t{10});
        cfg.adv_max_replacements = j.value("adv_max_replacements", 1);

        if (j.contains("grid")) {
            const auto& g = j.at("grid");
            cfg.grid.stopwords.clear();
            for (const auto& s : g.at("stopwords"))
                cfg.grid.stopwords.push_back(stopword_mode_from_string(s.get<std::string>()));
            cfg.grid.norms.clear();
            for (const auto& s : g.at("norm"))
                cfg.grid.norms.push_back(norm_from_string(s.get<std::string>()));
            cfg.grid.Cs = g.at("C").get<std::vector<double>>();
            cfg.grid.penalties.clear();
            for (const auto& s : g.at("penalty"))
                cfg.grid.penalties.push_back(penalty_from_string(s.get<std::string>()));
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(path + ": bad config: " + e.what());
    }
    return cfg;
}

void cmd_reproduce(const RunConfig& cfg) {
    // Validate every referenced path before any training starts.
    for (const std::string& p : {cfg.corpus_path, cfg.ood_path}) {
        if (!fs::exists(p)) throw Error("missing input: " + p);
    }
    if (!fs::is_directory(cfg.lexica_dir)) throw Error("missing lexica dir: " + cfg.lexica_dir);
    for (const char* name : {"affect_pos", "affect_neg", "gender", "identity", "negation",
                             "hedge", "stopwords_en", "synonyms", "entities"}) {
        const fs::path p = fs::path(cfg.lexica_dir) / (std::string(name) + ".txt");
        if (!fs::exists(p)) throw Error("missing lexicon file: " + p.string());
    }

    const Corpus id_corpus = load_jsonl(cfg.corpus_path, cfg.construct);
    const Corpus ood_corpus = load_jsonl(cfg.ood_path, cfg.construct);
    const StrategyLexica lexica = load_strategy_lexica(cfg.lexica_dir);
    const Lexicon stopwords_en =
        load_lexicon(cfg.lexica_dir + "/stopwords_en.txt", "stopwords_en");
    const Lexicon synonyms = load_lexicon(cfg.lexica_dir + "/synonyms.txt", "synonyms");
    const Lexicon entities = load_lexicon(cfg.lexica_dir + "/entities.txt", "entities");
    const StopwordSets stopword_sets = make_stopword_sets(stopwords_en, lexica.negation);

    fs::create_directories(fs::path(cfg.out_dir) / "artifacts");

    // Strategy typology over the full paired corpus.
    const auto distribution = strategy_distribution(id_corpus, lexica, cfg.construct);
    const auto [driven_ids, agnostic_ids] = partition(id_corpus, lexica, cfg.construct);
    {
        auto out = open_out(fs::path(cfg.out_dir) / "types.csv");
        out << "construct,strategy,fraction\n";
        const std::string cname = to_string(cfg.construct);
        for (const auto& [strategy, fraction] : distribution)
            out << cname << "," << to_string(strategy) << "," << fmt6(fraction) << "\n";
        const double total = static_cast<double>(id_corpus.pairs.size());
        out << cname << ",construct_driven,"
            << fmt6(static_cast<double>(driven_ids.size()) / total) << "\n";
        out << cname << ",construct_agnostic,"
            << fmt6(static_cast<double>(agnostic_ids.size()) / total) << "\n";
    }

    // Split; only originals are evaluated in-domain.
    const auto [train_pool, test_part] =
        stratified_split(id_corpus, cfg.train_fraction, cfg.split_seed);
    std::vector<LabeledExample> id_test_examples;
    for (const auto& ex : test_part.examples)
        if (ex.origin == Origin::original) id_test_examples.push_back(ex);
    Corpus id_test;
    id_test.construct = cfg.construct;
    id_test.examples = id_test_examples;

    // Adversarial variants of the in-domain test set plus their aligned
    // original subsets.
    PerturbationSpec swap_spec{PerturbKind::swap, cfg.adv_max_replacements,
                               derive_seed(cfg.plan.seed, 101)};
    PerturbationSpec inv_spec{PerturbKind::inv, cfg.adv_max_replacements,
                              derive_seed(cfg.plan.seed, 102)};
    const auto [adv_swap_set, orig_swap_set] =
        build_adversarial_set(id_test, synonyms, swap_spec);
    const auto [adv_inv_set, orig_inv_set] = build_adversarial_set(id_test, entities, inv_spec);

    std::vector<EvalSplit> splits;
    splits.push_back(make_split("id_test", id_test.examples));
    splits.push_back(make_split("ood", ood_corpus.examples));
    for (auto& [name, set] :
         std::initializer_list<std::pair<const char*, const Corpus*>>{
             {"adv_swap", &adv_swap_set},
             {"orig_swap", &orig_swap_set},
             {"adv_inv", &adv_inv_set},
             {"orig_inv", &orig_inv_set}}) {
        if (set->examples.empty()) {
            warn(std::string(name) + " split is empty; skipped");
            continue;
        }
        splits.push_back(make_split(name, set->examples));
    }

    const auto pool_types = classify_corpus(train_pool, lexica, cfg.construct);

    SamplingPlan ncf_plan = cfg.plan;
    ncf_plan.mode = SampleMode::ncf;
    ncf_plan.proportion = 0.0;

    const auto cf_runs = run_experiment(train_pool, cfg.plan, splits, stopword_sets, cfg.grid,
                                        cfg.runs, cfg.folds, &pool_types);
    const auto ncf_runs = run_experiment(train_pool, ncf_plan, splits, stopword_sets, cfg.grid,
                                         cfg.runs, cfg.folds, &pool_types);

    const std::vector<std::pair<std::string, const std::vector<RunOutcome>*>> arms = {
        {"cf", &cf_runs}, {"ncf", &ncf_runs}};

    {
        auto out = open_out(fs::path(cfg.out_dir) / "metrics.csv");
        out << "construct,mode,dataset,run,macro_f1,pos_f1,pos_precision\n";
        const std::string cname = to_string(cfg.construct);
        for (const auto& [mode, runs] : arms) {
            for (const auto& split : splits) {
                std::vector<MetricsReport> reports;
                for (std::size_t r = 0; r < runs->size(); ++r) {
                    const auto& m = (*runs)[r].metrics.at(split.name);
                    reports.push_back(m);
                    out << cname << "," << mode << "," << split.name << "," << r << ","
                        << fmt6(m.macro_f1) << "," << fmt6(m.pos_f1) << ","
                        << fmt6(m.pos_precision) << "\n";
                }
                const auto agg = aggregate_runs(reports);
                out << cname << "," << mode << "," << split.name << ",mean,"
                    << fmt6(agg.macro_f1.mean) << "," << fmt6(agg.pos_f1.mean) << ","
                    << fmt6(agg.pos_precision.mean) << "\n";
            }
        }
    }

    // Injection-proportion sweep: per run, resample at each alpha and refit
    // with that run's selected hyperparameters.
    if (!cfg.sweep_alphas.empty()) {
        auto out = open_out(fs::path(cfg.out_dir) / "curve.csv");
        out << "alpha,run,split,macro_f1\n";
        const std::vector<const EvalSplit*> curve_splits = {&splits[0], &splits[1]};
        for (int r = 0; r < cfg.runs; ++r) {
            SamplingPlan sweep_plan = cfg.plan;
            if (sweep_plan.mode == SampleMode::ncf) sweep_plan.mode = SampleMode::cf_random;
            sweep_plan.seed = derive_seed(cfg.plan.seed, 1000 + static_cast<std::uint64_t>(r));
            const auto sets = sweep(train_pool, sweep_plan, cfg.sweep_alphas, &pool_types);
            const auto& hp = cf_runs[static_cast<std::size_t>(r)].model.hyperparams;
            for (std::size_t a = 0; a < sets.size(); ++a) {
                const auto docs = doc_tokens(sets[a]);
                const auto y = doc_labels(sets[a]);
                const auto model = fit_model(docs, y, hp, stopword_sets);
                for (const EvalSplit* split : curve_splits) {
                    const auto X = transform_many(model.vocabulary, split->docs);
                    const auto m = metrics(split->labels, predict(model, X));
                    out << fmt6(cfg.sweep_alphas[a]) << "," << r << "," << split->name << ","
                        << fmt6(m.macro_f1) << "\n";
                }
            }
        }
    } else {
        auto out = open_out(fs::path(cfg.out_dir) / "curve.csv");
        out << "alpha,run,split,macro_f1\n";
    }

    // Core-feature proportions against both core sources, averaged over runs.
    {
        CoreFeatureSet lexicon_core;
        lexicon_core.source = "lexicon";
        switch (cfg.construct) {
            case Construct::sentiment:
                lexicon_core.terms.insert(lexica.affect_pos.entries.begin(),
                                          lexica.affect_pos.entries.end());
                lexicon_core.terms.insert(lexica.affect_neg.entries.begin(),
                                          lexica.affect_neg.entries.end());
                break;
            case Construct::sexism:
                lexicon_core.terms = lexica.gender.entries;
                break;
            case Construct::hatespeech:
                lexicon_core.terms = lexica.identity.entries;
                break;
            case Construct::custom:
                lexicon_core.terms.insert(lexica.affect_pos.entries.begin(),
                                          lexica.affect_pos.entries.end());
                lexicon_core.terms.insert(lexica.affect_neg.entries.begin(),
                                          lexica.affect_neg.entries.end());
                break;
        }
        const CoreFeatureSet pivot_core =
            pivot_words(id_corpus, ood_corpus, cfg.pivot_min_df);

        auto out = open_out(fs::path(cfg.out_dir) / "core.csv");
        out << "k,direction,source,mode,proportion\n";
        for (std::size_t k : cfg.core_ks) {
            for (Direction dir : {Direction::positive, Direction::negative}) {
                for (const auto* core : std::initializer_list<const CoreFeatureSet*>{
                         &lexicon_core, &pivot_core}) {
                    for (const auto& [mode, runs] : arms) {
                        double sum = 0.0;
                        for (const auto& outcome : *runs) {
                            const auto ranking = global_ranking(outcome.model, dir, k);
                            sum += core_proportion(ranking, *core,
                                                   std::min(k, ranking.entries.size()));
                        }
                        out << k << "," << to_string(dir) << "," << core->source << ","
                            << mode << "," << fmt6(sum / static_cast<double>(runs->size()))
                            << "\n";
                    }
                }
            }
        }
    }

    // Per-run artifacts so pipeline stages can be replayed independently.
    for (const auto& [mode, runs] : arms) {
        for (std::size_t r = 0; r < runs->size(); ++r) {
            Corpus train_set;
            train_set.construct = cfg.construct;
            train_set.examples = (*runs)[r].train_set;
            const std::string stem = mode + "_run" + std::to_string(r);
            save_jsonl(train_set, (fs::path(cfg.out_dir) / "artifacts" / (stem + "_train.jsonl"))
                                      .string());
            save_model((*runs)[r].model,
                       (fs::path(cfg.out_dir) / "artifacts" / (stem + "_model.json")).string());
        }
    }
}

}  // namespace cadkit
