#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "cadkit/adversarial.hpp"
#include "cadkit/common.hpp"
#include "cadkit/explain.hpp"
#include "cadkit/reproduce.hpp"
#include "cadkit/synth.hpp"

namespace fs = std::filesystem;
using namespace cadkit;

namespace {

// Minimal CSV row parser with double-quote escaping.
std::vector<std::string> parse_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur.push_back('"');
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

Corpus load_corpus_any(const std::string& path, Construct construct) {
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
        std::ifstream in(path);
        if (!in) throw Error("cannot open " + path);
        std::string header_line;
        if (!std::getline(in, header_line)) throw Error(path + ": empty CSV");
        const auto header = parse_csv_line(header_line);
        auto col = [&](const std::string& name) {
            for (std::size_t i = 0; i < header.size(); ++i)
                if (header[i] == name) return i;
            throw Error(path + ": missing CSV column '" + name + "'");
        };
        const std::size_t c_id = col("id"), c_text = col("text"), c_label = col("label"),
                          c_origin = col("origin"), c_pair = col("pair_id");
        std::vector<LabeledExample> examples;
        std::string line;
        std::size_t lineno = 1;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            const auto f = parse_csv_line(line);
            const std::size_t needed =
                std::max({c_id, c_text, c_label, c_origin, c_pair}) + 1;
            if (f.size() < needed)
                throw Error(path + ":" + std::to_string(lineno) + ": short CSV row");
            LabeledExample ex;
            ex.doc.id = f[c_id];
            ex.doc.text = f[c_text];
            try {
                ex.label = std::stoi(f[c_label]);
            } catch (const std::exception&) {
                throw Error(path + ":" + std::to_string(lineno) + ": bad label");
            }
            ex.origin = f[c_origin] == "counterfactual" ? Origin::counterfactual
                                                        : Origin::original;
            ex.pair_id = f[c_pair];
            examples.push_back(std::move(ex));
        }
        return from_examples(std::move(examples), construct);
    }
    return load_jsonl(path, construct);
}

void save_examples(const std::vector<LabeledExample>& examples, Construct construct,
                   const std::string& path) {
    Corpus c;
    c.construct = construct;
    c.examples = examples;
    save_jsonl(c, path);
}

// Per-command fallbacks loaded from --config (same schema as reproduce).
struct ConfigFallback {
    std::optional<RunConfig> cfg;

    void load(const std::string& path) {
        if (!path.empty()) cfg = load_run_config(path);
    }
    void fill(std::string& value, const std::string& from) const {
        if (value.empty() && cfg) value = from;
    }
};

std::string fmt6(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", x);
    return buf;
}

void print_metrics_row(std::ostream& os, const std::string& name, const MetricsReport& m) {
    os << name << ": macro_f1=" << fmt6(m.macro_f1) << " pos_f1=" << fmt6(m.pos_f1)
       << " pos_precision=" << fmt6(m.pos_precision) << " n=" << m.n << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"counterfactual-augmentation analysis toolkit"};
    app.require_subcommand(1);

    // --- ingest ---------------------------------------------------------
    auto* ingest = app.add_subcommand("ingest", "validate a corpus (JSONL or CSV) and emit JSONL");
    std::string ingest_in, ingest_out, ingest_construct = "custom", ingest_config;
    std::uint64_t ingest_seed = 0;
    ingest->add_option("--in", ingest_in, "input corpus (.jsonl or .csv)")->required();
    ingest->add_option("--out", ingest_out, "output JSONL path")->required();
    ingest->add_option("--construct", ingest_construct, "sentiment|sexism|hatespeech|custom");
    ingest->add_option("--seed", ingest_seed, "unused; accepted for uniformity");
    ingest->add_option("--config", ingest_config, "run-config JSON for defaults");

    // --- type ------------------------------------------------------------
    auto* type = app.add_subcommand("type", "classify pair generation strategies");
    std::string type_corpus, type_construct, type_lexica, type_out, type_config;
    std::uint64_t type_seed = 0;
    type->add_option("--corpus", type_corpus, "paired corpus JSONL");
    type->add_option("--construct", type_construct, "sentiment|sexism|hatespeech");
    type->add_option("--lexica", type_lexica, "lexica directory");
    type->add_option("--out", type_out, "output JSONL (default stdout)");
    type->add_option("--seed", type_seed, "unused; accepted for uniformity");
    type->add_option("--config", type_config, "run-config JSON for defaults");

    // --- sample ----------------------------------------------------------
    auto* sample = app.add_subcommand("sample", "compose a training set");
    std::string sample_corpus, sample_mode = "cf_random", sample_construct, sample_lexica,
                sample_out, sample_config;
    double sample_alpha = 0.5;
    std::uint64_t sample_seed = 0;
    std::size_t sample_size = 0;
    sample->add_option("--corpus", sample_corpus, "pool corpus JSONL");
    sample->add_option("--mode", sample_mode,
                       "ncf|cf_random|cf_sexism_scheme|cf_construct_driven|cf_agnostic|"
                       "cf_balanced_types");
    sample->add_option("--alpha", sample_alpha, "counterfactual proportion");
    sample->add_option("--seed", sample_seed, "sampling seed");
    sample->add_option("--size", sample_size, "exact output size");
    sample->add_option("--construct", sample_construct, "needed for by-type modes");
    sample->add_option("--lexica", sample_lexica, "needed for by-type modes");
    sample->add_option("--out", sample_out, "output JSONL")->required();
    sample->add_option("--config", sample_config, "run-config JSON for defaults");

    // --- train -----------------------------------------------------------
    auto* train_cmd = app.add_subcommand("train", "grid-search CV and fit a model");
    std::string train_set_path, train_lexica, train_out, train_config;
    std::uint64_t train_seed = 0;
    int train_folds = 5;
    train_cmd->add_option("--train", train_set_path, "training set JSONL");
    train_cmd->add_option("--lexica", train_lexica, "lexica directory");
    train_cmd->add_option("--folds", train_folds, "CV folds");
    train_cmd->add_option("--seed", train_seed, "fold-assignment seed");
    train_cmd->add_option("--out", train_out, "model JSON path")->required();
    train_cmd->add_option("--config", train_config, "run-config JSON for defaults/grid");

    // --- eval ------------------------------------------------------------
    auto* eval_cmd = app.add_subcommand("eval", "evaluate a model, optionally against another");
    std::string eval_model, eval_test, eval_against, eval_config;
    std::uint64_t eval_seed = 0;
    eval_cmd->add_option("--model", eval_model, "model JSON")->required();
    eval_cmd->add_option("--test", eval_test, "test corpus JSONL")->required();
    eval_cmd->add_option("--against", eval_against, "second model JSON for McNemar");
    eval_cmd->add_option("--seed", eval_seed, "unused; accepted for uniformity");
    eval_cmd->add_option("--config", eval_config, "run-config JSON for defaults");

    // --- explain ---------------------------------------------------------
    auto* explain_cmd = app.add_subcommand("explain", "feature rankings and core proportions");
    std::string explain_model, explain_core = "lexicon:affect", explain_lexica, explain_id,
                explain_ood, explain_out, explain_ks = "1,5,10,20,50", explain_config;
    std::size_t explain_top = 0, explain_min_df = 10;
    std::uint64_t explain_seed = 0;
    explain_cmd->add_option("--model", explain_model, "model JSON")->required();
    explain_cmd->add_option("--core", explain_core,
                            "lexicon:<affect|gender|identity> or pivot");
    explain_cmd->add_option("--lexica", explain_lexica, "lexica directory");
    explain_cmd->add_option("--id", explain_id, "in-domain corpus (pivot core)");
    explain_cmd->add_option("--ood", explain_ood, "out-of-domain corpus (pivot core)");
    explain_cmd->add_option("--min-df", explain_min_df, "pivot document-frequency threshold");
    explain_cmd->add_option("--ks", explain_ks, "comma-separated ranking depths");
    explain_cmd->add_option("--top", explain_top, "print the top-N table instead of a curve");
    explain_cmd->add_option("--out", explain_out, "curve CSV path (default stdout)");
    explain_cmd->add_option("--seed", explain_seed, "unused; accepted for uniformity");
    explain_cmd->add_option("--config", explain_config, "run-config JSON for defaults");

    // --- pivots ----------------------------------------------------------
    auto* pivots_cmd = app.add_subcommand("pivots", "mutual-information pivot words");
    std::string pivots_id, pivots_ood, pivots_out, pivots_config;
    std::size_t pivots_min_df = 10, pivots_top = 100;
    std::uint64_t pivots_seed = 0;
    pivots_cmd->add_option("--id", pivots_id, "in-domain corpus JSONL");
    pivots_cmd->add_option("--ood", pivots_ood, "out-of-domain corpus JSONL");
    pivots_cmd->add_option("--min-df", pivots_min_df, "document-frequency threshold");
    pivots_cmd->add_option("--top", pivots_top, "number of pivot words");
    pivots_cmd->add_option("--out", pivots_out, "output CSV (default stdout)");
    pivots_cmd->add_option("--seed", pivots_seed, "unused; accepted for uniformity");
    pivots_cmd->add_option("--config", pivots_config, "run-config JSON for defaults");

    // --- adversarial -----------------------------------------------------
    auto* adv_cmd = app.add_subcommand("adversarial", "label-preserving perturbations");
    std::string adv_kind = "swap", adv_corpus, adv_lexica, adv_out, adv_orig, adv_config;
    int adv_max = 1;
    std::uint64_t adv_seed = 0;
    adv_cmd->add_option("--kind", adv_kind, "swap|inv");
    adv_cmd->add_option("--corpus", adv_corpus, "input corpus JSONL");
    adv_cmd->add_option("--lexica", adv_lexica, "lexica directory");
    adv_cmd->add_option("--max-replacements", adv_max, "token replacement cap (swap)");
    adv_cmd->add_option("--seed", adv_seed, "perturbation seed");
    adv_cmd->add_option("--out", adv_out, "adversarial JSONL")->required();
    adv_cmd->add_option("--orig-subset", adv_orig, "aligned original subset JSONL");
    adv_cmd->add_option("--config", adv_config, "run-config JSON for defaults");

    // --- reproduce -------------------------------------------------------
    auto* repro = app.add_subcommand("reproduce", "full pipeline: experiments + CSV reports");
    std::string repro_config;
    std::uint64_t repro_seed = 0;
    repro->add_option("--config", repro_config, "run-config JSON")->required();
    repro->add_option("--seed", repro_seed, "override the plan seed (0 = keep)");

    // --- synth -----------------------------------------------------------
    auto* synth_cmd = app.add_subcommand("synth", "regenerate the planted-feature corpus");
    std::string synth_id_out, synth_ood_out, synth_config;
    std::size_t synth_pairs = 1000, synth_ood_n = 600;
    std::uint64_t synth_seed = 97;
    synth_cmd->add_option("--out-id", synth_id_out, "in-domain JSONL path")->required();
    synth_cmd->add_option("--out-ood", synth_ood_out, "out-of-domain JSONL path")->required();
    synth_cmd->add_option("--pairs", synth_pairs, "number of pairs");
    synth_cmd->add_option("--ood-size", synth_ood_n, "out-of-domain size");
    synth_cmd->add_option("--seed", synth_seed, "generator seed");
    synth_cmd->add_option("--config", synth_config, "unused; accepted for uniformity");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);  // exit 0 with usage
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n" << app.help() << "\n";
        return 2;  // usage error
    }

    try {
        if (*ingest) {
            const Corpus c = load_corpus_any(ingest_in, construct_from_string(ingest_construct));
            save_jsonl(c, ingest_out);
            std::cout << "wrote " << c.examples.size() << " examples, " << c.pairs.size()
                      << " pairs to " << ingest_out << "\n";
        } else if (*type) {
            ConfigFallback fb;
            fb.load(type_config);
            fb.fill(type_corpus, fb.cfg ? fb.cfg->corpus_path : "");
            fb.fill(type_lexica, fb.cfg ? fb.cfg->lexica_dir : "");
            if (type_construct.empty() && fb.cfg) type_construct = to_string(fb.cfg->construct);
            if (type_corpus.empty() || type_lexica.empty() || type_construct.empty())
                throw Error("type: --corpus, --construct and --lexica required");
            const Corpus c = load_jsonl(type_corpus, construct_from_string(type_construct));
            const auto lexica = load_strategy_lexica(type_lexica);
            const auto types = classify_corpus(c, lexica, c.construct);
            std::ofstream file;
            if (!type_out.empty()) file.open(type_out);
            std::ostream& os = type_out.empty() ? std::cout : file;
            for (const auto& [pid, label] : types) {
                nlohmann::json rec;
                rec["pair_id"] = pid;
                std::vector<std::string> names;
                for (Strategy s : label.strategies) names.push_back(to_string(s));
                rec["strategies"] = names;
                rec["construct_driven"] = label.construct_driven;
                os << rec.dump() << "\n";
            }
        } else if (*sample) {
            ConfigFallback fb;
            fb.load(sample_config);
            fb.fill(sample_corpus, fb.cfg ? fb.cfg->corpus_path : "");
            fb.fill(sample_lexica, fb.cfg ? fb.cfg->lexica_dir : "");
            if (sample_corpus.empty()) throw Error("sample: --corpus required");
            Construct construct = Construct::custom;
            if (!sample_construct.empty())
                construct = construct_from_string(sample_construct);
            else if (fb.cfg)
                construct = fb.cfg->construct;
            const Corpus pool = load_jsonl(sample_corpus, construct);

            SamplingPlan plan;
            plan.mode = sample_mode_from_string(sample_mode);
            plan.proportion = plan.mode == SampleMode::ncf ? 0.0 : sample_alpha;
            plan.seed = sample_seed;
            plan.size = sample_size;

            std::map<std::string, StrategyLabelSet> types;
            const std::map<std::string, StrategyLabelSet>* types_ptr = nullptr;
            if (plan.mode == SampleMode::cf_construct_driven ||
                plan.mode == SampleMode::cf_agnostic ||
                plan.mode == SampleMode::cf_balanced_types) {
                if (sample_lexica.empty())
                    throw Error("sample: --lexica required for by-type modes");
                types = classify_corpus(pool, load_strategy_lexica(sample_lexica),
                                        pool.construct);
                types_ptr = &types;
            }
            save_examples(sample_training_set(pool, plan, types_ptr), pool.construct,
                          sample_out);
        } else if (*train_cmd) {
            ConfigFallback fb;
            fb.load(train_config);
            fb.fill(train_lexica, fb.cfg ? fb.cfg->lexica_dir : "");
            if (train_set_path.empty() || train_lexica.empty())
                throw Error("train: --train and --lexica required");
            // sampled sets keep counterfactuals without their originals
            const Corpus set = load_examples_jsonl(train_set_path);
            const auto docs = [&] {
                std::vector<std::vector<std::string>> d;
                for (const auto& ex : set.examples) d.push_back(ex.doc.tokens);
                return d;
            }();
            const auto y = [&] {
                std::vector<int> v;
                for (const auto& ex : set.examples) v.push_back(ex.label);
                return v;
            }();
            const auto lexica = load_strategy_lexica(train_lexica);
            const auto stopwords_en =
                load_lexicon(train_lexica + "/stopwords_en.txt", "stopwords_en");
            const auto sets = make_stopword_sets(stopwords_en, lexica.negation);
            const HyperGrid grid = fb.cfg ? fb.cfg->grid : HyperGrid::default_grid();
            const auto search = grid_search_cv(docs, y, grid, train_folds, train_seed, sets);
            const auto model = fit_model(docs, y, search.best, sets);
            save_model(model, train_out);
            std::cout << "best config: stopwords=" << to_string(search.best.stopwords)
                      << " norm=" << to_string(search.best.norm) << " C=" << search.best.C
                      << " penalty=" << to_string(search.best.penalty)
                      << " (mean CV macro F1 " << fmt6(search.mean_scores[search.best_index])
                      << ", " << search.n_fits << " fits)\n";
        } else if (*eval_cmd) {
            const LinearModel model = load_model(eval_model);
            const Corpus test = load_examples_jsonl(eval_test);
            std::vector<std::vector<std::string>> docs;
            std::vector<int> y;
            for (const auto& ex : test.examples) {
                docs.push_back(ex.doc.tokens);
                y.push_back(ex.label);
            }
            const auto X = transform_many(model.vocabulary, docs);
            const auto pred = predict(model, X);
            print_metrics_row(std::cout, "model", metrics(y, pred));
            if (!eval_against.empty()) {
                const LinearModel other = load_model(eval_against);
                const auto Xo = transform_many(other.vocabulary, docs);
                const auto pred_o = predict(other, Xo);
                print_metrics_row(std::cout, "against", metrics(y, pred_o));
                const auto mc = mcnemar(y, pred, pred_o);
                std::cout << "mcnemar: b=" << mc.b << " c=" << mc.c
                          << " statistic=" << fmt6(mc.statistic) << " p=" << fmt6(mc.p_value)
                          << (mc.p_value < 0.01 ? " *" : "") << "\n";
            }
        } else if (*explain_cmd) {
            const LinearModel model = load_model(explain_model);
            if (explain_top > 0) {
                for (Direction dir : {Direction::positive, Direction::negative}) {
                    const auto ranking = global_ranking(model, dir, explain_top);
                    std::cout << "# " << to_string(dir) << "\n";
                    for (const auto& [term, weight] : ranking.entries)
                        std::cout << term << "\t" << fmt6(weight) << "\n";
                }
                return 0;
            }
            CoreFeatureSet core;
            if (explain_core == "pivot") {
                if (explain_id.empty() || explain_ood.empty())
                    throw Error("explain: pivot core needs --id and --ood");
                core = pivot_words(load_jsonl(explain_id), load_jsonl(explain_ood),
                                   explain_min_df);
            } else if (explain_core.rfind("lexicon:", 0) == 0) {
                if (explain_lexica.empty())
                    throw Error("explain: lexicon core needs --lexica");
                const auto lexica = load_strategy_lexica(explain_lexica);
                const std::string which = explain_core.substr(8);
                core.source = "lexicon";
                if (which == "affect") {
                    core.terms.insert(lexica.affect_pos.entries.begin(),
                                      lexica.affect_pos.entries.end());
                    core.terms.insert(lexica.affect_neg.entries.begin(),
                                      lexica.affect_neg.entries.end());
                } else if (which == "gender") {
                    core.terms = lexica.gender.entries;
                } else if (which == "identity") {
                    core.terms = lexica.identity.entries;
                } else {
                    throw Error("explain: unknown lexicon core '" + which + "'");
                }
            } else {
                throw Error("explain: --core must be lexicon:<name> or pivot");
            }
            std::vector<std::size_t> ks;
            std::stringstream ss(explain_ks);
            std::string part;
            while (std::getline(ss, part, ',')) ks.push_back(std::stoul(part));
            std::ofstream file;
            if (!explain_out.empty()) file.open(explain_out);
            std::ostream& os = explain_out.empty() ? std::cout : file;
            os << "k,direction,proportion\n";
            for (Direction dir : {Direction::positive, Direction::negative}) {
                for (const auto& [k, prop] : proportion_curve(model, core, dir, ks))
                    os << k << "," << to_string(dir) << "," << fmt6(prop) << "\n";
            }
        } else if (*pivots_cmd) {
            ConfigFallback fb;
            fb.load(pivots_config);
            fb.fill(pivots_id, fb.cfg ? fb.cfg->corpus_path : "");
            fb.fill(pivots_ood, fb.cfg ? fb.cfg->ood_path : "");
            if (pivots_id.empty() || pivots_ood.empty())
                throw Error("pivots: --id and --ood required");
            const auto ranking = pivot_ranking(load_jsonl(pivots_id), load_jsonl(pivots_ood),
                                               pivots_min_df, pivots_top);
            std::ofstream file;
            if (!pivots_out.empty()) file.open(pivots_out);
            std::ostream& os = pivots_out.empty() ? std::cout : file;
            os << "term,mi\n";
            for (const auto& [term, mi] : ranking) os << term << "," << fmt6(mi) << "\n";
        } else if (*adv_cmd) {
            ConfigFallback fb;
            fb.load(adv_config);
            fb.fill(adv_lexica, fb.cfg ? fb.cfg->lexica_dir : "");
            if (adv_corpus.empty() || adv_lexica.empty())
                throw Error("adversarial: --corpus and --lexica required");
            const Corpus c = load_examples_jsonl(adv_corpus);
            PerturbationSpec spec;
            spec.kind = perturb_kind_from_string(adv_kind);
            spec.max_replacements = adv_max;
            spec.seed = adv_seed;
            const Lexicon lex =
                spec.kind == PerturbKind::swap
                    ? load_lexicon(adv_lexica + "/synonyms.txt", "synonyms")
                    : load_lexicon(adv_lexica + "/entities.txt", "entities");
            const auto [adv, orig] = build_adversarial_set(c, lex, spec);
            save_jsonl(adv, adv_out);
            if (!adv_orig.empty()) save_jsonl(orig, adv_orig);
            std::cout << "perturbed " << adv.examples.size() << " of " << c.examples.size()
                      << " examples\n";
        } else if (*repro) {
            RunConfig cfg = load_run_config(repro_config);
            if (repro_seed != 0) cfg.plan.seed = repro_seed;
            cmd_reproduce(cfg);
            std::cout << "reports written to " << cfg.out_dir << "\n";
        } else if (*synth_cmd) {
            SynthConfig cfg;
            cfg.n_pairs = synth_pairs;
            cfg.n_ood = synth_ood_n;
            cfg.seed = synth_seed;
            write_bundle(generate_sentiment_bundle(cfg), synth_id_out, synth_ood_out);
            std::cout << "wrote " << synth_id_out << " and " << synth_ood_out << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "cadkit: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
