#include "cadkit/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cadkit/common.hpp"
#include "cadkit/rng.hpp"

namespace cadkit {

Construct construct_from_string(const std::string& s) {
    if (s == "sentiment") return Construct::sentiment;
    if (s == "sexism") return Construct::sexism;
    if (s == "hatespeech") return Construct::hatespeech;
    if (s == "custom") return Construct::custom;
    throw Error("unknown construct: " + s);
}

std::string to_string(Construct c) {
    switch (c) {
        case Construct::sentiment: return "sentiment";
        case Construct::sexism: return "sexism";
        case Construct::hatespeech: return "hatespeech";
        case Construct::custom: return "custom";
    }
    return "custom";
}

std::string to_string(Origin o) {
    return o == Origin::original ? "original" : "counterfactual";
}

namespace {

bool is_word_char(unsigned char c) {
    // Bytes >= 0x80 keep multibyte UTF-8 sequences inside one token.
    return std::isalnum(c) || c >= 0x80;
}

bool drop_whole_token(const std::string& tok) {
    if (tok.empty()) return false;
    if (tok[0] == '#' || tok[0] == '@') return true;
    return tok.rfind("http://", 0) == 0 || tok.rfind("https://", 0) == 0;
}

}  // namespace

std::vector<std::string> preprocess(const std::string& text) {
    std::string lower;
    lower.reserve(text.size());
    for (unsigned char c : text) {
        lower.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c));
    }

    // First pass: whitespace tokens, so hashtags/mentions/URLs are dropped
    // as whole units before punctuation splitting.
    std::vector<std::string> tokens;
    std::istringstream iss(lower);
    std::string raw;
    while (iss >> raw) {
        if (drop_whole_token(raw)) continue;
        std::string cur;
        for (unsigned char c : raw) {
            if (is_word_char(c)) {
                cur.push_back(static_cast<char>(c));
            } else if (!cur.empty()) {
                tokens.push_back(cur);
                cur.clear();
            }
        }
        if (!cur.empty()) tokens.push_back(cur);
    }
    return tokens;
}

std::string join_tokens(const std::vector<std::string>& tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out.push_back(' ');
        out += tokens[i];
    }
    return out;
}

namespace {

Origin origin_from_string(const std::string& s) {
    if (s == "original") return Origin::original;
    if (s == "counterfactual") return Origin::counterfactual;
    throw Error("origin must be 'original' or 'counterfactual', got '" + s + "'");
}

// Shared corpus builder; lenient mode lets a counterfactual stand without
// its original (sampled training sets), everything else stays checked.
Corpus build_corpus(std::vector<LabeledExample> examples, Construct construct,
                    bool allow_lone_counterfactuals) {
    Corpus corpus;
    corpus.construct = construct;
    corpus.examples = std::move(examples);

    std::set<std::string> ids;
    std::map<std::string, const LabeledExample*> originals_by_pair;
    for (auto& ex : corpus.examples) {
        if (ex.doc.id.empty()) throw Error("example with empty id");
        if (!ids.insert(ex.doc.id).second) throw Error("duplicate id: " + ex.doc.id);
        if (ex.label != 0 && ex.label != 1)
            throw Error("label outside {0,1} for id " + ex.doc.id);
        if (ex.doc.tokens.empty()) ex.doc.tokens = preprocess(ex.doc.text);
        if (ex.origin == Origin::original && !ex.pair_id.empty()) {
            if (originals_by_pair.count(ex.pair_id))
                throw Error("two originals share pair_id " + ex.pair_id);
            originals_by_pair[ex.pair_id] = &ex;
        }
    }

    for (const auto& ex : corpus.examples) {
        if (ex.origin != Origin::counterfactual) continue;
        if (ex.pair_id.empty())
            throw Error("counterfactual without pair_id: id " + ex.doc.id);
        auto it = originals_by_pair.find(ex.pair_id);
        if (it == originals_by_pair.end()) {
            if (allow_lone_counterfactuals) continue;
            throw Error("dangling pair_id " + ex.pair_id + " (counterfactual id " +
                        ex.doc.id + " has no original)");
        }
        if (corpus.pairs.count(ex.pair_id))
            throw Error("two counterfactuals share pair_id " + ex.pair_id);
        const LabeledExample& orig = *it->second;
        if (ex.label != 1 - orig.label)
            throw Error("pair labels not flipped for pair_id " + ex.pair_id);
        if (orig.doc.text.empty() || ex.doc.text.empty())
            throw Error("empty text in pair " + ex.pair_id);
        corpus.pairs.emplace(ex.pair_id, CounterfactualPair{orig, ex});
    }
    return corpus;
}

std::vector<LabeledExample> parse_jsonl_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);

    std::vector<LabeledExample> examples;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json rec;
        try {
            rec = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw Error(path + ":" + std::to_string(lineno) + ": malformed JSON: " + e.what());
        }
        try {
            LabeledExample ex;
            ex.doc.id = rec.at("id").get<std::string>();
            ex.doc.text = rec.at("text").get<std::string>();
            if (!rec.at("label").is_number_integer())
                throw Error("label must be an integer 0 or 1");
            ex.label = rec.at("label").get<int>();
            ex.origin = origin_from_string(rec.at("origin").get<std::string>());
            ex.pair_id = rec.at("pair_id").get<std::string>();
            examples.push_back(std::move(ex));
        } catch (const nlohmann::json::exception& e) {
            throw Error(path + ":" + std::to_string(lineno) + ": bad record: " + e.what());
        } catch (const Error& e) {
            throw Error(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return examples;
}

}  // namespace

Corpus from_examples(std::vector<LabeledExample> examples, Construct construct) {
    return build_corpus(std::move(examples), construct, false);
}

Corpus load_jsonl(const std::string& path, Construct construct) {
    auto records = parse_jsonl_records(path);  // parse errors carry path:line
    try {
        return build_corpus(std::move(records), construct, false);
    } catch (const Error& e) {
        throw Error(path + ": " + e.what());
    }
}

Corpus load_examples_jsonl(const std::string& path, Construct construct) {
    auto records = parse_jsonl_records(path);
    try {
        return build_corpus(std::move(records), construct, true);
    } catch (const Error& e) {
        throw Error(path + ": " + e.what());
    }
}

void save_jsonl(const Corpus& corpus, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    for (const auto& ex : corpus.examples) {
        nlohmann::json rec{{"id", ex.doc.id},
                           {"text", ex.doc.text},
                           {"label", ex.label},
                           {"origin", to_string(ex.origin)},
                           {"pair_id", ex.pair_id}};
        out << rec.dump() << "\n";
    }
}

std::pair<Corpus, Corpus> stratified_split(const Corpus& corpus, double train_fraction,
                                           std::uint64_t seed) {
    if (train_fraction <= 0.0 || train_fraction >= 1.0)
        throw Error("train_fraction must be in (0,1)");
    for (int cls : {0, 1}) {
        auto n = std::count_if(corpus.examples.begin(), corpus.examples.end(),
                               [cls](const auto& e) { return e.label == cls; });
        if (n < 2) throw Error("class " + std::to_string(cls) + " has fewer than 2 examples");
    }

    // Units: whole pairs (one example of each class) and unpaired singles
    // per class. Pairs never straddle the split.
    std::vector<std::string> pair_ids;
    for (const auto& [pid, _] : corpus.pairs) pair_ids.push_back(pid);
    std::set<std::string> paired_example_ids;
    for (const auto& [pid, pair] : corpus.pairs) {
        paired_example_ids.insert(pair.original.doc.id);
        paired_example_ids.insert(pair.counterfactual.doc.id);
    }
    std::vector<std::string> singles_pos, singles_neg;
    for (const auto& ex : corpus.examples) {
        if (paired_example_ids.count(ex.doc.id)) continue;
        (ex.label == 1 ? singles_pos : singles_neg).push_back(ex.doc.id);
    }

    auto pick_train = [&](std::vector<std::string>& ids, std::uint64_t stream) {
        Rng rng(derive_seed(seed, stream));
        rng.shuffle(ids);
        auto k = static_cast<std::size_t>(
            std::llround(train_fraction * static_cast<double>(ids.size())));
        return std::set<std::string>(ids.begin(), ids.begin() + k);
    };
    const auto train_pairs = pick_train(pair_ids, 0);
    const auto train_pos = pick_train(singles_pos, 1);
    const auto train_neg = pick_train(singles_neg, 2);

    std::vector<LabeledExample> train, test;
    for (const auto& ex : corpus.examples) {
        bool to_train;
        if (paired_example_ids.count(ex.doc.id)) {
            to_train = train_pairs.count(ex.pair_id) > 0;
        } else if (ex.label == 1) {
            to_train = train_pos.count(ex.doc.id) > 0;
        } else {
            to_train = train_neg.count(ex.doc.id) > 0;
        }
        (to_train ? train : test).push_back(ex);
    }
    return {from_examples(std::move(train), corpus.construct),
            from_examples(std::move(test), corpus.construct)};
}

}  // namespace cadkit
