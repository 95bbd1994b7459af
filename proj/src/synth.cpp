#include "cadkit/synth.hpp"

#include <algorithm>
#include <cstdio>

#include "cadkit/common.hpp"
#include "cadkit/rng.hpp"

namespace cadkit {

// Word pools. The affect/hedge/negation words must stay subsets of the
// bundled lexica and the spurious/filler words must stay out of them; a
// test cross-checks both directions against the data files.
namespace synthwords {

const std::vector<std::string> affect_pos = {
    "good",      "great",      "excellent",   "amazing",    "wonderful",  "fantastic",
    "brilliant", "superb",     "delightful",  "charming",   "captivating", "enjoyable",
    "impressive", "marvelous", "outstanding", "terrific",   "lovely",     "perfect",
    "refreshing", "remarkable", "splendid",   "stunning",   "thrilling",  "touching",
    "clever",    "engaging",   "entertaining", "gripping",  "hilarious",  "inspiring"};

const std::vector<std::string> affect_neg = {
    "bad",        "terrible",   "horrible",    "awful",      "dreadful",   "boring",
    "dull",       "disappointing", "mediocre", "painful",    "pathetic",   "pointless",
    "predictable", "shallow",   "sloppy",      "tedious",    "unbearable", "uninspired",
    "unwatchable", "weak",      "annoying",    "bland",      "clumsy",     "confusing",
    "depressing", "forgettable", "irritating", "lifeless",   "messy",      "wooden"};

// Spurious tokens: correlated with the label in-domain, shuffled OOD.
const std::vector<std::string> spurious_pos = {"matinee", "premiere", "screening", "multiplex"};
const std::vector<std::string> spurious_neg = {"rental", "rerun", "broadcast", "daytime"};

const std::vector<std::string> fillers_shared = {
    "movie",  "film",      "plot",     "story", "actor",    "scene",  "director", "script",
    "character", "ending", "soundtrack", "dialogue", "cast", "sequel", "audience", "cinema"};

const std::vector<std::string> fillers_ood = {"novel", "chapter", "author",
                                              "prose", "paragraph", "narrator"};

const std::vector<std::string> glue = {"the", "it", "was", "and", "of", "this"};

const std::vector<std::string> entities = {"marcus", "elena",   "sofia", "henry", "priya",
                                           "daniel", "london",  "paris", "chicago", "tokyo"};

const std::vector<std::string> hedges = {"apparently", "supposedly", "presumably"};

const std::string negation_token = "not";

}  // namespace synthwords

namespace {

using namespace synthwords;

const std::string& pick(const std::vector<std::string>& pool, Rng& rng) {
    return pool[rng.bounded(pool.size())];
}

std::string format_id(const char* prefix, std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%05zu", prefix, i);
    return buf;
}

// One review-style token bag. Affect words carry the label (with a small
// wrong-polarity noise rate); the spurious token tracks the label in-domain
// and is drawn from either pool out-of-domain.
std::vector<std::string> compose_doc(int label, bool in_domain, const SynthConfig& cfg,
                                     Rng& rng) {
    std::vector<std::string> toks;

    const bool noisy = rng.uniform01() < cfg.affect_noise;
    const bool word_positive = noisy ? label == 0 : label == 1;
    const auto& affect_pool = word_positive ? affect_pos : affect_neg;
    const std::size_t n_affect = 1 + rng.bounded(2);
    for (std::size_t i = 0; i < n_affect; ++i) toks.push_back(pick(affect_pool, rng));

    if (rng.uniform01() < cfg.p_spurious) {
        if (in_domain) {
            toks.push_back(pick(label == 1 ? spurious_pos : spurious_neg, rng));
        } else {
            toks.push_back(rng.bounded(2) == 0 ? pick(spurious_pos, rng)
                                               : pick(spurious_neg, rng));
        }
    }

    const auto& filler_pool = in_domain ? fillers_shared : fillers_ood;
    const std::size_t n_fill = 3 + rng.bounded(3);
    for (std::size_t i = 0; i < n_fill; ++i) toks.push_back(pick(filler_pool, rng));
    if (!in_domain) {
        // Shared vocabulary across domains so pivot candidates exist.
        toks.push_back(pick(fillers_shared, rng));
    }

    if (rng.uniform01() < cfg.p_entity) toks.push_back(pick(entities, rng));

    const std::size_t n_glue = 2 + rng.bounded(3);
    for (std::size_t i = 0; i < n_glue; ++i) toks.push_back(pick(glue, rng));

    rng.shuffle(toks);
    return toks;
}

bool is_affect(const std::string& tok, bool& positive) {
    if (std::find(affect_pos.begin(), affect_pos.end(), tok) != affect_pos.end()) {
        positive = true;
        return true;
    }
    if (std::find(affect_neg.begin(), affect_neg.end(), tok) != affect_neg.end()) {
        positive = false;
        return true;
    }
    return false;
}

// Minimal edit flipping the label: swap each affect word's polarity, or
// negate/hedge the first affect word. Everything else (the spurious token
// included) is left alone.
std::vector<std::string> counterfactual_tokens(const std::vector<std::string>& orig,
                                               const SynthConfig& cfg, Rng& rng) {
    const double u = rng.uniform01();
    std::vector<std::string> toks = orig;
    if (u < cfg.p_negation_strategy) {
        for (std::size_t i = 0; i < toks.size(); ++i) {
            bool positive = false;
            if (is_affect(toks[i], positive)) {
                toks.insert(toks.begin() + static_cast<long>(i), negation_token);
                return toks;
            }
        }
    } else if (u < cfg.p_negation_strategy + cfg.p_hedge_strategy) {
        for (std::size_t i = 0; i < toks.size(); ++i) {
            bool positive = false;
            if (is_affect(toks[i], positive)) {
                toks.insert(toks.begin() + static_cast<long>(i), pick(hedges, rng));
                return toks;
            }
        }
    }
    for (auto& tok : toks) {
        bool positive = false;
        if (is_affect(tok, positive))
            tok = pick(positive ? affect_neg : affect_pos, rng);
    }
    return toks;
}

LabeledExample make_example(std::string id, std::string pair_id, int label, Origin origin,
                            std::vector<std::string> toks) {
    LabeledExample ex;
    ex.doc.id = std::move(id);
    ex.doc.text = join_tokens(toks);
    ex.doc.tokens = std::move(toks);
    ex.label = label;
    ex.origin = origin;
    ex.pair_id = std::move(pair_id);
    return ex;
}

}  // namespace

SynthBundle generate_sentiment_bundle(const SynthConfig& cfg) {
    Rng rng(cfg.seed);

    std::vector<LabeledExample> id_examples;
    id_examples.reserve(2 * cfg.n_pairs);
    for (std::size_t i = 0; i < cfg.n_pairs; ++i) {
        const int label = static_cast<int>(i % 2);
        const std::string pid = format_id("p", i);
        auto orig_toks = compose_doc(label, /*in_domain=*/true, cfg, rng);
        auto cf_toks = counterfactual_tokens(orig_toks, cfg, rng);
        id_examples.push_back(
            make_example(format_id("d", i), pid, label, Origin::original, std::move(orig_toks)));
        id_examples.push_back(make_example(format_id("d", i) + "c", pid, 1 - label,
                                           Origin::counterfactual, std::move(cf_toks)));
    }

    std::vector<LabeledExample> ood_examples;
    ood_examples.reserve(cfg.n_ood);
    for (std::size_t i = 0; i < cfg.n_ood; ++i) {
        const int label = static_cast<int>(i % 2);
        ood_examples.push_back(make_example(format_id("o", i), "", label, Origin::original,
                                            compose_doc(label, /*in_domain=*/false, cfg, rng)));
    }

    SynthBundle bundle;
    bundle.in_domain = from_examples(std::move(id_examples), Construct::sentiment);
    bundle.out_of_domain = from_examples(std::move(ood_examples), Construct::sentiment);
    return bundle;
}

void write_bundle(const SynthBundle& bundle, const std::string& id_path,
                  const std::string& ood_path) {
    save_jsonl(bundle.in_domain, id_path);
    save_jsonl(bundle.out_of_domain, ood_path);
}

}  // namespace cadkit
