#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cadkit/corpus.hpp"

namespace cadkit {

// Planted-feature sentiment-style corpus. Affect words (drawn from the
// bundled affect lexica) causally determine labels; a small spurious token
// set correlates with labels in-domain but is shuffled out-of-domain;
// counterfactuals flip the affect words (or negate/hedge them) and keep the
// spurious token, so substitution training breaks the shortcut.
struct SynthConfig {
    std::size_t n_pairs = 1000;      // in-domain original/counterfactual pairs
    std::size_t n_ood = 600;         // out-of-domain singletons
    std::uint64_t seed = 97;
    double p_spurious = 0.95;        // in-domain docs carrying a spurious token
    double affect_noise = 0.05;      // in-domain docs with a wrong-polarity affect word
    double p_entity = 0.3;           // docs mentioning a gazetteer name
    double p_negation_strategy = 0.15;  // counterfactual built by negation insertion
    double p_hedge_strategy = 0.05;     // ... by hedge insertion (rest: affect flip)
};

struct SynthBundle {
    Corpus in_domain;       // paired, construct = sentiment
    Corpus out_of_domain;   // unpaired originals, spurious correlation broken
};

SynthBundle generate_sentiment_bundle(const SynthConfig& cfg);

void write_bundle(const SynthBundle& bundle, const std::string& id_path,
                  const std::string& ood_path);

// Word pools the generator draws from, exposed so tests can cross-check
// them against the bundled lexicon files.
namespace synthwords {
extern const std::vector<std::string> affect_pos;
extern const std::vector<std::string> affect_neg;
extern const std::vector<std::string> spurious_pos;
extern const std::vector<std::string> spurious_neg;
extern const std::vector<std::string> fillers_shared;
extern const std::vector<std::string> fillers_ood;
extern const std::vector<std::string> glue;
extern const std::vector<std::string> entities;
extern const std::vector<std::string> hedges;
extern const std::string negation_token;
}  // namespace synthwords

}  // namespace cadkit
