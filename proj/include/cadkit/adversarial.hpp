#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "cadkit/corpus.hpp"
#include "cadkit/lexicon.hpp"

namespace cadkit {

enum class PerturbKind { swap, inv };

std::string to_string(PerturbKind k);
PerturbKind perturb_kind_from_string(const std::string& s);

struct PerturbationSpec {
    PerturbKind kind = PerturbKind::swap;
    int max_replacements = 1;  // caps synonym swaps; entity swaps replace all
    std::uint64_t seed = 0;
};

// Replace up to max_replacements tokens that have synonym entries with a
// seeded-random alternative; nullopt when nothing is replaceable. Label and
// pair_id preserved; the rewritten text keeps surrounding punctuation.
std::optional<LabeledExample> adv_swap(const LabeledExample& example, const Lexicon& synonyms,
                                       const PerturbationSpec& spec);

// Replace every token matching a gazetteer name with a different name of the
// same category; nullopt when no entity occurs.
std::optional<LabeledExample> adv_inv(const LabeledExample& example, const Lexicon& entities,
                                      const PerturbationSpec& spec);

// Perturb the whole corpus (per-example seeds derived from spec.seed and the
// example id); returns the adversarial set plus the exactly corresponding
// original subset, same ids, same order.
std::pair<Corpus, Corpus> build_adversarial_set(const Corpus& corpus, const Lexicon& lexicon,
                                                const PerturbationSpec& spec);

}  // namespace cadkit
