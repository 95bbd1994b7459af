#include "cadkit/adversarial.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

#include "cadkit/common.hpp"
#include "cadkit/parallel.hpp"
#include "cadkit/rng.hpp"

namespace cadkit {

std::string to_string(PerturbKind k) { return k == PerturbKind::swap ? "swap" : "inv"; }

PerturbKind perturb_kind_from_string(const std::string& s) {
    if (s == "swap" || s == "adv_swap") return PerturbKind::swap;
    if (s == "inv" || s == "adv_inv") return PerturbKind::inv;
    throw Error("perturbation kind must be 'swap' or 'inv', got '" + s + "'");
}

namespace {

bool word_char(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

struct Segment {
    std::size_t begin = 0;  // byte offset into the text
    std::size_t len = 0;
    std::string lower;      // lowercased content
};

// Alphanumeric runs of the raw text, mirroring the tokenizer's boundaries.
std::vector<Segment> word_segments(const std::string& text) {
    std::vector<Segment> segs;
    std::size_t i = 0;
    while (i < text.size()) {
        if (!word_char(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        Segment s;
        s.begin = i;
        while (i < text.size() && word_char(static_cast<unsigned char>(text[i]))) ++i;
        s.len = i - s.begin;
        s.lower = lowercase(text.substr(s.begin, s.len));
        segs.push_back(std::move(s));
    }
    return segs;
}

// Apply replacements right-to-left so earlier offsets stay valid.
std::string splice(const std::string& text,
                   std::vector<std::pair<Segment, std::string>> edits) {
    std::sort(edits.begin(), edits.end(),
              [](const auto& a, const auto& b) { return a.first.begin > b.first.begin; });
    std::string out = text;
    for (const auto& [seg, repl] : edits) out.replace(seg.begin, seg.len, repl);
    return out;
}

LabeledExample rebuild(const LabeledExample& example, std::string new_text) {
    LabeledExample out = example;
    out.doc.text = std::move(new_text);
    out.doc.tokens = preprocess(out.doc.text);
    return out;
}

}  // namespace

std::optional<LabeledExample> adv_swap(const LabeledExample& example, const Lexicon& synonyms,
                                       const PerturbationSpec& spec) {
    if (spec.max_replacements < 1) throw Error("max_replacements must be >= 1");
    const auto segs = word_segments(example.doc.text);

    std::vector<std::size_t> replaceable;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        auto it = synonyms.mapping.find(segs[i].lower);
        if (it == synonyms.mapping.end()) continue;
        if (std::any_of(it->second.begin(), it->second.end(),
                        [&](const std::string& a) { return a != segs[i].lower; }))
            replaceable.push_back(i);
    }
    if (replaceable.empty()) return std::nullopt;

    Rng rng(spec.seed);
    rng.shuffle(replaceable);
    replaceable.resize(std::min<std::size_t>(replaceable.size(),
                                             static_cast<std::size_t>(spec.max_replacements)));
    std::sort(replaceable.begin(), replaceable.end());

    std::vector<std::pair<Segment, std::string>> edits;
    for (std::size_t i : replaceable) {
        const auto& alts = synonyms.mapping.at(segs[i].lower);
        std::vector<std::string> usable;
        for (const auto& a : alts)
            if (a != segs[i].lower) usable.push_back(a);
        edits.emplace_back(segs[i], usable[rng.bounded(usable.size())]);
    }
    return rebuild(example, splice(example.doc.text, std::move(edits)));
}

std::optional<LabeledExample> adv_inv(const LabeledExample& example, const Lexicon& entities,
                                      const PerturbationSpec& spec) {
    // Reverse index: name -> category; names with a same-category alternative.
    std::map<std::string, const std::vector<std::string>*> category_of;
    for (const auto& [category, names] : entities.mapping) {
        for (const auto& name : names) category_of[name] = &names;
    }

    const auto segs = word_segments(example.doc.text);
    Rng rng(spec.seed);
    std::vector<std::pair<Segment, std::string>> edits;
    for (const auto& seg : segs) {
        auto it = category_of.find(seg.lower);
        if (it == category_of.end()) continue;
        std::vector<std::string> usable;
        for (const auto& name : *it->second)
            if (name != seg.lower) usable.push_back(name);
        if (usable.empty()) continue;
        edits.emplace_back(seg, usable[rng.bounded(usable.size())]);
    }
    if (edits.empty()) return std::nullopt;
    return rebuild(example, splice(example.doc.text, std::move(edits)));
}

std::pair<Corpus, Corpus> build_adversarial_set(const Corpus& corpus, const Lexicon& lexicon,
                                                const PerturbationSpec& spec) {
    std::vector<std::optional<LabeledExample>> perturbed(corpus.examples.size());
    parallel_for(corpus.examples.size(), [&](std::size_t i) {
        const auto& ex = corpus.examples[i];
        PerturbationSpec per_example = spec;
        per_example.seed = derive_seed(spec.seed, fnv1a64(ex.doc.id));
        perturbed[i] = spec.kind == PerturbKind::swap ? adv_swap(ex, lexicon, per_example)
                                                      : adv_inv(ex, lexicon, per_example);
    });

    Corpus adversarial, subset;
    adversarial.construct = subset.construct = corpus.construct;
    for (std::size_t i = 0; i < corpus.examples.size(); ++i) {
        if (!perturbed[i]) continue;
        adversarial.examples.push_back(*perturbed[i]);
        subset.examples.push_back(corpus.examples[i]);
    }
    if (adversarial.examples.empty()) warn("no example was perturbable");
    return {adversarial, subset};
}

}  // namespace cadkit
