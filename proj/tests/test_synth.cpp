#include <doctest.h>

#include <algorithm>

#include "cadkit/synth.hpp"
#include "cadkit/typology.hpp"
#include "helpers.hpp"

using namespace cadkit;

TEST_SUITE("synth") {

TEST_CASE("bundle has the requested shape") {
    SynthConfig cfg;
    cfg.n_pairs = 50;
    cfg.n_ood = 30;
    const auto bundle = generate_sentiment_bundle(cfg);
    CHECK(bundle.in_domain.construct == Construct::sentiment);
    CHECK(bundle.in_domain.examples.size() == 100);
    CHECK(bundle.in_domain.pairs.size() == 50);
    CHECK(bundle.out_of_domain.examples.size() == 30);
    CHECK(bundle.out_of_domain.pairs.empty());

    // labels alternate and flip within pairs (enforced by corpus validation)
    for (const auto& [pid, pair] : bundle.in_domain.pairs)
        CHECK(pair.original.label != pair.counterfactual.label);

    // both classes present out of domain
    const auto pos = std::count_if(
        bundle.out_of_domain.examples.begin(), bundle.out_of_domain.examples.end(),
        [](const LabeledExample& e) { return e.label == 1; });
    CHECK(pos == 15);
}

TEST_CASE("generation is deterministic per seed") {
    SynthConfig cfg;
    cfg.n_pairs = 40;
    cfg.n_ood = 20;
    const auto a = generate_sentiment_bundle(cfg);
    const auto b = generate_sentiment_bundle(cfg);
    REQUIRE(a.in_domain.examples.size() == b.in_domain.examples.size());
    for (std::size_t i = 0; i < a.in_domain.examples.size(); ++i)
        CHECK(a.in_domain.examples[i].doc.text == b.in_domain.examples[i].doc.text);
    cfg.seed = 98;
    const auto c = generate_sentiment_bundle(cfg);
    bool any_diff = false;
    for (std::size_t i = 0; i < a.in_domain.examples.size(); ++i)
        any_diff |= a.in_domain.examples[i].doc.text != c.in_domain.examples[i].doc.text;
    CHECK(any_diff);
}

TEST_CASE("strategy mix tracks the configured probabilities") {
    SynthConfig cfg;  // defaults: 80% affect flip, 15% negation, 5% hedge
    const auto bundle = generate_sentiment_bundle(cfg);
    const auto lexica = load_strategy_lexica(testutil::lexica_dir());
    const auto dist =
        strategy_distribution(bundle.in_domain, lexica, Construct::sentiment);
    CHECK(dist.at(Strategy::affect) == doctest::Approx(0.80).epsilon(0.07));
    CHECK(dist.at(Strategy::negation) == doctest::Approx(0.15).epsilon(0.35));
    CHECK(dist.at(Strategy::hedge) == doctest::Approx(0.05).epsilon(0.5));
    CHECK(dist.at(Strategy::gender) == 0.0);
    CHECK(dist.at(Strategy::identity) == 0.0);
}

TEST_CASE("generator word pools stay in sync with the bundled lexica") {
    const auto dir = testutil::lexica_dir();
    const auto lexica = load_strategy_lexica(dir);
    const auto stopwords = load_lexicon(dir + "/stopwords_en.txt", "stopwords_en");
    const auto entities = load_lexicon(dir + "/entities.txt", "entities");
    const auto synonyms = load_lexicon(dir + "/synonyms.txt", "synonyms");

    // causal/strategy words must be visible to the typology lexica
    for (const auto& w : synthwords::affect_pos) CHECK(lexica.affect_pos.contains(w));
    for (const auto& w : synthwords::affect_neg) CHECK(lexica.affect_neg.contains(w));
    for (const auto& w : synthwords::hedges) CHECK(lexica.hedge.contains(w));
    CHECK(lexica.negation.contains(synthwords::negation_token));

    // spurious/filler/glue words must NOT look like strategy words, or the
    // planted-feature design would leak into the typology
    auto in_any_strategy_lexicon = [&](const std::string& w) {
        return lexica.affect_pos.contains(w) || lexica.affect_neg.contains(w) ||
               lexica.gender.contains(w) || lexica.identity.contains(w) ||
               lexica.negation.contains(w) || lexica.hedge.contains(w);
    };
    for (const auto* pool : {&synthwords::spurious_pos, &synthwords::spurious_neg,
                             &synthwords::fillers_shared, &synthwords::fillers_ood,
                             &synthwords::entities})
        for (const auto& w : *pool) CHECK(!in_any_strategy_lexicon(w));
    for (const auto& w : synthwords::glue) CHECK(!in_any_strategy_lexicon(w));

    // the spurious signal must survive stopword filtering
    for (const auto& w : synthwords::spurious_pos) CHECK(!stopwords.contains(w));
    for (const auto& w : synthwords::spurious_neg) CHECK(!stopwords.contains(w));
    // glue words are ordinary stopwords
    for (const auto& w : synthwords::glue) CHECK(stopwords.contains(w));

    // every generator entity is known to the gazetteer
    std::set<std::string> gazetteer;
    for (const auto& [cat, names] : entities.mapping)
        gazetteer.insert(names.begin(), names.end());
    for (const auto& w : synthwords::entities) CHECK(gazetteer.count(w) == 1);

    // the synonym map can bite on in-domain text: it covers shared fillers
    std::size_t covered = 0;
    for (const auto& w : synthwords::fillers_shared)
        covered += synonyms.mapping.count(w);
    CHECK(covered >= 8);
}

TEST_CASE("counterfactuals keep the spurious token of their original") {
    SynthConfig cfg;
    cfg.n_pairs = 200;
    const auto bundle = generate_sentiment_bundle(cfg);
    std::set<std::string> spurious(synthwords::spurious_pos.begin(),
                                   synthwords::spurious_pos.end());
    spurious.insert(synthwords::spurious_neg.begin(), synthwords::spurious_neg.end());
    for (const auto& [pid, pair] : bundle.in_domain.pairs) {
        std::multiset<std::string> orig_spur, cf_spur;
        for (const auto& t : pair.original.doc.tokens)
            if (spurious.count(t)) orig_spur.insert(t);
        for (const auto& t : pair.counterfactual.doc.tokens)
            if (spurious.count(t)) cf_spur.insert(t);
        CHECK(orig_spur == cf_spur);
    }
}

TEST_CASE("write_bundle emits loadable jsonl") {
    testutil::TempDir tmp;
    SynthConfig cfg;
    cfg.n_pairs = 10;
    cfg.n_ood = 6;
    write_bundle(generate_sentiment_bundle(cfg), tmp.file("id.jsonl"),
                 tmp.file("ood.jsonl"));
    const auto id = load_jsonl(tmp.file("id.jsonl"), Construct::sentiment);
    CHECK(id.pairs.size() == 10);
    CHECK(load_jsonl(tmp.file("ood.jsonl")).examples.size() == 6);
}

TEST_CASE("the committed corpus files match regeneration at the pinned seed") {
    testutil::TempDir tmp;
    SynthConfig cfg;  // defaults match the bundled data
    write_bundle(generate_sentiment_bundle(cfg), tmp.file("id.jsonl"),
                 tmp.file("ood.jsonl"));
    const auto id_expect = testutil::read_file(tmp.file("id.jsonl"));
    const auto ood_expect = testutil::read_file(tmp.file("ood.jsonl"));
    const auto id_actual =
        testutil::read_file(testutil::source_dir() + "/data/synthetic/sentiment_id.jsonl");
    const auto ood_actual =
        testutil::read_file(testutil::source_dir() + "/data/synthetic/sentiment_ood.jsonl");
    CHECK(id_expect == id_actual);
    CHECK(ood_expect == ood_actual);
}

}  // TEST_SUITE
