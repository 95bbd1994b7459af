#include <doctest.h>

#include <algorithm>
#include <set>

#include "cadkit/corpus.hpp"
#include "helpers.hpp"

using namespace cadkit;
using testutil::example;

TEST_SUITE("corpus") {

TEST_CASE("preprocess lowercases and splits on non-alphanumeric runs") {
    CHECK(preprocess("It was horrible, I could not watch it") ==
          std::vector<std::string>{"it", "was", "horrible", "i", "could", "not", "watch",
                                   "it"});
    CHECK(preprocess("well-made (really!)") ==
          std::vector<std::string>{"well", "made", "really"});
    CHECK(preprocess("a1b2 3c") == std::vector<std::string>{"a1b2", "3c"});
}

TEST_CASE("preprocess drops hashtags, mentions and urls as whole tokens") {
    CHECK(preprocess("love this #movie @critic http://x.co/a so much") ==
          std::vector<std::string>{"love", "this", "so", "much"});
    CHECK(preprocess("see https://example.com/path?q=1 now") ==
          std::vector<std::string>{"see", "now"});
    // only token-initial markers count
    CHECK(preprocess("a#b") == std::vector<std::string>{"a", "b"});
}

TEST_CASE("preprocess keeps multibyte utf-8 intact") {
    const auto tokens = preprocess("tr\xc3\xa8s bon");
    REQUIRE(tokens.size() == 2);
    CHECK(tokens[0] == "tr\xc3\xa8s");
    CHECK(tokens[1] == "bon");
}

TEST_CASE("preprocess is idempotent on its own output") {
    const std::vector<std::string> texts = {
        "It was horrible, I could not watch it",
        "#tag @user http://u.rl MIXED-case 42x",
        "  spaces\tand\nnewlines  ",
    };
    for (const auto& t : texts) {
        const auto once = preprocess(t);
        const auto twice = preprocess(join_tokens(once));
        CHECK(once == twice);
    }
}

TEST_CASE("preprocess edge cases") {
    CHECK(preprocess("").empty());
    CHECK(preprocess("!!! ...").empty());
    CHECK(preprocess("#only @mentions").empty());
    CHECK(preprocess("x") == std::vector<std::string>{"x"});
}

TEST_CASE("from_examples pairs originals with counterfactuals") {
    auto c = testutil::paired_corpus(3, 1);
    CHECK(c.examples.size() == 8);
    CHECK(c.pairs.size() == 3);
    const auto& pair = c.pairs.at("p1");
    CHECK(pair.original.doc.id == "o1");
    CHECK(pair.counterfactual.doc.id == "c1");
    CHECK(pair.original.label == 1);
    CHECK(pair.counterfactual.label == 0);
}

TEST_CASE("from_examples rejects malformed corpora") {
    using V = std::vector<LabeledExample>;
    // duplicate id
    CHECK_THROWS_AS(from_examples(V{example("a", "x", 0, Origin::original, ""),
                                    example("a", "y", 1, Origin::original, "")}),
                    Error);
    // bad label
    CHECK_THROWS_AS(from_examples(V{example("a", "x", 2, Origin::original, "")}), Error);
    // counterfactual without original
    CHECK_THROWS_AS(
        from_examples(V{example("a", "x", 0, Origin::counterfactual, "p0")}), Error);
    // two counterfactuals for one pair
    CHECK_THROWS_AS(
        from_examples(V{example("a", "x", 0, Origin::original, "p0"),
                        example("b", "y", 1, Origin::counterfactual, "p0"),
                        example("c", "z", 1, Origin::counterfactual, "p0")}),
        Error);
    // labels must flip within a pair
    CHECK_THROWS_AS(
        from_examples(V{example("a", "x", 0, Origin::original, "p0"),
                        example("b", "y", 0, Origin::counterfactual, "p0")}),
        Error);
    // empty text inside a pair
    CHECK_THROWS_AS(
        from_examples(V{example("a", "", 0, Origin::original, "p0"),
                        example("b", "y", 1, Origin::counterfactual, "p0")}),
        Error);
}

TEST_CASE("jsonl round-trip preserves every field") {
    testutil::TempDir tmp;
    auto c = testutil::paired_corpus(5, 2);
    const auto path = tmp.file("corpus.jsonl");
    save_jsonl(c, path);
    const auto back = load_jsonl(path, Construct::sentiment);
    CHECK(back.construct == Construct::sentiment);
    REQUIRE(back.examples.size() == c.examples.size());
    for (std::size_t i = 0; i < c.examples.size(); ++i) {
        CHECK(back.examples[i].doc.id == c.examples[i].doc.id);
        CHECK(back.examples[i].doc.text == c.examples[i].doc.text);
        CHECK(back.examples[i].doc.tokens == c.examples[i].doc.tokens);
        CHECK(back.examples[i].label == c.examples[i].label);
        CHECK(back.examples[i].origin == c.examples[i].origin);
        CHECK(back.examples[i].pair_id == c.examples[i].pair_id);
    }
    CHECK(back.pairs.size() == c.pairs.size());
}

TEST_CASE("load_jsonl reports the offending line") {
    testutil::TempDir tmp;
    const auto path = tmp.file("bad.jsonl");
    testutil::write_file(path,
                         R"({"id":"a","text":"x","label":0,"origin":"original","pair_id":""})"
                         "\nnot json\n");
    CHECK_THROWS_WITH_AS(load_jsonl(path), doctest::Contains(":2"), Error);
    CHECK_THROWS_AS(load_jsonl(tmp.file("missing.jsonl")), Error);
}

TEST_CASE("load_examples_jsonl tolerates lone counterfactuals only") {
    testutil::TempDir tmp;
    const auto path = tmp.file("flat.jsonl");
    testutil::write_file(
        path,
        R"({"id":"a","text":"good","label":1,"origin":"original","pair_id":""})"
        "\n"
        R"({"id":"b","text":"bad","label":0,"origin":"counterfactual","pair_id":"p9"})"
        "\n");
    CHECK_THROWS_WITH_AS(load_jsonl(path), doctest::Contains("dangling"), Error);
    const auto flat = load_examples_jsonl(path);
    CHECK(flat.examples.size() == 2);
    CHECK(flat.pairs.empty());
    CHECK(flat.examples[1].doc.tokens == std::vector<std::string>{"bad"});

    // every other invariant still holds
    testutil::write_file(
        path, R"({"id":"a","text":"x","label":2,"origin":"original","pair_id":""})" "\n");
    CHECK_THROWS_WITH_AS(load_examples_jsonl(path), doctest::Contains("label"), Error);
    testutil::write_file(
        path,
        R"({"id":"a","text":"x","label":1,"origin":"original","pair_id":""})"
        "\n"
        R"({"id":"a","text":"y","label":0,"origin":"original","pair_id":""})"
        "\n");
    CHECK_THROWS_WITH_AS(load_examples_jsonl(path), doctest::Contains("duplicate"), Error);

    // complete pairs are still indexed and validated
    testutil::write_file(
        path,
        R"({"id":"a","text":"good","label":1,"origin":"original","pair_id":"p1"})"
        "\n"
        R"({"id":"b","text":"bad","label":0,"origin":"counterfactual","pair_id":"p1"})"
        "\n");
    CHECK(load_examples_jsonl(path).pairs.size() == 1);
}

TEST_CASE("stratified_split holds out the requested fraction per class") {
    const auto corpus = testutil::paired_corpus(50, 10);  // 120 examples
    const auto [train, test] = stratified_split(corpus, 0.7, 13);
    CHECK(train.examples.size() + test.examples.size() == corpus.examples.size());

    // no id crosses the boundary
    std::set<std::string> train_ids, test_ids;
    for (const auto& ex : train.examples) train_ids.insert(ex.doc.id);
    for (const auto& ex : test.examples) test_ids.insert(ex.doc.id);
    for (const auto& id : train_ids) CHECK(test_ids.count(id) == 0);

    // pairs stay whole
    for (const auto& [pid, pair] : corpus.pairs) {
        const bool in_train = train.pairs.count(pid) > 0;
        const bool in_test = test.pairs.count(pid) > 0;
        CHECK(in_train != in_test);
        if (in_train) {
            CHECK(train_ids.count(pair.original.doc.id) == 1);
            CHECK(train_ids.count(pair.counterfactual.doc.id) == 1);
        }
    }

    // class balance preserved within one unit
    auto count_pos = [](const Corpus& c) {
        return std::count_if(c.examples.begin(), c.examples.end(),
                             [](const LabeledExample& e) { return e.label == 1; });
    };
    const double pool_frac =
        static_cast<double>(count_pos(corpus)) / static_cast<double>(corpus.size());
    const double train_frac =
        static_cast<double>(count_pos(train)) / static_cast<double>(train.size());
    CHECK(train_frac == doctest::Approx(pool_frac).epsilon(0.05));
}

TEST_CASE("stratified_split is deterministic per seed and sensitive to it") {
    const auto corpus = testutil::paired_corpus(40, 6);
    const auto [a1, b1] = stratified_split(corpus, 0.7, 13);
    const auto [a2, b2] = stratified_split(corpus, 0.7, 13);
    REQUIRE(a1.examples.size() == a2.examples.size());
    for (std::size_t i = 0; i < a1.examples.size(); ++i)
        CHECK(a1.examples[i].doc.id == a2.examples[i].doc.id);

    const auto [a3, b3] = stratified_split(corpus, 0.7, 14);
    std::vector<std::string> ids1, ids3;
    for (const auto& ex : a1.examples) ids1.push_back(ex.doc.id);
    for (const auto& ex : a3.examples) ids3.push_back(ex.doc.id);
    CHECK(ids1 != ids3);
}

TEST_CASE("stratified_split output preserves corpus order") {
    const auto corpus = testutil::paired_corpus(20, 4);
    const auto [train, test] = stratified_split(corpus, 0.5, 3);
    auto pos_of = [&](const std::string& id) {
        for (std::size_t i = 0; i < corpus.examples.size(); ++i)
            if (corpus.examples[i].doc.id == id) return i;
        return corpus.examples.size();
    };
    for (const Corpus* part : {&train, &test}) {
        std::size_t prev = 0;
        bool first = true;
        for (const auto& ex : part->examples) {
            const auto p = pos_of(ex.doc.id);
            if (!first) CHECK(p > prev);
            prev = p;
            first = false;
        }
    }
}

TEST_CASE("construct names round-trip") {
    for (Construct c : {Construct::sentiment, Construct::sexism, Construct::hatespeech,
                        Construct::custom})
        CHECK(construct_from_string(to_string(c)) == c);
    CHECK_THROWS_AS(construct_from_string("what"), Error);
}

}  // TEST_SUITE
