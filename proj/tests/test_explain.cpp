#include <doctest.h>

#include <cmath>

#include "cadkit/explain.hpp"
#include "helpers.hpp"

using namespace cadkit;
using testutil::example;

namespace {

LinearModel toy_model(const std::vector<std::string>& terms,
                      const std::vector<double>& weights) {
    LinearModel m;
    m.vocabulary.terms = terms;
    for (std::size_t i = 0; i < terms.size(); ++i)
        m.vocabulary.index[terms[i]] = static_cast<std::uint32_t>(i);
    m.vocabulary.doc_freq.assign(terms.size(), 1);
    m.vocabulary.n_docs = 2;
    m.weights = weights;
    return m;
}

Corpus corpus_from_texts(const std::vector<std::pair<std::string, int>>& rows,
                         const std::string& prefix) {
    std::vector<LabeledExample> examples;
    for (std::size_t i = 0; i < rows.size(); ++i)
        examples.push_back(example(prefix + std::to_string(i), rows[i].first,
                                   rows[i].second, Origin::original, ""));
    return from_examples(std::move(examples));
}

// Brute-force MI from the joint distribution table.
double mi_reference(long n11, long n10, long n01, long n00) {
    const double n = static_cast<double>(n11 + n10 + n01 + n00);
    double mi = 0.0;
    const long joint[2][2] = {{n00, n01}, {n10, n11}};
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            const double p = joint[a][b] / n;
            if (p == 0.0) continue;
            const double pa = (joint[a][0] + joint[a][1]) / n;
            const double pb = (joint[0][b] + joint[1][b]) / n;
            mi += p * std::log(p / (pa * pb));
        }
    }
    return std::max(mi, 0.0);
}

}  // namespace

TEST_SUITE("explain") {

TEST_CASE("global_ranking orders by signed weight with lexicographic ties") {
    const auto m = toy_model({"alpha", "beta", "gamma", "delta", "epsilon"},
                             {0.5, -0.3, 0.5, 0.0, 1.2});
    const auto pos = global_ranking(m, Direction::positive, 4);
    REQUIRE(pos.entries.size() == 4);
    CHECK(pos.entries[0].first == "epsilon");
    CHECK(pos.entries[1].first == "alpha");  // 0.5 tie: alpha before gamma
    CHECK(pos.entries[2].first == "gamma");
    CHECK(pos.entries[3].first == "delta");
    CHECK(pos.direction == Direction::positive);

    const auto neg = global_ranking(m, Direction::negative, 2);
    CHECK(neg.entries[0].first == "beta");
    CHECK(neg.entries[0].second == -0.3);
    CHECK(neg.entries[1].first == "delta");
}

TEST_CASE("global_ranking clamps k to the vocabulary size") {
    const auto m = toy_model({"a", "b"}, {1.0, 2.0});
    const auto r = global_ranking(m, Direction::positive, 10);
    CHECK(r.entries.size() == 2);
}

TEST_CASE("core_proportion counts top-k hits") {
    const auto m = toy_model({"good", "great", "movie", "plot"}, {3.0, 2.0, 1.0, 0.5});
    CoreFeatureSet core;
    core.source = "lexicon";
    core.terms = {"good", "great"};
    const auto r = global_ranking(m, Direction::positive, 4);
    CHECK(core_proportion(r, core, 1) == 1.0);
    CHECK(core_proportion(r, core, 2) == 1.0);
    CHECK(core_proportion(r, core, 4) == 0.5);
    CHECK_THROWS_AS(core_proportion(r, core, 0), Error);
    CHECK_THROWS_AS(core_proportion(r, core, 5), Error);
}

TEST_CASE("proportion_curve evaluates every requested depth") {
    const auto m = toy_model({"good", "great", "movie", "plot"}, {3.0, 2.0, 1.0, 0.5});
    CoreFeatureSet core;
    core.terms = {"good", "movie"};
    const auto curve = proportion_curve(m, core, Direction::positive, {1, 2, 4});
    REQUIRE(curve.size() == 3);
    CHECK(curve[0] == std::pair<std::size_t, double>{1, 1.0});
    CHECK(curve[1] == std::pair<std::size_t, double>{2, 0.5});
    CHECK(curve[2] == std::pair<std::size_t, double>{4, 0.5});
}

TEST_CASE("binary_mi: perfect association is ln 2, independence is 0") {
    CHECK(std::abs(binary_mi(10, 0, 0, 10) - std::log(2.0)) < 1e-12);
    CHECK(std::abs(binary_mi(5, 5, 5, 5)) < 1e-12);
    CHECK(binary_mi(0, 0, 0, 0) == 0.0);
    CHECK(binary_mi(7, 0, 0, 0) == 0.0);  // degenerate marginals
}

TEST_CASE("binary_mi matches brute-force contingency enumeration") {
    for (long n11 : {0L, 1L, 4L, 9L}) {
        for (long n10 : {0L, 2L, 5L}) {
            for (long n01 : {0L, 3L, 6L}) {
                for (long n00 : {0L, 1L, 8L}) {
                    if (n11 + n10 + n01 + n00 == 0) continue;
                    CHECK(std::abs(binary_mi(n11, n10, n01, n00) -
                                   mi_reference(n11, n10, n01, n00)) < 1e-12);
                }
            }
        }
    }
}

TEST_CASE("pivot_ranking: engineered maximal-MI terms rank first") {
    // Both domains share the vocabulary; three terms track the ood label
    // perfectly, the rest are label-independent.
    std::vector<std::pair<std::string, int>> id_rows, ood_rows;
    for (int i = 0; i < 40; ++i) {
        const int label = i % 2;
        const std::string signal = label ? "zeta yond xylo" : "";
        id_rows.push_back({(label ? "zeta yond xylo common filler" : "common filler"),
                           label});
        ood_rows.push_back({signal + (label ? " common filler" : "common filler"), label});
    }
    const auto id = corpus_from_texts(id_rows, "i");
    const auto ood = corpus_from_texts(ood_rows, "o");
    const auto ranking = pivot_ranking(id, ood, 5, 10);
    REQUIRE(ranking.size() == 5);  // xylo yond zeta common filler
    CHECK(ranking[0].first == "xylo");  // ln2 ties broken lexicographically
    CHECK(ranking[1].first == "yond");
    CHECK(ranking[2].first == "zeta");
    for (int i = 0; i < 3; ++i)
        CHECK(std::abs(ranking[i].second - std::log(2.0)) < 1e-12);
    CHECK(std::abs(ranking[3].second) < 1e-12);  // independent terms
    CHECK(std::abs(ranking[4].second) < 1e-12);
}

TEST_CASE("pivot candidates need min_df in both corpora") {
    // "idonly" is frequent in-domain but absent out-of-domain.
    std::vector<std::pair<std::string, int>> id_rows, ood_rows;
    for (int i = 0; i < 10; ++i) {
        id_rows.push_back({"idonly shared", i % 2});
        ood_rows.push_back({"shared", i % 2});
    }
    const auto ranking = pivot_ranking(corpus_from_texts(id_rows, "i"),
                                       corpus_from_texts(ood_rows, "o"), 3, 10);
    REQUIRE(ranking.size() == 1);
    CHECK(ranking[0].first == "shared");
}

TEST_CASE("pivot_ranking parallel equals serial") {
    std::vector<std::pair<std::string, int>> id_rows, ood_rows;
    const std::vector<std::string> words = {"aa", "bb", "cc", "dd", "ee", "ff"};
    for (int i = 0; i < 60; ++i) {
        std::string text;
        for (std::size_t w = 0; w < words.size(); ++w)
            if ((i + static_cast<int>(w)) % 3) text += words[w] + " ";
        text += "base";
        id_rows.push_back({text, i % 2});
        ood_rows.push_back({text, (i / 2) % 2});
    }
    const auto id = corpus_from_texts(id_rows, "i");
    const auto ood = corpus_from_texts(ood_rows, "o");
    CHECK(pivot_ranking(id, ood, 2, 20) == pivot_ranking_serial(id, ood, 2, 20));
}

TEST_CASE("pivot_words wraps the ranking as a core feature set") {
    std::vector<std::pair<std::string, int>> rows;
    for (int i = 0; i < 12; ++i) rows.push_back({"tok other", i % 2});
    const auto id = corpus_from_texts(rows, "i");
    const auto ood = corpus_from_texts(rows, "o");
    const auto core = pivot_words(id, ood, 2, 100);
    CHECK(core.source == "pivot");
    CHECK(core.terms == std::set<std::string>{"tok", "other"});
}

}  // TEST_SUITE
