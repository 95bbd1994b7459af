#include <doctest.h>

#include <cmath>

#include "cadkit/logreg.hpp"
#include "cadkit/rng.hpp"
#include "helpers.hpp"

using namespace cadkit;

namespace {

struct Problem {
    std::vector<SparseVector> X;
    std::vector<int> y;
    std::size_t dim = 0;
};

Problem random_problem(std::size_t n, std::size_t d, std::uint64_t seed) {
    Rng rng(seed);
    Problem p;
    p.dim = d;
    for (std::size_t i = 0; i < n; ++i) {
        SparseVector x;
        for (std::size_t j = 0; j < d; ++j) {
            if (rng.uniform01() < 0.4)
                continue;
            x.indices.push_back(static_cast<std::uint32_t>(j));
            x.values.push_back(rng.uniform01() * 2.0 - 1.0);
        }
        p.X.push_back(std::move(x));
        p.y.push_back(static_cast<int>(rng.bounded(2)));
    }
    // guarantee both classes
    p.y[0] = 0;
    p.y[1] = 1;
    return p;
}

}  // namespace

TEST_SUITE("logreg") {

TEST_CASE("bce gradient matches central finite differences at 100 points") {
    const auto prob = random_problem(60, 8, 31);
    Rng rng(77);
    const double eps = 1e-6;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> w(prob.dim);
        for (auto& v : w) v = rng.uniform01() * 4.0 - 2.0;
        double b = rng.uniform01() * 2.0 - 1.0;

        std::vector<double> grad(prob.dim);
        double grad_b = 0.0;
        bce_loss_grad(prob.X, prob.y, w, b, grad, grad_b);

        const std::size_t j = rng.bounded(prob.dim + 1);  // last = intercept
        auto loss_at = [&](double delta) {
            if (j == prob.dim) {
                std::vector<double> g(prob.dim);
                double gb = 0.0;
                return bce_loss_grad(prob.X, prob.y, w, b + delta, g, gb);
            }
            auto w2 = w;
            w2[j] += delta;
            std::vector<double> g(prob.dim);
            double gb = 0.0;
            return bce_loss_grad(prob.X, prob.y, w2, b, g, gb);
        };
        const double numeric = (loss_at(eps) - loss_at(-eps)) / (2.0 * eps);
        const double analytic = j == prob.dim ? grad_b : grad[j];
        const double scale = std::max({1.0, std::abs(numeric), std::abs(analytic)});
        CHECK(std::abs(numeric - analytic) / scale < 1e-4);
    }
}

TEST_CASE("penalized gradient matches finite differences for both penalties") {
    const auto prob = random_problem(40, 6, 13);
    Rng rng(5);
    for (Penalty penalty : {Penalty::l2, Penalty::l1}) {
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> w(prob.dim);
            // keep weights away from the l1 kink
            for (auto& v : w) v = (rng.uniform01() + 0.1) * (rng.bounded(2) ? 1.0 : -1.0);
            double b = rng.uniform01() - 0.5;
            std::vector<double> grad(prob.dim);
            double grad_b = 0.0;
            penalized_grad(prob.X, prob.y, w, b, 0.5, penalty, grad, grad_b);

            const std::size_t j = rng.bounded(prob.dim);
            const double eps = 1e-6;
            auto w_hi = w, w_lo = w;
            w_hi[j] += eps;
            w_lo[j] -= eps;
            const double numeric = (penalized_loss(prob.X, prob.y, w_hi, b, 0.5, penalty) -
                                    penalized_loss(prob.X, prob.y, w_lo, b, 0.5, penalty)) /
                                   (2.0 * eps);
            CHECK(std::abs(numeric - grad[j]) /
                      std::max({1.0, std::abs(numeric), std::abs(grad[j])}) <
                  1e-4);
        }
    }
}

TEST_CASE("intercept-only fit on [1,1,1,0] returns ln 3") {
    std::vector<SparseVector> X(4);  // no features at all
    const std::vector<int> y = {1, 1, 1, 0};
    HyperParams hp;
    hp.C = 1e12;  // penalty negligible; no weights anyway
    const auto fit = train(X, y, hp);
    CHECK(fit.converged);
    CHECK(fit.weights.empty());
    CHECK(std::abs(fit.intercept - std::log(3.0)) < 1e-4);
    LinearModel m;
    m.intercept = fit.intercept;
    CHECK(predict_proba_one(m, SparseVector{}) == doctest::Approx(0.75).epsilon(1e-4));
}

TEST_CASE("training loss is monotone non-increasing") {
    const auto prob = random_problem(120, 10, 3);
    for (Penalty penalty : {Penalty::l2, Penalty::l1}) {
        HyperParams hp;
        hp.penalty = penalty;
        hp.C = 1.0;
        TrainOptions opts;
        opts.record_loss = true;
        opts.dim = prob.dim;
        const auto fit = train(prob.X, prob.y, hp, opts);
        REQUIRE(fit.loss_history.size() >= 2);
        for (std::size_t i = 1; i < fit.loss_history.size(); ++i)
            CHECK(fit.loss_history[i] <= fit.loss_history[i - 1]);
        CHECK(fit.final_loss == fit.loss_history.back());
    }
}

TEST_CASE("a token seen only in positive documents gets positive weight") {
    const std::vector<std::vector<std::string>> docs = {
        {"good", "movie"}, {"good", "film"}, {"bad", "movie"}, {"bad", "film"}};
    const std::vector<int> y = {1, 1, 0, 0};
    const auto [vocab, X] = fit_tfidf(docs, std::nullopt, Norm::l2);
    HyperParams hp;
    TrainOptions opts;
    opts.dim = vocab.size();
    const auto fit = train(X, y, hp, opts);
    CHECK(fit.weights[vocab.index.at("good")] > 0.0);
    CHECK(fit.weights[vocab.index.at("bad")] < 0.0);
}

TEST_CASE("stronger l1 regularization produces sparser weights") {
    const auto prob = random_problem(200, 30, 17);
    auto nnz_at = [&](double C) {
        HyperParams hp;
        hp.penalty = Penalty::l1;
        hp.C = C;
        TrainOptions opts;
        opts.dim = prob.dim;
        const auto fit = train(prob.X, prob.y, hp, opts);
        std::size_t nnz = 0;
        for (double w : fit.weights) nnz += w != 0.0;
        return nnz;
    };
    const auto sparse = nnz_at(0.001);
    const auto dense = nnz_at(1.0);
    CHECK(sparse < dense);
    CHECK(sparse < prob.dim / 2);
}

TEST_CASE("train is deterministic and independent of the parallel flag") {
    const auto prob = random_problem(150, 12, 29);
    HyperParams hp;
    hp.penalty = Penalty::l1;
    hp.C = 0.5;
    TrainOptions par;
    par.dim = prob.dim;
    TrainOptions ser = par;
    ser.parallel = false;
    const auto f1 = train(prob.X, prob.y, hp, par);
    const auto f2 = train(prob.X, prob.y, hp, par);
    const auto f3 = train(prob.X, prob.y, hp, ser);
    CHECK(f1.weights == f2.weights);
    CHECK(f1.intercept == f2.intercept);
    CHECK(f1.weights == f3.weights);
    CHECK(f1.intercept == f3.intercept);
    CHECK(f1.iterations == f3.iterations);
}

TEST_CASE("bce kernel: parallel equals serial bitwise") {
    const auto prob = random_problem(1000, 20, 41);
    std::vector<double> w(prob.dim);
    Rng rng(1);
    for (auto& v : w) v = rng.uniform01() - 0.5;
    std::vector<double> gp(prob.dim), gs(prob.dim);
    double bp = 0.0, bs = 0.0;
    const double lp = bce_loss_grad(prob.X, prob.y, w, 0.25, gp, bp, true);
    const double ls = bce_loss_grad_serial(prob.X, prob.y, w, 0.25, gs, bs);
    CHECK(lp == ls);
    CHECK(bp == bs);
    CHECK(gp == gs);
}

TEST_CASE("train rejects degenerate inputs") {
    std::vector<SparseVector> X(3);
    CHECK_THROWS_AS(train(X, {1, 1, 1}, HyperParams{}), Error);
    CHECK_THROWS_AS(train(X, {0, 0, 0}, HyperParams{}), Error);
    CHECK_THROWS_AS(train({}, {}, HyperParams{}), Error);
    CHECK_THROWS_AS(train(X, {0, 1}, HyperParams{}), Error);
}

TEST_CASE("model json round-trip is exact") {
    const std::vector<std::vector<std::string>> docs = {
        {"good", "movie"}, {"bad", "movie"}, {"good", "fun"}, {"bad", "dull"}};
    const std::vector<int> y = {1, 0, 1, 0};
    const auto [vocab, X] = fit_tfidf(docs, std::nullopt, Norm::l2);
    HyperParams hp;
    hp.C = 0.1;
    hp.norm = Norm::l2;
    TrainOptions opts;
    opts.dim = vocab.size();
    const auto fit = train(X, y, hp, opts);

    LinearModel model;
    model.vocabulary = vocab;
    model.weights = fit.weights;
    model.intercept = fit.intercept;
    model.hyperparams = hp;
    model.train_fingerprint = fingerprint_training_data(docs, y);

    const auto back = model_from_json(model_to_json(model));
    CHECK(back.vocabulary.terms == model.vocabulary.terms);
    CHECK(back.vocabulary.doc_freq == model.vocabulary.doc_freq);
    CHECK(back.vocabulary.n_docs == model.vocabulary.n_docs);
    CHECK(back.vocabulary.norm == model.vocabulary.norm);
    CHECK(back.weights == model.weights);  // bitwise through json
    CHECK(back.intercept == model.intercept);
    CHECK(back.hyperparams == model.hyperparams);
    CHECK(back.train_fingerprint == model.train_fingerprint);

    testutil::TempDir tmp;
    save_model(model, tmp.file("m.json"));
    const auto loaded = load_model(tmp.file("m.json"));
    CHECK(loaded.weights == model.weights);
    CHECK(model_to_json(loaded) == model_to_json(model));
}

TEST_CASE("model json validation") {
    CHECK_THROWS_AS(model_from_json("{}"), Error);
    CHECK_THROWS_AS(model_from_json("not json"), Error);
    CHECK_THROWS_AS(load_model("/nonexistent/model.json"), Error);
}

TEST_CASE("training-data fingerprint is order- and content-sensitive") {
    const std::vector<std::vector<std::string>> docs = {{"a", "b"}, {"c"}};
    const std::vector<int> y = {0, 1};
    const auto fp = fingerprint_training_data(docs, y);
    CHECK(fp.size() == 16);
    CHECK(fp == fingerprint_training_data(docs, y));
    CHECK(fp != fingerprint_training_data(docs, {1, 0}));
    CHECK(fp != fingerprint_training_data({{"a"}, {"b", "c"}}, y));
    CHECK(fp != fingerprint_training_data({{"c"}, {"a", "b"}}, {1, 0}));
}

TEST_CASE("hyperparameter names round-trip") {
    CHECK(penalty_from_string(to_string(Penalty::l1)) == Penalty::l1);
    CHECK(penalty_from_string(to_string(Penalty::l2)) == Penalty::l2);
    for (StopwordMode m : {StopwordMode::english, StopwordMode::none,
                           StopwordMode::english_without_negation})
        CHECK(stopword_mode_from_string(to_string(m)) == m);
    CHECK_THROWS_AS(penalty_from_string("l0"), Error);
    CHECK_THROWS_AS(stopword_mode_from_string("german"), Error);
}

}  // TEST_SUITE
