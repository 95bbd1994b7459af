#include "cadkit/logreg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cadkit/common.hpp"
#include "cadkit/parallel.hpp"

namespace cadkit {

std::string to_string(Penalty p) { return p == Penalty::l1 ? "l1" : "l2"; }

Penalty penalty_from_string(const std::string& s) {
    if (s == "l1") return Penalty::l1;
    if (s == "l2") return Penalty::l2;
    throw Error("penalty must be 'l1' or 'l2', got '" + s + "'");
}

std::string to_string(StopwordMode m) {
    switch (m) {
        case StopwordMode::english: return "english";
        case StopwordMode::none: return "none";
        case StopwordMode::english_without_negation: return "english_without_negation";
    }
    return "english";
}

StopwordMode stopword_mode_from_string(const std::string& s) {
    if (s == "english") return StopwordMode::english;
    if (s == "none") return StopwordMode::none;
    if (s == "english_without_negation") return StopwordMode::english_without_negation;
    throw Error("unknown stopword mode: " + s);
}

namespace {

// Examples are reduced in fixed blocks of this size; block partials are
// combined in block order, so sums do not depend on the worker count.
constexpr std::size_t kBlock = 256;

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + exp(z)) - y*z, stable for large |z|.
double bce_term(double z, int y) {
    return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))) - static_cast<double>(y) * z;
}

double sparse_dot(const SparseVector& x, const std::vector<double>& w) {
    double z = 0.0;
    for (std::size_t k = 0; k < x.indices.size(); ++k) z += w[x.indices[k]] * x.values[k];
    return z;
}

template <class ForEach>
double loss_grad_impl(const std::vector<SparseVector>& X, const std::vector<int>& y,
                      const std::vector<double>& w, double intercept,
                      std::vector<double>* grad_w, double* grad_intercept,
                      ForEach&& for_each) {
    const std::size_t n = X.size();
    const std::size_t d = w.size();
    const std::size_t n_blocks = (n + kBlock - 1) / kBlock;
    const std::size_t stride = grad_w ? d + 1 : 0;

    std::vector<double> partial_loss(n_blocks, 0.0);
    std::vector<double> partial_grad(n_blocks * stride, 0.0);

    for_each(n_blocks, [&](std::size_t blk) {
        const std::size_t lo = blk * kBlock;
        const std::size_t hi = std::min(n, lo + kBlock);
        double loss = 0.0;
        double* g = grad_w ? partial_grad.data() + blk * stride : nullptr;
        for (std::size_t i = lo; i < hi; ++i) {
            const double z = sparse_dot(X[i], w) + intercept;
            loss += bce_term(z, y[i]);
            if (g) {
                const double r = sigmoid(z) - static_cast<double>(y[i]);
                const SparseVector& x = X[i];
                for (std::size_t k = 0; k < x.indices.size(); ++k)
                    g[x.indices[k]] += r * x.values[k];
                g[d] += r;
            }
        }
        partial_loss[blk] = loss;
    });

    const double inv_n = 1.0 / static_cast<double>(n);
    if (grad_w) {
        std::fill(grad_w->begin(), grad_w->end(), 0.0);
        double gb = 0.0;
        for (std::size_t blk = 0; blk < n_blocks; ++blk) {
            const double* g = partial_grad.data() + blk * stride;
            for (std::size_t j = 0; j < d; ++j) (*grad_w)[j] += g[j];
            gb += g[d];
        }
        for (std::size_t j = 0; j < d; ++j) (*grad_w)[j] *= inv_n;
        *grad_intercept = gb * inv_n;
    }

    double total = 0.0;
    for (double l : partial_loss) total += l;
    return total * inv_n;
}

double bce_loss_only(const std::vector<SparseVector>& X, const std::vector<int>& y,
                     const std::vector<double>& w, double intercept, bool parallel) {
    auto run = [&](auto&& fe) {
        return loss_grad_impl(X, y, w, intercept, nullptr, nullptr, fe);
    };
    if (parallel)
        return run([](std::size_t n, auto&& body) { parallel_for(n, body); });
    return run([](std::size_t n, auto&& body) { serial_for(n, body); });
}

double l1_norm(const std::vector<double>& w) {
    double s = 0.0;
    for (double x : w) s += std::abs(x);
    return s;
}

double sq_norm(const std::vector<double>& w) {
    double s = 0.0;
    for (double x : w) s += x * x;
    return s;
}

}  // namespace

double bce_loss_grad(const std::vector<SparseVector>& X, const std::vector<int>& y,
                     const std::vector<double>& w, double intercept,
                     std::vector<double>& grad_w, double& grad_intercept, bool parallel) {
    if (!parallel) return bce_loss_grad_serial(X, y, w, intercept, grad_w, grad_intercept);
    return loss_grad_impl(X, y, w, intercept, &grad_w, &grad_intercept,
                          [](std::size_t n, auto&& body) { parallel_for(n, body); });
}

double bce_loss_grad_serial(const std::vector<SparseVector>& X, const std::vector<int>& y,
                            const std::vector<double>& w, double intercept,
                            std::vector<double>& grad_w, double& grad_intercept) {
    return loss_grad_impl(X, y, w, intercept, &grad_w, &grad_intercept,
                          [](std::size_t n, auto&& body) { serial_for(n, body); });
}

double penalized_loss(const std::vector<SparseVector>& X, const std::vector<int>& y,
                      const std::vector<double>& w, double intercept, double C,
                      Penalty penalty, bool parallel) {
    const double lambda = 1.0 / (C * static_cast<double>(X.size()));
    const double reg = penalty == Penalty::l2 ? 0.5 * sq_norm(w) : l1_norm(w);
    return bce_loss_only(X, y, w, intercept, parallel) + lambda * reg;
}

void penalized_grad(const std::vector<SparseVector>& X, const std::vector<int>& y,
                    const std::vector<double>& w, double intercept, double C,
                    Penalty penalty, std::vector<double>& grad_w, double& grad_intercept,
                    bool parallel) {
    bce_loss_grad(X, y, w, intercept, grad_w, grad_intercept, parallel);
    const double lambda = 1.0 / (C * static_cast<double>(X.size()));
    if (penalty == Penalty::l2) {
        for (std::size_t j = 0; j < w.size(); ++j) grad_w[j] += lambda * w[j];
    } else {
        for (std::size_t j = 0; j < w.size(); ++j) {
            if (w[j] > 0.0) grad_w[j] += lambda;
            else if (w[j] < 0.0) grad_w[j] -= lambda;
        }
    }
}

FitResult train(const std::vector<SparseVector>& X, const std::vector<int>& y,
                const HyperParams& hp, const TrainOptions& opts) {
    const std::size_t n = X.size();
    if (n == 0 || y.size() != n) throw Error("train: bad input sizes");
    const bool has_pos = std::find(y.begin(), y.end(), 1) != y.end();
    const bool has_neg = std::find(y.begin(), y.end(), 0) != y.end();
    if (!has_pos || !has_neg) throw Error("train: single-class input");

    std::size_t d = opts.dim;
    for (const auto& x : X) {
        if (!x.indices.empty()) d = std::max<std::size_t>(d, x.indices.back() + 1);
    }

    const double lambda = 1.0 / (hp.C * static_cast<double>(n));
    const bool l1 = hp.penalty == Penalty::l1;

    // Smooth part g = mean BCE (+ l2 ridge); nonsmooth h = l1 term.
    auto smooth_loss = [&](const std::vector<double>& w, double b) {
        double f = bce_loss_only(X, y, w, b, opts.parallel);
        if (!l1) f += 0.5 * lambda * sq_norm(w);
        return f;
    };
    auto smooth_grad = [&](const std::vector<double>& w, double b, std::vector<double>& gw,
                           double& gb) {
        double f = bce_loss_grad(X, y, w, b, gw, gb, opts.parallel);
        if (!l1) {
            for (std::size_t j = 0; j < d; ++j) gw[j] += lambda * w[j];
            f += 0.5 * lambda * sq_norm(w);
        }
        return f;
    };
    auto h_term = [&](const std::vector<double>& w) { return l1 ? lambda * l1_norm(w) : 0.0; };

    FitResult fit;
    std::vector<double> w(d, 0.0), w_new(d, 0.0);
    double b = 0.0, b_new = 0.0;
    std::vector<double> gw(d, 0.0), gw_new(d, 0.0);
    double gb = 0.0, gb_new = 0.0;

    double g_cur = smooth_grad(w, b, gw, gb);
    double f_cur = g_cur + h_term(w);
    if (opts.record_loss) fit.loss_history.push_back(f_cur);

    auto gen_grad_max = [&](const std::vector<double>& wv, const std::vector<double>& gv,
                            double gbv) {
        double m = std::abs(gbv);
        for (std::size_t j = 0; j < d; ++j) {
            double gg;
            if (!l1) {
                gg = std::abs(gv[j]);
            } else if (wv[j] != 0.0) {
                gg = std::abs(gv[j] + (wv[j] > 0.0 ? lambda : -lambda));
            } else {
                gg = std::max(0.0, std::abs(gv[j]) - lambda);
            }
            m = std::max(m, gg);
        }
        return m;
    };

    if (gen_grad_max(w, gw, gb) <= opts.tol) {
        fit.converged = true;
        fit.weights = w;
        fit.intercept = b;
        fit.final_loss = f_cur;
        return fit;
    }

    double step = 1.0;
    std::vector<double> dw(d, 0.0);
    for (int iter = 1; iter <= opts.max_iter; ++iter) {
        // Monotone backtracking on the proximal majorization.
        double t = std::clamp(step, 1e-12, 1e12);
        bool accepted = false;
        double g_new = 0.0, f_new = 0.0;
        for (int bt = 0; bt < 100; ++bt) {
            for (std::size_t j = 0; j < d; ++j) {
                double u = w[j] - t * gw[j];
                if (l1) {
                    const double thr = t * lambda;
                    u = u > thr ? u - thr : (u < -thr ? u + thr : 0.0);
                }
                w_new[j] = u;
            }
            b_new = b - t * gb;

            double lin = gb * (b_new - b);
            double quad = (b_new - b) * (b_new - b);
            for (std::size_t j = 0; j < d; ++j) {
                const double delta = w_new[j] - w[j];
                lin += gw[j] * delta;
                quad += delta * delta;
            }
            g_new = smooth_loss(w_new, b_new);
            f_new = g_new + h_term(w_new);
            if (g_new <= g_cur + lin + quad / (2.0 * t) && f_new <= f_cur) {
                accepted = true;
                break;
            }
            t *= 0.5;
            if (t < 1e-18) break;
        }
        if (!accepted) break;  // no representable descent step left

        const double f_prev = f_cur;
        g_new = smooth_grad(w_new, b_new, gw_new, gb_new);
        f_new = g_new + h_term(w_new);

        // Barzilai-Borwein step for the next iteration.
        double sy = (b_new - b) * (gb_new - gb);
        double ss = (b_new - b) * (b_new - b);
        for (std::size_t j = 0; j < d; ++j) {
            const double s = w_new[j] - w[j];
            sy += s * (gw_new[j] - gw[j]);
            ss += s * s;
        }
        step = sy > 0.0 ? ss / sy : t * 2.0;

        w.swap(w_new);
        b = b_new;
        gw.swap(gw_new);
        gb = gb_new;
        g_cur = g_new;
        f_cur = std::min(f_new, f_prev);  // backtracking guarantees f_new <= f_prev
        fit.iterations = iter;
        if (opts.record_loss) fit.loss_history.push_back(f_cur);

        if (gen_grad_max(w, gw, gb) <= opts.tol) {
            fit.converged = true;
            break;
        }
    }

    fit.weights = std::move(w);
    fit.intercept = b;
    fit.final_loss = f_cur;
    return fit;
}

double predict_proba_one(const LinearModel& model, const SparseVector& x) {
    return sigmoid(sparse_dot(x, model.weights) + model.intercept);
}

std::vector<double> predict_proba(const LinearModel& model, const std::vector<SparseVector>& X) {
    std::vector<double> out(X.size());
    parallel_for(X.size(), [&](std::size_t i) { out[i] = predict_proba_one(model, X[i]); });
    return out;
}

std::vector<int> predict(const LinearModel& model, const std::vector<SparseVector>& X) {
    std::vector<int> out(X.size());
    parallel_for(X.size(), [&](std::size_t i) {
        out[i] = predict_proba_one(model, X[i]) >= 0.5 ? 1 : 0;
    });
    return out;
}

std::string model_to_json(const LinearModel& model) {
    nlohmann::json j;
    j["vocabulary"] = {{"terms", model.vocabulary.terms},
                       {"doc_freq", model.vocabulary.doc_freq},
                       {"n_docs", model.vocabulary.n_docs},
                       {"norm", to_string(model.vocabulary.norm)}};
    j["weights"] = model.weights;
    j["intercept"] = model.intercept;
    j["hyperparams"] = {{"stopwords", to_string(model.hyperparams.stopwords)},
                        {"norm", to_string(model.hyperparams.norm)},
                        {"C", model.hyperparams.C},
                        {"penalty", to_string(model.hyperparams.penalty)}};
    j["train_fingerprint"] = model.train_fingerprint;
    return j.dump(2);
}

LinearModel model_from_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("bad model JSON: ") + e.what());
    }
    LinearModel m;
    try {
        const auto& v = j.at("vocabulary");
        m.vocabulary.terms = v.at("terms").get<std::vector<std::string>>();
        m.vocabulary.doc_freq = v.at("doc_freq").get<std::vector<std::uint64_t>>();
        m.vocabulary.n_docs = v.at("n_docs").get<std::uint64_t>();
        m.vocabulary.norm = norm_from_string(v.at("norm").get<std::string>());
        for (std::size_t i = 0; i < m.vocabulary.terms.size(); ++i)
            m.vocabulary.index.emplace(m.vocabulary.terms[i], static_cast<std::uint32_t>(i));
        m.weights = j.at("weights").get<std::vector<double>>();
        m.intercept = j.at("intercept").get<double>();
        const auto& hp = j.at("hyperparams");
        m.hyperparams.stopwords =
            stopword_mode_from_string(hp.at("stopwords").get<std::string>());
        m.hyperparams.norm = norm_from_string(hp.at("norm").get<std::string>());
        m.hyperparams.C = hp.at("C").get<double>();
        m.hyperparams.penalty = penalty_from_string(hp.at("penalty").get<std::string>());
        m.train_fingerprint = j.value("train_fingerprint", "");
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("bad model JSON: ") + e.what());
    }
    if (m.weights.size() != m.vocabulary.terms.size())
        throw Error("model JSON: |weights| != |vocabulary|");
    return m;
}

void save_model(const LinearModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << model_to_json(model) << "\n";
}

LinearModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return model_from_json(ss.str());
}

std::string fingerprint_training_data(const std::vector<std::vector<std::string>>& docs,
                                      const std::vector<int>& y) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        for (const auto& tok : docs[i]) {
            h = fnv1a64(tok, h);
            h = fnv1a64("\x1f", h);
        }
        h = fnv1a64(y[i] == 1 ? "\x1e" "1" : "\x1e" "0", h);
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

}  // namespace cadkit
