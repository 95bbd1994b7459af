#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cadkit/tfidf.hpp"

namespace cadkit {

enum class Penalty { l1, l2 };
enum class StopwordMode { english, none, english_without_negation };

std::string to_string(Penalty p);
Penalty penalty_from_string(const std::string& s);
std::string to_string(StopwordMode m);
StopwordMode stopword_mode_from_string(const std::string& s);

struct HyperParams {
    StopwordMode stopwords = StopwordMode::english;
    Norm norm = Norm::l2;
    double C = 1.0;
    Penalty penalty = Penalty::l2;

    bool operator==(const HyperParams&) const = default;
};

struct LinearModel {
    Vocabulary vocabulary;
    std::vector<double> weights;  // |weights| == |vocabulary|
    double intercept = 0.0;
    HyperParams hyperparams;
    std::string train_fingerprint;
};

struct TrainOptions {
    double tol = 1e-6;        // on max |generalized gradient|
    int max_iter = 10000;
    bool parallel = true;     // use the OpenMP kernel; serial twin otherwise
    bool record_loss = false; // keep per-iteration objective values
    std::size_t dim = 0;      // weight-vector length; 0 = infer from the data
};

struct FitResult {
    std::vector<double> weights;
    double intercept = 0.0;
    int iterations = 0;
    bool converged = false;
    double final_loss = 0.0;
    std::vector<double> loss_history;  // filled when record_loss
};

// Mean binary cross-entropy plus its gradient. The reduction runs over
// fixed-size example blocks whose partials are combined in block order, so
// the result is bit-identical for any worker count; the serial twin walks
// the same blocks. grad_w must be sized |w|.
double bce_loss_grad(const std::vector<SparseVector>& X, const std::vector<int>& y,
                     const std::vector<double>& w, double intercept,
                     std::vector<double>& grad_w, double& grad_intercept,
                     bool parallel = true);
double bce_loss_grad_serial(const std::vector<SparseVector>& X, const std::vector<int>& y,
                            const std::vector<double>& w, double intercept,
                            std::vector<double>& grad_w, double& grad_intercept);

// Objective the optimizer minimizes: mean BCE + penalty/(C*n), where the
// penalty is 0.5*||w||^2 (l2) or ||w||_1 (l1); intercept unpenalized.
double penalized_loss(const std::vector<SparseVector>& X, const std::vector<int>& y,
                      const std::vector<double>& w, double intercept,
                      double C, Penalty penalty, bool parallel = true);

// Gradient of the penalized objective; for l1 the subgradient uses
// sign(w_i) at nonzero coordinates and 0 at zeros (callers check those
// coordinates separately).
void penalized_grad(const std::vector<SparseVector>& X, const std::vector<int>& y,
                    const std::vector<double>& w, double intercept,
                    double C, Penalty penalty,
                    std::vector<double>& grad_w, double& grad_intercept,
                    bool parallel = true);

// Proximal gradient descent with a Barzilai-Borwein initial step and
// monotone Armijo backtracking; zero initialization. l2 reduces to plain
// gradient descent with line search, l1 to ISTA soft-thresholding.
FitResult train(const std::vector<SparseVector>& X, const std::vector<int>& y,
                const HyperParams& hp, const TrainOptions& opts = {});

double predict_proba_one(const LinearModel& model, const SparseVector& x);
std::vector<double> predict_proba(const LinearModel& model, const std::vector<SparseVector>& X);
std::vector<int> predict(const LinearModel& model, const std::vector<SparseVector>& X);

std::string model_to_json(const LinearModel& model);
LinearModel model_from_json(const std::string& json_text);
void save_model(const LinearModel& model, const std::string& path);
LinearModel load_model(const std::string& path);

// Stable digest of the training set (ids, labels, token streams), stored in
// the model so artifacts can be traced back to their inputs.
std::string fingerprint_training_data(const std::vector<std::vector<std::string>>& docs,
                                      const std::vector<int>& y);

}  // namespace cadkit
