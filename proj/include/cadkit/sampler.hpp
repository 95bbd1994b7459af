#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cadkit/corpus.hpp"
#include "cadkit/typology.hpp"

namespace cadkit {

enum class SampleMode {
    ncf,
    cf_random,
    cf_sexism_scheme,
    cf_construct_driven,
    cf_agnostic,
    cf_balanced_types
};

std::string to_string(SampleMode m);
SampleMode sample_mode_from_string(const std::string& s);

struct SamplingPlan {
    SampleMode mode = SampleMode::ncf;
    double proportion = 0.0;  // alpha: fraction of the set that is counterfactual
    std::uint64_t seed = 0;
    std::size_t size = 0;     // exact output size
};

// Banker's rounding of alpha*size (ties to even), as used for all
// substitution counts.
std::size_t round_half_even(double x);

// Random substitution at proportion alpha: picks paired originals
// (stratified by the original's label, remainder to the positive class) and
// swaps each for its own counterfactual. ncf is the alpha=0 special case.
std::vector<LabeledExample> substitute_random(const std::vector<LabeledExample>& originals,
                                              const std::map<std::string, CounterfactualPair>& pairs,
                                              const SamplingPlan& plan);

// One-sided scheme: 50% positive (sexist) originals, 25% negative originals,
// 25% negative counterfactuals; originals whose counterfactual was drawn are
// excluded from the kept-original pools.
std::vector<LabeledExample> substitute_sexism_scheme(const std::vector<LabeledExample>& originals,
                                                     const std::map<std::string, CounterfactualPair>& pairs,
                                                     const SamplingPlan& plan);

// Counterfactual portion restricted by strategy-type partition:
// cf_construct_driven / cf_agnostic draw from one side only;
// cf_balanced_types splits the quota half/half (odd remainder to driven).
std::vector<LabeledExample> substitute_by_type(const std::vector<LabeledExample>& originals,
                                               const std::map<std::string, CounterfactualPair>& pairs,
                                               const std::map<std::string, StrategyLabelSet>& types,
                                               const SamplingPlan& plan);

// Dispatch on plan.mode. `types` required for the *_types modes.
std::vector<LabeledExample> sample_training_set(const Corpus& pool, const SamplingPlan& plan,
                                                const std::map<std::string, StrategyLabelSet>* types = nullptr);

// One training set per alpha, all of plan.size; entry seeds derived from
// (plan.seed, alpha index).
std::vector<std::vector<LabeledExample>> sweep(const Corpus& pool, const SamplingPlan& plan,
                                               const std::vector<double>& alphas,
                                               const std::map<std::string, StrategyLabelSet>* types = nullptr);

}  // namespace cadkit
