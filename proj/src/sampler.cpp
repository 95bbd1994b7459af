#include "cadkit/sampler.hpp"

#include <algorithm>
#include <cfenv>
#include <cmath>
#include <set>

#include "cadkit/common.hpp"
#include "cadkit/rng.hpp"

namespace cadkit {

std::string to_string(SampleMode m) {
    switch (m) {
        case SampleMode::ncf: return "ncf";
        case SampleMode::cf_random: return "cf_random";
        case SampleMode::cf_sexism_scheme: return "cf_sexism_scheme";
        case SampleMode::cf_construct_driven: return "cf_construct_driven";
        case SampleMode::cf_agnostic: return "cf_agnostic";
        case SampleMode::cf_balanced_types: return "cf_balanced_types";
    }
    return "ncf";
}

SampleMode sample_mode_from_string(const std::string& s) {
    if (s == "ncf") return SampleMode::ncf;
    if (s == "cf_random") return SampleMode::cf_random;
    if (s == "cf_sexism_scheme") return SampleMode::cf_sexism_scheme;
    if (s == "cf_construct_driven") return SampleMode::cf_construct_driven;
    if (s == "cf_agnostic") return SampleMode::cf_agnostic;
    if (s == "cf_balanced_types") return SampleMode::cf_balanced_types;
    throw Error("unknown sample mode: " + s);
}

std::size_t round_half_even(double x) {
    if (x < 0.0) throw Error("round_half_even: negative input");
    const int saved = std::fegetround();
    std::fesetround(FE_TONEAREST);  // ties to even
    const double r = std::nearbyint(x);
    std::fesetround(saved);
    return static_cast<std::size_t>(r);
}

namespace {

struct OriginalPools {
    // Paired originals (those with a counterfactual) and all originals,
    // split by label; entries are indices into the caller's list.
    std::vector<std::size_t> paired_pos, paired_neg, all_pos, all_neg;
};

OriginalPools build_pools(const std::vector<LabeledExample>& originals,
                          const std::map<std::string, CounterfactualPair>& pairs) {
    OriginalPools p;
    for (std::size_t i = 0; i < originals.size(); ++i) {
        const auto& ex = originals[i];
        if (ex.origin != Origin::original) continue;
        (ex.label == 1 ? p.all_pos : p.all_neg).push_back(i);
        if (!ex.pair_id.empty() && pairs.count(ex.pair_id))
            (ex.label == 1 ? p.paired_pos : p.paired_neg).push_back(i);
    }
    return p;
}

// Target positive count for an output of `size` drawn from the given pool
// balance; remainder goes to the positive class.
std::size_t positive_target(std::size_t size, std::size_t pool_pos, std::size_t pool_neg) {
    const double frac = static_cast<double>(pool_pos) / static_cast<double>(pool_pos + pool_neg);
    return static_cast<std::size_t>(std::floor(static_cast<double>(size) * frac + 0.5));
}

std::vector<std::size_t> take(std::vector<std::size_t> ids, std::size_t k, Rng& rng,
                              const std::string& what) {
    if (ids.size() < k) throw Error("insufficient " + what);
    rng.shuffle(ids);
    ids.resize(k);
    return ids;
}

std::vector<LabeledExample> assemble(const std::vector<LabeledExample>& originals,
                                     const std::map<std::string, CounterfactualPair>& pairs,
                                     const std::vector<std::size_t>& substituted,
                                     const std::vector<std::size_t>& kept, Rng& rng) {
    std::vector<LabeledExample> out;
    out.reserve(substituted.size() + kept.size());
    for (std::size_t i : substituted)
        out.push_back(pairs.at(originals[i].pair_id).counterfactual);
    for (std::size_t i : kept) out.push_back(originals[i]);
    rng.shuffle(out);
    return out;
}

// Kept-original quotas hitting the class targets after accounting for the
// flipped labels of the substituted counterfactuals.
std::pair<std::size_t, std::size_t> kept_quotas(std::size_t size, std::size_t n_pos_target,
                                                std::size_t cf_pos, std::size_t cf_neg) {
    const std::size_t m = size - cf_pos - cf_neg;
    const long long raw =
        static_cast<long long>(n_pos_target) - static_cast<long long>(cf_pos);
    const std::size_t o_pos =
        static_cast<std::size_t>(std::clamp<long long>(raw, 0, static_cast<long long>(m)));
    return {o_pos, m - o_pos};
}

std::vector<std::size_t> remove_ids(const std::vector<std::size_t>& pool,
                                    const std::set<std::size_t>& removed) {
    std::vector<std::size_t> out;
    out.reserve(pool.size());
    for (std::size_t i : pool)
        if (!removed.count(i)) out.push_back(i);
    return out;
}

}  // namespace

std::vector<LabeledExample> substitute_random(const std::vector<LabeledExample>& originals,
                                              const std::map<std::string, CounterfactualPair>& pairs,
                                              const SamplingPlan& plan) {
    if (plan.proportion < 0.0 || plan.proportion > 1.0)
        throw Error("proportion must be in [0,1]");
    const auto pools = build_pools(originals, pairs);
    if (pools.all_pos.empty() || pools.all_neg.empty())
        throw Error("both classes required in the original pool");

    const std::size_t k = round_half_even(plan.proportion * static_cast<double>(plan.size));
    if (k > plan.size) throw Error("proportion rounds above the set size");
    const std::size_t k_pos = (k + 1) / 2;  // remainder to the positive class
    const std::size_t k_neg = k - k_pos;

    Rng rng(plan.seed);
    const auto sub_pos = take(pools.paired_pos, k_pos, rng, "paired examples in class 1");
    const auto sub_neg = take(pools.paired_neg, k_neg, rng, "paired examples in class 0");

    // Substituted counterfactuals carry the flipped label.
    const std::size_t n_pos_target =
        positive_target(plan.size, pools.all_pos.size(), pools.all_neg.size());
    const auto [o_pos, o_neg] = kept_quotas(plan.size, n_pos_target, k_neg, k_pos);

    std::set<std::size_t> substituted(sub_pos.begin(), sub_pos.end());
    substituted.insert(sub_neg.begin(), sub_neg.end());
    const auto kept_pos =
        take(remove_ids(pools.all_pos, substituted), o_pos, rng, "examples in class 1");
    const auto kept_neg =
        take(remove_ids(pools.all_neg, substituted), o_neg, rng, "examples in class 0");

    std::vector<std::size_t> sub(sub_pos), kept(kept_pos);
    sub.insert(sub.end(), sub_neg.begin(), sub_neg.end());
    kept.insert(kept.end(), kept_neg.begin(), kept_neg.end());
    return assemble(originals, pairs, sub, kept, rng);
}

std::vector<LabeledExample> substitute_sexism_scheme(
    const std::vector<LabeledExample>& originals,
    const std::map<std::string, CounterfactualPair>& pairs, const SamplingPlan& plan) {
    const auto pools = build_pools(originals, pairs);

    // 50% positive originals / 25% negative originals / 25% negative
    // counterfactuals (flips of positive originals).
    const std::size_t q_pos = round_half_even(0.50 * static_cast<double>(plan.size));
    const std::size_t q_neg_orig = round_half_even(0.25 * static_cast<double>(plan.size));
    const std::size_t q_cf = plan.size - q_pos - q_neg_orig;

    Rng rng(plan.seed);
    const auto sub = take(pools.paired_pos, q_cf, rng, "counterfactuals into the negative class");

    std::set<std::size_t> substituted(sub.begin(), sub.end());
    const auto kept_pos =
        take(remove_ids(pools.all_pos, substituted), q_pos, rng, "examples in class 1");
    const auto kept_neg = take(pools.all_neg, q_neg_orig, rng, "examples in class 0");

    std::vector<std::size_t> kept(kept_pos);
    kept.insert(kept.end(), kept_neg.begin(), kept_neg.end());
    return assemble(originals, pairs, sub, kept, rng);
}

std::vector<LabeledExample> substitute_by_type(const std::vector<LabeledExample>& originals,
                                               const std::map<std::string, CounterfactualPair>& pairs,
                                               const std::map<std::string, StrategyLabelSet>& types,
                                               const SamplingPlan& plan) {
    const auto pools = build_pools(originals, pairs);
    if (pools.all_pos.empty() || pools.all_neg.empty())
        throw Error("both classes required in the original pool");

    std::vector<std::size_t> driven, agnostic;
    for (const auto& list : {pools.paired_pos, pools.paired_neg}) {
        for (std::size_t i : list) {
            auto it = types.find(originals[i].pair_id);
            if (it == types.end())
                throw Error("no strategy labels for pair " + originals[i].pair_id);
            (it->second.construct_driven ? driven : agnostic).push_back(i);
        }
    }

    const std::size_t k = round_half_even(plan.proportion * static_cast<double>(plan.size));
    std::size_t k_driven = 0, k_agnostic = 0;
    switch (plan.mode) {
        case SampleMode::cf_construct_driven: k_driven = k; break;
        case SampleMode::cf_agnostic: k_agnostic = k; break;
        case SampleMode::cf_balanced_types:
            k_driven = (k + 1) / 2;  // odd remainder to the driven half
            k_agnostic = k - k_driven;
            break;
        default: throw Error("substitute_by_type: wrong mode");
    }

    Rng rng(plan.seed);
    const auto sub_driven = take(driven, k_driven, rng, "construct-driven counterfactuals");
    const auto sub_agnostic = take(agnostic, k_agnostic, rng, "construct-agnostic counterfactuals");

    std::vector<std::size_t> sub(sub_driven);
    sub.insert(sub.end(), sub_agnostic.begin(), sub_agnostic.end());
    std::size_t cf_pos = 0, cf_neg = 0;  // labels after the flip
    for (std::size_t i : sub) (originals[i].label == 1 ? cf_neg : cf_pos)++;

    const std::size_t n_pos_target =
        positive_target(plan.size, pools.all_pos.size(), pools.all_neg.size());
    const auto [o_pos, o_neg] = kept_quotas(plan.size, n_pos_target, cf_pos, cf_neg);

    std::set<std::size_t> substituted(sub.begin(), sub.end());
    const auto kept_pos =
        take(remove_ids(pools.all_pos, substituted), o_pos, rng, "examples in class 1");
    const auto kept_neg =
        take(remove_ids(pools.all_neg, substituted), o_neg, rng, "examples in class 0");

    std::vector<std::size_t> kept(kept_pos);
    kept.insert(kept.end(), kept_neg.begin(), kept_neg.end());
    return assemble(originals, pairs, sub, kept, rng);
}

std::vector<LabeledExample> sample_training_set(const Corpus& pool, const SamplingPlan& plan,
                                                const std::map<std::string, StrategyLabelSet>* types) {
    if (plan.size == 0) throw Error("sampling plan needs a positive size");
    std::vector<LabeledExample> originals;
    for (const auto& ex : pool.examples)
        if (ex.origin == Origin::original) originals.push_back(ex);

    switch (plan.mode) {
        case SampleMode::ncf: {
            if (plan.proportion != 0.0) throw Error("ncf mode requires proportion 0");
            return substitute_random(originals, pool.pairs, plan);
        }
        case SampleMode::cf_random:
            return substitute_random(originals, pool.pairs, plan);
        case SampleMode::cf_sexism_scheme:
            return substitute_sexism_scheme(originals, pool.pairs, plan);
        case SampleMode::cf_construct_driven:
        case SampleMode::cf_agnostic:
        case SampleMode::cf_balanced_types: {
            if (!types) throw Error("strategy labels required for by-type sampling");
            return substitute_by_type(originals, pool.pairs, *types, plan);
        }
    }
    throw Error("unknown sample mode");
}

std::vector<std::vector<LabeledExample>> sweep(const Corpus& pool, const SamplingPlan& plan,
                                               const std::vector<double>& alphas,
                                               const std::map<std::string, StrategyLabelSet>* types) {
    std::vector<std::vector<LabeledExample>> out;
    out.reserve(alphas.size());
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        SamplingPlan entry = plan;
        entry.proportion = alphas[i];
        entry.seed = derive_seed(plan.seed, i);
        if (entry.mode == SampleMode::ncf && entry.proportion != 0.0)
            entry.mode = SampleMode::cf_random;
        out.push_back(sample_training_set(pool, entry, types));
    }
    return out;
}

}  // namespace cadkit
