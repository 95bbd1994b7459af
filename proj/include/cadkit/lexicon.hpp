#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace cadkit {

// Plain word lists (affect_pos, gender, ...) leave `mapping` empty;
// synonyms/entities fill it ("term: alt1, alt2" lines).
struct Lexicon {
    std::string name;
    std::set<std::string> entries;
    std::map<std::string, std::vector<std::string>> mapping;

    bool contains(const std::string& token) const;
    std::size_t size() const { return entries.size(); }
};

bool is_mapping_lexicon(const std::string& name);

Lexicon load_lexicon(const std::string& path, const std::string& name);
Lexicon lexicon_from_terms(const std::string& name, const std::vector<std::string>& terms);

// Set difference stopwords \ negation. An empty result is allowed (warns).
Lexicon stopwords_without_negation(const Lexicon& stopwords, const Lexicon& negation);

struct StrategyLexica {
    Lexicon affect_pos;
    Lexicon affect_neg;
    Lexicon gender;
    Lexicon identity;
    Lexicon negation;
    Lexicon hedge;
};

// Loads <dir>/{affect_pos,affect_neg,gender,identity,negation,hedge}.txt.
StrategyLexica load_strategy_lexica(const std::string& dir);

std::string lowercase(const std::string& s);

}  // namespace cadkit
