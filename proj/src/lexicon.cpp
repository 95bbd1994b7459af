#include "cadkit/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "cadkit/common.hpp"

namespace cadkit {

std::string lowercase(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return c < 0x80 ? static_cast<char>(std::tolower(c)) : static_cast<char>(c);
    });
    return out;
}

bool Lexicon::contains(const std::string& token) const {
    return entries.count(lowercase(token)) > 0;
}

bool is_mapping_lexicon(const std::string& name) {
    return name == "synonyms" || name == "entities";
}

namespace {

std::string strip(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) {
        part = strip(part);
        if (!part.empty()) out.push_back(part);
    }
    return out;
}

}  // namespace

Lexicon load_lexicon(const std::string& path, const std::string& name) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open lexicon " + path);

    Lexicon lex;
    lex.name = name;
    const bool mapping = is_mapping_lexicon(name);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip(line);
        if (line.empty() || line[0] == '#') continue;
        if (mapping) {
            auto colon = line.find(':');
            if (colon == std::string::npos)
                throw Error(path + ":" + std::to_string(lineno) +
                            ": mapping lexicon needs 'term: alt1, alt2' lines");
            std::string term = lowercase(strip(line.substr(0, colon)));
            auto alts = split_csv(lowercase(line.substr(colon + 1)));
            if (term.empty() || alts.empty())
                throw Error(path + ":" + std::to_string(lineno) + ": malformed mapping line");
            lex.entries.insert(term);
            auto& slot = lex.mapping[term];
            for (const auto& a : alts) {
                if (std::find(slot.begin(), slot.end(), a) == slot.end()) slot.push_back(a);
            }
        } else {
            lex.entries.insert(lowercase(line));
        }
    }
    if (lex.entries.empty()) throw Error("empty lexicon: " + path);
    return lex;
}

Lexicon lexicon_from_terms(const std::string& name, const std::vector<std::string>& terms) {
    Lexicon lex;
    lex.name = name;
    for (const auto& t : terms) lex.entries.insert(lowercase(t));
    return lex;
}

Lexicon stopwords_without_negation(const Lexicon& stopwords, const Lexicon& negation) {
    Lexicon out;
    out.name = "english_without_negation";
    for (const auto& t : stopwords.entries) {
        if (!negation.entries.count(t)) out.entries.insert(t);
    }
    if (out.entries.empty()) warn("stopwords_without_negation produced an empty list");
    return out;
}

StrategyLexica load_strategy_lexica(const std::string& dir) {
    auto file = [&dir](const std::string& name) { return dir + "/" + name + ".txt"; };
    StrategyLexica lexica;
    lexica.affect_pos = load_lexicon(file("affect_pos"), "affect_pos");
    lexica.affect_neg = load_lexicon(file("affect_neg"), "affect_neg");
    lexica.gender = load_lexicon(file("gender"), "gender");
    lexica.identity = load_lexicon(file("identity"), "identity");
    lexica.negation = load_lexicon(file("negation"), "negation");
    lexica.hedge = load_lexicon(file("hedge"), "hedge");
    return lexica;
}

}  // namespace cadkit
