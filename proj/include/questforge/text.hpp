#pragma once

// Tokenization and small text helpers shared by every model in the project.
// One rule everywhere: lowercase, split on whitespace and punctuation, no
// stemming beyond a tiny irregular-verb lemma table. Keeping this in one
// place is what makes ranker vocabularies, generator counts and reward
// matching agree with each other.

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace questforge {

inline std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        unsigned char c = static_cast<unsigned char>(ch);
        if (std::isalnum(c)) {
            cur.push_back(char(std::tolower(c)));
        } else if (!cur.empty()) {
            out.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

inline std::string join_tokens(const std::vector<std::string>& toks) {
    std::string out;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        if (i) out.push_back(' ');
        out += toks[i];
    }
    return out;
}

// Canonical form used whenever two pieces of text are compared for equality
// (demo utterance matching, goal bookkeeping, dedup).
inline std::string normalize_text(std::string_view text) {
    return join_tokens(tokenize(text));
}

// Irregular verb forms that show up in motivations and demo turns. Regular
// inflections are left alone on purpose; quest types are surface verbs.
inline const std::map<std::string, std::string>& verb_lemma_table() {
    static const std::map<std::string, std::string> table = {
        {"got", "get"},       {"gotten", "get"},   {"took", "take"},
        {"taken", "take"},    {"gave", "give"},    {"given", "give"},
        {"stole", "steal"},   {"stolen", "steal"}, {"ate", "eat"},
        {"eaten", "eat"},     {"drank", "drink"},  {"drunk", "drink"},
        {"wore", "wear"},     {"worn", "wear"},    {"hitting", "hit"},
        {"struck", "strike"}, {"went", "go"},
    };
    return table;
}

inline std::string lemma(const std::string& token) {
    auto it = verb_lemma_table().find(token);
    return it == verb_lemma_table().end() ? token : it->second;
}

// Function words excluded when measuring planted content overlap between
// descriptions. Deliberately short; entity names never collide with it.
inline const std::set<std::string>& stopwords() {
    static const std::set<std::string> words = {
        "a", "an", "and", "at", "by", "for", "from", "here", "in", "is",
        "it", "my", "near", "of", "on", "the", "this", "to", "who", "with",
        "you", "your", "see", "me", "i",
    };
    return words;
}

inline std::vector<std::string> content_tokens(std::string_view text) {
    std::vector<std::string> out;
    for (auto& t : tokenize(text))
        if (!stopwords().count(t)) out.push_back(std::move(t));
    return out;
}

// First token of `text` (after lemmatization) that appears in `verb_set`,
// scanning left to right. Returns empty when nothing matches.
inline std::string extract_first_verb(std::string_view text,
                                      const std::set<std::string>& verb_set) {
    for (auto& tok : tokenize(text)) {
        std::string lem = lemma(tok);
        if (verb_set.count(lem)) return lem;
        if (verb_set.count(tok)) return tok;
    }
    return {};
}

inline std::map<std::string, int> unigram_counts(const std::vector<std::string>& toks) {
    std::map<std::string, int> counts;
    for (const auto& t : toks) counts[t]++;
    return counts;
}

// All order-n grams of a token sequence, each rendered as a single
// space-joined string. Sequences shorter than n yield nothing.
inline std::vector<std::string> ngrams(const std::vector<std::string>& toks, int n) {
    std::vector<std::string> out;
    if (n <= 0 || toks.size() < std::size_t(n)) return out;
    for (std::size_t i = 0; i + n <= toks.size(); ++i) {
        std::string g = toks[i];
        for (int j = 1; j < n; ++j) {
            g.push_back(' ');
            g += toks[i + j];
        }
        out.push_back(std::move(g));
    }
    return out;
}

} // namespace questforge
