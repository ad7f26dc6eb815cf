#pragma once

// Lexical overlap metrics used to score generated text against references.
// BLEU here is unigram precision with count clipping and no brevity penalty;
// ROUGE is unigram recall; F1 is their harmonic mean. Good enough to compare
// rankers and generators on a corpus this size, and cheap enough to run in
// every evaluation loop.

#include <string_view>

#include "questforge/text.hpp"

namespace questforge::metrics {

struct F1Score {
    double f1 = 0.0;
    double bleu1 = 0.0;
    double rouge1 = 0.0;
};

inline F1Score f1_bleu_rouge(std::string_view candidate, std::string_view reference) {
    auto cand = tokenize(candidate);
    auto ref = tokenize(reference);
    F1Score s;
    if (cand.empty() || ref.empty()) return s;

    auto ref_counts = unigram_counts(ref);
    auto cand_counts = unigram_counts(cand);
    int clipped = 0;
    for (const auto& [tok, c] : cand_counts) {
        auto it = ref_counts.find(tok);
        if (it != ref_counts.end()) clipped += std::min(c, it->second);
    }
    s.bleu1 = double(clipped) / double(cand.size());
    s.rouge1 = double(clipped) / double(ref.size());
    if (s.bleu1 + s.rouge1 > 0.0)
        s.f1 = 2.0 * s.bleu1 * s.rouge1 / (s.bleu1 + s.rouge1);
    return s;
}

} // namespace questforge::metrics
