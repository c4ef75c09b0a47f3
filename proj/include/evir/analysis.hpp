#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace evir {

using TokenStream = std::vector<std::string>;

struct AnalysisConfig {
    std::unordered_set<std::string> stopwords;  // lowercase forms
    bool stem = false;                          // Porter stemming, off by default
};

// Lowercased word tokens: maximal runs of letters/digits; punctuation and
// whitespace split. Stopwords are removed after lowercasing, stemming (when
// enabled) runs last. Deterministic for a fixed input and config.
TokenStream tokenize(std::string_view text, const AnalysisConfig& config);

// lowercase(trim(text)) — the normalization applied to entity surface forms.
// Never removes stopwords.
std::string canonicalize(std::string_view text);

// Stopword file: one token per line, UTF-8, '#' starts a comment.
std::unordered_set<std::string> load_stopwords(const std::string& path);

// Porter stemmer for English tokens. Non-ASCII tokens pass through unchanged.
std::string porter_stem(const std::string& token);

}  // namespace evir
