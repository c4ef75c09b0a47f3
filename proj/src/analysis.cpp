#include "evir/analysis.hpp"

#include <algorithm>
#include <fstream>

#include "evir/detail/utf8.hpp"
#include "evir/errors.hpp"

namespace evir {

TokenStream tokenize(std::string_view text, const AnalysisConfig& config) {
    TokenStream tokens;
    std::string current;
    std::size_t pos = 0;
    auto flush = [&] {
        if (current.empty()) return;
        if (!config.stopwords.contains(current)) {
            tokens.push_back(config.stem ? porter_stem(current) : current);
        }
        current.clear();
    };
    while (pos < text.size()) {
        char32_t cp = detail::decode_utf8(text, pos);
        if (detail::is_word_cp(cp)) {
            detail::append_utf8(current, detail::to_lower_cp(cp));
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

std::string canonicalize(std::string_view text) {
    auto is_space = [](unsigned char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; };
    std::size_t begin = 0, end = text.size();
    while (begin < end && is_space(text[begin])) ++begin;
    while (end > begin && is_space(text[end - 1])) --end;
    std::string out;
    out.reserve(end - begin);
    std::size_t pos = begin;
    while (pos < end) {
        detail::append_utf8(out, detail::to_lower_cp(detail::decode_utf8(text.substr(0, end), pos)));
    }
    return out;
}

std::unordered_set<std::string> load_stopwords(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError(DataErrorKind::MissingFile, "cannot open stopword file " + path);
    std::unordered_set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::string word = canonicalize(line);
        if (!word.empty()) words.insert(std::move(word));
    }
    return words;
}

// ---------------------------------------------------------------------------
// Porter stemmer (the classic 1980 algorithm, steps 1a through 5b).
// ---------------------------------------------------------------------------

namespace {

bool is_ascii_lower_word(const std::string& w) {
    return std::all_of(w.begin(), w.end(), [](unsigned char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'); });
}

bool is_consonant(const std::string& w, std::size_t i) {
    char c = w[i];
    if (c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u') return false;
    if (c == 'y') return i == 0 || !is_consonant(w, i - 1);
    return true;
}

// Number of VC sequences in w[0..end).
int measure(const std::string& w, std::size_t end) {
    int m = 0;
    std::size_t i = 0;
    while (i < end && is_consonant(w, i)) ++i;
    while (i < end) {
        while (i < end && !is_consonant(w, i)) ++i;
        if (i == end) break;
        ++m;
        while (i < end && is_consonant(w, i)) ++i;
    }
    return m;
}

bool has_vowel(const std::string& w, std::size_t end) {
    for (std::size_t i = 0; i < end; ++i) {
        if (!is_consonant(w, i)) return true;
    }
    return false;
}

bool double_consonant(const std::string& w) {
    std::size_t n = w.size();
    return n >= 2 && w[n - 1] == w[n - 2] && is_consonant(w, n - 1);
}

// consonant-vowel-consonant ending where the final consonant is not w, x or y.
bool cvc(const std::string& w) {
    std::size_t n = w.size();
    if (n < 3) return false;
    if (!is_consonant(w, n - 3) || is_consonant(w, n - 2) || !is_consonant(w, n - 1)) return false;
    char c = w[n - 1];
    return c != 'w' && c != 'x' && c != 'y';
}

bool ends_with(const std::string& w, std::string_view suffix) {
    return w.size() >= suffix.size() && w.compare(w.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Replaces `suffix` with `repl` when the stem measure reaches `min_m`.
bool replace_if(std::string& w, std::string_view suffix, std::string_view repl, int min_m) {
    if (!ends_with(w, suffix)) return false;
    std::size_t stem = w.size() - suffix.size();
    if (measure(w, stem) <= min_m - 1) return true;  // matched but condition failed: stop scanning
    w.resize(stem);
    w.append(repl);
    return true;
}

}  // namespace

std::string porter_stem(const std::string& token) {
    if (token.size() <= 2 || !is_ascii_lower_word(token)) return token;
    std::string w = token;

    // Step 1a
    if (ends_with(w, "sses")) {
        w.resize(w.size() - 2);
    } else if (ends_with(w, "ies")) {
        w.resize(w.size() - 2);
    } else if (ends_with(w, "ss")) {
        // keep
    } else if (ends_with(w, "s")) {
        w.resize(w.size() - 1);
    }

    // Step 1b
    bool step1b_fixup = false;
    if (ends_with(w, "eed")) {
        if (measure(w, w.size() - 3) > 0) w.resize(w.size() - 1);
    } else if (ends_with(w, "ed") && has_vowel(w, w.size() - 2)) {
        w.resize(w.size() - 2);
        step1b_fixup = true;
    } else if (ends_with(w, "ing") && has_vowel(w, w.size() - 3)) {
        w.resize(w.size() - 3);
        step1b_fixup = true;
    }
    if (step1b_fixup) {
        if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
            w.push_back('e');
        } else if (double_consonant(w) && !ends_with(w, "l") && !ends_with(w, "s") && !ends_with(w, "z")) {
            w.resize(w.size() - 1);
        } else if (measure(w, w.size()) == 1 && cvc(w)) {
            w.push_back('e');
        }
    }

    // Step 1c
    if (ends_with(w, "y") && has_vowel(w, w.size() - 1)) w.back() = 'i';

    // Step 2
    static constexpr std::pair<std::string_view, std::string_view> kStep2[] = {
        {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"}, {"anci", "ance"},
        {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},   {"entli", "ent"},
        {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
        {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
        {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},   {"biliti", "ble"},
    };
    for (const auto& [suffix, repl] : kStep2) {
        if (replace_if(w, suffix, repl, 1)) break;
    }

    // Step 3
    static constexpr std::pair<std::string_view, std::string_view> kStep3[] = {
        {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
        {"ical", "ic"},  {"ful", ""},   {"ness", ""},
    };
    for (const auto& [suffix, repl] : kStep3) {
        if (replace_if(w, suffix, repl, 1)) break;
    }

    // Step 4
    static constexpr std::string_view kStep4[] = {
        "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement", "ment",
        "ent", "ou", "ism", "ate", "iti", "ous", "ive", "ize",
    };
    if (ends_with(w, "ion") && w.size() >= 4 && (w[w.size() - 4] == 's' || w[w.size() - 4] == 't')) {
        if (measure(w, w.size() - 3) > 1) w.resize(w.size() - 3);
    } else {
        for (std::string_view suffix : kStep4) {
            if (ends_with(w, suffix)) {
                if (measure(w, w.size() - suffix.size()) > 1) w.resize(w.size() - suffix.size());
                break;
            }
        }
    }

    // Step 5a
    if (ends_with(w, "e")) {
        int m = measure(w, w.size() - 1);
        if (m > 1) {
            w.resize(w.size() - 1);
        } else if (m == 1) {
            std::string stem = w.substr(0, w.size() - 1);
            if (!cvc(stem)) w.resize(w.size() - 1);
        }
    }
    // Step 5b
    if (double_consonant(w) && ends_with(w, "l") && measure(w, w.size()) > 1) {
        w.resize(w.size() - 1);
    }
    return w;
}

}  // namespace evir
