#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "evir/analysis.hpp"
#include "evir/corpus.hpp"
#include "evir/ranked_list.hpp"

namespace evir {

struct Bm25Params {
    double k1 = 1.2;  // term-frequency saturation
    double b = 0.75;  // document-length normalization
};

// tf * (k1 + 1) / (tf + k1 * (1 - b + b * doc_len / avg_doc_len))
double bm25_tf_component(double tf, double doc_len, double avg_doc_len, const Bm25Params& params);

// ln(1 + (N - df + 0.5) / (df + 0.5)); strictly positive for df >= 1, so
// every matching document scores above zero.
double bm25_idf(std::uint32_t df, std::uint32_t doc_count);

// In-process inverted index over tokenize(title + " " + body) per article.
// Immutable once built; concurrent searches need no synchronization.
class InvertedIndex {
public:
    struct Posting {
        std::uint32_t doc = 0;  // dense document number, ascending article id
        std::uint32_t tf = 0;

        bool operator==(const Posting&) const = default;
    };

    static InvertedIndex build(const Corpus& corpus, const AnalysisConfig& analysis, const Bm25Params& params);

    // Sum over query token occurrences; repeated tokens contribute repeatedly.
    double score(const TokenStream& query_tokens, const std::string& doc_id) const;

    // Top-k positive-scoring documents, descending score, ties by ascending id.
    RankedList search(const TokenStream& query_tokens, std::size_t top_k) const;

    std::uint32_t doc_count() const { return static_cast<std::uint32_t>(doc_ids_.size()); }
    double avg_doc_length() const { return avg_doc_length_; }
    const Bm25Params& params() const { return params_; }
    bool stemmed() const { return stemmed_; }
    const std::vector<std::string>& doc_ids() const { return doc_ids_; }
    std::uint32_t doc_length(const std::string& doc_id) const;
    const std::vector<Posting>* postings(const std::string& term) const;
    std::vector<std::string> terms() const;  // ascending

    // EIDX persistence: magic `EIDX`, version u32 LE, then the document table
    // and postings in a fixed order so identical indexes serialize to
    // identical bytes.
    void save(const std::string& path) const;
    static InvertedIndex load(const std::string& path);

private:
    std::uint32_t doc_number(const std::string& doc_id) const;
    void finish();

    std::vector<std::string> doc_ids_;       // ascending; position = dense number
    std::vector<std::uint32_t> doc_lengths_;
    std::unordered_map<std::string, std::vector<Posting>> postings_;
    std::unordered_map<std::string, std::uint32_t> doc_numbers_;
    double avg_doc_length_ = 0.0;
    Bm25Params params_;
    bool stemmed_ = false;
};

}  // namespace evir
