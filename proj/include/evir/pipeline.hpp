#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "evir/analysis.hpp"
#include "evir/config.hpp"
#include "evir/corpus.hpp"
#include "evir/entity_index.hpp"
#include "evir/fusion.hpp"
#include "evir/inverted_index.hpp"
#include "evir/ranked_list.hpp"
#include "evir/vector_store.hpp"

namespace evir {

// Everything a query went through, for `inspect` and latency accounting.
// Stage timings partition the retrieve call, so they sum to total_ms.
struct QueryTrace {
    std::vector<Entity> entities;  // after fallback extraction and expansion
    RankedList entity_branch;      // articles, every positive score
    RankedList bm25_branch;        // articles, every positive score
    RankedList fused_articles;     // after RRF, cut to top_k_articles
    RankedList slot_a_images;      // boosted scores, full candidate set
    RankedList slot_b_images;
    RankedList final_images;       // after RRF, cut to top_n_images

    double entity_ms = 0.0;
    double bm25_ms = 0.0;
    double fuse_ms = 0.0;
    double candidates_ms = 0.0;
    double rerank_ms = 0.0;
    double total_ms = 0.0;
};

struct RetrieveResult {
    RankedList images;
    // Candidate images skipped because an embedding slot lacks them.
    std::size_t dropped_images = 0;
};

// The two-stage engine: entity and BM25 article search fused by RRF, then
// dual-slot embedding reranking of the retained articles' images, fused by
// RRF again. Immutable after build; retrieve is const and thread-safe.
class Pipeline {
public:
    // Loads the corpus, sidecar, stopwords, gazetteer, synonyms, and all four
    // embedding files; builds the inverted index from the corpus, or loads it
    // from config.index_path when that file exists (its stored analyzer and
    // BM25 parameters must match the config).
    static Pipeline build(const PipelineConfig& config);

    RetrieveResult retrieve(const Query& query, QueryTrace* trace = nullptr) const;

    // Stage one only: fused article ranking, cut to top_k_articles.
    RankedList search_articles(const Query& query) const;

    // The query's own entities when present, otherwise gazetteer extraction,
    // then synonym expansion.
    std::vector<Entity> query_entities(const Query& query) const;

    const Corpus& corpus() const { return corpus_; }
    const InvertedIndex& index() const { return index_; }
    const EntityIndex& entity_index() const { return entity_index_; }
    const PipelineConfig& config() const { return config_; }
    const AnalysisConfig& analysis() const { return analysis_; }

private:
    PipelineConfig config_;
    AnalysisConfig analysis_;
    Corpus corpus_;
    InvertedIndex index_;
    EntityIndex entity_index_;
    Gazetteer gazetteer_;
    bool has_gazetteer_ = false;
    SynonymTable synonyms_;
    EmbeddingMatrix images_a_;
    EmbeddingMatrix images_b_;
    EmbeddingMatrix queries_a_;
    EmbeddingMatrix queries_b_;
};

}  // namespace evir
