#pragma once

#include <cstddef>
#include <string>

#include "evir/entities.hpp"
#include "evir/fusion.hpp"
#include "evir/inverted_index.hpp"

namespace evir {

// One embedding space plus the boost applied to its similarities.
struct SlotConfig {
    std::string image_embeddings;
    std::string query_embeddings;
    BoostParams boost;
};

// Everything the pipeline needs beyond the query stream. Loaded from a JSON
// file; relative paths are resolved against the config file's directory, so
// a generated corpus directory is relocatable as a unit.
struct PipelineConfig {
    std::string articles;
    std::string images;
    std::string entity_sidecar;  // optional: external NER output for articles
    std::string index_path;      // optional: where `index` persists, `retrieve` reuses

    std::string stopwords;  // optional; empty = keep every token
    bool stem = false;

    std::string gazetteer;  // optional; empty = rely on embedded/sidecar entities
    std::string synonyms;   // optional

    Bm25Params bm25;
    EntityWeightTable weights = default_weight_table();
    double rrf_k = 60.0;
    std::size_t top_k_articles = 30;
    std::size_t top_n_images = 10;

    SlotConfig slot_a;
    SlotConfig slot_b;

    // Rejects unknown keys so a typo cannot silently fall back to a default.
    static PipelineConfig load(const std::string& path);
};

}  // namespace evir
