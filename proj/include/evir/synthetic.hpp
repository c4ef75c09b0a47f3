#pragma once

#include <cstdint>
#include <string>

namespace evir {

// Shape of a generated benchmark corpus. Every query gets one planted
// article: the only article mentioning the query's PERSON entity and the
// query's unique marker token, and the only one whose image embedding sits
// next to the query embedding in both slots, so a correct pipeline must
// return that article's lead image at rank 1.
//
// With `adversarial` set, each planted article is paired with a distractor
// that carries the query's GPE entity instead (same document frequency,
// smaller article id), so only the PERSON-over-GPE type weights can put the
// planted article first in the entity branch.
struct SyntheticSpec {
    std::uint64_t seed = 42;
    std::size_t n_articles = 200;  // at least 2 * n_queries
    std::size_t n_queries = 50;
    std::uint32_t embedding_dim = 16;  // at least 8, for embedding separation
    bool adversarial = false;
};

struct SyntheticPaths {
    std::string config;
    std::string articles;
    std::string images;
    std::string queries;
    std::string ground_truth;
};

// Writes a complete, self-contained corpus directory: article/image/query/
// ground-truth JSON lines, image and query embeddings for both slots,
// gazetteer, synonyms, stopwords, and a ready-to-run config.json. Output is
// byte-deterministic for a fixed spec.
SyntheticPaths generate_synthetic(const SyntheticSpec& spec, const std::string& out_dir);

}  // namespace evir
