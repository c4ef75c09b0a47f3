#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "evir/ranked_list.hpp"

namespace evir {

// Confidence boost applied on top of a cosine similarity: the boost grows
// with the similarity and shrinks with the rank of the image's best article.
struct BoostParams {
    double alpha = 10.0;
    double beta = 0.5;
    double gamma = 0.2;
};

// An image admitted to the rerank stage. `article_rank` is the 1-based rank
// of the best-placed article that carries the image.
struct Candidate {
    std::string image_id;
    double similarity = 0.0;
    std::uint32_t article_rank = 0;
};

// Reciprocal rank fusion: score(id) = sum over lists of 1 / (k + rank(id)),
// rank 1-based within each list. Empty lists contribute nothing. Output is
// sorted by fused score descending, ties by ascending id.
RankedList rrf(const std::vector<RankedList>& lists, double k = 60.0);

// sigmoid(alpha * similarity - beta * ln(rank)) * gamma
double boost_score(double similarity, std::uint32_t article_rank, const BoostParams& params);

// similarity + boost_score(...)
double final_score(double similarity, std::uint32_t article_rank, const BoostParams& params);

// Scores every candidate with final_score and sorts (score desc, id asc).
RankedList rank_candidates(const std::vector<Candidate>& candidates, const BoostParams& params);

// Reranks two embedding slots over the same candidate set and fuses the two
// rankings with RRF. Both slots must cover exactly the same image ids.
RankedList rerank_dual(const std::vector<Candidate>& slot_a, const std::vector<Candidate>& slot_b,
                       const BoostParams& params_a, const BoostParams& params_b, double rrf_k = 60.0);

inline RankedList rerank_dual(const std::vector<Candidate>& slot_a, const std::vector<Candidate>& slot_b,
                              const BoostParams& params, double rrf_k = 60.0) {
    return rerank_dual(slot_a, slot_b, params, params, rrf_k);
}

}  // namespace evir
