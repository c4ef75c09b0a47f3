#include "evir/fusion.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace evir {

RankedList rrf(const std::vector<RankedList>& lists, double k) {
    if (lists.empty()) throw std::invalid_argument("rrf: need at least one ranking");
    if (k <= 0.0) throw std::invalid_argument("rrf: k must be positive");
    std::map<std::string, double> fused;
    for (const RankedList& list : lists) {
        for (std::size_t i = 0; i < list.size(); ++i) {
            fused[list[i].id] += 1.0 / (k + static_cast<double>(i + 1));
        }
    }
    RankedList out;
    out.reserve(fused.size());
    for (const auto& [id, score] : fused) out.push_back(ScoredId{id, score});
    sort_ranked(out);
    return out;
}

double boost_score(double similarity, std::uint32_t article_rank, const BoostParams& params) {
    if (article_rank == 0) throw std::invalid_argument("boost_score: rank is 1-based");
    double x = params.alpha * similarity - params.beta * std::log(static_cast<double>(article_rank));
    return params.gamma / (1.0 + std::exp(-x));
}

double final_score(double similarity, std::uint32_t article_rank, const BoostParams& params) {
    return similarity + boost_score(similarity, article_rank, params);
}

RankedList rank_candidates(const std::vector<Candidate>& candidates, const BoostParams& params) {
    RankedList out;
    out.reserve(candidates.size());
    for (const Candidate& c : candidates) {
        out.push_back(ScoredId{c.image_id, final_score(c.similarity, c.article_rank, params)});
    }
    sort_ranked(out);
    return out;
}

RankedList rerank_dual(const std::vector<Candidate>& slot_a, const std::vector<Candidate>& slot_b,
                       const BoostParams& params_a, const BoostParams& params_b, double rrf_k) {
    auto ids_of = [](const std::vector<Candidate>& slot) {
        std::map<std::string, int> ids;
        for (const Candidate& c : slot) ++ids[c.image_id];
        return ids;
    };
    if (ids_of(slot_a) != ids_of(slot_b)) {
        throw std::invalid_argument("rerank_dual: slots cover different image ids");
    }
    return rrf({rank_candidates(slot_a, params_a), rank_candidates(slot_b, params_b)}, rrf_k);
}

}  // namespace evir
