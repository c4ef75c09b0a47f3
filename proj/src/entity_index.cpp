#include "evir/entity_index.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace evir {

EntityIndex EntityIndex::build(const Corpus& corpus) {
    EntityIndex index;
    index.doc_count_ = static_cast<std::uint32_t>(corpus.articles().size());
    index.doc_ids_.reserve(corpus.articles().size());

    for (std::uint32_t doc = 0; doc < corpus.articles().size(); ++doc) {
        const Article& article = corpus.articles()[doc];
        index.doc_ids_.push_back(article.id);
        std::set<Key> distinct;
        for (const Entity& entity : article.entities) {
            distinct.emplace(entity.canonical, entity.type);
        }
        for (const Key& key : distinct) {
            index.postings_[key].push_back(doc);
        }
    }
    return index;
}

std::uint32_t EntityIndex::df(const Entity& entity) const {
    auto it = postings_.find(Key{entity.canonical, entity.type});
    return it == postings_.end() ? 0 : static_cast<std::uint32_t>(it->second.size());
}

RankedList EntityIndex::search(const std::vector<Entity>& query_entities, const EntityWeightTable& weights,
                               std::size_t top_k) const {
    std::vector<double> scores(doc_count_, 0.0);
    std::vector<char> touched(doc_count_, 0);
    std::vector<std::uint32_t> matched;

    // Distinct query entities, first occurrence order.
    std::set<Key> seen;
    for (const Entity& entity : query_entities) {
        if (!seen.emplace(entity.canonical, entity.type).second) continue;
        auto it = postings_.find(Key{entity.canonical, entity.type});
        if (it == postings_.end()) continue;
        const auto& postings = it->second;
        double contribution = weights.get(entity.type) *
                              std::log(1.0 + static_cast<double>(doc_count_) / postings.size());
        for (std::uint32_t doc : postings) {
            scores[doc] += contribution;
            if (!touched[doc]) {
                touched[doc] = 1;
                matched.push_back(doc);
            }
        }
    }

    RankedList results;
    results.reserve(matched.size());
    std::sort(matched.begin(), matched.end());
    for (std::uint32_t doc : matched) {
        if (scores[doc] > 0.0) results.push_back(ScoredId{doc_ids_[doc], scores[doc]});
    }
    sort_ranked(results);
    truncate_ranked(results, top_k);
    return results;
}

}  // namespace evir
