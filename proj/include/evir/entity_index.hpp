#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "evir/corpus.hpp"
#include "evir/entities.hpp"
#include "evir/ranked_list.hpp"

namespace evir {

// Postings over article entity lists, keyed by (canonical form, type).
// score(article) = sum over distinct matching query entities e of
// weight(type(e)) * ln(1 + N / df(e)); an entity counts once per article no
// matter how often it is mentioned.
class EntityIndex {
public:
    static EntityIndex build(const Corpus& corpus);

    RankedList search(const std::vector<Entity>& query_entities, const EntityWeightTable& weights,
                      std::size_t top_k) const;

    std::uint32_t doc_count() const { return doc_count_; }
    // Number of articles containing the entity; 0 when absent.
    std::uint32_t df(const Entity& entity) const;

private:
    using Key = std::pair<std::string, EntityType>;

    std::map<Key, std::vector<std::uint32_t>> postings_;  // dense article numbers, ascending
    std::vector<std::string> doc_ids_;                    // ascending article ids
    std::uint32_t doc_count_ = 0;
};

}  // namespace evir
