#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace evir {

struct ScoredId {
    std::string id;
    double score = 0.0;

    bool operator==(const ScoredId&) const = default;
};

// Ordered results: scores non-increasing, ids unique, rank of entries[i] is i + 1.
using RankedList = std::vector<ScoredId>;

// Sorts descending by score, ties broken by ascending id.
void sort_ranked(RankedList& list);

void truncate_ranked(RankedList& list, std::size_t k);

}  // namespace evir
