#include "evir/ranked_list.hpp"

#include <algorithm>

namespace evir {

void sort_ranked(RankedList& list) {
    std::sort(list.begin(), list.end(), [](const ScoredId& a, const ScoredId& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.id < b.id;
    });
}

void truncate_ranked(RankedList& list, std::size_t k) {
    if (list.size() > k) list.resize(k);
}

}  // namespace evir
