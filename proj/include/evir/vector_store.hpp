#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "evir/ranked_list.hpp"

namespace evir {

// ID-addressed dense vectors, one embedding space per file. Rows are
// L2-normalized at load so a dot product is a cosine. Immutable after load.
//
// EVEC layout (little-endian): magic `EVEC` | format version u32 | count u32
// | dim u32 | model_tag length u16 + bytes | count records of
// (id length u16 + bytes, dim * f32).
class EmbeddingMatrix {
public:
    static EmbeddingMatrix load(const std::string& path);
    void save(const std::string& path) const;

    // Normalizes and validates rows; row order is preserved.
    static EmbeddingMatrix from_rows(std::string model_tag, std::uint32_t dim,
                                     std::vector<std::pair<std::string, std::vector<float>>> rows);

    std::uint32_t dim() const { return dim_; }
    std::size_t size() const { return ids_.size(); }
    const std::string& model_tag() const { return model_tag_; }
    const std::vector<std::string>& ids() const { return ids_; }
    bool contains(const std::string& id) const { return index_.contains(id); }
    // Fails with an unknown-id error when absent.
    std::span<const float> vector_of(const std::string& id) const;

private:
    std::vector<std::string> ids_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<float> data_;  // ids_.size() * dim_ floats, row-major
    std::uint32_t dim_ = 0;
    std::string model_tag_;
};

double dot(std::span<const float> a, std::span<const float> b);

// Scales `vec` to unit L2 norm (computed in double); a vector already within
// 1e-6 of unit norm is left bit-identical, which keeps save/load round-trips
// exact. Returns false for a numerically zero vector.
bool normalize_l2(std::span<float> vec);

// Exact cosine search over an explicit candidate subset: candidates sorted by
// dot product with the normalized query, descending, ties by ascending id,
// truncated to k. Duplicated candidate ids are scored once.
RankedList cosine_topk(const EmbeddingMatrix& matrix, std::span<const float> query_vec,
                       std::span<const std::string> candidates, std::size_t k);

}  // namespace evir
