#include "evir/vector_store.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>

#include "evir/detail/binary_io.hpp"
#include "evir/errors.hpp"

namespace evir {

namespace {

constexpr char kMagic[4] = {'E', 'V', 'E', 'C'};
constexpr std::uint32_t kFormatVersion = 1;

}  // namespace

double dot(std::span<const float> a, std::span<const float> b) {
    double total = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) total += static_cast<double>(a[i]) * b[i];
    return total;
}

bool normalize_l2(std::span<float> vec) {
    double norm = std::sqrt(dot(vec, vec));
    if (norm < 1e-30) return false;
    if (std::abs(norm - 1.0) <= 1e-6) return true;  // keep already-normalized bits
    for (float& value : vec) value = static_cast<float>(value / norm);
    return true;
}

EmbeddingMatrix EmbeddingMatrix::from_rows(std::string model_tag, std::uint32_t dim,
                                           std::vector<std::pair<std::string, std::vector<float>>> rows) {
    EmbeddingMatrix matrix;
    matrix.model_tag_ = std::move(model_tag);
    matrix.dim_ = dim;
    matrix.ids_.reserve(rows.size());
    matrix.data_.reserve(rows.size() * dim);
    for (auto& [id, vec] : rows) {
        if (id.empty()) throw DataError(DataErrorKind::MalformedRecord, "embedding row with empty id");
        if (vec.size() != dim) {
            throw DataError(DataErrorKind::DimMismatch,
                            "vector for `" + id + "` has " + std::to_string(vec.size()) + " components, expected " +
                                std::to_string(dim));
        }
        if (!normalize_l2(vec)) {
            throw DataError(DataErrorKind::ZeroVector, "vector for `" + id + "` has zero norm");
        }
        if (!matrix.index_.emplace(id, matrix.ids_.size()).second) {
            throw DataError(DataErrorKind::DuplicateId, "embedding id `" + id + "` appears twice");
        }
        matrix.ids_.push_back(std::move(id));
        matrix.data_.insert(matrix.data_.end(), vec.begin(), vec.end());
    }
    return matrix;
}

EmbeddingMatrix EmbeddingMatrix::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(DataErrorKind::MissingFile, "cannot open " + path);

    char magic[4];
    detail::get_bytes(in, magic, sizeof(magic), path);
    if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw DataError(DataErrorKind::BadMagic, path + ": not an EVEC file");
    }
    auto version = detail::get_le<std::uint32_t>(in, path);
    if (version != kFormatVersion) {
        throw DataError(DataErrorKind::BadVersion, path + ": EVEC version " + std::to_string(version));
    }
    auto count = detail::get_le<std::uint32_t>(in, path);
    auto dim = detail::get_le<std::uint32_t>(in, path);
    if (dim == 0) throw DataError(DataErrorKind::DimMismatch, path + ": dimension is zero");
    std::string model_tag = detail::get_string(in, path);

    std::vector<std::pair<std::string, std::vector<float>>> rows;
    rows.reserve(count);
    for (std::uint32_t r = 0; r < count; ++r) {
        std::string id = detail::get_string(in, path);
        if (id.empty()) throw DataError(DataErrorKind::MalformedRecord, path + ": record with empty id");
        std::vector<float> vec(dim);
        for (std::uint32_t i = 0; i < dim; ++i) vec[i] = detail::get_f32_le(in, path);
        rows.emplace_back(std::move(id), std::move(vec));
    }
    detail::expect_end(in, path);
    return from_rows(std::move(model_tag), dim, std::move(rows));
}

void EmbeddingMatrix::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError(DataErrorKind::MissingFile, "cannot write " + path);
    detail::put_bytes(out, kMagic, sizeof(kMagic));
    detail::put_le<std::uint32_t>(out, kFormatVersion);
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(ids_.size()));
    detail::put_le<std::uint32_t>(out, dim_);
    detail::put_string(out, model_tag_);
    for (std::size_t r = 0; r < ids_.size(); ++r) {
        detail::put_string(out, ids_[r]);
        for (std::uint32_t i = 0; i < dim_; ++i) detail::put_f32_le(out, data_[r * dim_ + i]);
    }
    if (!out) throw DataError(DataErrorKind::MissingFile, "write failed for " + path);
}

std::span<const float> EmbeddingMatrix::vector_of(const std::string& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw DataError(DataErrorKind::UnknownId, "no embedding for `" + id + "`");
    return std::span<const float>(data_.data() + it->second * dim_, dim_);
}

RankedList cosine_topk(const EmbeddingMatrix& matrix, std::span<const float> query_vec,
                       std::span<const std::string> candidates, std::size_t k) {
    if (query_vec.size() != matrix.dim()) {
        throw DataError(DataErrorKind::DimMismatch,
                        "query has " + std::to_string(query_vec.size()) + " components, matrix dim is " +
                            std::to_string(matrix.dim()));
    }
    std::vector<float> query(query_vec.begin(), query_vec.end());
    if (!normalize_l2(query)) throw DataError(DataErrorKind::ZeroVector, "query vector has zero norm");

    std::set<std::string> distinct(candidates.begin(), candidates.end());
    RankedList results;
    results.reserve(distinct.size());
    for (const std::string& id : distinct) {
        results.push_back(ScoredId{id, dot(query, matrix.vector_of(id))});
    }
    sort_ranked(results);
    truncate_ranked(results, k);
    return results;
}

}  // namespace evir
