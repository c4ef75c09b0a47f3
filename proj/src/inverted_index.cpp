#include "evir/inverted_index.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "evir/detail/binary_io.hpp"
#include "evir/errors.hpp"

namespace evir {

namespace {

constexpr char kMagic[4] = {'E', 'I', 'D', 'X'};
constexpr std::uint32_t kFormatVersion = 1;
constexpr std::uint32_t kFlagStemmed = 1;

}  // namespace

double bm25_tf_component(double tf, double doc_len, double avg_doc_len, const Bm25Params& params) {
    double norm = avg_doc_len > 0.0 ? doc_len / avg_doc_len : 1.0;
    return tf * (params.k1 + 1.0) / (tf + params.k1 * (1.0 - params.b + params.b * norm));
}

double bm25_idf(std::uint32_t df, std::uint32_t doc_count) {
    double n = doc_count;
    double d = df;
    return std::log(1.0 + (n - d + 0.5) / (d + 0.5));
}

InvertedIndex InvertedIndex::build(const Corpus& corpus, const AnalysisConfig& analysis, const Bm25Params& params) {
    InvertedIndex index;
    index.params_ = params;
    index.stemmed_ = analysis.stem;

    // Articles arrive sorted by id, which fixes the dense numbering.
    index.doc_ids_.reserve(corpus.articles().size());
    index.doc_lengths_.reserve(corpus.articles().size());
    for (const Article& article : corpus.articles()) {
        auto doc = static_cast<std::uint32_t>(index.doc_ids_.size());
        index.doc_ids_.push_back(article.id);
        TokenStream tokens = tokenize(article.title + " " + article.body, analysis);
        index.doc_lengths_.push_back(static_cast<std::uint32_t>(tokens.size()));
        std::map<std::string, std::uint32_t> counts;
        for (std::string& token : tokens) ++counts[std::move(token)];
        for (auto& [term, tf] : counts) {
            index.postings_[term].push_back(Posting{doc, tf});
        }
    }
    index.finish();
    return index;
}

void InvertedIndex::finish() {
    doc_numbers_.clear();
    for (std::uint32_t i = 0; i < doc_ids_.size(); ++i) doc_numbers_.emplace(doc_ids_[i], i);

    std::uint64_t total = 0;
    for (std::uint32_t len : doc_lengths_) total += len;
    avg_doc_length_ = doc_lengths_.empty() ? 0.0 : static_cast<double>(total) / doc_lengths_.size();

    for (auto& [term, postings] : postings_) {
        std::sort(postings.begin(), postings.end(),
                  [](const Posting& a, const Posting& b) { return a.doc < b.doc; });
    }
}

std::uint32_t InvertedIndex::doc_number(const std::string& doc_id) const {
    auto it = doc_numbers_.find(doc_id);
    if (it == doc_numbers_.end()) throw DataError(DataErrorKind::UnknownId, "document `" + doc_id + "` not indexed");
    return it->second;
}

std::uint32_t InvertedIndex::doc_length(const std::string& doc_id) const {
    return doc_lengths_[doc_number(doc_id)];
}

const std::vector<InvertedIndex::Posting>* InvertedIndex::postings(const std::string& term) const {
    auto it = postings_.find(term);
    return it == postings_.end() ? nullptr : &it->second;
}

std::vector<std::string> InvertedIndex::terms() const {
    std::vector<std::string> out;
    out.reserve(postings_.size());
    for (const auto& [term, postings] : postings_) out.push_back(term);
    std::sort(out.begin(), out.end());
    return out;
}

double InvertedIndex::score(const TokenStream& query_tokens, const std::string& doc_id) const {
    std::uint32_t doc = doc_number(doc_id);
    double doc_len = doc_lengths_[doc];
    double total = 0.0;
    for (const std::string& token : query_tokens) {
        auto it = postings_.find(token);
        if (it == postings_.end()) continue;
        const auto& postings = it->second;
        auto hit = std::lower_bound(postings.begin(), postings.end(), doc,
                                    [](const Posting& p, std::uint32_t d) { return p.doc < d; });
        if (hit == postings.end() || hit->doc != doc) continue;
        total += bm25_idf(static_cast<std::uint32_t>(postings.size()), doc_count()) *
                 bm25_tf_component(hit->tf, doc_len, avg_doc_length_, params_);
    }
    return total;
}

RankedList InvertedIndex::search(const TokenStream& query_tokens, std::size_t top_k) const {
    std::vector<double> scores(doc_ids_.size(), 0.0);
    std::vector<char> touched(doc_ids_.size(), 0);
    std::vector<std::uint32_t> matched;

    for (const std::string& token : query_tokens) {
        auto it = postings_.find(token);
        if (it == postings_.end()) continue;
        const auto& postings = it->second;
        double idf = bm25_idf(static_cast<std::uint32_t>(postings.size()), doc_count());
        for (const Posting& posting : postings) {
            scores[posting.doc] +=
                idf * bm25_tf_component(posting.tf, doc_lengths_[posting.doc], avg_doc_length_, params_);
            if (!touched[posting.doc]) {
                touched[posting.doc] = 1;
                matched.push_back(posting.doc);
            }
        }
    }

    RankedList results;
    results.reserve(matched.size());
    std::sort(matched.begin(), matched.end());  // dense numbers follow ascending id
    for (std::uint32_t doc : matched) {
        if (scores[doc] > 0.0) results.push_back(ScoredId{doc_ids_[doc], scores[doc]});
    }
    sort_ranked(results);
    truncate_ranked(results, top_k);
    return results;
}

void InvertedIndex::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError(DataErrorKind::MissingFile, "cannot write " + path);

    detail::put_bytes(out, kMagic, sizeof(kMagic));
    detail::put_le<std::uint32_t>(out, kFormatVersion);
    detail::put_le<std::uint32_t>(out, stemmed_ ? kFlagStemmed : 0);
    detail::put_f64_le(out, params_.k1);
    detail::put_f64_le(out, params_.b);

    detail::put_le<std::uint32_t>(out, doc_count());
    for (std::uint32_t i = 0; i < doc_count(); ++i) {
        detail::put_string(out, doc_ids_[i]);
        detail::put_le<std::uint32_t>(out, doc_lengths_[i]);
    }

    // Terms in ascending order: identical indexes produce identical bytes.
    std::vector<std::string> sorted_terms = terms();
    detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(sorted_terms.size()));
    for (const std::string& term : sorted_terms) {
        const auto& postings = postings_.at(term);
        detail::put_string(out, term);
        detail::put_le<std::uint32_t>(out, static_cast<std::uint32_t>(postings.size()));
        for (const Posting& posting : postings) {
            detail::put_le<std::uint32_t>(out, posting.doc);
            detail::put_le<std::uint32_t>(out, posting.tf);
        }
    }
    if (!out) throw DataError(DataErrorKind::MissingFile, "write failed for " + path);
}

InvertedIndex InvertedIndex::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError(DataErrorKind::MissingFile, "cannot open " + path);

    char magic[4];
    detail::get_bytes(in, magic, sizeof(magic), path);
    if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw DataError(DataErrorKind::BadMagic, path + ": not an EIDX file");
    }
    auto version = detail::get_le<std::uint32_t>(in, path);
    if (version != kFormatVersion) {
        throw DataError(DataErrorKind::BadVersion, path + ": EIDX version " + std::to_string(version));
    }

    InvertedIndex index;
    auto flags = detail::get_le<std::uint32_t>(in, path);
    index.stemmed_ = (flags & kFlagStemmed) != 0;
    index.params_.k1 = detail::get_f64_le(in, path);
    index.params_.b = detail::get_f64_le(in, path);

    auto doc_count = detail::get_le<std::uint32_t>(in, path);
    index.doc_ids_.reserve(doc_count);
    index.doc_lengths_.reserve(doc_count);
    for (std::uint32_t i = 0; i < doc_count; ++i) {
        std::string id = detail::get_string(in, path);
        if (id.empty()) throw DataError(DataErrorKind::MalformedRecord, path + ": empty document id");
        if (!index.doc_ids_.empty() && !(index.doc_ids_.back() < id)) {
            throw DataError(index.doc_ids_.back() == id ? DataErrorKind::DuplicateId : DataErrorKind::MalformedRecord,
                            path + ": document ids out of order at `" + id + "`");
        }
        index.doc_ids_.push_back(std::move(id));
        index.doc_lengths_.push_back(detail::get_le<std::uint32_t>(in, path));
    }

    auto term_count = detail::get_le<std::uint32_t>(in, path);
    std::string previous_term;
    for (std::uint32_t t = 0; t < term_count; ++t) {
        std::string term = detail::get_string(in, path);
        if (term.empty()) throw DataError(DataErrorKind::MalformedRecord, path + ": empty term");
        if (t > 0 && !(previous_term < term)) {
            throw DataError(previous_term == term ? DataErrorKind::DuplicateId : DataErrorKind::MalformedRecord,
                            path + ": terms out of order at `" + term + "`");
        }
        auto posting_count = detail::get_le<std::uint32_t>(in, path);
        if (posting_count == 0) throw DataError(DataErrorKind::MalformedRecord, path + ": term with no postings");
        std::vector<Posting> postings;
        postings.reserve(posting_count);
        for (std::uint32_t p = 0; p < posting_count; ++p) {
            Posting posting;
            posting.doc = detail::get_le<std::uint32_t>(in, path);
            posting.tf = detail::get_le<std::uint32_t>(in, path);
            if (posting.doc >= doc_count || posting.tf == 0 ||
                (!postings.empty() && postings.back().doc >= posting.doc)) {
                throw DataError(DataErrorKind::MalformedRecord, path + ": invalid posting for `" + term + "`");
            }
            postings.push_back(posting);
        }
        previous_term = term;
        index.postings_.emplace(std::move(term), std::move(postings));
    }
    detail::expect_end(in, path);
    index.finish();
    return index;
}

}  // namespace evir
