#include "evir/errors.hpp"

namespace evir {

const char* to_string(DataErrorKind kind) {
    switch (kind) {
        case DataErrorKind::MalformedRecord: return "malformed record";
        case DataErrorKind::DuplicateId: return "duplicate id";
        case DataErrorKind::DanglingReference: return "dangling reference";
        case DataErrorKind::EmptyRelevantSet: return "empty relevant set";
        case DataErrorKind::BadMagic: return "bad magic";
        case DataErrorKind::BadVersion: return "unsupported version";
        case DataErrorKind::Truncated: return "truncated file";
        case DataErrorKind::TrailingBytes: return "trailing bytes";
        case DataErrorKind::ZeroVector: return "zero vector";
        case DataErrorKind::DimMismatch: return "dimension mismatch";
        case DataErrorKind::UnknownId: return "unknown id";
        case DataErrorKind::MissingFile: return "missing file";
        case DataErrorKind::MissingEmbedding: return "missing embedding";
    }
    return "data error";
}

}  // namespace evir
