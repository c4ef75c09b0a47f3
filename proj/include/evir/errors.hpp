#pragma once

#include <stdexcept>
#include <string>

namespace evir {

// Category of a data/format failure. The CLI maps these to exit code 2 and
// prefixes messages with the category name so scripts can grep for them.
enum class DataErrorKind {
    MalformedRecord,
    DuplicateId,
    DanglingReference,
    EmptyRelevantSet,
    BadMagic,
    BadVersion,
    Truncated,
    TrailingBytes,
    ZeroVector,
    DimMismatch,
    UnknownId,
    MissingFile,
    MissingEmbedding,
};

const char* to_string(DataErrorKind kind);

// A problem with input data or files.
class DataError : public std::runtime_error {
public:
    DataError(DataErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    DataErrorKind kind() const { return kind_; }

private:
    DataErrorKind kind_;
};

// Misuse of the command line.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A broken internal invariant; exit code 3 when it escapes the CLI.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace evir
