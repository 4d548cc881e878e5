#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace memini {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A caller-supplied value violated a precondition.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// A referenced node, pair, or record does not exist.
class NotFound : public Error {
public:
    using Error::Error;
};

// A structured text input (snapshot, manifest, lexicon, event log) is
// malformed. Carries the 1-based line number of the offending line.
class FormatError : public Error {
public:
    FormatError(const std::string& message, std::size_t line)
        : Error(message + " (line " + std::to_string(line) + ")"), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// A network fetch failed or the API answer was unusable.
class FetchError : public Error {
public:
    FetchError(const std::string& message, std::uint64_t revision_id)
        : Error("revision " + std::to_string(revision_id) + ": " + message),
          revision_id_(revision_id) {}

    std::uint64_t revision_id() const { return revision_id_; }

private:
    std::uint64_t revision_id_;
};

// The local revision cache could not be read or written.
class CacheError : public Error {
public:
    using Error::Error;
};

// A document stream could not be assembled from the requested source.
class LoadError : public Error {
public:
    using Error::Error;
};

// A retrieval query matched no node in the graph.
class EmptySeedError : public Error {
public:
    using Error::Error;
};

}  // namespace memini
