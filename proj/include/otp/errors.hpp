#pragma once

#include <stdexcept>
#include <string>

namespace otp {

// Bad arguments or an infeasible operation, detected up front.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed instance documents. The message carries the offending location.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// A structural invariant of the response-tree decomposition failed on
// concrete data. Either an implementation bug or an unhandled degenerate
// case; never ignored.
struct AnalysisError : std::runtime_error {
    explicit AnalysisError(const std::string& what) : std::runtime_error(what) {}
};

// "Cannot happen" conditions; indicates a bug in this library.
struct InternalError : std::logic_error {
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace otp
