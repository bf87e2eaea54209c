// Exception types shared across the toolkit.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fstmorph {

struct FstError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// No registered symbol matches the text at `byte_offset`.
struct UnknownSymbolError : FstError {
    std::size_t byte_offset;
    std::string text;
    UnknownSymbolError(std::size_t offset, std::string context)
        : FstError("unknown symbol at byte " + std::to_string(offset) + " in \"" +
                   context + "\""),
          byte_offset(offset),
          text(std::move(context)) {}
};

// An epsilon cycle with output would make the analysis set infinite.
struct CycleBudgetExceededError : FstError {
    CycleBudgetExceededError()
        : FstError("epsilon cycle with output: result set would be infinite") {}
};

struct CyclicInputError : FstError {
    CyclicInputError() : FstError("operation requires an acyclic transducer") {}
};

struct SyntaxError : FstError {
    std::size_t line;
    SyntaxError(std::size_t line_no, const std::string& message)
        : FstError("line " + std::to_string(line_no) + ": " + message), line(line_no) {}
    explicit SyntaxError(const std::string& message) : FstError(message), line(0) {}
};

struct SerializationError : FstError {
    using FstError::FstError;
};

struct MalformedAnalysisError : FstError {
    using FstError::FstError;
};

}  // namespace fstmorph
