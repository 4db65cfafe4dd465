#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace polysmith {

// Caller passed something the API does not accept.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DivisibilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Query needs a rank the matrix does not have (e.g. J_k with all minors zero).
struct RankError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptyKernelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IndependenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A claim that must hold by theory failed; points at a bug.
struct InternalConsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// fold_diagonal input lacks the divisibility pattern it needs.
struct ShapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

// Typed failures of the witness pipeline. The marker text is part of the
// report schema.
enum class FailureKind { KernelNotZlp, CompletionNotFound, UnsupportedShape };

inline const char* failure_marker(FailureKind k) {
  switch (k) {
    case FailureKind::KernelNotZlp: return "kernel-not-ZLP";
    case FailureKind::CompletionNotFound: return "completion-not-found";
    case FailureKind::UnsupportedShape: return "unsupported-shape";
  }
  return "?";
}

class ReductionFailure : public std::runtime_error {
 public:
  ReductionFailure(FailureKind kind, const std::string& msg)
      : std::runtime_error(std::string(failure_marker(kind)) + ": " + msg), kind_(kind) {}
  FailureKind kind() const { return kind_; }

 private:
  FailureKind kind_;
};

}  // namespace polysmith
