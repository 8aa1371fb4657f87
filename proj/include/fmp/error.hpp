#pragma once

#include <stdexcept>
#include <string>

namespace fmp {

/// Coarse error classes; the C API maps each one onto a status code.
enum class ErrorCode {
  Parse,
  InvalidArgument,
  Precondition,
  Io,
  Solver,
  Limit,
  Internal,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

/// Parse failures carry the offending line (1-based, 0 when the problem is
/// not tied to a single line) and a machine-checkable kind.
enum class ParseIssue {
  Malformed,
  BadHeader,
  CountMismatch,
  DuplicateId,
  DanglingReference,
  DuplicateLeaf,
  ForwardReference,
  UnknownVtreeNode,
  LiteralOutsideVtree,
  EmptyElements,
  NotDecomposable,
  BadFeature,
  BadValue,
  MultipleRoots,
  NoRoot,
  Cycle,
  MultipleOneEdges,
  NoOneTerminal,
  MissingOutEdge,
  NotAPartition,
  NotATree,
};

const char *to_string(ParseIssue issue);

class ParseError : public Error {
public:
  ParseError(ParseIssue issue, int line, const std::string &msg)
      : Error(ErrorCode::Parse, format(issue, line, msg)), issue_(issue),
        line_(line) {}

  ParseIssue issue() const noexcept { return issue_; }
  int line() const noexcept { return line_; }

private:
  static std::string format(ParseIssue issue, int line,
                            const std::string &msg) {
    std::string out = to_string(issue);
    if (line > 0)
      out += " (line " + std::to_string(line) + ")";
    return out + ": " + msg;
  }

  ParseIssue issue_;
  int line_;
};

} // namespace fmp
