#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tdre {

enum class ErrorKind {
  ParseError,      // malformed input line
  SelfLoop,        // i -> i edge in an edge list
  DuplicateEdge,   // repeated ordered pair
  InvalidDesign,   // e.g. odd n for the linear design
  InvalidIndices,  // bad node/parameter indices in a request
  DegenerateCounts,// a required triple count is zero
  EmptyFilter,     // gamma filter selected no nodes
  ZeroMu,          // a mu quantity is nonpositive
  NotConverged,    // optimizer hit max_iter (or parameters diverged)
  Diverged,        // objective decreased beyond tolerance
  SingularCovariance,
  IoError,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::string message, long detail = -1)
      : std::runtime_error(std::move(message)), kind_(kind), detail_(detail) {}

  ErrorKind kind() const { return kind_; }
  // line number for parse errors, node index for degeneracy; -1 when unused
  long detail() const { return detail_; }

private:
  ErrorKind kind_;
  long detail_;
};

// nodes at which counts vanished, carried by DegenerateCounts errors
class DegenerateError : public Error {
public:
  DegenerateError(std::string message, std::vector<int> nodes)
      : Error(ErrorKind::DegenerateCounts, std::move(message),
              nodes.empty() ? -1 : nodes.front()),
        nodes_(std::move(nodes)) {}
  const std::vector<int>& nodes() const { return nodes_; }

private:
  std::vector<int> nodes_;
};

}  // namespace tdre
