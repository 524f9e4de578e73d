#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace onetwo {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Malformed textual input (edge lists, graph6, labelling JSON).
class ParseError : public Error {
  public:
    using Error::Error;
};

// Well-formed input that violates a structural invariant (self-loop, duplicate edge, ...).
class ValidationError : public Error {
  public:
    using Error::Error;
};

// A labelling whose shape does not match its host graph.
class ShapeError : public Error {
  public:
    using Error::Error;
};

// Caller violated an operation precondition (degree bound, mad bound, empty graph, ...).
class PreconditionError : public Error {
  public:
    using Error::Error;
};

// Search budget or size limit exceeded; the answer is unknown, never wrong.
class ResourceError : public Error {
  public:
    using Error::Error;
};

// Bug trap: an invariant that the construction guarantees did not hold.
class InternalError : public Error {
  public:
    explicit InternalError(const std::string& what, std::string dump = {})
        : Error(what), dump_(std::move(dump)) {}

    // JSON reproduction state, empty when none was captured.
    const std::string& dump() const { return dump_; }

  private:
    std::string dump_;
};

}  // namespace onetwo
