#pragma once

#include <stdexcept>
#include <string>

namespace wf2powl {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Structural queries referencing nodes the net does not contain.
struct NotInNetError : Error {
    using Error::Error;
};

// Attempt to fire a transition that is not enabled in the given marking.
struct NotEnabledError : Error {
    using Error::Error;
};

// State-space exploration crossed the configured limits.
struct BoundExceededError : Error {
    using Error::Error;
};

// A place was observed holding more tokens than allowed.
struct UnsafeDetectedError : Error {
    explicit UnsafeDetectedError(std::string place_id)
        : Error("unsafe marking detected at place '" + place_id + "'"),
          place(std::move(place_id)) {}
    std::string place;
};

// Workflow-net shape violations.
struct WfValidationError : Error {
    enum class Kind { NoUniqueSource, NoUniqueSink, DisconnectedNode };
    WfValidationError(Kind k, std::string msg, std::string node_id = "")
        : Error(std::move(msg)), kind(k), node(std::move(node_id)) {}
    Kind kind;
    std::string node;
};

// POWL model invariant violations (arity, non-strict order).
struct InvalidModelError : Error {
    using Error::Error;
};

struct NotStrictError : InvalidModelError {
    explicit NotStrictError(std::size_t idx)
        : InvalidModelError("order relation is not a strict partial order (reflexive at index " +
                            std::to_string(idx) + " after closure)"),
          index(idx) {}
    std::size_t index;
};

// File format problems.
struct ParseError : Error {
    explicit ParseError(std::string msg, std::string loc = "")
        : Error(loc.empty() ? msg : msg + " (at " + loc + ")"), location(std::move(loc)) {}
    std::string location;
};

struct UnsupportedError : Error {
    using Error::Error;
};

}  // namespace wf2powl
