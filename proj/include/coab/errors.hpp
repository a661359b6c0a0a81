#pragma once

#include <stdexcept>
#include <string>

namespace coab {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Lookup of an id that was never assigned.
struct UnknownIdError : Error {
  using Error::Error;
};

// A display name that resolves to nothing.
struct UnknownNameError : Error {
  using Error::Error;
};

// A composition references an unregistered component.
struct UnknownComponentError : Error {
  using Error::Error;
};

// Sequence/set composition with zero elements.
struct EmptyCompositionError : Error {
  using Error::Error;
};

// Context concept with zero or more than one hole, or an otherwise
// ill-formed concept description.
struct MalformedConceptError : Error {
  using Error::Error;
};

// An operation was required to satisfy a concept and does not.
struct NotSatisfiedError : Error {
  using Error::Error;
};

// Malformed corpus, operation-spec, or model stream.
struct ParseError : Error {
  using Error::Error;
};

struct VersionMismatchError : ParseError {
  using ParseError::ParseError;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace coab
