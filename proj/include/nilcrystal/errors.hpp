#pragma once

#include <stdexcept>
#include <string>

namespace nilcrystal {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad mathematical input: invalid vertex, length mismatch, negative weight.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class NonReducedWord : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class CapExceeded : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class GraphMismatch : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class PreconditionViolated : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class InvalidMovePosition : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

class DifferentWeylElement : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

/// A module (usually read from a file) violates the preprojective relations,
/// nilpotency, or its own shape.
class InvalidModule : public Error {
 public:
  using Error::Error;
};

/// A constructed module failed its own relation check. Never caused by valid
/// input; indicates a sign-convention bug.
class InternalRelationFailure : public Error {
 public:
  using Error::Error;
};

/// No injective morphism V_{k-} -> V_k was found within the retry budget.
class NoEmbeddingFound : public Error {
 public:
  using Error::Error;
};

/// Malformed file or other I/O problem.
class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace nilcrystal
