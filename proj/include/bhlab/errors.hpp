#pragma once

#include <stdexcept>
#include <string>

namespace bhlab {

// Base for every error raised by the library. The CLI maps subclasses to
// exit codes (see cli.hpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Problem definition / input layout.
class SpecError : public Error { using Error::Error; };
class DimensionMismatch : public Error { using Error::Error; };
class MalformedInput : public Error { using Error::Error; };

// An input lies outside the domain of a partial function.
class PromiseViolation : public Error { using Error::Error; };
class Infeasible : public Error { using Error::Error; };
class DomainError : public Error { using Error::Error; };

// Quantum register.
class IndexOutOfRange : public Error { using Error::Error; };
class NotBasisState : public Error { using Error::Error; };

// Algorithms and runs.
class OutputCountMismatch : public Error { using Error::Error; };
class MalformedTable : public Error { using Error::Error; };
class ReplayExhausted : public Error { using Error::Error; };

// Search limits.
class BranchLimitExceeded : public Error { using Error::Error; };
class SpaceTooLarge : public Error { using Error::Error; };

}  // namespace bhlab
