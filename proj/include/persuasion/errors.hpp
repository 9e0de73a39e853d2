#pragma once

#include <stdexcept>
#include <string>

namespace persuasion {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Tables disagree with the agent count, or other shape problems.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Malformed or unreadable input documents.
class InputError : public Error {
 public:
  using Error::Error;
};

/// An argument outside the documented domain of an operation.
class ContractError : public Error {
 public:
  using Error::Error;
};

/// An oracle asked to enumerate beyond its size cap.
class CapacityError : public Error {
 public:
  using Error::Error;
};

class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class UnboundedError : public Error {
 public:
  using Error::Error;
};

/// The solver produced something it should not have (iteration limit,
/// feasibility lost after refactorization, "impossible" infeasibility).
class SolverFault : public Error {
 public:
  using Error::Error;
};

/// Marginal tables that cannot be realised by the set sampler.
class InvalidMarginalsError : public Error {
 public:
  using Error::Error;
};

/// An internal numerical invariant broke.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// Raised by LP builders whose rows divide by the prior mass of the good
/// state. Callers fall back to the all-stay mechanism.
class ZeroPriorError : public Error {
 public:
  using Error::Error;
};

}  // namespace persuasion
