#pragma once

#include <stdexcept>
#include <string>

namespace tnewton {

// Error taxonomy shared by every module. All derive from std::runtime_error so
// callers that do not care about the category can catch a single type.

/// Malformed or non-finite input, unknown names, violated preconditions on
/// arguments.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A scalar argument left the validity interval of a transform or inverse.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Requested size exceeds what an exhaustive routine supports.
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A loss could not be evaluated at the requested point (kinks, singular
/// Hessians of non-smooth fixtures, non-finite integrands).
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// |scaling factor| fell below the singular threshold; the induced step is
/// undefined.
class SingularScalingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A geometric precondition failed (e.g. gradient aligned with an eigenvector).
class PreconditionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Output could not be written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tnewton
