#ifndef GPTENT_ERRORS_HPP
#define GPTENT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gptent {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Negative weight or weights that do not sum to one.
class InvalidDistribution : public Error {
 public:
  using Error::Error;
};

/// Malformed test space, state, composite, or cross-reference.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// An operation that needs a non-signaling joint state received a signaling one.
class SignalingError : public Error {
 public:
  using Error::Error;
};

/// Dimension mismatch, or a point outside the polytope where one inside is required.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// The non-concavity construction broke one of its own invariants.
class ConstructionError : public Error {
 public:
  using Error::Error;
};

}  // namespace gptent

#endif  // GPTENT_ERRORS_HPP
