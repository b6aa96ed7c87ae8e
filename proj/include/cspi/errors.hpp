#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cspi {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed inputs: mode-count mismatch, vector length mismatch, bad sizes.
class StructuralError : public Error {
 public:
  using Error::Error;
};

// Reordering would produce monomials above the configured degree cap.
class DegreeCapError : public Error {
 public:
  using Error::Error;
};

// A construction that is undefined for the given input: even-N Weyl
// discretisation, ordering-tag mismatch, non-Hermitian Hamiltonian.
class RefusedError : public Error {
 public:
  using Error::Error;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

// A denominator came within the pole tolerance of zero, or a quantity
// diverges (e.g. dF/dA at A = 0).
class SingularityError : public NumericError {
 public:
  using NumericError::NumericError;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace cspi
