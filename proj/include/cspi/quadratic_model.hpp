#pragma once

#include <cmath>
#include <string>

#include "cspi/errors.hpp"

namespace cspi {

// Single-mode oscillator H = A a†a at inverse temperature beta.
struct QuadraticModel {
  double A = 1.0;
  double beta = 1.0;

  double beta_A() const { return beta * A; }

  void validate() const {
    if (!(beta > 0.0) || !std::isfinite(beta)) {
      throw StructuralError("inverse temperature must be positive and finite, got " + std::to_string(beta));
    }
    if (!std::isfinite(A)) throw StructuralError("energy coefficient A must be finite");
  }
};

}  // namespace cspi
