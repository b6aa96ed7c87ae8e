#pragma once

// Frequency-shell renormalisation of the Weyl-order discrete path integral
// for quadratic models: the ±ω_{B'} amplitude pair is integrated out exactly
// at each step, the Berry part goes into the running normalisation c_{B,B'}
// and the Hamiltonian part is reported as the per-shell correction.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cspi/discrete_pi.hpp"
#include "cspi/quadratic_model.hpp"

namespace cspi {

struct FlowState {
  MatsubaraGrid grid;
  std::size_t modes = 1;
  std::int64_t shell = 0;  // highest shell B' still present
  double log_c = 0.0;      // ln c_{B,B'}, including the quadratic log-ratios
  double A_eff = 0.0;
  // Constant added to the effective Hamiltonian by the integrated shells.
  double hamiltonian_shift = 0.0;
};

// State before any shell is removed: B' = B, ln c_{B,B} = (N−1)M ln 2.
FlowState initial_flow_state(const MatsubaraGrid& grid, const QuadraticModel& model, std::size_t modes = 1);

struct StepResult {
  FlowState state;
  // |ΔF| attributed to the Hamiltonian term by this shell: M·ln(1 + x²/4tan²)/β
  // with x = βA_eff/N.
  double correction = 0.0;
};

// Integrates out ±ω_{state.shell}. Throws RefusedError when the shell is
// already at or below `floor`.
StepResult renorm_step(const FlowState& state, const QuadraticModel& model, std::int64_t floor);

struct ShellCorrection {
  std::int64_t shell = 0;  // the shell that was integrated out
  double correction = 0.0;
  double log_c = 0.0;  // ln c after removing it
};

struct FlowResult {
  FlowState final_state;
  std::vector<ShellCorrection> series;  // ordered from B down to b_floor + 1
};

FlowResult run_flow(const QuadraticModel& model, const MatsubaraGrid& grid, std::int64_t b_floor,
                    std::size_t modes = 1);

// Σ of corrections over shells B' > beyond.
double accumulated_correction(const FlowResult& flow, std::int64_t beyond);

// ln of the Gaussian integral over the shells |n| ≤ state.shell still present.
double remaining_log_integral(const FlowState& state, const QuadraticModel& model);

}  // namespace cspi
