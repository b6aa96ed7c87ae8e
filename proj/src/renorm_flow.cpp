#include "cspi/renorm_flow.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cspi/errors.hpp"

namespace cspi {

FlowState initial_flow_state(const MatsubaraGrid& grid, const QuadraticModel& model, std::size_t modes) {
  model.validate();
  grid.require_odd("renormalisation flow");
  if (modes == 0) throw StructuralError("mode count must be positive");
  if (model.beta != grid.beta()) throw StructuralError("model and grid disagree on beta");
  FlowState state{grid};
  state.modes = modes;
  state.shell = grid.max_index();
  state.log_c = static_cast<double>(grid.slices() - 1) * static_cast<double>(modes) * std::numbers::ln2;
  state.A_eff = model.A;
  return state;
}

StepResult renorm_step(const FlowState& state, const QuadraticModel& model, std::int64_t floor) {
  if (floor < 0) throw StructuralError("flow floor must be non-negative");
  if (state.shell <= floor) {
    throw RefusedError("shell " + std::to_string(state.shell) + " already at floor " + std::to_string(floor));
  }
  model.validate();
  const MatsubaraGrid& grid = state.grid;
  const double m = static_cast<double>(state.modes);
  const double n = static_cast<double>(grid.slices());
  const double t = std::tan(std::numbers::pi * static_cast<double>(state.shell) / n);
  if (!(t > 0.0) || !std::isfinite(t)) throw SingularityError("tangent pole at shell " + std::to_string(state.shell));
  const double x = model.beta * state.A_eff / n;

  // ∫ over z_{±ω} of exp[−|z_ω|²(x − 2it) − |z_{−ω}|²(x + 2it)] per mode
  // = 1/((x − 2it)(x + 2it)) = (4t²)^{−1} · 4t²/(4t² + x²).
  const Complex pair = Complex(x, -2.0 * t) * Complex(x, 2.0 * t);
  if (std::abs(pair.imag()) > 1e-12 * std::abs(pair.real())) {
    throw NumericError("shell Gaussian pair is not real at shell " + std::to_string(state.shell));
  }
  const double berry = -2.0 * m * std::log(2.0 * t);
  const double log_ratio = -m * std::log1p((x * x) / (4.0 * t * t));

  StepResult result{state, 0.0};
  result.state.shell = state.shell - 1;
  result.state.log_c = state.log_c + berry + log_ratio;
  // Frequencies decouple in a quadratic model: the induced change is a pure
  // constant, so A_eff is unchanged and the constant lands in the shift.
  result.state.hamiltonian_shift = state.hamiltonian_shift - log_ratio / model.beta;
  result.correction = std::abs(log_ratio) / model.beta;
  return result;
}

FlowResult run_flow(const QuadraticModel& model, const MatsubaraGrid& grid, std::int64_t b_floor,
                    std::size_t modes) {
  if (b_floor < 0 || b_floor >= grid.max_index()) {
    throw StructuralError("b_floor must lie in [0, (N-1)/2)");
  }
  FlowResult flow{initial_flow_state(grid, model, modes), {}};
  flow.series.reserve(static_cast<std::size_t>(grid.max_index() - b_floor));
  while (flow.final_state.shell > b_floor) {
    const std::int64_t shell = flow.final_state.shell;
    StepResult step = renorm_step(flow.final_state, model, b_floor);
    flow.final_state = std::move(step.state);
    flow.series.push_back({shell, step.correction, flow.final_state.log_c});
  }
  return flow;
}

double accumulated_correction(const FlowResult& flow, std::int64_t beyond) {
  double sum = 0.0;
  // Series runs from the largest shell down: add the smallest terms first.
  for (const auto& entry : flow.series) {
    if (entry.shell > beyond) sum += entry.correction;
  }
  return sum;
}

double remaining_log_integral(const FlowState& state, const QuadraticModel& model) {
  QuadraticModel effective = model;
  effective.A = state.A_eff;
  return static_cast<double>(state.modes) * weyl_shell_log_integral(state.grid, effective, state.shell);
}

}  // namespace cspi
