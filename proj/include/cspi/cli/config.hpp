#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cspi/errors.hpp"
#include "cspi/operator_algebra.hpp"

namespace cspi::cli {

class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class Command { Order, FreeEnergy, Cutoff, Prefactor, Flow, IdentityCheck };

std::string_view to_string(Command command);
std::optional<Command> parse_command(std::string_view text);

struct Tolerances {
  double relative_error = 1e-3;   // free-energy: final-N relative error
  double slope = 0.15;            // cutoff: |slope + 1|
  double ordering_shift = 1e-15;  // cutoff: |Weyl − Normal + 1/2|
  double prefactor = 1e-2;        // prefactor: final-N relative difference
  double monotone_floor = 1e-9;   // differences below this count as converged
  double flow_exactness = 1e-9;
  double flow_slope = 0.2;  // |slope + 2|
  double flow_halving = 0.3;
  double identity = 1e-6;
  double order_residual = 1e-10;
};

struct RunConfig {
  Command command = Command::Order;

  double A = 1.0;
  double beta = 1.0;

  // order
  std::string expr = "ad_0*a_0";
  Ordering ordering = Ordering::Weyl;
  bool verify = false;

  // free-energy, prefactor, flow
  std::vector<std::int64_t> N;
  // cutoff, prefactor
  std::vector<std::int64_t> b;
  std::vector<Ordering> orderings = {Ordering::Normal, Ordering::AntiNormal, Ordering::Weyl};
  std::size_t modes = 1;

  // flow
  std::int64_t b_floor = 50;
  std::int64_t fit_min = 50;
  std::int64_t fit_max = 500;

  // identity-check
  unsigned n_max = 8;
  int radial_nodes = 64;
  std::vector<int> angular_nodes = {64};
  unsigned margin = 2;

  std::string out;  // empty: stdout
  Tolerances tolerances;
};

// Defaults for the command's sweep lists.
RunConfig default_config(Command command);

// Applies the keys of a JSON config object on top of `config`. Unknown keys
// and ill-typed values throw ConfigError.
void apply_json(RunConfig& config, const nlohmann::json& j);

// Sweep lists non-empty, odd N where Weyl machinery is required, positive
// sizes. Throws ConfigError.
void validate(const RunConfig& config);

nlohmann::json to_json(const RunConfig& config);

}  // namespace cspi::cli
