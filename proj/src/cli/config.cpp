#include "cspi/cli/config.hpp"

#include <cmath>

namespace cspi::cli {

namespace {

using nlohmann::json;

constexpr std::pair<Command, std::string_view> kCommands[] = {
    {Command::Order, "order"},         {Command::FreeEnergy, "free-energy"},
    {Command::Cutoff, "cutoff"},       {Command::Prefactor, "prefactor"},
    {Command::Flow, "flow"},           {Command::IdentityCheck, "identity-check"},
};

template <typename T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + key + "' has the wrong type");
  }
}

double get_number(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return j.get<double>();
}

std::int64_t get_integer(const json& j, const std::string& key) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (std::isfinite(v) && v == std::round(v) && std::abs(v) < 9.0e15) return static_cast<std::int64_t>(v);
  }
  throw ConfigError("config key '" + key + "' must be an integer");
}

std::vector<std::int64_t> get_integer_list(const json& j, const std::string& key) {
  std::vector<std::int64_t> out;
  if (j.is_array()) {
    for (const auto& v : j) out.push_back(get_integer(v, key));
  } else {
    out.push_back(get_integer(j, key));
  }
  return out;
}

Ordering get_ordering(const json& j, const std::string& key) {
  if (!j.is_string()) throw ConfigError("config key '" + key + "' must be an ordering name");
  try {
    return parse_ordering(j.get<std::string>());
  } catch (const Error& e) {
    throw ConfigError("config key '" + key + "': " + e.what());
  }
}

void apply_tolerances(Tolerances& t, const json& j) {
  if (!j.is_object()) throw ConfigError("config key 'tolerances' must be an object");
  const std::pair<const char*, double*> fields[] = {
      {"relative_error", &t.relative_error}, {"slope", &t.slope},
      {"ordering_shift", &t.ordering_shift}, {"prefactor", &t.prefactor},
      {"monotone_floor", &t.monotone_floor}, {"flow_exactness", &t.flow_exactness},
      {"flow_slope", &t.flow_slope},         {"flow_halving", &t.flow_halving},
      {"identity", &t.identity},             {"order_residual", &t.order_residual},
  };
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const auto& [name, target] : fields) {
      if (key == name) {
        *target = get_number(value, "tolerances." + key);
        if (!(*target >= 0.0)) throw ConfigError("tolerance '" + key + "' must be non-negative");
        known = true;
      }
    }
    if (!known) throw ConfigError("unknown tolerance '" + key + "'");
  }
}

bool requires_odd_N(const RunConfig& c) {
  return c.command == Command::Prefactor || c.command == Command::Flow;
}

}  // namespace

std::string_view to_string(Command command) {
  for (const auto& [c, name] : kCommands) {
    if (c == command) return name;
  }
  return "unknown";
}

std::optional<Command> parse_command(std::string_view text) {
  for (const auto& [c, name] : kCommands) {
    if (name == text) return c;
  }
  return std::nullopt;
}

RunConfig default_config(Command command) {
  RunConfig c;
  c.command = command;
  switch (command) {
    case Command::FreeEnergy:
      c.N = {1001, 10001, 100001};
      break;
    case Command::Cutoff:
      c.b = {1000, 10000, 100000};
      break;
    case Command::Prefactor:
      c.N = {1001, 10001, 100001};
      c.b = {4};
      break;
    case Command::Flow:
      c.N = {10001};
      break;
    case Command::Order:
    case Command::IdentityCheck:
      break;
  }
  return c;
}

void apply_json(RunConfig& c, const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "command") {
      const auto parsed = parse_command(get_as<std::string>(value, key));
      if (!parsed || *parsed != c.command) {
        throw ConfigError("config is for command '" + value.dump() + "', not '" +
                          std::string(to_string(c.command)) + "'");
      }
    } else if (key == "A") {
      c.A = get_number(value, key);
    } else if (key == "beta") {
      c.beta = get_number(value, key);
    } else if (key == "expr") {
      c.expr = get_as<std::string>(value, key);
    } else if (key == "ordering") {
      c.ordering = get_ordering(value, key);
    } else if (key == "orderings") {
      c.orderings.clear();
      if (value.is_array()) {
        for (const auto& v : value) c.orderings.push_back(get_ordering(v, key));
      } else {
        c.orderings.push_back(get_ordering(value, key));
      }
    } else if (key == "verify") {
      c.verify = get_as<bool>(value, key);
    } else if (key == "N") {
      c.N = get_integer_list(value, key);
    } else if (key == "b") {
      c.b = get_integer_list(value, key);
    } else if (key == "modes") {
      const auto m = get_integer(value, key);
      if (m < 1) throw ConfigError("modes must be positive");
      c.modes = static_cast<std::size_t>(m);
    } else if (key == "b_floor") {
      c.b_floor = get_integer(value, key);
    } else if (key == "fit_range") {
      const auto range = get_integer_list(value, key);
      if (range.size() != 2) throw ConfigError("fit_range must be [min, max]");
      c.fit_min = range[0];
      c.fit_max = range[1];
    } else if (key == "n_max") {
      const auto n = get_integer(value, key);
      if (n < 0 || n > 64) throw ConfigError("n_max must be in [0, 64]");
      c.n_max = static_cast<unsigned>(n);
    } else if (key == "radial_nodes") {
      c.radial_nodes = static_cast<int>(get_integer(value, key));
    } else if (key == "angular_nodes") {
      c.angular_nodes.clear();
      for (auto v : get_integer_list(value, key)) c.angular_nodes.push_back(static_cast<int>(v));
    } else if (key == "margin") {
      const auto m = get_integer(value, key);
      if (m < 0) throw ConfigError("margin must be non-negative");
      c.margin = static_cast<unsigned>(m);
    } else if (key == "out") {
      c.out = get_as<std::string>(value, key);
    } else if (key == "tolerances") {
      apply_tolerances(c.tolerances, value);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
}

void validate(const RunConfig& c) {
  if (!(c.beta > 0.0) || !std::isfinite(c.beta)) throw ConfigError("beta must be positive and finite");
  if (!std::isfinite(c.A)) throw ConfigError("A must be finite");
  switch (c.command) {
    case Command::Order:
      if (c.expr.empty()) throw ConfigError("expr must not be empty");
      break;
    case Command::FreeEnergy:
      if (c.A == 0.0) throw ConfigError("free-energy needs A != 0");
      if (c.N.empty()) throw ConfigError("N sweep must not be empty");
      break;
    case Command::Cutoff:
      if (c.b.empty()) throw ConfigError("b sweep must not be empty");
      if (c.orderings.empty()) throw ConfigError("orderings must not be empty");
      break;
    case Command::Prefactor:
      if (c.N.empty()) throw ConfigError("N sweep must not be empty");
      if (c.b.empty()) throw ConfigError("b sweep must not be empty");
      break;
    case Command::Flow:
      if (c.N.empty()) throw ConfigError("N sweep must not be empty");
      if (!(c.A > 0.0)) throw ConfigError("flow needs A > 0");
      if (c.b_floor < 0) throw ConfigError("b_floor must be non-negative");
      if (c.fit_min < 1 || c.fit_max <= c.fit_min) throw ConfigError("fit_range must satisfy 1 <= min < max");
      break;
    case Command::IdentityCheck:
      if (c.radial_nodes < 1) throw ConfigError("radial_nodes must be positive");
      if (c.angular_nodes.empty()) throw ConfigError("angular_nodes must not be empty");
      for (int k : c.angular_nodes) {
        if (k < 1) throw ConfigError("angular_nodes must be positive");
      }
      if (c.modes > 3) throw ConfigError("identity-check supports at most 3 modes");
      break;
  }
  for (auto n : c.N) {
    if (n < 1) throw ConfigError("N values must be positive");
    if (requires_odd_N(c) && n % 2 == 0) {
      throw ConfigError(std::string(to_string(c.command)) + " needs odd N, got " + std::to_string(n));
    }
  }
  for (auto b : c.b) {
    if (b < 0) throw ConfigError("b values must be non-negative");
    if (c.command == Command::Prefactor) {
      for (auto n : c.N) {
        if (b > (n - 1) / 2) {
          throw ConfigError("b = " + std::to_string(b) + " exceeds (N-1)/2 for N = " + std::to_string(n));
        }
      }
    }
  }
  if (c.command == Command::Flow) {
    for (auto n : c.N) {
      if (c.b_floor >= (n - 1) / 2) throw ConfigError("b_floor must be below (N-1)/2 for N = " + std::to_string(n));
    }
  }
}

json to_json(const RunConfig& c) {
  json j;
  j["command"] = std::string(to_string(c.command));
  j["A"] = c.A;
  j["beta"] = c.beta;
  j["modes"] = c.modes;
  switch (c.command) {
    case Command::Order:
      j["expr"] = c.expr;
      j["ordering"] = std::string(to_string(c.ordering));
      j["verify"] = c.verify;
      j["tolerances"] = {{"order_residual", c.tolerances.order_residual}};
      break;
    case Command::FreeEnergy:
      j["N"] = c.N;
      j["tolerances"] = {{"relative_error", c.tolerances.relative_error},
                         {"monotone_floor", c.tolerances.monotone_floor}};
      break;
    case Command::Cutoff: {
      j["b"] = c.b;
      json names = json::array();
      for (auto o : c.orderings) names.push_back(std::string(to_string(o)));
      j["orderings"] = names;
      j["tolerances"] = {{"slope", c.tolerances.slope},
                         {"ordering_shift", c.tolerances.ordering_shift},
                         {"monotone_floor", c.tolerances.monotone_floor}};
      break;
    }
    case Command::Prefactor:
      j["N"] = c.N;
      j["b"] = c.b;
      j["tolerances"] = {{"prefactor", c.tolerances.prefactor}, {"monotone_floor", c.tolerances.monotone_floor}};
      break;
    case Command::Flow:
      j["N"] = c.N;
      j["b_floor"] = c.b_floor;
      j["fit_range"] = {c.fit_min, c.fit_max};
      j["tolerances"] = {{"flow_exactness", c.tolerances.flow_exactness},
                         {"flow_slope", c.tolerances.flow_slope},
                         {"flow_halving", c.tolerances.flow_halving}};
      break;
    case Command::IdentityCheck:
      j["n_max"] = c.n_max;
      j["radial_nodes"] = c.radial_nodes;
      j["angular_nodes"] = c.angular_nodes;
      j["margin"] = c.margin;
      j["tolerances"] = {{"identity", c.tolerances.identity}};
      break;
  }
  return j;
}

}  // namespace cspi::cli
