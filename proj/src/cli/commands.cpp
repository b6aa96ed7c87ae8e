#include "cspi/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <thread>

#include "cspi/continuum_pi.hpp"
#include "cspi/discrete_pi.hpp"
#include "cspi/fit.hpp"
#include "cspi/fock_oracle.hpp"
#include "cspi/renorm_flow.hpp"

namespace cspi::cli {

namespace {

constexpr std::size_t kMaxVerifyDimension = 4096;

std::string short_num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

// A sweep value, or the marker explaining why there is none.
struct Outcome {
  std::optional<double> value;
  std::string marker;
  std::string message;
};

template <typename F>
Outcome attempt(F&& f) {
  try {
    return {f(), {}, {}};
  } catch (const RefusedError& e) {
    return {std::nullopt, "refused", e.what()};
  } catch (const SingularityError& e) {
    return {std::nullopt, "singular", e.what()};
  } catch (const NumericError& e) {
    return {std::nullopt, "numeric-error", e.what()};
  }
}

Cell value_cell(const Outcome& o) {
  if (o.value) return *o.value;
  return o.marker;
}

Cell optional_cell(std::optional<double> v) {
  if (v) return *v;
  return std::monostate{};
}

// Pairs (x, error) sorted by x; error must decrease or sit below `floor`.
Verdict decreasing_verdict(std::string name, std::vector<std::pair<double, double>> points, double floor) {
  std::sort(points.begin(), points.end());
  bool ok = true;
  std::string detail;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i > 0) {
      detail += " -> ";
      if (!(points[i].second < points[i - 1].second || points[i].second <= floor)) ok = false;
    }
    detail += short_num(points[i].second);
  }
  return {std::move(name), ok, detail};
}

void add_failed_rows_verdict(Report& report, const std::string& name, std::size_t failures) {
  if (failures > 0) report.verdicts.push_back({name, false, std::to_string(failures) + " sweep point(s) had no value"});
}

Report cmd_order(const RunConfig& c) {
  Report r;
  r.columns = {"expr", "ordering", "symbol", "residual"};
  const BosonPoly p = parse_operator(c.expr);
  const SymbolPoly s = to_ordered_form(p, c.ordering);
  Row row = {c.expr, std::string(to_string(c.ordering)), to_string(s), std::monostate{}};
  if (c.verify) {
    const unsigned margin = p.degree();
    const FockBasis basis(p.modes(), c.n_max + margin);
    if (basis.dimension() > kMaxVerifyDimension) {
      throw ConfigError("verification basis of dimension " + std::to_string(basis.dimension()) + " is too large");
    }
    const double residual =
        interior_deviation(operator_matrix(p, basis), ordered_symbol_matrix(s, basis), basis, margin);
    row[3] = residual;
    r.verdicts.push_back({"order round-trip residual", residual <= c.tolerances.order_residual,
                          short_num(residual) + " <= " + short_num(c.tolerances.order_residual)});
  }
  r.rows.push_back(std::move(row));
  return r;
}

Report cmd_free_energy(const RunConfig& c, unsigned threads) {
  Report r;
  r.columns = {"N", "method", "dFdA", "abs_error"};
  const QuadraticModel model{c.A, c.beta};
  const double exact = exact_dFdA(model);
  const std::size_t n = c.N.size();
  std::vector<Outcome> normal(n), weyl(n);
  parallel_for(2 * n, threads, [&](std::size_t k) {
    const std::size_t i = k / 2;
    const MatsubaraGrid grid(c.N[i], c.beta);
    if (k % 2 == 0) {
      normal[i] = attempt([&] { return normal_discrete_dFdA(grid, model); });
    } else {
      weyl[i] = attempt([&] { return weyl_discrete_dFdA(grid, model); });
    }
  });

  r.rows.push_back({std::monostate{}, std::string("exact"), exact, 0.0});
  const auto emit = [&](const std::vector<Outcome>& outcomes, const std::string& method) {
    std::vector<std::pair<double, double>> errors;
    std::size_t failures = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const Outcome& o = outcomes[i];
      std::optional<double> error;
      if (o.value) {
        error = std::abs(*o.value - exact);
        errors.emplace_back(static_cast<double>(c.N[i]), *error);
      } else if (o.marker == "refused") {
        r.warnings.push_back(method + " N=" + std::to_string(c.N[i]) + ": " + o.message);
      } else {
        ++failures;
        r.warnings.push_back(method + " N=" + std::to_string(c.N[i]) + ": " + o.message);
      }
      r.rows.push_back({c.N[i], method, value_cell(o), optional_cell(error)});
    }
    add_failed_rows_verdict(r, method + " evaluated", failures);
    if (errors.empty()) return;
    r.verdicts.push_back(decreasing_verdict(method + " error decreasing in N", errors, c.tolerances.monotone_floor));
    const auto last = *std::max_element(errors.begin(), errors.end());
    const double rel = last.second / std::abs(exact);
    r.verdicts.push_back({method + " relative error at largest N", rel <= c.tolerances.relative_error,
                          short_num(rel) + " <= " + short_num(c.tolerances.relative_error)});
  };
  emit(normal, "normal-discrete");
  emit(weyl, "weyl-discrete");
  return r;
}

Report cmd_cutoff(const RunConfig& c, unsigned threads) {
  Report r;
  r.columns = {"b", "ordering", "limit", "abs_diff", "dFdA"};
  const QuadraticModel model{c.A, c.beta};
  const std::size_t nb = c.b.size();
  const std::size_t no = c.orderings.size();
  std::vector<Outcome> results(nb * no);
  parallel_for(results.size(), threads, [&](std::size_t k) {
    const CutoffSpec spec{c.b[k / no], c.beta};
    results[k] = attempt([&] { return cutoff_dFdA(model, spec, c.orderings[k % no]); });
  });

  std::optional<double> normal_limit;
  try {
    normal_limit = continuum_normal_limit(model);
  } catch (const NumericError& e) {
    r.warnings.push_back(std::string("continuum limit: ") + e.what());
  }

  std::map<Ordering, std::vector<std::pair<double, double>>> diffs;
  std::map<std::pair<std::int64_t, Ordering>, double> values;
  std::size_t failures = 0;
  for (std::size_t k = 0; k < results.size(); ++k) {
    const std::int64_t b = c.b[k / no];
    const Ordering ordering = c.orderings[k % no];
    const Outcome& o = results[k];
    std::optional<double> limit, diff;
    if (normal_limit) limit = *normal_limit + ordering_shift(ordering);
    if (o.value) {
      values[{b, ordering}] = *o.value;
      if (limit) {
        diff = std::abs(*o.value - *limit);
        diffs[ordering].emplace_back(static_cast<double>(b), *diff);
      }
    } else {
      ++failures;
      r.warnings.push_back("b=" + std::to_string(b) + " " + std::string(to_string(ordering)) + ": " + o.message);
    }
    r.rows.push_back({b, std::string(to_string(ordering)), optional_cell(limit), optional_cell(diff), value_cell(o)});
  }
  add_failed_rows_verdict(r, "cutoff sums evaluated", failures);

  for (const auto ordering : c.orderings) {
    const auto it = diffs.find(ordering);
    if (it == diffs.end()) continue;
    r.verdicts.push_back(decreasing_verdict(std::string(to_string(ordering)) + " converges to its limit", it->second,
                                            c.tolerances.monotone_floor));
  }

  if (const auto it = diffs.find(Ordering::Normal); it != diffs.end()) {
    std::vector<std::pair<double, double>> sorted = it->second;
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> xs, ys;
    for (const auto& [b, d] : sorted) {
      if (b > 0 && d > 0 && (xs.empty() || b != xs.back())) {
        xs.push_back(b);
        ys.push_back(d);
      }
    }
    if (xs.size() >= 2) {
      const double slope = fit_loglog(xs, ys).slope;
      r.verdicts.push_back({"normal tail slope", std::abs(slope + 1.0) <= c.tolerances.slope,
                            short_num(slope) + " vs -1 +/- " + short_num(c.tolerances.slope)});
    }
  }

  const auto shift_verdict = [&](Ordering other, double expected) {
    double worst = -1.0;
    for (const auto b : c.b) {
      const auto n = values.find({b, Ordering::Normal});
      const auto o = values.find({b, other});
      if (n == values.end() || o == values.end()) continue;
      worst = std::max(worst, std::abs(o->second - n->second - expected));
    }
    if (worst < 0.0) return;
    r.verdicts.push_back({std::string(to_string(other)) + " minus normal = " + short_num(expected),
                          worst <= c.tolerances.ordering_shift, "max deviation " + short_num(worst)});
  };
  shift_verdict(Ordering::Weyl, -0.5);
  shift_verdict(Ordering::AntiNormal, -1.0);
  return r;
}

Report cmd_prefactor(const RunConfig& c, unsigned threads) {
  Report r;
  r.columns = {"N", "b", "beta", "modes", "closed", "empirical", "rel_diff"};
  const std::size_t nn = c.N.size();
  struct Point {
    double closed = 0.0;
    double empirical = 0.0;
  };
  std::vector<Point> points(c.b.size() * nn);
  parallel_for(points.size(), threads, [&](std::size_t k) {
    const std::int64_t b = c.b[k / nn];
    const std::int64_t N = c.N[k % nn];
    points[k] = {prefactor_log_closed(b, c.beta, c.modes), prefactor_log_empirical(N, b, c.beta, c.modes)};
  });

  for (std::size_t bi = 0; bi < c.b.size(); ++bi) {
    std::vector<std::pair<double, double>> diffs;
    for (std::size_t ni = 0; ni < nn; ++ni) {
      const Point& p = points[bi * nn + ni];
      // Relative when |closed| >= 1, absolute otherwise (closed is 0 at b = 0, beta = 1).
      const double diff = std::abs(p.empirical - p.closed) / std::max(1.0, std::abs(p.closed));
      diffs.emplace_back(static_cast<double>(c.N[ni]), diff);
      r.rows.push_back({c.N[ni], c.b[bi], c.beta, static_cast<std::int64_t>(c.modes), p.closed, p.empirical, diff});
    }
    const std::string tag = "b=" + std::to_string(c.b[bi]);
    r.verdicts.push_back(decreasing_verdict(tag + " difference decreasing in N", diffs, c.tolerances.monotone_floor));
    const auto last = *std::max_element(diffs.begin(), diffs.end());
    r.verdicts.push_back({tag + " difference at largest N", last.second <= c.tolerances.prefactor,
                          short_num(last.second) + " <= " + short_num(c.tolerances.prefactor)});
  }
  return r;
}

Report cmd_flow(const RunConfig& c, unsigned threads) {
  Report r;
  r.columns = {"N", "shell", "correction", "log_c", "residual"};
  const QuadraticModel model{c.A, c.beta};
  const double M = static_cast<double>(c.modes);
  struct Run {
    FlowResult flow;
    std::vector<double> residuals;
  };
  std::vector<std::optional<Run>> runs(c.N.size());
  parallel_for(c.N.size(), threads, [&](std::size_t i) {
    const MatsubaraGrid grid(c.N[i], c.beta);
    FlowResult flow = run_flow(model, grid, c.b_floor, c.modes);
    const std::vector<double> partial = weyl_shell_log_integrals(grid, model);
    const double full = static_cast<double>(c.N[i] - 1) * M * std::log(2.0) + M * partial.back();
    std::vector<double> residuals;
    residuals.reserve(flow.series.size());
    for (const auto& s : flow.series) {
      const double remaining = M * partial[static_cast<std::size_t>(s.shell - 1)];
      residuals.push_back(std::abs(s.log_c + remaining - full));
    }
    runs[i] = Run{std::move(flow), std::move(residuals)};
  });

  for (std::size_t i = 0; i < c.N.size(); ++i) {
    const Run& run = *runs[i];
    const std::int64_t N = c.N[i];
    const std::string tag = "N=" + std::to_string(N);
    double worst = 0.0;
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < run.flow.series.size(); ++k) {
      const auto& s = run.flow.series[k];
      worst = std::max(worst, run.residuals[k]);
      r.rows.push_back({N, s.shell, s.correction, s.log_c, run.residuals[k]});
      if (s.shell >= c.fit_min && s.shell <= c.fit_max && s.correction > 0.0) {
        xs.push_back(static_cast<double>(s.shell));
        ys.push_back(s.correction);
      }
    }
    r.verdicts.push_back({tag + " flow preserves ln Z", worst <= c.tolerances.flow_exactness,
                          "max residual " + short_num(worst)});

    if (xs.size() >= 2) {
      const double slope = fit_loglog(xs, ys).slope;
      r.verdicts.push_back({tag + " correction slope", std::abs(slope + 2.0) <= c.tolerances.flow_slope,
                            short_num(slope) + " vs -2 +/- " + short_num(c.tolerances.flow_slope)});
    } else {
      r.warnings.push_back(tag + ": fit range holds fewer than two shells; slope not checked");
    }

    const std::int64_t B = (N - 1) / 2;
    if (c.b_floor >= 1 && 2 * c.b_floor < B) {
      const double a1 = accumulated_correction(run.flow, c.b_floor);
      const double a2 = accumulated_correction(run.flow, 2 * c.b_floor);
      const double ratio = a2 / a1;
      r.verdicts.push_back({tag + " accumulated correction halves", std::abs(ratio / 0.5 - 1.0) <= c.tolerances.flow_halving,
                            "ratio " + short_num(ratio) + " (b_floor " + short_num(a1) + ", 2 b_floor " +
                                short_num(a2) + ")"});
    } else {
      r.warnings.push_back(tag + ": b_floor too small or too large for the halving check");
    }
  }
  return r;
}

Report cmd_identity_check(const RunConfig& c, unsigned threads) {
  Report r;
  r.columns = {"modes", "n_max", "radial_nodes", "angular_nodes", "margin", "deviation"};
  const FockBasis basis(c.modes, c.n_max);
  std::vector<double> deviation(c.angular_nodes.size());
  parallel_for(deviation.size(), threads, [&](std::size_t i) {
    deviation[i] = check_resolution_identity(basis, c.radial_nodes, c.angular_nodes[i], c.margin);
  });
  for (std::size_t i = 0; i < deviation.size(); ++i) {
    r.rows.push_back({static_cast<std::int64_t>(c.modes), static_cast<std::int64_t>(c.n_max),
                      static_cast<std::int64_t>(c.radial_nodes), static_cast<std::int64_t>(c.angular_nodes[i]),
                      static_cast<std::int64_t>(c.margin), deviation[i]});
    r.verdicts.push_back({"identity " + std::to_string(c.radial_nodes) + "x" + std::to_string(c.angular_nodes[i]),
                          deviation[i] <= c.tolerances.identity,
                          short_num(deviation[i]) + " <= " + short_num(c.tolerances.identity)});
  }
  return r;
}

}  // namespace

unsigned thread_limit() {
  if (const char* env = std::getenv("CSPI_THREADS")) {
    unsigned value = 0;
    const char* end = env + std::char_traits<char>::length(env);
    auto [ptr, ec] = std::from_chars(env, end, value);
    if (ec == std::errc() && ptr == end && value > 0) return value;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

Report run_command(const RunConfig& config, unsigned threads) {
  Report report;
  switch (config.command) {
    case Command::Order:
      report = cmd_order(config);
      break;
    case Command::FreeEnergy:
      report = cmd_free_energy(config, threads);
      break;
    case Command::Cutoff:
      report = cmd_cutoff(config, threads);
      break;
    case Command::Prefactor:
      report = cmd_prefactor(config, threads);
      break;
    case Command::Flow:
      report = cmd_flow(config, threads);
      break;
    case Command::IdentityCheck:
      report = cmd_identity_check(config, threads);
      break;
  }
  report.command = std::string(to_string(config.command));
  report.config = to_json(config);
  return report;
}

}  // namespace cspi::cli
