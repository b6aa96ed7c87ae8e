#pragma once

#include <cstddef>
#include <functional>

#include "cspi/cli/config.hpp"
#include "cspi/cli/report.hpp"

namespace cspi::cli {

// CSPI_THREADS when set to a positive integer, else the hardware
// concurrency (at least 1).
unsigned thread_limit();

// Calls fn(i) for i in [0, count) on up to `threads` workers. The first
// exception thrown by any call is rethrown after all workers finish.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

// Runs a validated config. Rows come out in sweep order whatever `threads`
// is.
Report run_command(const RunConfig& config, unsigned threads);

}  // namespace cspi::cli
