#pragma once

#include <iosfwd>
#include <vector>

#include "cfw/frank_wolfe.hpp"
#include "cfw/run_config.hpp"

namespace cfw {

struct RunOutcome {
  std::vector<TraceRecord> trace;
  RunStatus status = RunStatus::IterationLimit;
  double primal = 0.0;
  double fw_gap = 0.0;
  std::size_t iterations = 0;
  std::uint64_t lmo_calls = 0;
  double wall_s = 0.0;
};

/// Builds the configured instance and runs the algorithm, without touching files.
RunOutcome execute(const RunConfig& config);

std::string summary_line(const RunOutcome& outcome);

/// Validates, executes, writes the trace to config.output_path and prints the
/// summary. Returns 0 when the tolerance was reached, 2 when a budget ran out,
/// 1 on any error (message on err).
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace cfw
