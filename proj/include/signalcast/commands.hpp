#pragma once

#include <string>
#include <vector>

#include "signalcast/config.hpp"

namespace signalcast {

struct CommandResult {
  /// Human-readable output (the report summary, or a short status line).
  std::string message;
  /// Files written, in write order.
  std::vector<std::string> outputs;
  std::vector<std::string> warnings;
};

/// Writes <out>/events.csv from the synth.* keys.
CommandResult run_synth(const Config& config);
/// Writes one dataset CSV plus a .meta sidecar per (attack type, t_x, t_g).
CommandResult run_generate(const Config& config);
/// Applies filters.filter to paths.dataset; writes the result and a .meta
/// sidecar with removal, synthesis and weight totals.
CommandResult run_filter(const Config& config);
/// Full sweep; writes cells, comparisons, importance and plot-data CSVs.
CommandResult run_sweep(const Config& config);
/// Reads a sweep directory, writes summary.txt and plot data to paths.out,
/// and returns the summary text.
CommandResult run_report(const Config& config);

/// File-name-safe form of a label ("3m[GEM=1m]" -> "3m_GEM_1m_").
std::string file_label(const std::string& label);

}  // namespace signalcast
