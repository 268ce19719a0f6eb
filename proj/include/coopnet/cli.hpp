#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coopnet/analysis.hpp"
#include "coopnet/config.hpp"
#include "coopnet/simulator.hpp"

namespace coopnet::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitUsage = 2;

struct RunFlags {
  bool emit_trace = false;
  std::optional<std::uint64_t> seed_override;
  std::optional<int> replicates_override;
  std::optional<std::string> out_dir_override;
  bool allow_heuristic_alpha = false;
  bool quiet = false;
};

struct RunResult {
  int exit_code = kExitOk;
  RegretReport report;
  std::string verdict;  // "bound ok" / "bound violated" / "no upper-bound guarantee"
  std::string report_path;
  std::string trace_path;  // empty unless emit_trace
};

RunResult cmd_run(const ExperimentConfig& config, const RunFlags& flags = {});
RunResult cmd_run_file(const std::string& config_path, const RunFlags& flags = {});

struct SweepPoint {
  std::string label;
  double x = 0.0;  // sweep variable: T, or alpha for graph sweeps
  RegretReport report;
};

struct SweepResult {
  int exit_code = kExitOk;
  std::string axis;
  std::vector<SweepPoint> points;
  double slope = 0.0;  // least-squares slope of log(mean regret) vs log(x)
  std::string csv_path;
};

// axis "T": values are horizons. axis "graph": values are graph spec tokens
// and the sweep variable is each graph's exact independence number.
SweepResult cmd_sweep(const ExperimentConfig& config, const std::string& axis,
                      const std::vector<std::string>& values, const RunFlags& flags = {});
SweepResult cmd_sweep_file(const std::string& config_path, const std::string& axis,
                           const std::vector<std::string>& values,
                           const RunFlags& flags = {});

struct GraphMetrics {
  int n = 0;
  int m = 0;
  std::optional<int> alpha_exact;
  std::optional<int> alpha_greedy_lower_bound;  // set when --heuristic was used
  int cover_size = 0;
  int dominating_size = 0;
  double inverse_neighborhood_sum = 0.0;
};

GraphMetrics cmd_graph(const std::string& graph_spec, bool allow_heuristic,
                       bool quiet = false);

struct VerifyFlags {
  std::uint64_t seed = 20240911;
  std::string out_dir = "out";
  bool inject_fault = false;
  bool quiet = false;
};

// Runs the full verification corpus; exit 0 iff every required check passes.
int cmd_verify(const VerifyFlags& flags = {});

double fit_loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace coopnet::cli
