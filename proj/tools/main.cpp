#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "coopnet/cli.hpp"

namespace {

std::vector<std::string> split_csv(const std::string& list) {
  std::vector<std::string> out;
  std::string current;
  for (char c : list) {
    if (c == ',') {
      if (!current.empty()) out.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) out.push_back(current);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coopnet: cooperative online learning on communication graphs"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int replicates = 0;
  bool emit_trace = false;
  bool heuristic = false;

  auto add_run_flags = [&](CLI::App* cmd, bool with_config) {
    if (with_config) {
      cmd->add_option("--config", config_path, "experiment config file (JSON)")
          ->required();
    }
    cmd->add_flag("--trace", emit_trace, "emit the per-round trace CSV");
    cmd->add_option("--seed", seed, "override the master seed");
    cmd->add_option("--replicates", replicates, "override the replicate count");
    cmd->add_option("--out-dir", out_dir, "override the output directory");
    cmd->add_flag("--heuristic", heuristic,
                  "allow a labeled greedy lower bound when alpha exceeds the exact limit");
  };

  auto* run = app.add_subcommand("run", "run one experiment and write its report");
  add_run_flags(run, true);

  auto* sweep = app.add_subcommand("sweep", "sweep T or a graph family and fit a slope");
  std::string axis;
  std::string values;
  add_run_flags(sweep, true);
  sweep->add_option("--axis", axis, "'T' or 'graph'")->required();
  sweep->add_option("--values", values, "comma-separated horizons or graph specs")
      ->required();

  auto* graph_cmd = app.add_subcommand("graph", "print combinatorial metrics of a graph");
  std::string graph_spec;
  graph_cmd->add_option("spec", graph_spec, "graph spec, e.g. star:10 or file:PATH")
      ->required();
  graph_cmd->add_flag("--heuristic", heuristic,
                      "allow a labeled greedy lower bound for alpha");

  auto* verify = app.add_subcommand("verify", "run the combinatorial verification corpus");
  std::uint64_t verify_seed = 20240911;
  bool inject_fault = false;
  verify->add_option("--seed", verify_seed, "corpus seed");
  verify->add_option("--out-dir", out_dir, "output directory");
  verify->add_flag("--inject-fault", inject_fault, "self-test: flip one inequality")
      ->group("");  // hidden

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return coopnet::cli::kExitUsage;
  }

  coopnet::cli::RunFlags flags;
  flags.emit_trace = emit_trace;
  flags.allow_heuristic_alpha = heuristic;
  if (run->count("--seed") || sweep->count("--seed")) flags.seed_override = seed;
  if (run->count("--replicates") || sweep->count("--replicates")) {
    flags.replicates_override = replicates;
  }
  if (run->count("--out-dir") || sweep->count("--out-dir")) {
    flags.out_dir_override = out_dir;
  }

  try {
    if (run->parsed()) return coopnet::cli::cmd_run_file(config_path, flags).exit_code;
    if (sweep->parsed()) {
      return coopnet::cli::cmd_sweep_file(config_path, axis, split_csv(values), flags)
          .exit_code;
    }
    if (graph_cmd->parsed()) {
      coopnet::cli::cmd_graph(graph_spec, heuristic);
      return coopnet::cli::kExitOk;
    }
    if (verify->parsed()) {
      coopnet::cli::VerifyFlags verify_flags;
      verify_flags.seed = verify_seed;
      if (verify->count("--out-dir")) verify_flags.out_dir = out_dir;
      verify_flags.inject_fault = inject_fault;
      return coopnet::cli::cmd_verify(verify_flags);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return coopnet::cli::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    // Validation problems surface as invalid_argument above; anything else
    // that escapes a run is a failed check or a broken input file.
    const std::string what = e.what();
    if (what.find("cannot open") != std::string::npos ||
        what.find("parse error") != std::string::npos) {
      return coopnet::cli::kExitUsage;
    }
    return coopnet::cli::kExitCheckFailure;
  }
  return coopnet::cli::kExitUsage;
}
