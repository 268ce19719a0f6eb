#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "coopnet/cli.hpp"

using namespace coopnet;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const auto dir = fs::temp_directory_path() / "coopnet_cli_test";
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Runs the installed binary, returns its exit code; stdout+stderr land in
// `log`.
int run_binary(const std::string& args, const fs::path& log) {
  const std::string command =
      std::string(CLI_BINARY) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(command.c_str());
  return WEXITSTATUS(status);
}

std::string tiny_config(const fs::path& out_dir) {
  std::ostringstream text;
  text << R"({
  "graph": {"kind": "star", "n": 6},
  "geometry": {"kind": "simplex", "dim": 2},
  "environment": {"kind": "single_stochastic", "loss": {"kind": "bernoulli", "p": 0.5}},
  "policy": {"kind": "oblivious"},
  "eta": "tuned",
  "horizon": 400,
  "replicates": 4,
  "seed": 2024,
  "out_dir": ")" << out_dir.string() << R"("
})";
  return text.str();
}

}  // namespace

TEST_CASE("cmd_graph metrics") {
  const auto star = cli::cmd_graph("star:10", false, /*quiet=*/true);
  CHECK(star.n == 10);
  CHECK(star.m == 9);
  CHECK(star.alpha_exact == 9);
  CHECK(star.cover_size == 9);
  CHECK(star.dominating_size == 1);

  const auto complete = cli::cmd_graph("complete:6", false, true);
  CHECK(complete.alpha_exact == 1);
  CHECK(complete.cover_size == 1);

  const auto cycle = cli::cmd_graph("cycle:5", false, true);
  CHECK(cycle.alpha_exact == 2);
  CHECK(cycle.cover_size == 3);

  // Above the exact limit: refuse without the heuristic flag, label with it.
  CHECK_THROWS_WITH_AS(cli::cmd_graph("edgeless:50", false, true),
                       doctest::Contains("--heuristic"), std::invalid_argument);
  const auto big = cli::cmd_graph("edgeless:50", true, true);
  CHECK(!big.alpha_exact.has_value());
  CHECK(big.alpha_greedy_lower_bound == 50);
}

TEST_CASE("cmd_run produces a deterministic report") {
  const auto dir = scratch_dir();
  const auto config_path = dir / "exp.json";
  write_text(config_path, tiny_config(dir / "run_a"));

  cli::RunFlags flags;
  flags.quiet = true;
  flags.emit_trace = true;
  const auto a = cli::cmd_run_file(config_path.string(), flags);
  CHECK(a.exit_code == cli::kExitOk);
  CHECK(a.verdict == "bound ok");
  CHECK(fs::exists(a.report_path));
  CHECK(fs::exists(a.trace_path));

  flags.out_dir_override = (dir / "run_b").string();
  const auto b = cli::cmd_run_file(config_path.string(), flags);
  // The override changes the output directory, not the experiment: bytes of
  // the report and trace must match.
  CHECK(read_text(a.report_path) == read_text(b.report_path));
  CHECK(read_text(a.trace_path) == read_text(b.trace_path));
  // Report carries the config hash and seed needed for reproduction.
  const auto csv = read_text(a.report_path);
  CHECK(csv.find(ExperimentConfig::load_file(config_path.string()).hash()) !=
        std::string::npos);
  CHECK(csv.find("2024") != std::string::npos);
}

TEST_CASE("cmd_run labels heuristic alpha above the exact limit") {
  const auto dir = scratch_dir();
  const auto config_path = dir / "big.json";
  std::string text = tiny_config(dir / "big_out");
  text.replace(text.find(R"({"kind": "star", "n": 6})"), 24,
               R"({"kind": "edgeless", "n": 50})");
  write_text(config_path, text);

  cli::RunFlags flags;
  flags.quiet = true;
  CHECK_THROWS_AS(cli::cmd_run_file(config_path.string(), flags), std::invalid_argument);

  flags.allow_heuristic_alpha = true;
  const auto result = cli::cmd_run_file(config_path.string(), flags);
  CHECK(result.exit_code == cli::kExitOk);
  CHECK(result.report.alpha == 50);
  CHECK(result.report.alpha_mode == AlphaMode::kGreedyLowerBound);
  CHECK(read_text(result.report_path).find("greedy_lb") != std::string::npos);
}

TEST_CASE("cmd_sweep fits a slope over T") {
  const auto dir = scratch_dir();
  const auto config_path = dir / "sweep.json";
  write_text(config_path, tiny_config(dir / "sweep_out"));
  cli::RunFlags flags;
  flags.quiet = true;
  const auto sweep = cli::cmd_sweep_file(config_path.string(), "T",
                                         {"500", "2000", "8000"}, flags);
  CHECK(sweep.points.size() == 3);
  CHECK(fs::exists(sweep.csv_path));
  // A sqrt(T) regret curve: slope around 0.5, loosely checked here.
  CHECK(sweep.slope > 0.2);
  CHECK(sweep.slope < 0.8);

  CHECK_THROWS_WITH_AS(
      cli::cmd_sweep_file(config_path.string(), "T", {"500", "2000"}, flags),
      doctest::Contains("3 sweep points"), std::invalid_argument);
  CHECK_THROWS_AS(
      cli::cmd_sweep_file(config_path.string(), "N", {"1", "2", "3"}, flags),
      std::invalid_argument);
}

TEST_CASE("cmd_verify default corpus is clean") {
  const auto dir = scratch_dir();
  cli::VerifyFlags flags;
  flags.out_dir = (dir / "verify").string();
  flags.quiet = true;
  CHECK(cli::cmd_verify(flags) == cli::kExitOk);
  CHECK(fs::exists(fs::path(flags.out_dir) / "verification.csv"));
}

TEST_CASE("binary exit codes") {
  const auto dir = scratch_dir();
  const auto log = dir / "cli.log";

  CHECK(run_binary("graph star:10", log) == 0);
  CHECK(run_binary("graph star", log) == 2);
  CHECK(run_binary("frobnicate", log) == 2);
  CHECK(run_binary("run --config /nonexistent/exp.json", log) == 2);
  CHECK(read_text(log).find("/nonexistent/exp.json") != std::string::npos);

  // Config referencing a missing graph file: exit 2 and the message names
  // the path.
  const auto config_path = dir / "missing_graph.json";
  std::string text = tiny_config(dir / "missing_out");
  text.replace(text.find(R"({"kind": "star", "n": 6})"), 24,
               R"({"kind": "file", "path": "/nonexistent/g.txt"})");
  write_text(config_path, text);
  CHECK(run_binary("run --config " + config_path.string(), log) == 2);
  CHECK(read_text(log).find("/nonexistent/g.txt") != std::string::npos);

  // Unknown config keys are usage errors.
  const auto bad_config = dir / "bad_key.json";
  std::string bad = tiny_config(dir / "bad_out");
  bad.insert(bad.rfind('}'), R"(, "unexpected": true)");
  write_text(bad_config, bad);
  CHECK(run_binary("run --config " + bad_config.string(), log) == 2);
  CHECK(read_text(log).find("unexpected") != std::string::npos);

  // Normal run exits 0; fault-injected verification exits 1 and prints a
  // counterexample.
  const auto good_config = dir / "good.json";
  write_text(good_config, tiny_config(dir / "good_out"));
  CHECK(run_binary("run --config " + good_config.string(), log) == 0);
  CHECK(run_binary("verify --out-dir " + (dir / "v1").string(), log) == 0);
  CHECK(run_binary("verify --inject-fault --out-dir " + (dir / "v2").string(), log) == 1);
  CHECK(read_text(log).find("counterexample") != std::string::npos);
}
