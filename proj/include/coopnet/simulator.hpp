#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "coopnet/agent.hpp"
#include "coopnet/environment.hpp"
#include "coopnet/geometry.hpp"
#include "coopnet/graph.hpp"

namespace coopnet {

// Order-independent compensated accumulator (Neumaier variant).
class CompensatedSum {
 public:
  void add(double v);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

struct RoundRecord {
  std::int64_t t = 0;                 // 1-based
  std::vector<int> active;            // sorted
  std::vector<double> active_losses;  // loss of each active agent, same order
  double system_loss = 0.0;           // average over active agents, 0 if none
  int num_recipients = 0;
  LossSpec loss;                      // the round's loss payload
};

struct TraceMeta {
  int num_agents = 0;
  int num_edges = 0;
  std::string geometry;
  std::string policy;
  std::string environment;
  double eta = 0.0;
  std::int64_t horizon = 0;
  std::uint64_t seed = 0;
  std::string rng = "";
  std::optional<int> good_action;
};

struct SimulationTrace {
  TraceMeta meta;
  std::vector<RoundRecord> rounds;
  std::vector<double> cumulative;  // running system loss per round

  double total_loss() const { return cumulative.empty() ? 0.0 : cumulative.back(); }
  std::vector<LossSpec> loss_sequence() const;
};

struct SimOptions {
  // Re-checks structural invariants every round (clique coherence under the
  // clique-cover interface). Intended for tests and debug runs.
  bool check_invariants = false;
};

// Executes the protocol for `horizon` rounds: draw (S_t, loss), active
// agents predict from pre-round state, the system pays the average active
// loss, recipients update once each. Deterministic given all arguments.
SimulationTrace run_simulation(const Graph& graph, const Geometry& geometry,
                               const InterfacePolicy& policy,
                               const EnvironmentSpec& environment, double eta,
                               std::int64_t horizon, std::uint64_t seed,
                               const SimOptions& options = {});

// Same loop over an externally constructed environment (custom adversaries
// in tests).
SimulationTrace run_simulation_env(const Graph& graph, const Geometry& geometry,
                                   const InterfacePolicy& policy, Environment& environment,
                                   double eta, std::int64_t horizon, std::uint64_t seed,
                                   const std::string& environment_desc,
                                   const SimOptions& options = {});

// inf over the decision set of the summed losses. Closed forms for linear
// losses (min coordinate on the simplex, -R * norm of the summed gradient on
// the ball); projected gradient descent with random restarts otherwise.
double comparator_loss(const std::vector<LossSpec>& losses, const Geometry& geometry);

struct ComparatorSpec {
  enum class Kind {
    kRealizedInf,  // inf over the decision set of the realized loss sum
    kFixedAction,  // a fixed simplex vertex
    kGoodAction,   // the environment's designated good action
  };
  Kind kind = Kind::kRealizedInf;
  int action = 0;  // kFixedAction

  std::string describe() const;
};

double trace_regret(const SimulationTrace& trace, const Geometry& geometry,
                    const ComparatorSpec& comparator = {});

enum class AlphaMode { kExact, kGreedyLowerBound };

// Which multiplier sits under the square root of the attached bound.
enum class BoundMultiplier { kAlpha, kCoverSize, kQConstant };

struct RegretReport {
  std::int64_t horizon = 0;
  int replicates = 0;
  double regret_mean = 0.0;
  double regret_se = 0.0;
  double regret_min = 0.0;
  double regret_max = 0.0;
  std::vector<double> replicate_regrets;
  double comparator_mean = 0.0;

  int num_agents = 0;
  int alpha = 0;
  AlphaMode alpha_mode = AlphaMode::kExact;
  int cover_size = 0;
  double q_constant_value = 0.0;  // NaN when not applicable
  double eta = 0.0;
  double loss_bound = 0.0;

  BoundMultiplier multiplier = BoundMultiplier::kAlpha;
  double multiplier_value = 0.0;
  double bound = 0.0;        // theory bound with `multiplier`
  double bound_alpha = 0.0;  // alpha-based bound, always reported
  double bound_cover = 0.0;  // cover-based bound, always reported
  bool upper_bound_applies = false;

  std::uint64_t master_seed = 0;
  std::string config_hash;

  bool bound_satisfied() const { return regret_mean <= bound + 3.0 * regret_se; }
};

struct MonteCarloOptions {
  ComparatorSpec comparator{};
  double loss_bound = 0.0;  // 0 selects the geometry default
  bool allow_heuristic_alpha = false;
  bool check_invariants = false;
  std::string config_hash;
};

// Replicate r runs with seed derive_seed(master_seed, r); aggregation is in
// replicate order with compensated summation, so the report is independent
// of any execution interleaving.
RegretReport monte_carlo(const Graph& graph, const Geometry& geometry,
                         const InterfacePolicy& policy, const EnvironmentSpec& environment,
                         double eta, std::int64_t horizon, int replicates,
                         std::uint64_t master_seed, const MonteCarloOptions& options = {});

// Trace CSV: t,active_set,system_loss,cumulative_loss,num_recipients with the
// active set semicolon-joined. Report CSV: one row per run, spec columns
// first (config_hash..seed), then the always-reported alpha- and cover-based
// bounds and the alpha mode.
void write_trace_csv(std::ostream& out, const SimulationTrace& trace);
void write_report_csv(std::ostream& out, const RegretReport& report);

std::string format_double(double v);

// The (S_t, loss) sequence of a trace as a replayable schedule.
Schedule schedule_from_trace(const SimulationTrace& trace);

}  // namespace coopnet
