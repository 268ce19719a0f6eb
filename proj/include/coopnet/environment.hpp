#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "coopnet/geometry.hpp"
#include "coopnet/graph.hpp"
#include "coopnet/rng.hpp"

namespace coopnet {

// One protocol round: the active set S_t and the round's loss function.
struct Round {
  std::vector<int> active;  // sorted ascending; may be empty
  LossSpec loss;
};

// Single stochastic activation: vertex v with probability q_v (q sums to 1).
int draw_single(const std::vector<double>& q, Rng& rng);

// Independent Bernoulli activation per vertex; the result may be empty.
std::vector<int> draw_multi(const std::vector<double>& q, Rng& rng);

// Joint generator of (S_t, loss_t). An instance owns its generator state and
// serves exactly one simulation run; replicates construct fresh instances.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual Round next() = 0;

  // Number of rounds this environment can serve, when bounded (schedules).
  virtual std::optional<std::int64_t> max_rounds() const { return std::nullopt; }

  // The designated good action, for environments that draw one.
  virtual std::optional<int> good_action() const { return std::nullopt; }
};

// Explicit replayable schedule of (S_t, loss vector) pairs.
struct Schedule {
  int num_agents = 0;
  int dim = 0;
  std::vector<std::vector<int>> active_sets;
  std::vector<std::vector<double>> losses;

  std::int64_t rounds() const { return static_cast<std::int64_t>(active_sets.size()); }
};

// Text format: header "T N d", then one line per round,
// "k v1 ... vk | c1 ... cd" with loss coordinates in [0,1].
Schedule read_schedule(std::istream& in);
Schedule read_schedule_file(const std::string& path);
void write_schedule(std::ostream& out, const Schedule& schedule);

struct LossGenSpec {
  enum class Kind { kBernoulli, kFixed };
  Kind kind = Kind::kBernoulli;
  double p = 0.5;                            // kBernoulli: P(coordinate = 1)
  std::vector<std::vector<double>> vectors;  // kFixed: cycled in order

  std::string describe() const;
};

// Declarative environment description; (spec, graph, geometry, seed) fully
// determine the realized round sequence.
struct EnvironmentSpec {
  enum class Kind {
    kSingleStochastic,
    kMultiStochastic,
    kIndependentSetLb,
    kStarAdversary,
    kSchedule,
  };

  Kind kind = Kind::kSingleStochastic;
  // Activation probabilities for the stochastic kinds. Empty means uniform:
  // the uniform distribution for single activation, or q_v = uniform_q for
  // every vertex for multi activation.
  std::vector<double> q;
  double uniform_q = 0.5;
  LossGenSpec loss;
  double epsilon = 0.5;        // star adversary
  std::string schedule_path;   // schedule kind

  bool single_activation() const { return kind != Kind::kMultiStochastic; }
  std::string describe() const;
};

std::unique_ptr<Environment> make_environment(const EnvironmentSpec& spec,
                                              const Graph& graph,
                                              const Geometry& geometry,
                                              std::uint64_t seed);

// Replays an in-memory schedule (losses become linear losses of the given
// geometry kind).
std::unique_ptr<Environment> make_schedule_environment(Schedule schedule,
                                                       GeometryKind geometry_kind);

}  // namespace coopnet
