#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coopnet/geometry.hpp"
#include "coopnet/graph.hpp"

namespace coopnet {

// One lazy mirror-descent instance. theta accumulates the negated gradients
// the instance has observed; local_count is its private clock (the number of
// feedbacks received so far). All instances in a network share eta.
struct AgentState {
  std::vector<double> theta;
  std::int64_t local_count = 0;
  double eta = 1.0;

  AgentState(int dim, double eta_value)
      : theta(dim, 0.0), eta(eta_value) {}
};

// The agent's prediction for the current round, computed from the state it
// had before any of this round's updates. The regularizer clock is
// local_count + 1: the index the next received feedback will have.
std::vector<double> agent_predict(const AgentState& state, const Geometry& geom);

// Applies one received feedback. The gradient is evaluated at this agent's
// own current prediction point, whether or not the agent was active. The
// update path has no access to the active set, which is what makes the
// interface oblivious.
void agent_update(AgentState& state, const LossSpec& loss, const Geometry& geom);

// How received feedback is selected. Oblivious agents update on every
// feedback; clique-cover agents ignore feedback from outside their block.
struct InterfacePolicy {
  enum class Kind { kOblivious, kCliqueCover };

  Kind kind = Kind::kOblivious;
  CliqueCover cover;            // kCliqueCover only
  std::vector<int> block_of;    // vertex -> block index, derived from cover

  static InterfacePolicy oblivious();
  static InterfacePolicy clique_cover(const Graph& g, CliqueCover cover);

  std::string describe() const;
};

// The agents that update at a round with active set `active`: the union of
// closed neighborhoods under the oblivious interface, or the block of the
// single active vertex under a clique cover. Sorted, each agent once.
// The clique-cover interface rejects |active| > 1.
std::vector<int> feedback_recipients(const Graph& g, const std::vector<int>& active,
                                     const InterfacePolicy& policy);

}  // namespace coopnet
