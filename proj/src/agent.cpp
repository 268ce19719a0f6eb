#include "coopnet/agent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace coopnet {

std::vector<double> agent_predict(const AgentState& state, const Geometry& geom) {
  return mirror_map(geom, state.theta, state.eta, state.local_count + 1);
}

void agent_update(AgentState& state, const LossSpec& loss, const Geometry& geom) {
  const std::vector<double> point = agent_predict(state, geom);
  const std::vector<double> grad = loss_gradient(loss, point);
  for (std::size_t i = 0; i < grad.size(); ++i) {
    if (!std::isfinite(grad[i])) {
      throw std::runtime_error("agent_update: non-finite gradient component " +
                               std::to_string(i));
    }
    state.theta[i] -= grad[i];
  }
  ++state.local_count;
}

InterfacePolicy InterfacePolicy::oblivious() { return InterfacePolicy{}; }

InterfacePolicy InterfacePolicy::clique_cover(const Graph& g, CliqueCover cover) {
  InterfacePolicy policy;
  policy.kind = Kind::kCliqueCover;
  policy.block_of = block_assignment(g, cover);
  policy.cover = std::move(cover);
  return policy;
}

std::string InterfacePolicy::describe() const {
  if (kind == Kind::kOblivious) return "oblivious";
  return "clique_cover(" + std::to_string(cover.size()) + " blocks)";
}

std::vector<int> feedback_recipients(const Graph& g, const std::vector<int>& active,
                                     const InterfacePolicy& policy) {
  for (int v : active) {
    if (v < 0 || v >= g.num_vertices()) {
      throw std::invalid_argument("feedback_recipients: active vertex out of range");
    }
  }
  if (policy.kind == InterfacePolicy::Kind::kCliqueCover) {
    if (active.size() > 1) {
      throw std::invalid_argument(
          "feedback_recipients: clique-cover interface requires |S_t| <= 1");
    }
    if (active.empty()) return {};
    return policy.cover.blocks[policy.block_of[active[0]]];
  }
  std::vector<int> recipients;
  for (int v : active) {
    recipients.push_back(v);
    const auto& nb = g.neighbors(v);
    recipients.insert(recipients.end(), nb.begin(), nb.end());
  }
  std::sort(recipients.begin(), recipients.end());
  recipients.erase(std::unique(recipients.begin(), recipients.end()), recipients.end());
  return recipients;
}

}  // namespace coopnet
