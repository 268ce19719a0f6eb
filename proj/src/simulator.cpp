#include "coopnet/simulator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "coopnet/analysis.hpp"
#include "coopnet/rng.hpp"

namespace coopnet {

void CompensatedSum::add(double v) {
  const double t = sum_ + v;
  if (std::abs(sum_) >= std::abs(v)) {
    compensation_ += (sum_ - t) + v;
  } else {
    compensation_ += (v - t) + sum_;
  }
  sum_ = t;
}

std::vector<LossSpec> SimulationTrace::loss_sequence() const {
  std::vector<LossSpec> losses;
  losses.reserve(rounds.size());
  for (const auto& r : rounds) losses.push_back(r.loss);
  return losses;
}

namespace {

void check_clique_coherence(const std::vector<AgentState>& agents,
                            const InterfacePolicy& policy, std::int64_t t) {
  for (std::size_t b = 0; b < policy.cover.blocks.size(); ++b) {
    const auto& block = policy.cover.blocks[b];
    const AgentState& head = agents[block.front()];
    for (std::size_t i = 1; i < block.size(); ++i) {
      const AgentState& other = agents[block[i]];
      if (other.local_count != head.local_count || other.theta != head.theta) {
        throw std::runtime_error("clique coherence violated in block " +
                                 std::to_string(b) + " at round " + std::to_string(t));
      }
    }
  }
}

}  // namespace

SimulationTrace run_simulation_env(const Graph& graph, const Geometry& geometry,
                                   const InterfacePolicy& policy, Environment& environment,
                                   double eta, std::int64_t horizon, std::uint64_t seed,
                                   const std::string& environment_desc,
                                   const SimOptions& options) {
  if (!(eta > 0.0)) throw std::invalid_argument("run_simulation: eta must be > 0");
  if (horizon < 0) throw std::invalid_argument("run_simulation: horizon must be >= 0");
  if (const auto limit = environment.max_rounds(); limit && horizon > *limit) {
    throw std::invalid_argument("run_simulation: horizon " + std::to_string(horizon) +
                                " exceeds the schedule length " + std::to_string(*limit));
  }

  SimulationTrace trace;
  trace.meta.num_agents = graph.num_vertices();
  trace.meta.num_edges = graph.num_edges();
  trace.meta.geometry = geometry.describe();
  trace.meta.policy = policy.describe();
  trace.meta.environment = environment_desc;
  trace.meta.eta = eta;
  trace.meta.horizon = horizon;
  trace.meta.seed = seed;
  trace.meta.rng = kRngName;
  trace.meta.good_action = environment.good_action();
  trace.rounds.reserve(horizon);
  trace.cumulative.reserve(horizon);

  std::vector<AgentState> agents;
  agents.reserve(graph.num_vertices());
  for (int v = 0; v < graph.num_vertices(); ++v) {
    agents.emplace_back(geometry.dim(), eta);
  }

  CompensatedSum cumulative;
  for (std::int64_t t = 1; t <= horizon; ++t) {
    try {
      Round round = environment.next();
      std::sort(round.active.begin(), round.active.end());
      round.active.erase(std::unique(round.active.begin(), round.active.end()),
                         round.active.end());

      RoundRecord record;
      record.t = t;
      record.active = round.active;
      record.loss = round.loss;
      double loss_sum = 0.0;
      for (int v : round.active) {
        const auto point = agent_predict(agents.at(v), geometry);
        const double value = loss_value(round.loss, point);
        record.active_losses.push_back(value);
        loss_sum += value;
      }
      record.system_loss =
          round.active.empty() ? 0.0 : loss_sum / static_cast<double>(round.active.size());

      const auto recipients = feedback_recipients(graph, round.active, policy);
      record.num_recipients = static_cast<int>(recipients.size());
      for (int v : recipients) agent_update(agents[v], round.loss, geometry);

      if (options.check_invariants &&
          policy.kind == InterfacePolicy::Kind::kCliqueCover) {
        check_clique_coherence(agents, policy, t);
      }

      cumulative.add(record.system_loss);
      trace.cumulative.push_back(cumulative.value());
      trace.rounds.push_back(std::move(record));
    } catch (const std::exception& e) {
      throw std::runtime_error("round " + std::to_string(t) + ": " + e.what());
    }
  }
  return trace;
}

SimulationTrace run_simulation(const Graph& graph, const Geometry& geometry,
                               const InterfacePolicy& policy,
                               const EnvironmentSpec& environment, double eta,
                               std::int64_t horizon, std::uint64_t seed,
                               const SimOptions& options) {
  auto env = make_environment(environment, graph, geometry, seed);
  return run_simulation_env(graph, geometry, policy, *env, eta, horizon, seed,
                            environment.describe(), options);
}

namespace {

double total_loss_at(const std::vector<LossSpec>& losses, const std::vector<double>& x) {
  CompensatedSum sum;
  for (const auto& loss : losses) sum.add(loss_value(loss, x));
  return sum.value();
}

std::vector<double> total_gradient_at(const std::vector<LossSpec>& losses,
                                      const std::vector<double>& x) {
  std::vector<double> grad(x.size(), 0.0);
  for (const auto& loss : losses) {
    const auto g = loss_gradient(loss, x);
    for (std::size_t i = 0; i < grad.size(); ++i) grad[i] += g[i];
  }
  return grad;
}

std::vector<double> center_point(const Geometry& geom) {
  if (geom.kind() == GeometryKind::kSimplex) {
    return std::vector<double>(geom.dim(), 1.0 / geom.dim());
  }
  return std::vector<double>(geom.dim(), 0.0);
}

// Projected gradient descent with adaptive step size from one start.
double pgd_from(const std::vector<LossSpec>& losses, const Geometry& geom,
                std::vector<double> x) {
  double fx = total_loss_at(losses, x);
  double step = 1.0 / std::max<std::size_t>(1, losses.size());
  for (int iter = 0; iter < 100000; ++iter) {
    const auto grad = total_gradient_at(losses, x);
    std::vector<double> candidate(x.size());
    bool advanced = false;
    while (step > 1e-18) {
      for (std::size_t i = 0; i < x.size(); ++i) candidate[i] = x[i] - step * grad[i];
      candidate = project(geom, candidate);
      const double fc = total_loss_at(losses, candidate);
      if (fc < fx) {
        double move = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
          move = std::max(move, std::abs(candidate[i] - x[i]));
        }
        x = candidate;
        fx = fc;
        step *= 1.5;
        advanced = true;
        if (move <= 1e-12 * (1.0 + std::abs(fx))) return fx;
        break;
      }
      step *= 0.5;
    }
    if (!advanced) return fx;
  }
  return fx;
}

}  // namespace

double comparator_loss(const std::vector<LossSpec>& losses, const Geometry& geometry) {
  if (losses.empty()) return 0.0;
  const bool all_linear_simplex =
      std::all_of(losses.begin(), losses.end(),
                  [](const LossSpec& l) { return l.kind == LossKind::kLinearSimplex; });
  if (all_linear_simplex && geometry.kind() == GeometryKind::kSimplex) {
    std::vector<CompensatedSum> sum(geometry.dim());
    for (const auto& loss : losses) {
      for (int i = 0; i < geometry.dim(); ++i) sum[i].add(loss.coeffs[i]);
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : sum) best = std::min(best, s.value());
    return best;
  }
  const bool all_linear_ball =
      std::all_of(losses.begin(), losses.end(),
                  [](const LossSpec& l) { return l.kind == LossKind::kLinearBall; });
  if (all_linear_ball && geometry.kind() == GeometryKind::kBall) {
    std::vector<CompensatedSum> sum(geometry.dim());
    for (const auto& loss : losses) {
      for (int i = 0; i < geometry.dim(); ++i) sum[i].add(loss.coeffs[i]);
    }
    double norm_sq = 0.0;
    for (const auto& s : sum) norm_sq += s.value() * s.value();
    return -geometry.radius() * std::sqrt(norm_sq);
  }
  // General case: projected gradient descent, verified by restarts.
  double best = pgd_from(losses, geometry, center_point(geometry));
  Rng rng(0x636f6d7061726540ULL);
  for (int restart = 0; restart < 4; ++restart) {
    std::vector<double> start(geometry.dim());
    if (geometry.kind() == GeometryKind::kSimplex) {
      start = rng.dirichlet(geometry.dim());
    } else {
      for (auto& v : start) v = rng.uniform(-geometry.radius(), geometry.radius());
      start = project(geometry, start);
    }
    best = std::min(best, pgd_from(losses, geometry, std::move(start)));
  }
  return best;
}

std::string ComparatorSpec::describe() const {
  switch (kind) {
    case Kind::kRealizedInf:
      return "realized_inf";
    case Kind::kFixedAction:
      return "fixed_action(" + std::to_string(action) + ")";
    case Kind::kGoodAction:
      return "good_action";
  }
  return "unknown";
}

double trace_regret(const SimulationTrace& trace, const Geometry& geometry,
                    const ComparatorSpec& comparator) {
  const auto losses = trace.loss_sequence();
  double comp = 0.0;
  switch (comparator.kind) {
    case ComparatorSpec::Kind::kRealizedInf:
      comp = comparator_loss(losses, geometry);
      break;
    case ComparatorSpec::Kind::kFixedAction:
    case ComparatorSpec::Kind::kGoodAction: {
      int action = comparator.action;
      if (comparator.kind == ComparatorSpec::Kind::kGoodAction) {
        if (!trace.meta.good_action) {
          throw std::invalid_argument(
              "trace_regret: environment defines no good action");
        }
        action = *trace.meta.good_action;
      }
      if (geometry.kind() != GeometryKind::kSimplex || action < 0 ||
          action >= geometry.dim()) {
        throw std::invalid_argument("trace_regret: invalid fixed comparator action");
      }
      std::vector<double> point(geometry.dim(), 0.0);
      point[action] = 1.0;
      comp = total_loss_at(losses, point);
      break;
    }
  }
  return trace.total_loss() - comp;
}

RegretReport monte_carlo(const Graph& graph, const Geometry& geometry,
                         const InterfacePolicy& policy, const EnvironmentSpec& environment,
                         double eta, std::int64_t horizon, int replicates,
                         std::uint64_t master_seed, const MonteCarloOptions& options) {
  if (replicates < 1) throw std::invalid_argument("monte_carlo: replicates must be >= 1");
  if (policy.kind == InterfacePolicy::Kind::kCliqueCover &&
      !environment.single_activation()) {
    throw std::invalid_argument(
        "monte_carlo: clique-cover interface requires a single-activation environment");
  }

  RegretReport report;
  report.horizon = horizon;
  report.replicates = replicates;
  report.num_agents = graph.num_vertices();
  report.eta = eta;
  report.loss_bound =
      options.loss_bound > 0.0 ? options.loss_bound : geometry.default_loss_bound();
  report.master_seed = master_seed;
  report.config_hash = options.config_hash;

  const SimOptions sim_options{options.check_invariants};
  report.replicate_regrets.reserve(replicates);
  CompensatedSum comparator_sum;
  for (int r = 0; r < replicates; ++r) {
    try {
      const auto trace = run_simulation(graph, geometry, policy, environment, eta,
                                        horizon, derive_seed(master_seed, r), sim_options);
      const double regret = trace_regret(trace, geometry, options.comparator);
      report.replicate_regrets.push_back(regret);
      comparator_sum.add(trace.total_loss() - regret);
    } catch (const std::exception& e) {
      throw std::runtime_error("replicate " + std::to_string(r) + ": " + e.what());
    }
  }

  CompensatedSum mean_sum;
  report.regret_min = std::numeric_limits<double>::infinity();
  report.regret_max = -std::numeric_limits<double>::infinity();
  for (double regret : report.replicate_regrets) {
    mean_sum.add(regret);
    report.regret_min = std::min(report.regret_min, regret);
    report.regret_max = std::max(report.regret_max, regret);
  }
  report.regret_mean = mean_sum.value() / replicates;
  report.comparator_mean = comparator_sum.value() / replicates;
  if (replicates > 1) {
    CompensatedSum var_sum;
    for (double regret : report.replicate_regrets) {
      const double d = regret - report.regret_mean;
      var_sum.add(d * d);
    }
    report.regret_se =
        std::sqrt(var_sum.value() / (replicates - 1)) / std::sqrt(double(replicates));
  }

  // Combinatorial constants for the attached bounds.
  try {
    report.alpha = independence_number_exact(graph);
    report.alpha_mode = AlphaMode::kExact;
  } catch (const std::invalid_argument&) {
    if (!options.allow_heuristic_alpha) throw;
    report.alpha = static_cast<int>(maximal_independent_set(graph).size());
    report.alpha_mode = AlphaMode::kGreedyLowerBound;
  }
  report.cover_size = static_cast<int>(greedy_clique_cover(graph).size());
  report.q_constant_value = std::numeric_limits<double>::quiet_NaN();
  if (environment.kind == EnvironmentSpec::Kind::kMultiStochastic) {
    std::vector<double> q = environment.q;
    if (q.empty()) q.assign(graph.num_vertices(), environment.uniform_q);
    report.q_constant_value = q_constant(ActivationProfile(graph, q));
  }

  const double D = geometry.range_bound();
  const double sigma = geometry.strong_convexity();
  report.bound_alpha = theory_bound(D, sigma, report.loss_bound, eta, report.alpha,
                                    static_cast<double>(horizon));
  report.bound_cover = theory_bound(D, sigma, report.loss_bound, eta, report.cover_size,
                                    static_cast<double>(horizon));

  if (policy.kind == InterfacePolicy::Kind::kCliqueCover) {
    report.multiplier = BoundMultiplier::kCoverSize;
    report.multiplier_value = report.cover_size;
    report.bound = report.bound_cover;
    report.upper_bound_applies = true;
  } else if (environment.kind == EnvironmentSpec::Kind::kMultiStochastic) {
    report.multiplier = BoundMultiplier::kQConstant;
    report.multiplier_value = report.q_constant_value;
    report.bound = theory_bound(D, sigma, report.loss_bound, eta,
                                report.q_constant_value, static_cast<double>(horizon));
    report.upper_bound_applies = true;
  } else {
    report.multiplier = BoundMultiplier::kAlpha;
    report.multiplier_value = report.alpha;
    report.bound = report.bound_alpha;
    // Oblivious agents have no upper-bound guarantee under adversarial
    // activations; the alpha bound is attached for reference only.
    report.upper_bound_applies =
        environment.kind == EnvironmentSpec::Kind::kSingleStochastic ||
        environment.kind == EnvironmentSpec::Kind::kIndependentSetLb;
  }
  return report;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream& out, const SimulationTrace& trace) {
  out << "t,active_set,system_loss,cumulative_loss,num_recipients\n";
  for (std::size_t i = 0; i < trace.rounds.size(); ++i) {
    const auto& r = trace.rounds[i];
    out << r.t << ',';
    for (std::size_t j = 0; j < r.active.size(); ++j) {
      if (j) out << ';';
      out << r.active[j];
    }
    out << ',' << format_double(r.system_loss) << ','
        << format_double(trace.cumulative[i]) << ',' << r.num_recipients << '\n';
  }
}

void write_report_csv(std::ostream& out, const RegretReport& report) {
  out << "config_hash,T,N,alpha,cover_size,Q,eta,regret_mean,regret_se,"
         "theory_bound,seed,theory_bound_alpha,theory_bound_cover,alpha_mode\n";
  out << report.config_hash << ',' << report.horizon << ',' << report.num_agents << ','
      << report.alpha << ',' << report.cover_size << ','
      << format_double(report.q_constant_value) << ',' << format_double(report.eta) << ','
      << format_double(report.regret_mean) << ',' << format_double(report.regret_se) << ','
      << format_double(report.bound) << ',' << report.master_seed << ','
      << format_double(report.bound_alpha) << ',' << format_double(report.bound_cover)
      << ',' << (report.alpha_mode == AlphaMode::kExact ? "exact" : "greedy_lb") << '\n';
}

Schedule schedule_from_trace(const SimulationTrace& trace) {
  Schedule schedule;
  schedule.num_agents = trace.meta.num_agents;
  schedule.dim = trace.rounds.empty() ? 0 : trace.rounds.front().loss.dim();
  for (const auto& r : trace.rounds) {
    schedule.active_sets.push_back(r.active);
    schedule.losses.push_back(r.loss.coeffs);
  }
  return schedule;
}

}  // namespace coopnet
