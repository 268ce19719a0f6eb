#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "coopnet/analysis.hpp"
#include "coopnet/simulator.hpp"

using namespace coopnet;

namespace {

EnvironmentSpec bernoulli_single(double p = 0.5) {
  EnvironmentSpec spec;
  spec.kind = EnvironmentSpec::Kind::kSingleStochastic;
  spec.loss.kind = LossGenSpec::Kind::kBernoulli;
  spec.loss.p = p;
  return spec;
}

EnvironmentSpec fixed_single(std::vector<std::vector<double>> vectors) {
  EnvironmentSpec spec;
  spec.kind = EnvironmentSpec::Kind::kSingleStochastic;
  spec.loss.kind = LossGenSpec::Kind::kFixed;
  spec.loss.vectors = std::move(vectors);
  return spec;
}

// Extracts the loss-relevant columns (t, system_loss, cumulative_loss) of a
// trace CSV; the active-set and recipient columns legitimately differ
// between a network run and its single-agent reduction.
std::string loss_columns(const SimulationTrace& trace) {
  std::ostringstream out;
  for (std::size_t i = 0; i < trace.rounds.size(); ++i) {
    out << trace.rounds[i].t << ',' << format_double(trace.rounds[i].system_loss) << ','
        << format_double(trace.cumulative[i]) << '\n';
  }
  return out.str();
}

}  // namespace

TEST_CASE("comparator closed forms") {
  const Geometry s2 = Geometry::simplex(2);
  {
    std::vector<LossSpec> losses(10, LossSpec::linear_simplex({0.0, 1.0}));
    CHECK(comparator_loss(losses, s2) == doctest::Approx(0.0));
  }
  {
    // Summed loss vector (7, 4): the comparator plays the second action.
    std::vector<LossSpec> losses;
    for (int i = 0; i < 7; ++i) losses.push_back(LossSpec::linear_simplex({1.0, 4.0 / 7}));
    CHECK(comparator_loss(losses, s2) == doctest::Approx(4.0).epsilon(1e-12));
  }
  {
    const Geometry ball = Geometry::ball(2, 1.0);
    std::vector<LossSpec> losses{LossSpec::linear_ball({1.0, 3.0}),
                                 LossSpec::linear_ball({2.0, 1.0})};
    CHECK(comparator_loss(losses, ball) == doctest::Approx(-5.0).epsilon(1e-12));
  }
  CHECK(comparator_loss({}, s2) == 0.0);
}

TEST_CASE("projected gradient comparator matches the quadratic closed form") {
  const Geometry ball = Geometry::ball(2, 1.0);
  // Sum of 0.5|x - c_t|^2 is minimized at the ball projection of the mean.
  const std::vector<std::vector<double>> targets{{2.0, 0.0}, {0.0, 2.0}, {1.0, 1.0}};
  std::vector<LossSpec> losses;
  for (const auto& c : targets) losses.push_back(LossSpec::quadratic_ball(c));
  std::vector<double> mean{1.0, 1.0};
  const double norm = std::sqrt(2.0);
  std::vector<double> opt{mean[0] / norm, mean[1] / norm};
  double expected = 0.0;
  for (const auto& c : targets) {
    expected += 0.5 * ((opt[0] - c[0]) * (opt[0] - c[0]) + (opt[1] - c[1]) * (opt[1] - c[1]));
  }
  CHECK(comparator_loss(losses, ball) == doctest::Approx(expected).epsilon(1e-8));

  // Same exercise over the simplex.
  const Geometry s2 = Geometry::simplex(2);
  std::vector<LossSpec> simplex_losses{LossSpec::quadratic_ball({0.9, 0.3}),
                                       LossSpec::quadratic_ball({0.7, 0.1})};
  // Minimizer: simplex projection of the mean (0.8, 0.2), already feasible.
  double direct = 0.5 * (0.01 + 0.01) + 0.5 * (0.01 + 0.01);
  CHECK(comparator_loss(simplex_losses, s2) == doctest::Approx(direct).epsilon(1e-8));
}

TEST_CASE("zero-horizon run") {
  const Graph g = make_edgeless(1);
  const Geometry s2 = Geometry::simplex(2);
  const auto trace = run_simulation(g, s2, InterfacePolicy::oblivious(),
                                    bernoulli_single(), 1.0, 0, 7);
  CHECK(trace.rounds.empty());
  CHECK(trace.total_loss() == 0.0);
  CHECK(trace_regret(trace, s2) == 0.0);
}

TEST_CASE("single agent, single round, uniform prediction") {
  const Graph g = make_edgeless(1);
  const Geometry s2 = Geometry::simplex(2);
  const auto trace = run_simulation(g, s2, InterfacePolicy::oblivious(),
                                    fixed_single({{0.0, 1.0}}), 1.0, 1, 7);
  CHECK(trace.rounds.size() == 1);
  CHECK(trace.rounds[0].system_loss == doctest::Approx(0.5));
  CHECK(trace_regret(trace, s2) == doctest::Approx(0.5));
}

TEST_CASE("all-empty schedule gives zero system loss") {
  Schedule s;
  s.num_agents = 3;
  s.dim = 2;
  for (int t = 0; t < 5; ++t) {
    s.active_sets.push_back({});
    s.losses.push_back({1.0, 0.0});
  }
  auto env = make_schedule_environment(s, GeometryKind::kSimplex);
  const Graph g = make_path(3);
  const Geometry s2 = Geometry::simplex(2);
  const auto trace = run_simulation_env(g, s2, InterfacePolicy::oblivious(), *env, 1.0,
                                        5, 0, "schedule");
  for (const auto& r : trace.rounds) {
    CHECK(r.system_loss == 0.0);
    CHECK(r.num_recipients == 0);
  }
  CHECK(trace.total_loss() == 0.0);
  // The comparator still ranges over all rounds.
  CHECK(trace_regret(trace, s2) == doctest::Approx(-0.0).epsilon(1e-12));
  CHECK(comparator_loss(trace.loss_sequence(), s2) == doctest::Approx(0.0));
}

TEST_CASE("horizon beyond a schedule is rejected up front") {
  Schedule s;
  s.num_agents = 2;
  s.dim = 2;
  s.active_sets = {{0}};
  s.losses = {{0.0, 1.0}};
  auto env = make_schedule_environment(s, GeometryKind::kSimplex);
  const Graph g = make_edgeless(2);
  const Geometry s2 = Geometry::simplex(2);
  CHECK_THROWS_WITH_AS(run_simulation_env(g, s2, InterfacePolicy::oblivious(), *env, 1.0,
                                          5, 0, "schedule"),
                       doctest::Contains("exceeds the schedule length"),
                       std::invalid_argument);
}

TEST_CASE("errors carry the round index") {
  Schedule s;
  s.num_agents = 4;
  s.dim = 2;
  s.active_sets = {{0}, {1, 2}};
  s.losses = {{0.0, 1.0}, {1.0, 0.0}};
  auto env = make_schedule_environment(s, GeometryKind::kSimplex);
  const Graph g = make_complete(4);
  const auto policy = InterfacePolicy::clique_cover(g, greedy_clique_cover(g));
  const Geometry s2 = Geometry::simplex(2);
  CHECK_THROWS_WITH_AS(
      run_simulation_env(g, s2, policy, *env, 1.0, 2, 0, "schedule"),
      doctest::Contains("round 2"), std::runtime_error);
}

TEST_CASE("trace records decompose the cumulative loss") {
  const Graph g = make_gnp(8, 0.3, 5);
  const Geometry s2 = Geometry::simplex(2);
  EnvironmentSpec spec;
  spec.kind = EnvironmentSpec::Kind::kMultiStochastic;
  spec.uniform_q = 0.4;
  spec.loss.kind = LossGenSpec::Kind::kBernoulli;
  spec.loss.p = 0.5;
  const auto trace =
      run_simulation(g, s2, InterfacePolicy::oblivious(), spec, 1.0, 500, 99);
  CompensatedSum recomputed;
  for (const auto& r : trace.rounds) {
    double mean = 0.0;
    for (double v : r.active_losses) mean += v;
    mean = r.active.empty() ? 0.0 : mean / r.active.size();
    CHECK(std::abs(mean - r.system_loss) <= 1e-15);
    recomputed.add(mean);
  }
  CHECK(std::abs(recomputed.value() - trace.total_loss()) <= 1e-10);
}

TEST_CASE("complete graph reduces to the single-agent run") {
  const Geometry s2 = Geometry::simplex(2);
  const double eta = tuned_eta(s2.range_bound(), 1.0, 1.0);
  const auto spec = bernoulli_single();
  const auto network = run_simulation(make_complete(6), s2, InterfacePolicy::oblivious(),
                                      spec, eta, 800, 12345);
  const auto solo = run_simulation(make_edgeless(1), s2, InterfacePolicy::oblivious(),
                                   spec, eta, 800, 12345);
  REQUIRE(network.rounds.size() == solo.rounds.size());
  for (std::size_t i = 0; i < network.rounds.size(); ++i) {
    // Bit-for-bit: the prediction path is identical on both sides.
    CHECK(network.rounds[i].loss.coeffs == solo.rounds[i].loss.coeffs);
    CHECK(network.rounds[i].system_loss == solo.rounds[i].system_loss);
    CHECK(network.cumulative[i] == solo.cumulative[i]);
  }
  CHECK(loss_columns(network) == loss_columns(solo));
}

TEST_CASE("edgeless agents learn in isolation") {
  // Agent 1 first acts at round 3; it must predict like a fresh instance.
  Schedule s;
  s.num_agents = 2;
  s.dim = 2;
  s.active_sets = {{0}, {0}, {1}};
  s.losses = {{0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}};
  auto env = make_schedule_environment(s, GeometryKind::kSimplex);
  const Graph g = make_edgeless(2);
  const Geometry s2 = Geometry::simplex(2);
  const auto trace = run_simulation_env(g, s2, InterfacePolicy::oblivious(), *env, 1.0,
                                        3, 0, "schedule");
  CHECK(trace.rounds[2].system_loss == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(trace.rounds[2].num_recipients == 1);
  // Agent 0's second prediction has moved off uniform.
  CHECK(trace.rounds[1].system_loss < 0.5);
}

TEST_CASE("clique coherence check runs clean under a cover policy") {
  const Graph star = make_star(10);
  const Geometry s2 = Geometry::simplex(2);
  EnvironmentSpec spec;
  spec.kind = EnvironmentSpec::Kind::kStarAdversary;
  spec.epsilon = 0.5;
  const auto policy = InterfacePolicy::clique_cover(star, greedy_clique_cover(star));
  SimOptions options;
  options.check_invariants = true;
  CHECK_NOTHROW(run_simulation(star, s2, policy, spec, 1.0, 2000, 77, options));
}

TEST_CASE("simulation and reports are deterministic") {
  const Graph g = make_star(7);
  const Geometry s2 = Geometry::simplex(2);
  const auto spec = bernoulli_single();
  const auto a = run_simulation(g, s2, InterfacePolicy::oblivious(), spec, 1.0, 300, 5);
  const auto b = run_simulation(g, s2, InterfacePolicy::oblivious(), spec, 1.0, 300, 5);
  std::ostringstream ca, cb;
  write_trace_csv(ca, a);
  write_trace_csv(cb, b);
  CHECK(ca.str() == cb.str());

  MonteCarloOptions options;
  options.config_hash = "deadbeef00000000";
  const auto ra = monte_carlo(g, s2, InterfacePolicy::oblivious(), spec, 1.0, 200, 5,
                              909, options);
  const auto rb = monte_carlo(g, s2, InterfacePolicy::oblivious(), spec, 1.0, 200, 5,
                              909, options);
  std::ostringstream oa, ob;
  write_report_csv(oa, ra);
  write_report_csv(ob, rb);
  CHECK(oa.str() == ob.str());
  CHECK(oa.str().find("deadbeef00000000") != std::string::npos);
}

TEST_CASE("monte carlo aggregates") {
  const Graph g = make_edgeless(1);
  const Geometry s2 = Geometry::simplex(2);
  const auto spec = bernoulli_single();
  // One replicate equals the single run.
  const auto report = monte_carlo(g, s2, InterfacePolicy::oblivious(), spec,
                                  1.0, 400, 1, 31337);
  const auto trace = run_simulation(g, s2, InterfacePolicy::oblivious(), spec, 1.0, 400,
                                    derive_seed(31337, 0));
  CHECK(report.regret_mean == doctest::Approx(trace_regret(trace, s2)).epsilon(1e-15));
  CHECK(report.regret_se == 0.0);
  CHECK(report.replicates == 1);

  // Degenerate environment: point-mass activation, fixed loss vector.
  EnvironmentSpec fixed = fixed_single({{0.0, 1.0}});
  fixed.q = {1.0};
  const auto degenerate = monte_carlo(g, s2, InterfacePolicy::oblivious(), fixed, 1.0,
                                      100, 8, 5);
  CHECK(degenerate.regret_se == 0.0);
  CHECK(degenerate.regret_min == degenerate.regret_max);
}

TEST_CASE("report multiplier selection") {
  const Geometry s2 = Geometry::simplex(2);
  const Graph cliques = make_disjoint_cliques(3, 3);
  {
    const auto report = monte_carlo(cliques, s2, InterfacePolicy::oblivious(),
                                    bernoulli_single(), 1.0, 50, 2, 1);
    CHECK(report.multiplier == BoundMultiplier::kAlpha);
    CHECK(report.multiplier_value == 3.0);
    CHECK(report.alpha == 3);
    CHECK(report.cover_size == 3);
    CHECK(report.upper_bound_applies);
    CHECK(std::isnan(report.q_constant_value));
    CHECK(report.bound == doctest::Approx(report.bound_alpha));
  }
  {
    EnvironmentSpec multi;
    multi.kind = EnvironmentSpec::Kind::kMultiStochastic;
    multi.uniform_q = 0.5;
    multi.loss.kind = LossGenSpec::Kind::kBernoulli;
    const auto report = monte_carlo(cliques, s2, InterfacePolicy::oblivious(), multi,
                                    1.0, 50, 2, 1);
    CHECK(report.multiplier == BoundMultiplier::kQConstant);
    CHECK(report.q_constant_value ==
          doctest::Approx(q_uniform_closed_form(cliques, 0.5)).epsilon(1e-12));
    CHECK(report.upper_bound_applies);
  }
  {
    const Graph star = make_star(10);
    const auto policy = InterfacePolicy::clique_cover(star, greedy_clique_cover(star));
    EnvironmentSpec adv;
    adv.kind = EnvironmentSpec::Kind::kStarAdversary;
    adv.epsilon = 0.5;
    const auto report = monte_carlo(star, s2, policy, adv, 1.0, 50, 2, 1);
    CHECK(report.multiplier == BoundMultiplier::kCoverSize);
    CHECK(report.multiplier_value == 9.0);
    CHECK(report.upper_bound_applies);
  }
  {
    const Graph star = make_star(10);
    EnvironmentSpec adv;
    adv.kind = EnvironmentSpec::Kind::kStarAdversary;
    adv.epsilon = 0.5;
    const auto report = monte_carlo(star, s2, InterfacePolicy::oblivious(), adv, 1.0,
                                    50, 2, 1);
    CHECK(report.multiplier == BoundMultiplier::kAlpha);
    CHECK(!report.upper_bound_applies);
  }
}

TEST_CASE("clique cover policy rejects multi-activation environments") {
  const Graph g = make_complete(4);
  const Geometry s2 = Geometry::simplex(2);
  EnvironmentSpec multi;
  multi.kind = EnvironmentSpec::Kind::kMultiStochastic;
  multi.uniform_q = 0.5;
  const auto policy = InterfacePolicy::clique_cover(g, greedy_clique_cover(g));
  CHECK_THROWS_WITH_AS(monte_carlo(g, s2, policy, multi, 1.0, 10, 1, 0),
                       doctest::Contains("single-activation"), std::invalid_argument);
}

TEST_CASE("single-agent runs never exceed the tuned-eta bound") {
  const Graph g = make_edgeless(1);
  const Geometry s2 = Geometry::simplex(2);
  const double eta = tuned_eta(s2.range_bound(), 1.0, 1.0);
  const std::int64_t T = 2000;
  const double bound = std::sqrt(2.0 * s2.range_bound() * T);

  // Random Bernoulli sequences.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto trace = run_simulation(g, s2, InterfacePolicy::oblivious(),
                                      bernoulli_single(), eta, T, seed);
    CHECK(trace_regret(trace, s2) <= bound + 1e-9);
  }
  // Structured sequences: constant, alternating, biased blocks.
  const std::vector<std::vector<std::vector<double>>> patterns{
      {{0.0, 1.0}},
      {{0.0, 1.0}, {1.0, 0.0}},
      {{1.0, 1.0}, {0.0, 0.0}},
      {{1.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}},
  };
  for (const auto& pattern : patterns) {
    const auto trace = run_simulation(g, s2, InterfacePolicy::oblivious(),
                                      fixed_single(pattern), eta, T, 0);
    CHECK(trace_regret(trace, s2) <= bound + 1e-9);
  }
}

TEST_CASE("stochastic-activation runs respect the alpha bound") {
  const Geometry s2 = Geometry::simplex(2);
  const double eta = tuned_eta(s2.range_bound(), 1.0, 1.0);
  struct Case {
    Graph graph;
    std::vector<double> q;
  };
  const std::vector<Case> cases{
      {make_star(6), {0.5, 0.1, 0.1, 0.1, 0.1, 0.1}},
      {make_cycle(5), {0.4, 0.3, 0.1, 0.1, 0.1}},
      {make_gnp(9, 0.3, 13), {}},
  };
  for (const auto& c : cases) {
    EnvironmentSpec spec = bernoulli_single();
    spec.q = c.q;
    const auto report = monte_carlo(c.graph, s2, InterfacePolicy::oblivious(), spec,
                                    eta, 3000, 20, 2025);
    CHECK(report.upper_bound_applies);
    CHECK(report.bound_satisfied());
  }
}

TEST_CASE("good-action comparator") {
  const Graph star = make_star(6);
  const Geometry s2 = Geometry::simplex(2);
  EnvironmentSpec adv;
  adv.kind = EnvironmentSpec::Kind::kStarAdversary;
  adv.epsilon = 0.5;
  const auto trace =
      run_simulation(star, s2, InterfacePolicy::oblivious(), adv, 1.0, 200, 3);
  REQUIRE(trace.meta.good_action.has_value());
  ComparatorSpec good;
  good.kind = ComparatorSpec::Kind::kGoodAction;
  const double regret_good = trace_regret(trace, s2, good);
  const double regret_inf = trace_regret(trace, s2);
  CHECK(regret_inf >= regret_good - 1e-12);  // the realized inf is never worse

  ComparatorSpec fixed;
  fixed.kind = ComparatorSpec::Kind::kFixedAction;
  fixed.action = *trace.meta.good_action;
  CHECK(trace_regret(trace, s2, fixed) == doctest::Approx(regret_good).epsilon(1e-15));

  // Environments without a designated good action reject the comparator.
  const auto plain = run_simulation(make_edgeless(1), s2, InterfacePolicy::oblivious(),
                                    bernoulli_single(), 1.0, 10, 3);
  CHECK_THROWS_AS(trace_regret(plain, s2, good), std::invalid_argument);
}

TEST_CASE("schedule_from_trace round trips") {
  const Graph g = make_star(5);
  const Geometry s2 = Geometry::simplex(2);
  const auto trace = run_simulation(g, s2, InterfacePolicy::oblivious(),
                                    bernoulli_single(), 1.0, 50, 4);
  const Schedule s = schedule_from_trace(trace);
  CHECK(s.rounds() == 50);
  CHECK(s.num_agents == 5);
  auto env = make_schedule_environment(s, GeometryKind::kSimplex);
  const auto replay = run_simulation_env(g, s2, InterfacePolicy::oblivious(), *env, 1.0,
                                         50, 4, "replay");
  CHECK(replay.total_loss() == trace.total_loss());
  for (std::size_t i = 0; i < trace.rounds.size(); ++i) {
    CHECK(replay.rounds[i].active == trace.rounds[i].active);
    CHECK(replay.rounds[i].system_loss == trace.rounds[i].system_loss);
  }
}
