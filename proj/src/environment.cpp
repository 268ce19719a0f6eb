#include "coopnet/environment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string_view>

namespace coopnet {

namespace {

// Stream indices for derive_seed: keeps activation draws, loss draws, and
// one-off structural draws on independent substreams, so the realized loss
// sequence does not depend on the graph or activation model.
constexpr std::uint64_t kActivationStream = 0;
constexpr std::uint64_t kLossStream = 1;
constexpr std::uint64_t kStructureStream = 2;

void validate_distribution(const std::vector<double>& q) {
  double total = 0.0;
  for (double x : q) {
    if (!(x >= 0.0)) throw std::invalid_argument("activation: q has negative entry");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("activation: q must sum to 1 within 1e-12");
  }
}

void validate_bernoulli_vector(const std::vector<double>& q) {
  for (double x : q) {
    if (!(x >= 0.0 && x <= 1.0)) {
      throw std::invalid_argument("activation: q_v must lie in [0,1]");
    }
  }
}

}  // namespace

int draw_single(const std::vector<double>& q, Rng& rng) {
  validate_distribution(q);
  return static_cast<int>(rng.categorical(q));
}

std::vector<int> draw_multi(const std::vector<double>& q, Rng& rng) {
  validate_bernoulli_vector(q);
  std::vector<int> active;
  for (std::size_t v = 0; v < q.size(); ++v) {
    if (rng.bernoulli(q[v])) active.push_back(static_cast<int>(v));
  }
  return active;
}

namespace {

LossSpec make_linear_loss(GeometryKind kind, std::vector<double> coeffs) {
  return kind == GeometryKind::kSimplex ? LossSpec::linear_simplex(std::move(coeffs))
                                        : LossSpec::linear_ball(std::move(coeffs));
}

class LossGenerator {
 public:
  LossGenerator(const LossGenSpec& spec, GeometryKind geometry_kind, int dim,
                std::uint64_t seed)
      : spec_(spec), geometry_kind_(geometry_kind), dim_(dim), rng_(seed) {
    if (spec_.kind == LossGenSpec::Kind::kBernoulli &&
        !(spec_.p >= 0.0 && spec_.p <= 1.0)) {
      throw std::invalid_argument("loss generator: bernoulli p must be in [0,1]");
    }
    if (spec_.kind == LossGenSpec::Kind::kFixed) {
      if (spec_.vectors.empty()) {
        throw std::invalid_argument("loss generator: fixed sequence is empty");
      }
      for (const auto& vec : spec_.vectors) {
        if (static_cast<int>(vec.size()) != dim_) {
          throw std::invalid_argument("loss generator: fixed vector dimension mismatch");
        }
      }
    }
  }

  LossSpec next() {
    if (spec_.kind == LossGenSpec::Kind::kBernoulli) {
      std::vector<double> coeffs(dim_);
      for (auto& c : coeffs) c = rng_.bernoulli(spec_.p) ? 1.0 : 0.0;
      return make_linear_loss(geometry_kind_, std::move(coeffs));
    }
    const auto& vec = spec_.vectors[cursor_ % spec_.vectors.size()];
    ++cursor_;
    return make_linear_loss(geometry_kind_, vec);
  }

 private:
  LossGenSpec spec_;
  GeometryKind geometry_kind_;
  int dim_;
  Rng rng_;
  std::size_t cursor_ = 0;
};

class ComposedEnvironment : public Environment {
 public:
  ComposedEnvironment(EnvironmentSpec::Kind kind, std::vector<double> q,
                      const LossGenSpec& loss_spec, GeometryKind geometry_kind, int dim,
                      std::uint64_t seed)
      : kind_(kind),
        q_(std::move(q)),
        activation_rng_(derive_seed(seed, kActivationStream)),
        losses_(loss_spec, geometry_kind, dim, derive_seed(seed, kLossStream)) {
    if (kind_ == EnvironmentSpec::Kind::kSingleStochastic) {
      validate_distribution(q_);
    } else {
      validate_bernoulli_vector(q_);
    }
  }

  Round next() override {
    Round round;
    if (kind_ == EnvironmentSpec::Kind::kSingleStochastic) {
      round.active = {static_cast<int>(activation_rng_.categorical(q_))};
    } else {
      round.active = draw_multi(q_, activation_rng_);
    }
    round.loss = losses_.next();
    return round;
  }

 private:
  EnvironmentSpec::Kind kind_;
  std::vector<double> q_;
  Rng activation_rng_;
  LossGenerator losses_;
};

// Uniform activation over a maximal independent set with i.i.d. Bernoulli(1/2)
// two-action losses: the hard instance family for stochastic activations.
class IndependentSetLbEnvironment : public Environment {
 public:
  IndependentSetLbEnvironment(const Graph& graph, std::uint64_t seed)
      : independent_set_(maximal_independent_set(graph)),
        activation_rng_(derive_seed(seed, kActivationStream)),
        loss_rng_(derive_seed(seed, kLossStream)) {}

  Round next() override {
    Round round;
    round.active = {independent_set_[activation_rng_.uniform_index(independent_set_.size())]};
    round.loss = LossSpec::linear_simplex({loss_rng_.bernoulli(0.5) ? 1.0 : 0.0,
                                           loss_rng_.bernoulli(0.5) ? 1.0 : 0.0});
    return round;
  }

  const std::vector<int>& independent_set() const { return independent_set_; }

 private:
  std::vector<int> independent_set_;
  Rng activation_rng_;
  Rng loss_rng_;
};

// The star-graph activation schedule that defeats graph-oblivious agents:
// the center is activated exactly when the good action has loss 1, which
// makes both actions look identical to every peripheral agent.
class StarAdversaryEnvironment : public Environment {
 public:
  StarAdversaryEnvironment(int num_agents, double epsilon, std::uint64_t seed)
      : n_(num_agents), epsilon_(epsilon), rng_(derive_seed(seed, kActivationStream)) {
    if (n_ < 4) throw std::invalid_argument("star adversary: requires N >= 4");
    if (!(epsilon_ > 0.0 && epsilon_ <= 0.5)) {
      throw std::invalid_argument("star adversary: epsilon must lie in (0, 1/2]");
    }
    Rng structure(derive_seed(seed, kStructureStream));
    good_action_ = static_cast<int>(structure.uniform_index(2));
    const double fwd = epsilon_ / (n_ - 1);
    event_weights_ = {0.5, fwd, 0.5 - epsilon_, epsilon_ - fwd};
  }

  Round next() override {
    Round round;
    double good = 0.0;
    double bad = 0.0;
    switch (rng_.categorical(event_weights_)) {
      case 0:  // good action wins; a peripheral agent pays
        bad = 1.0;
        round.active = {peripheral()};
        break;
      case 1:  // good action loses; the center is activated and broadcasts
        good = 1.0;
        round.active = {0};
        break;
      case 2:  // good action loses at a peripheral agent
        good = 1.0;
        round.active = {peripheral()};
        break;
      default:  // null round
        round.active = {peripheral()};
        break;
    }
    std::vector<double> coeffs(2);
    coeffs[good_action_] = good;
    coeffs[1 - good_action_] = bad;
    round.loss = LossSpec::linear_simplex(std::move(coeffs));
    return round;
  }

  std::optional<int> good_action() const override { return good_action_; }

 private:
  int peripheral() { return 1 + static_cast<int>(rng_.uniform_index(n_ - 1)); }

  int n_;
  double epsilon_;
  Rng rng_;
  int good_action_ = 0;
  std::vector<double> event_weights_;
};

class ScheduleEnvironment : public Environment {
 public:
  ScheduleEnvironment(Schedule schedule, GeometryKind geometry_kind)
      : schedule_(std::move(schedule)), geometry_kind_(geometry_kind) {}

  Round next() override {
    if (cursor_ >= schedule_.rounds()) {
      throw std::runtime_error("schedule exhausted after " +
                               std::to_string(schedule_.rounds()) + " rounds");
    }
    Round round;
    round.active = schedule_.active_sets[cursor_];
    round.loss = make_linear_loss(geometry_kind_, schedule_.losses[cursor_]);
    ++cursor_;
    return round;
  }

  std::optional<std::int64_t> max_rounds() const override { return schedule_.rounds(); }

 private:
  Schedule schedule_;
  GeometryKind geometry_kind_;
  std::int64_t cursor_ = 0;
};

[[noreturn]] void schedule_fail(int line, const std::string& what) {
  throw std::runtime_error("schedule parse error at line " + std::to_string(line) +
                           ": " + what);
}

}  // namespace

Schedule read_schedule(std::istream& in) {
  Schedule schedule;
  std::string line;
  int line_no = 0;
  long rounds = -1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    if (rounds < 0) {
      if (!(fields >> rounds >> schedule.num_agents >> schedule.dim) || rounds < 0 ||
          schedule.num_agents < 1 || schedule.dim < 1) {
        schedule_fail(line_no, "expected header 'T N d'");
      }
      continue;
    }
    int k;
    if (!(fields >> k) || k < 0) schedule_fail(line_no, "expected active-set size k");
    std::vector<int> active(k);
    for (int i = 0; i < k; ++i) {
      if (!(fields >> active[i])) schedule_fail(line_no, "expected " + std::to_string(k) + " vertices");
      if (active[i] < 0 || active[i] >= schedule.num_agents) {
        schedule_fail(line_no, "vertex " + std::to_string(active[i]) + " out of range");
      }
    }
    std::string sep;
    if (!(fields >> sep) || sep != "|") schedule_fail(line_no, "expected '|' separator");
    std::vector<double> loss(schedule.dim);
    for (int i = 0; i < schedule.dim; ++i) {
      if (!(fields >> loss[i])) schedule_fail(line_no, "expected " + std::to_string(schedule.dim) + " loss coordinates");
      if (!(loss[i] >= 0.0 && loss[i] <= 1.0)) {
        schedule_fail(line_no, "loss coordinate outside [0,1]");
      }
    }
    std::sort(active.begin(), active.end());
    active.erase(std::unique(active.begin(), active.end()), active.end());
    schedule.active_sets.push_back(std::move(active));
    schedule.losses.push_back(std::move(loss));
    if (static_cast<long>(schedule.active_sets.size()) == rounds) break;
  }
  if (rounds < 0) throw std::runtime_error("schedule parse error: missing header 'T N d'");
  if (static_cast<long>(schedule.active_sets.size()) != rounds) {
    throw std::runtime_error("schedule parse error: expected " + std::to_string(rounds) +
                             " rounds, found " + std::to_string(schedule.active_sets.size()));
  }
  return schedule;
}

Schedule read_schedule_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open schedule file: " + path);
  return read_schedule(in);
}

void write_schedule(std::ostream& out, const Schedule& schedule) {
  out << schedule.rounds() << ' ' << schedule.num_agents << ' ' << schedule.dim << '\n';
  for (std::int64_t t = 0; t < schedule.rounds(); ++t) {
    const auto& active = schedule.active_sets[t];
    out << active.size();
    for (int v : active) out << ' ' << v;
    out << " |";
    char buf[64];
    for (double c : schedule.losses[t]) {
      const auto res = std::to_chars(buf, buf + sizeof(buf), c);
      out << ' ' << std::string_view(buf, res.ptr - buf);
    }
    out << '\n';
  }
}

std::string LossGenSpec::describe() const {
  if (kind == Kind::kBernoulli) return "bernoulli(p=" + std::to_string(p) + ")";
  return "fixed(" + std::to_string(vectors.size()) + " vectors)";
}

std::string EnvironmentSpec::describe() const {
  switch (kind) {
    case Kind::kSingleStochastic:
      return "single_stochastic/" + loss.describe();
    case Kind::kMultiStochastic:
      return "multi_stochastic/" + loss.describe();
    case Kind::kIndependentSetLb:
      return "independent_set_lb";
    case Kind::kStarAdversary:
      return "star_adversary(eps=" + std::to_string(epsilon) + ")";
    case Kind::kSchedule:
      return "schedule(" + schedule_path + ")";
  }
  return "unknown";
}

std::unique_ptr<Environment> make_schedule_environment(Schedule schedule,
                                                       GeometryKind geometry_kind) {
  return std::make_unique<ScheduleEnvironment>(std::move(schedule), geometry_kind);
}

std::unique_ptr<Environment> make_environment(const EnvironmentSpec& spec,
                                              const Graph& graph,
                                              const Geometry& geometry,
                                              std::uint64_t seed) {
  const int n = graph.num_vertices();
  switch (spec.kind) {
    case EnvironmentSpec::Kind::kSingleStochastic: {
      std::vector<double> q = spec.q;
      if (q.empty()) q.assign(n, 1.0 / n);
      if (static_cast<int>(q.size()) != n) {
        throw std::invalid_argument("environment: q dimension does not match graph");
      }
      return std::make_unique<ComposedEnvironment>(spec.kind, std::move(q), spec.loss,
                                                   geometry.kind(), geometry.dim(), seed);
    }
    case EnvironmentSpec::Kind::kMultiStochastic: {
      std::vector<double> q = spec.q;
      if (q.empty()) q.assign(n, spec.uniform_q);
      if (static_cast<int>(q.size()) != n) {
        throw std::invalid_argument("environment: q dimension does not match graph");
      }
      return std::make_unique<ComposedEnvironment>(spec.kind, std::move(q), spec.loss,
                                                   geometry.kind(), geometry.dim(), seed);
    }
    case EnvironmentSpec::Kind::kIndependentSetLb: {
      if (geometry.kind() != GeometryKind::kSimplex || geometry.dim() != 2) {
        throw std::invalid_argument("independent_set_lb: requires simplex geometry with d=2");
      }
      return std::make_unique<IndependentSetLbEnvironment>(graph, seed);
    }
    case EnvironmentSpec::Kind::kStarAdversary: {
      if (geometry.kind() != GeometryKind::kSimplex || geometry.dim() != 2) {
        throw std::invalid_argument("star_adversary: requires simplex geometry with d=2");
      }
      return std::make_unique<StarAdversaryEnvironment>(n, spec.epsilon, seed);
    }
    case EnvironmentSpec::Kind::kSchedule: {
      Schedule schedule = read_schedule_file(spec.schedule_path);
      if (schedule.num_agents != n) {
        throw std::invalid_argument("schedule: agent count " +
                                    std::to_string(schedule.num_agents) +
                                    " does not match graph n=" + std::to_string(n));
      }
      if (schedule.dim != geometry.dim()) {
        throw std::invalid_argument("schedule: loss dimension does not match geometry");
      }
      return std::make_unique<ScheduleEnvironment>(std::move(schedule), geometry.kind());
    }
  }
  throw std::logic_error("make_environment: unknown environment kind");
}

}  // namespace coopnet
