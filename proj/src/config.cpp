#include "coopnet/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace coopnet {

using nlohmann::json;

namespace {

[[noreturn]] void config_fail(const std::string& what) {
  throw std::invalid_argument("config: " + what);
}

void expect_keys(const json& obj, const std::string& context,
                 std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    bool known = false;
    for (const char* a : allowed) {
      if (key == a) {
        known = true;
        break;
      }
    }
    if (!known) config_fail("unknown key '" + key + "' in " + context);
  }
}

const json& require(const json& obj, const std::string& context, const char* key) {
  if (!obj.contains(key)) config_fail("missing key '" + std::string(key) + "' in " + context);
  return obj.at(key);
}

std::vector<double> as_double_vector(const json& arr, const std::string& context) {
  if (!arr.is_array()) config_fail(context + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : arr) {
    if (!v.is_number()) config_fail(context + " must contain only numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<std::string> split(const std::string& token, char sep) {
  std::vector<std::string> parts;
  std::stringstream stream(token);
  std::string part;
  while (std::getline(stream, part, sep)) parts.push_back(part);
  return parts;
}

GraphSpec graph_from_json(const json& obj) {
  expect_keys(obj, "graph", {"kind", "n", "p", "seed", "count", "size", "path"});
  GraphSpec spec;
  spec.kind = require(obj, "graph", "kind").get<std::string>();
  if (spec.kind == "file") {
    spec.path = require(obj, "graph", "path").get<std::string>();
    expect_keys(obj, "graph(file)", {"kind", "path"});
  } else if (spec.kind == "gnp") {
    spec.n = require(obj, "graph", "n").get<int>();
    spec.p = require(obj, "graph", "p").get<double>();
    spec.seed = require(obj, "graph", "seed").get<std::uint64_t>();
    expect_keys(obj, "graph(gnp)", {"kind", "n", "p", "seed"});
  } else if (spec.kind == "cliques") {
    spec.count = require(obj, "graph", "count").get<int>();
    spec.size = require(obj, "graph", "size").get<int>();
    expect_keys(obj, "graph(cliques)", {"kind", "count", "size"});
  } else {
    spec.n = require(obj, "graph", "n").get<int>();
    expect_keys(obj, "graph(" + spec.kind + ")", {"kind", "n"});
  }
  return spec;
}

json graph_to_json(const GraphSpec& spec) {
  json obj;
  obj["kind"] = spec.kind;
  if (spec.kind == "file") {
    obj["path"] = spec.path;
  } else if (spec.kind == "gnp") {
    obj["n"] = spec.n;
    obj["p"] = spec.p;
    obj["seed"] = spec.seed;
  } else if (spec.kind == "cliques") {
    obj["count"] = spec.count;
    obj["size"] = spec.size;
  } else {
    obj["n"] = spec.n;
  }
  return obj;
}

LossGenSpec loss_from_json(const json& obj) {
  expect_keys(obj, "environment.loss", {"kind", "p", "vectors"});
  LossGenSpec spec;
  const auto kind = require(obj, "environment.loss", "kind").get<std::string>();
  if (kind == "bernoulli") {
    spec.kind = LossGenSpec::Kind::kBernoulli;
    spec.p = require(obj, "environment.loss", "p").get<double>();
    expect_keys(obj, "environment.loss(bernoulli)", {"kind", "p"});
  } else if (kind == "fixed") {
    spec.kind = LossGenSpec::Kind::kFixed;
    const auto& vectors = require(obj, "environment.loss", "vectors");
    if (!vectors.is_array() || vectors.empty()) {
      config_fail("environment.loss.vectors must be a nonempty array");
    }
    for (const auto& vec : vectors) {
      spec.vectors.push_back(as_double_vector(vec, "environment.loss.vectors entry"));
    }
    expect_keys(obj, "environment.loss(fixed)", {"kind", "vectors"});
  } else {
    config_fail("environment.loss.kind must be 'bernoulli' or 'fixed'");
  }
  return spec;
}

json loss_to_json(const LossGenSpec& spec) {
  json obj;
  if (spec.kind == LossGenSpec::Kind::kBernoulli) {
    obj["kind"] = "bernoulli";
    obj["p"] = spec.p;
  } else {
    obj["kind"] = "fixed";
    obj["vectors"] = spec.vectors;
  }
  return obj;
}

EnvironmentSpec environment_from_json(const json& obj) {
  expect_keys(obj, "environment",
              {"kind", "q", "uniform_q", "loss", "epsilon", "path"});
  EnvironmentSpec spec;
  const auto kind = require(obj, "environment", "kind").get<std::string>();
  if (kind == "single_stochastic") {
    spec.kind = EnvironmentSpec::Kind::kSingleStochastic;
    if (obj.contains("q")) spec.q = as_double_vector(obj.at("q"), "environment.q");
    spec.loss = loss_from_json(require(obj, "environment", "loss"));
    expect_keys(obj, "environment(single_stochastic)", {"kind", "q", "loss"});
  } else if (kind == "multi_stochastic") {
    spec.kind = EnvironmentSpec::Kind::kMultiStochastic;
    const bool has_q = obj.contains("q");
    const bool has_uniform = obj.contains("uniform_q");
    if (has_q == has_uniform) {
      config_fail("environment(multi_stochastic) requires exactly one of 'q' and 'uniform_q'");
    }
    if (has_q) spec.q = as_double_vector(obj.at("q"), "environment.q");
    if (has_uniform) spec.uniform_q = obj.at("uniform_q").get<double>();
    spec.loss = loss_from_json(require(obj, "environment", "loss"));
    expect_keys(obj, "environment(multi_stochastic)", {"kind", "q", "uniform_q", "loss"});
  } else if (kind == "independent_set_lb") {
    spec.kind = EnvironmentSpec::Kind::kIndependentSetLb;
    expect_keys(obj, "environment(independent_set_lb)", {"kind"});
  } else if (kind == "star_adversary") {
    spec.kind = EnvironmentSpec::Kind::kStarAdversary;
    spec.epsilon = require(obj, "environment", "epsilon").get<double>();
    expect_keys(obj, "environment(star_adversary)", {"kind", "epsilon"});
  } else if (kind == "schedule") {
    spec.kind = EnvironmentSpec::Kind::kSchedule;
    spec.schedule_path = require(obj, "environment", "path").get<std::string>();
    expect_keys(obj, "environment(schedule)", {"kind", "path"});
  } else {
    config_fail("environment.kind '" + kind + "' is not recognized");
  }
  return spec;
}

json environment_to_json(const EnvironmentSpec& spec) {
  json obj;
  switch (spec.kind) {
    case EnvironmentSpec::Kind::kSingleStochastic:
      obj["kind"] = "single_stochastic";
      if (!spec.q.empty()) obj["q"] = spec.q;
      obj["loss"] = loss_to_json(spec.loss);
      break;
    case EnvironmentSpec::Kind::kMultiStochastic:
      obj["kind"] = "multi_stochastic";
      if (!spec.q.empty()) {
        obj["q"] = spec.q;
      } else {
        obj["uniform_q"] = spec.uniform_q;
      }
      obj["loss"] = loss_to_json(spec.loss);
      break;
    case EnvironmentSpec::Kind::kIndependentSetLb:
      obj["kind"] = "independent_set_lb";
      break;
    case EnvironmentSpec::Kind::kStarAdversary:
      obj["kind"] = "star_adversary";
      obj["epsilon"] = spec.epsilon;
      break;
    case EnvironmentSpec::Kind::kSchedule:
      obj["kind"] = "schedule";
      obj["path"] = spec.schedule_path;
      break;
  }
  return obj;
}

ComparatorSpec comparator_from_json(const json& value) {
  ComparatorSpec spec;
  if (value.is_string()) {
    const auto name = value.get<std::string>();
    if (name == "realized_inf") {
      spec.kind = ComparatorSpec::Kind::kRealizedInf;
    } else if (name == "good_action") {
      spec.kind = ComparatorSpec::Kind::kGoodAction;
    } else {
      config_fail("comparator '" + name + "' is not recognized");
    }
    return spec;
  }
  if (value.is_object()) {
    expect_keys(value, "comparator", {"fixed_action"});
    spec.kind = ComparatorSpec::Kind::kFixedAction;
    spec.action = require(value, "comparator", "fixed_action").get<int>();
    return spec;
  }
  config_fail("comparator must be a string or {\"fixed_action\": i}");
}

json comparator_to_json(const ComparatorSpec& spec) {
  switch (spec.kind) {
    case ComparatorSpec::Kind::kRealizedInf:
      return json("realized_inf");
    case ComparatorSpec::Kind::kGoodAction:
      return json("good_action");
    case ComparatorSpec::Kind::kFixedAction:
      return json{{"fixed_action", spec.action}};
  }
  return json("realized_inf");
}

}  // namespace

GraphSpec GraphSpec::parse(const std::string& token) {
  const auto parts = split(token, ':');
  if (parts.empty()) throw std::invalid_argument("graph spec: empty");
  GraphSpec spec;
  spec.kind = parts[0];
  try {
    if (spec.kind == "file") {
      if (parts.size() != 2) throw std::invalid_argument("expected file:PATH");
      spec.path = parts[1];
    } else if (spec.kind == "gnp") {
      if (parts.size() != 4) throw std::invalid_argument("expected gnp:N:P:SEED");
      spec.n = std::stoi(parts[1]);
      spec.p = std::stod(parts[2]);
      spec.seed = std::stoull(parts[3]);
    } else if (spec.kind == "cliques") {
      if (parts.size() != 3) throw std::invalid_argument("expected cliques:COUNT:SIZE");
      spec.count = std::stoi(parts[1]);
      spec.size = std::stoi(parts[2]);
    } else if (spec.kind == "star" || spec.kind == "cycle" || spec.kind == "complete" ||
               spec.kind == "edgeless" || spec.kind == "path") {
      if (parts.size() != 2) throw std::invalid_argument("expected " + spec.kind + ":N");
      spec.n = std::stoi(parts[1]);
    } else {
      throw std::invalid_argument("unknown kind '" + spec.kind + "'");
    }
  } catch (const std::exception& e) {
    throw std::invalid_argument("graph spec '" + token + "': " + e.what());
  }
  return spec;
}

Graph GraphSpec::build() const {
  if (kind == "star") return make_star(n);
  if (kind == "cycle") return make_cycle(n);
  if (kind == "complete") return make_complete(n);
  if (kind == "edgeless") return make_edgeless(n);
  if (kind == "path") return make_path(n);
  if (kind == "gnp") return make_gnp(n, p, seed);
  if (kind == "cliques") return make_disjoint_cliques(count, size);
  if (kind == "file") return read_edge_list_file(path);
  throw std::invalid_argument("graph spec: unknown kind '" + kind + "'");
}

std::string GraphSpec::to_token() const {
  if (kind == "file") return "file:" + path;
  if (kind == "gnp") {
    return "gnp:" + std::to_string(n) + ":" + format_double(p) + ":" + std::to_string(seed);
  }
  if (kind == "cliques") return "cliques:" + std::to_string(count) + ":" + std::to_string(size);
  return kind + ":" + std::to_string(n);
}

Geometry GeometrySpec::build() const {
  if (kind == "simplex") return Geometry::simplex(dim);
  if (kind == "ball") return Geometry::ball(dim, radius);
  throw std::invalid_argument("geometry: kind must be 'simplex' or 'ball'");
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    config_fail(std::string("invalid JSON: ") + e.what());
  }
  if (!root.is_object()) config_fail("top level must be an object");
  expect_keys(root, "config",
              {"graph", "geometry", "environment", "policy", "eta", "loss_bound",
               "horizon", "replicates", "seed", "comparator", "out_dir"});

  ExperimentConfig config;
  config.graph = graph_from_json(require(root, "config", "graph"));

  const auto& geom = require(root, "config", "geometry");
  expect_keys(geom, "geometry", {"kind", "dim", "radius"});
  config.geometry.kind = require(geom, "geometry", "kind").get<std::string>();
  config.geometry.dim = require(geom, "geometry", "dim").get<int>();
  if (config.geometry.kind == "ball") {
    config.geometry.radius = require(geom, "geometry", "radius").get<double>();
  } else {
    expect_keys(geom, "geometry(simplex)", {"kind", "dim"});
  }

  config.environment = environment_from_json(require(root, "config", "environment"));

  const auto& policy = require(root, "config", "policy");
  expect_keys(policy, "policy", {"kind"});
  const auto policy_kind = require(policy, "policy", "kind").get<std::string>();
  if (policy_kind == "oblivious") {
    config.policy = InterfacePolicy::Kind::kOblivious;
  } else if (policy_kind == "clique_cover") {
    config.policy = InterfacePolicy::Kind::kCliqueCover;
  } else {
    config_fail("policy.kind must be 'oblivious' or 'clique_cover'");
  }

  const auto& eta = require(root, "config", "eta");
  if (eta.is_string()) {
    if (eta.get<std::string>() != "tuned") config_fail("eta must be 'tuned' or a number");
    config.eta.tuned = true;
  } else if (eta.is_number()) {
    config.eta.tuned = false;
    config.eta.value = eta.get<double>();
    if (!(config.eta.value > 0.0)) config_fail("eta must be > 0");
  } else {
    config_fail("eta must be 'tuned' or a number");
  }

  if (root.contains("loss_bound")) {
    config.loss_bound = root.at("loss_bound").get<double>();
    if (!(config.loss_bound > 0.0)) config_fail("loss_bound must be > 0");
  }
  config.horizon = require(root, "config", "horizon").get<std::int64_t>();
  if (config.horizon < 0) config_fail("horizon must be >= 0");
  if (root.contains("replicates")) {
    config.replicates = root.at("replicates").get<int>();
    if (config.replicates < 1) config_fail("replicates must be >= 1");
  }
  config.seed = require(root, "config", "seed").get<std::uint64_t>();
  if (root.contains("comparator")) {
    config.comparator = comparator_from_json(root.at("comparator"));
  }
  if (root.contains("out_dir")) config.out_dir = root.at("out_dir").get<std::string>();
  return config;
}

ExperimentConfig ExperimentConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str());
}

std::string ExperimentConfig::canonical_json() const {
  json root;
  root["graph"] = graph_to_json(graph);
  json geom;
  geom["kind"] = geometry.kind;
  geom["dim"] = geometry.dim;
  if (geometry.kind == "ball") geom["radius"] = geometry.radius;
  root["geometry"] = geom;
  root["environment"] = environment_to_json(environment);
  root["policy"] = {{"kind", policy == InterfacePolicy::Kind::kOblivious
                                 ? "oblivious"
                                 : "clique_cover"}};
  if (eta.tuned) {
    root["eta"] = "tuned";
  } else {
    root["eta"] = eta.value;
  }
  if (loss_bound > 0.0) root["loss_bound"] = loss_bound;
  root["horizon"] = horizon;
  root["replicates"] = replicates;
  root["seed"] = seed;
  root["comparator"] = comparator_to_json(comparator);
  root["out_dir"] = out_dir;
  return root.dump(2);
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::string ExperimentConfig::hash() const {
  // The hash identifies the experiment; the output directory does not change
  // what is computed, so it is excluded.
  json root = json::parse(canonical_json());
  root.erase("out_dir");
  const std::uint64_t value = fnv1a64(root.dump(2));
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(value));
  return std::string(buf);
}

Graph ExperimentConfig::build_graph() const { return graph.build(); }

double ExperimentConfig::resolve_loss_bound(const Geometry& geom) const {
  return loss_bound > 0.0 ? loss_bound : geom.default_loss_bound();
}

double ExperimentConfig::resolve_eta(const Geometry& geom) const {
  if (!eta.tuned) return eta.value;
  return tuned_eta(geom.range_bound(), geom.strong_convexity(), resolve_loss_bound(geom));
}

InterfacePolicy ExperimentConfig::build_policy(const Graph& g) const {
  if (policy == InterfacePolicy::Kind::kOblivious) return InterfacePolicy::oblivious();
  return InterfacePolicy::clique_cover(g, greedy_clique_cover(g));
}

}  // namespace coopnet
