#pragma once

#include <cstdint>
#include <string>

#include "coopnet/agent.hpp"
#include "coopnet/environment.hpp"
#include "coopnet/geometry.hpp"
#include "coopnet/graph.hpp"
#include "coopnet/simulator.hpp"

namespace coopnet {

// Declarative graph description, also usable as a one-token CLI spec:
// "star:10", "cycle:5", "complete:6", "edgeless:4", "path:7",
// "gnp:20:0.3:7" (n, p, seed), "cliques:4:4" (count, size), "file:PATH".
struct GraphSpec {
  std::string kind = "edgeless";
  int n = 1;
  double p = 0.0;
  std::uint64_t seed = 0;
  int count = 1;
  int size = 1;
  std::string path;

  static GraphSpec parse(const std::string& token);
  Graph build() const;
  std::string to_token() const;
};

struct GeometrySpec {
  std::string kind = "simplex";
  int dim = 2;
  double radius = 1.0;

  Geometry build() const;
};

struct EtaSpec {
  bool tuned = true;
  double value = 0.0;
};

// A full experiment: everything needed to reproduce a report bit-exactly is
// (this config, master seed). Unknown keys in the file are errors.
struct ExperimentConfig {
  GraphSpec graph;
  GeometrySpec geometry;
  EnvironmentSpec environment;
  InterfacePolicy::Kind policy = InterfacePolicy::Kind::kOblivious;
  EtaSpec eta;
  double loss_bound = 0.0;  // 0 selects the geometry default
  std::int64_t horizon = 0;
  int replicates = 1;
  std::uint64_t seed = 0;
  ComparatorSpec comparator{};
  std::string out_dir = "out";

  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig load_file(const std::string& path);

  // Canonical serialization: load(canonical_json()) reproduces the config.
  std::string canonical_json() const;
  // FNV-1a 64-bit hash of the canonical serialization, 16 hex digits.
  std::string hash() const;

  Graph build_graph() const;
  double resolve_eta(const Geometry& geom) const;
  double resolve_loss_bound(const Geometry& geom) const;
  InterfacePolicy build_policy(const Graph& g) const;
};

std::uint64_t fnv1a64(const std::string& text);

}  // namespace coopnet
