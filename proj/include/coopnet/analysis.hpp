#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "coopnet/graph.hpp"

namespace coopnet {

// A graph together with per-vertex activation probabilities q_v in [0,1].
struct ActivationProfile {
  const Graph* graph = nullptr;
  std::vector<double> q;

  ActivationProfile(const Graph& g, std::vector<double> q_vec);

  // Vertices with q_v > 0.
  std::vector<int> support() const;
};

// Q_v: probability that v receives feedback in a round,
// 1 - prod_{w in N_v} (1 - q_w).
double update_probability(const ActivationProfile& profile, int v);

// c_v = E[1 / (1 + sum_{w != v} X(w))] for independent X(w) ~ Bernoulli(q_w),
// computed exactly by expanding prod_{w != v} (q_w x + 1 - q_w) and
// integrating term by term. O(N^2), stable to ~1e-13 for N <= 200.
double c_coefficient(const std::vector<double>& q, int v);

// The same expectation by enumerating all 2^(N-1) outcomes. Oracle only;
// N <= 20.
double c_coefficient_bruteforce(const std::vector<double>& q, int v);

// E[X(v) / sum_w X(w)] = q_v * c_v (0 when X(v) = 0).
double expected_activation_share(const std::vector<double>& q, int v);

// Q = sum_{v in support} q_v c_v / Q_v: the effective-instances multiplier
// for independent multi-activation.
double q_constant(const ActivationProfile& profile);

// Closed form of Q for uniform q_v = q:
// (1/N) sum_v (1 - (1-q)^N) / (1 - (1-q)^{|N_v|}); requires q in (0, 1].
double q_uniform_closed_form(const Graph& g, double q);

// lim_{q -> 0+} of the closed form: sum_v 1/|N_v|.
double q_uniform_limit_zero(const Graph& g);

// (alpha + 1) / (1 - 1/e).
double lemma8_bound(int alpha);

// One verification check outcome. `value` and `bound` are the two sides of
// the tested inequality or equality (interpretation depends on the check).
struct CheckResult {
  std::string check_id;
  std::int64_t sample_id = 0;
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
  bool required = true;  // informational checks do not gate the outcome
  std::string detail;    // counterexample payload on failure
};

struct VerificationReport {
  std::vector<CheckResult> checks;

  std::int64_t failures(bool required_only = true) const;
  bool all_pass() const { return failures() == 0; }
};

struct VerifyOptions {
  std::uint64_t seed = 20240911;
  int ratio_bound_samples = 1000;  // ratio-sum vs independence number, n <= 7
  int c_samples = 500;             // exact c_v vs enumeration, N <= 12
  int q_bound_samples = 1000;      // Q vs (alpha+1)/(1-1/e)
  int uniform_grid_graphs = 25;    // closed-form / monotonicity / limits
  bool inject_fault = false;       // self-test: flips one inequality
};

// Runs the whole verification corpus. Failures are report entries, never
// exceptions.
VerificationReport verify_appendix(const VerifyOptions& options = {});

// CSV with columns check_id,sample_id,value,bound,pass.
void write_verification_csv(std::ostream& out, const VerificationReport& report);

// One line per check id with pass/fail counts.
std::string summarize_verification(const VerificationReport& report);

}  // namespace coopnet
