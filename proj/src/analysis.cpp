#include "coopnet/analysis.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "coopnet/rng.hpp"

namespace coopnet {

ActivationProfile::ActivationProfile(const Graph& g, std::vector<double> q_vec)
    : graph(&g), q(std::move(q_vec)) {
  if (static_cast<int>(q.size()) != g.num_vertices()) {
    throw std::invalid_argument("activation profile: q dimension mismatch");
  }
  for (double x : q) {
    if (!(x >= 0.0 && x <= 1.0)) {
      throw std::invalid_argument("activation profile: q_v must lie in [0,1]");
    }
  }
}

std::vector<int> ActivationProfile::support() const {
  std::vector<int> result;
  for (std::size_t v = 0; v < q.size(); ++v) {
    if (q[v] > 0.0) result.push_back(static_cast<int>(v));
  }
  return result;
}

double update_probability(const ActivationProfile& profile, int v) {
  double miss = 1.0 - profile.q[v];
  for (int w : profile.graph->neighbors(v)) miss *= 1.0 - profile.q[w];
  return 1.0 - miss;
}

double c_coefficient(const std::vector<double>& q, int v) {
  const int n = static_cast<int>(q.size());
  if (v < 0 || v >= n) throw std::out_of_range("c_coefficient: vertex out of range");
  // Coefficients of prod_{w != v} (q_w x + 1 - q_w) in the monomial basis.
  std::vector<double> poly{1.0};
  poly.reserve(n);
  for (int w = 0; w < n; ++w) {
    if (w == v) continue;
    poly.push_back(0.0);
    for (int k = static_cast<int>(poly.size()) - 1; k >= 1; --k) {
      poly[k] = poly[k] * (1.0 - q[w]) + poly[k - 1] * q[w];
    }
    poly[0] *= 1.0 - q[w];
  }
  double c = 0.0;
  for (int k = static_cast<int>(poly.size()) - 1; k >= 0; --k) {
    c += poly[k] / static_cast<double>(k + 1);
  }
  return c;
}

double c_coefficient_bruteforce(const std::vector<double>& q, int v) {
  const int n = static_cast<int>(q.size());
  if (v < 0 || v >= n) throw std::out_of_range("c_coefficient_bruteforce: vertex out of range");
  if (n > 20) throw std::invalid_argument("c_coefficient_bruteforce: N > 20");
  std::vector<int> others;
  for (int w = 0; w < n; ++w) {
    if (w != v) others.push_back(w);
  }
  const int m = static_cast<int>(others.size());
  double c = 0.0;
  for (std::uint64_t subset = 0; subset < (1ULL << m); ++subset) {
    double prob = 1.0;
    for (int i = 0; i < m; ++i) {
      prob *= (subset >> i) & 1 ? q[others[i]] : 1.0 - q[others[i]];
    }
    c += prob / static_cast<double>(1 + std::popcount(subset));
  }
  return c;
}

double expected_activation_share(const std::vector<double>& q, int v) {
  return q[v] * c_coefficient(q, v);
}

double q_constant(const ActivationProfile& profile) {
  double total = 0.0;
  for (int v : profile.support()) {
    const double qv = update_probability(profile, v);
    if (!(qv > 0.0)) {
      throw std::invalid_argument("q_constant: Q_v vanishes at vertex " +
                                  std::to_string(v));
    }
    total += profile.q[v] * c_coefficient(profile.q, v) / qv;
  }
  return total;
}

double q_uniform_closed_form(const Graph& g, double q) {
  if (!(q > 0.0 && q <= 1.0)) {
    throw std::invalid_argument(
        "q_uniform_closed_form: q must lie in (0,1]; the q->0 limit is "
        "reported by q_uniform_limit_zero");
  }
  const int n = g.num_vertices();
  const double global_miss = std::pow(1.0 - q, n);
  double total = 0.0;
  for (int v = 0; v < n; ++v) {
    total += (1.0 - global_miss) / (1.0 - std::pow(1.0 - q, g.closed_degree(v)));
  }
  return total / n;
}

double q_uniform_limit_zero(const Graph& g) { return inverse_neighborhood_sum(g); }

double lemma8_bound(int alpha) {
  if (alpha < 1) throw std::invalid_argument("lemma8_bound: alpha must be >= 1");
  return (alpha + 1.0) / (1.0 - std::exp(-1.0));
}

std::int64_t VerificationReport::failures(bool required_only) const {
  std::int64_t count = 0;
  for (const auto& check : checks) {
    if (!check.pass && (!required_only || check.required)) ++count;
  }
  return count;
}

namespace {

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string describe_sample(const Graph& g, const std::vector<double>& q) {
  std::ostringstream out;
  out << "n=" << g.num_vertices() << " edges=[";
  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    if (i) out << ';';
    out << g.edges()[i].first << '-' << g.edges()[i].second;
  }
  out << "] q=[";
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (i) out << ';';
    out << fmt(q[i]);
  }
  out << ']';
  return out.str();
}

}  // namespace

VerificationReport verify_appendix(const VerifyOptions& options) {
  VerificationReport report;
  Rng rng(options.seed);
  const double kTol = 1e-9;

  // Ratio-sum bound: sum_v q_v / Q_v <= alpha, alpha by exhaustive search.
  for (int i = 0; i < options.ratio_bound_samples; ++i) {
    const int n = 1 + static_cast<int>(rng.uniform_index(7));
    const Graph g = make_gnp(n, rng.uniform01(), rng.next_u64());
    const std::vector<double> q = rng.dirichlet(n);
    double sum = 0.0;
    for (int v = 0; v < n; ++v) {
      double mass = q[v];
      for (int w : g.neighbors(v)) mass += q[w];
      sum += q[v] / mass;
    }
    const int alpha = independence_number_bruteforce(g);
    CheckResult check{"lemma3_ratio", i, sum, static_cast<double>(alpha), false, true, ""};
    check.pass = sum <= alpha + kTol;
    if (options.inject_fault && i == 0) check.pass = sum >= alpha + kTol;
    if (!check.pass) check.detail = describe_sample(g, q);
    report.checks.push_back(std::move(check));
  }

  // c_v: exact polynomial expansion against full enumeration.
  for (int i = 0; i < options.c_samples; ++i) {
    const int n = 1 + static_cast<int>(rng.uniform_index(12));
    std::vector<double> q(n);
    for (auto& x : q) x = rng.open01();
    const int v = static_cast<int>(rng.uniform_index(n));
    const double exact = c_coefficient(q, v);
    const double brute = c_coefficient_bruteforce(q, v);
    CheckResult check{"lemma6_c_exact", i, std::abs(exact - brute), 1e-10, false, true, ""};
    check.pass = check.value <= check.bound;
    if (!check.pass) {
      check.detail = "v=" + std::to_string(v) + " exact=" + fmt(exact) +
                     " brute=" + fmt(brute);
    }
    report.checks.push_back(std::move(check));
  }

  // Q <= (alpha+1)/(1-1/e) for arbitrary strictly positive q.
  for (int i = 0; i < options.q_bound_samples; ++i) {
    const int n = 1 + static_cast<int>(rng.uniform_index(12));
    const Graph g = make_gnp(n, rng.uniform01(), rng.next_u64());
    std::vector<double> q(n);
    for (auto& x : q) x = rng.open01();
    const ActivationProfile profile(g, q);
    const double value = q_constant(profile);
    const int alpha = independence_number_exact(g);
    CheckResult check{"lemma8_q_bound", i, value, lemma8_bound(alpha), false, true, ""};
    check.pass = value <= check.bound + kTol;
    if (!check.pass) check.detail = describe_sample(g, q);
    report.checks.push_back(std::move(check));
  }

  // Informational: Q <= max{3, alpha} when the activation probabilities sum
  // to one. Stated without proof in the source material; reported, not
  // required.
  for (int i = 0; i < options.q_bound_samples / 2; ++i) {
    const int n = 1 + static_cast<int>(rng.uniform_index(12));
    const Graph g = make_gnp(n, rng.uniform01(), rng.next_u64());
    const std::vector<double> q = rng.dirichlet(n);
    const ActivationProfile profile(g, q);
    const double value = q_constant(profile);
    const int alpha = independence_number_exact(g);
    const double bound = std::max(3.0, static_cast<double>(alpha));
    CheckResult check{"q_max3_alpha_sum1", i, value, bound, false, false, ""};
    check.pass = value <= bound + kTol;
    if (!check.pass) check.detail = describe_sample(g, q);
    report.checks.push_back(std::move(check));
  }

  // Uniform-q closed form, monotonicity, range, and both limits.
  std::vector<Graph> grid_graphs{make_complete(5), make_edgeless(5), make_star(6),
                                 make_cycle(6), make_path(7)};
  while (static_cast<int>(grid_graphs.size()) < options.uniform_grid_graphs) {
    const int n = 2 + static_cast<int>(rng.uniform_index(11));
    grid_graphs.push_back(make_gnp(n, rng.uniform01(), rng.next_u64()));
  }
  for (std::size_t gi = 0; gi < grid_graphs.size(); ++gi) {
    const Graph& g = grid_graphs[gi];
    const int n = g.num_vertices();
    const double zero_limit = q_uniform_limit_zero(g);
    double max_form_diff = 0.0;
    double max_monotone_violation = 0.0;
    double max_range_violation = 0.0;
    double previous = std::numeric_limits<double>::infinity();
    std::string detail;
    for (int step = 1; step <= 20; ++step) {
      const double q = 0.05 * step;
      const ActivationProfile profile(g, std::vector<double>(n, q));
      const double exact = q_constant(profile);
      const double closed = q_uniform_closed_form(g, q);
      max_form_diff = std::max(max_form_diff, std::abs(exact - closed));
      max_monotone_violation = std::max(max_monotone_violation, closed - previous);
      max_range_violation = std::max(max_range_violation,
                                     std::max(1.0 - closed, closed - zero_limit));
      if (detail.empty() &&
          (std::abs(exact - closed) > 1e-10 || closed - previous > 1e-12)) {
        detail = "q=" + fmt(q) + " " + describe_sample(g, profile.q);
      }
      previous = closed;
    }
    const auto id = static_cast<std::int64_t>(gi);
    report.checks.push_back({"uniform_q_closed_form", id, max_form_diff, 1e-10,
                             max_form_diff <= 1e-10, true, detail});
    report.checks.push_back({"uniform_q_monotone", id, max_monotone_violation, 1e-12,
                             max_monotone_violation <= 1e-12, true, detail});
    report.checks.push_back({"uniform_q_range", id, max_range_violation, kTol,
                             max_range_violation <= kTol, true, detail});
    const double at_one = q_uniform_closed_form(g, 1.0);
    report.checks.push_back({"uniform_q_limit_one", id, std::abs(at_one - 1.0), 1e-12,
                             std::abs(at_one - 1.0) <= 1e-12, true, ""});
    const double near_zero = q_uniform_closed_form(g, 1e-6);
    report.checks.push_back({"uniform_q_limit_zero", id, std::abs(near_zero - zero_limit),
                             1e-3, std::abs(near_zero - zero_limit) <= 1e-3, true, ""});
  }

  return report;
}

void write_verification_csv(std::ostream& out, const VerificationReport& report) {
  out << "check_id,sample_id,value,bound,pass\n";
  for (const auto& check : report.checks) {
    out << check.check_id << ',' << check.sample_id << ',' << fmt(check.value) << ','
        << fmt(check.bound) << ',' << (check.pass ? 1 : 0) << '\n';
  }
}

std::string summarize_verification(const VerificationReport& report) {
  std::map<std::string, std::pair<std::int64_t, std::int64_t>> counts;
  std::map<std::string, bool> required;
  for (const auto& check : report.checks) {
    auto& entry = counts[check.check_id];
    ++entry.second;
    if (check.pass) ++entry.first;
    required[check.check_id] = check.required;
  }
  std::ostringstream out;
  for (const auto& [id, entry] : counts) {
    out << id <<": " << entry.first << '/' << entry.second << " pass"
        << (required[id] ? "" : " (informational)") << '\n';
  }
  std::int64_t fails = report.failures();
  out << (fails == 0 ? "all required checks passed" :
          std::to_string(fails) + " required check(s) FAILED") << '\n';
  return out.str();
}

}  // namespace coopnet
