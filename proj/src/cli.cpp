#include "coopnet/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace coopnet::cli {

namespace {

ExperimentConfig apply_overrides(ExperimentConfig config, const RunFlags& flags) {
  if (flags.seed_override) config.seed = *flags.seed_override;
  if (flags.replicates_override) config.replicates = *flags.replicates_override;
  if (flags.out_dir_override) config.out_dir = *flags.out_dir_override;
  return config;
}

std::string ensure_out_dir(const std::string& dir) {
  std::filesystem::create_directories(dir);
  return dir;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

std::string multiplier_name(BoundMultiplier m) {
  switch (m) {
    case BoundMultiplier::kAlpha:
      return "alpha";
    case BoundMultiplier::kCoverSize:
      return "cover_size";
    case BoundMultiplier::kQConstant:
      return "Q";
  }
  return "?";
}

}  // namespace

RunResult cmd_run(const ExperimentConfig& raw_config, const RunFlags& flags) {
  const ExperimentConfig config = apply_overrides(raw_config, flags);
  const Graph graph = config.build_graph();
  const Geometry geometry = config.geometry.build();
  const InterfacePolicy policy = config.build_policy(graph);
  const double eta = config.resolve_eta(geometry);

  MonteCarloOptions options;
  options.comparator = config.comparator;
  options.loss_bound = config.resolve_loss_bound(geometry);
  options.allow_heuristic_alpha = flags.allow_heuristic_alpha;
  options.config_hash = config.hash();

  RunResult result;
  result.report = monte_carlo(graph, geometry, policy, config.environment, eta,
                              config.horizon, config.replicates, config.seed, options);

  const auto dir = ensure_out_dir(config.out_dir);
  result.report_path = dir + "/report.csv";
  {
    std::ostringstream buffer;
    write_report_csv(buffer, result.report);
    write_file(result.report_path, buffer.str());
  }
  if (flags.emit_trace) {
    const auto trace =
        run_simulation(graph, geometry, policy, config.environment, eta, config.horizon,
                       derive_seed(config.seed, 0));
    result.trace_path = dir + "/trace.csv";
    std::ostringstream buffer;
    write_trace_csv(buffer, trace);
    write_file(result.trace_path, buffer.str());
  }

  if (!result.report.upper_bound_applies) {
    result.verdict = "no upper-bound guarantee for this policy/activation pair";
    result.exit_code = kExitOk;
  } else if (result.report.bound_satisfied()) {
    result.verdict = "bound ok";
    result.exit_code = kExitOk;
  } else {
    result.verdict = "bound violated";
    result.exit_code = kExitCheckFailure;
  }

  if (!flags.quiet) {
    const auto& r = result.report;
    std::cout << "config_hash=" << r.config_hash << " seed=" << r.master_seed << "\n"
              << "T=" << r.horizon << " replicates=" << r.replicates
              << " N=" << r.num_agents << " alpha=" << r.alpha
              << (r.alpha_mode == AlphaMode::kExact ? "" : " (greedy lower bound)")
              << " cover=" << r.cover_size << "\n"
              << "regret mean=" << format_double(r.regret_mean)
              << " se=" << format_double(r.regret_se)
              << " min=" << format_double(r.regret_min)
              << " max=" << format_double(r.regret_max) << "\n"
              << "theory bound (" << multiplier_name(r.multiplier)
              << "=" << format_double(r.multiplier_value)
              << "): " << format_double(r.bound)
              << "  [alpha-based " << format_double(r.bound_alpha) << ", cover-based "
              << format_double(r.bound_cover) << "]\n"
              << "verdict: " << result.verdict << "\n"
              << "report: " << result.report_path << "\n";
    if (!result.trace_path.empty()) std::cout << "trace: " << result.trace_path << "\n";
  }
  return result;
}

RunResult cmd_run_file(const std::string& config_path, const RunFlags& flags) {
  return cmd_run(ExperimentConfig::load_file(config_path), flags);
}

double fit_loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument("fit_loglog_slope: need at least 2 points");
  }
  const std::size_t n = xs.size();
  double mx = 0.0, my = 0.0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) {
      throw std::invalid_argument("fit_loglog_slope: points must be positive");
    }
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double cov = 0.0, var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cov += (lx[i] - mx) * (ly[i] - my);
    var += (lx[i] - mx) * (lx[i] - mx);
  }
  if (var == 0.0) throw std::invalid_argument("fit_loglog_slope: degenerate x values");
  return cov / var;
}

SweepResult cmd_sweep(const ExperimentConfig& raw_config, const std::string& axis,
                      const std::vector<std::string>& values, const RunFlags& flags) {
  if (axis != "T" && axis != "graph") {
    throw std::invalid_argument("sweep: axis must be 'T' or 'graph'");
  }
  if (values.size() < 3) {
    throw std::invalid_argument("sweep: need at least 3 sweep points");
  }
  const ExperimentConfig base = apply_overrides(raw_config, flags);

  SweepResult result;
  result.axis = axis;
  RunFlags point_flags = flags;
  point_flags.quiet = true;
  point_flags.out_dir_override.reset();

  for (const auto& value : values) {
    ExperimentConfig config = base;
    SweepPoint point;
    point.label = value;
    if (axis == "T") {
      config.horizon = std::stoll(value);
      point.x = static_cast<double>(config.horizon);
    } else {
      config.graph = GraphSpec::parse(value);
    }
    const Graph graph = config.build_graph();
    if (axis == "graph") point.x = independence_number_exact(graph);
    const Geometry geometry = config.geometry.build();
    const InterfacePolicy policy = config.build_policy(graph);
    const double eta = config.resolve_eta(geometry);
    MonteCarloOptions options;
    options.comparator = config.comparator;
    options.loss_bound = config.resolve_loss_bound(geometry);
    options.allow_heuristic_alpha = flags.allow_heuristic_alpha;
    options.config_hash = config.hash();
    point.report = monte_carlo(graph, geometry, policy, config.environment, eta,
                               config.horizon, config.replicates, config.seed, options);
    result.points.push_back(std::move(point));
  }

  std::vector<double> xs, ys;
  for (const auto& point : result.points) {
    xs.push_back(point.x);
    ys.push_back(point.report.regret_mean);
  }
  result.slope = fit_loglog_slope(xs, ys);

  const auto dir = ensure_out_dir(base.out_dir);
  result.csv_path = dir + "/sweep.csv";
  {
    std::ostringstream buffer;
    buffer << "axis,label,x,regret_mean,regret_se,theory_bound\n";
    for (const auto& point : result.points) {
      buffer << axis << ',' << point.label << ',' << format_double(point.x) << ','
             << format_double(point.report.regret_mean) << ','
             << format_double(point.report.regret_se) << ','
             << format_double(point.report.bound) << '\n';
    }
    write_file(result.csv_path, buffer.str());
  }

  if (!flags.quiet) {
    for (const auto& point : result.points) {
      std::cout << axis << "=" << point.label << " x=" << format_double(point.x)
                << " regret_mean=" << format_double(point.report.regret_mean)
                << " se=" << format_double(point.report.regret_se) << "\n";
    }
    std::cout << "log-log slope: " << format_double(result.slope) << "\n"
              << "sweep table: " << result.csv_path << "\n";
  }
  return result;
}

SweepResult cmd_sweep_file(const std::string& config_path, const std::string& axis,
                           const std::vector<std::string>& values, const RunFlags& flags) {
  return cmd_sweep(ExperimentConfig::load_file(config_path), axis, values, flags);
}

GraphMetrics cmd_graph(const std::string& graph_spec, bool allow_heuristic, bool quiet) {
  const Graph graph = GraphSpec::parse(graph_spec).build();
  GraphMetrics metrics;
  metrics.n = graph.num_vertices();
  metrics.m = graph.num_edges();
  try {
    metrics.alpha_exact = independence_number_exact(graph);
  } catch (const std::invalid_argument& e) {
    if (!allow_heuristic) {
      throw std::invalid_argument(std::string(e.what()) +
                                  " (pass --heuristic for a labeled greedy lower bound)");
    }
    metrics.alpha_greedy_lower_bound =
        static_cast<int>(maximal_independent_set(graph).size());
  }
  metrics.cover_size = static_cast<int>(greedy_clique_cover(graph).size());
  metrics.dominating_size = static_cast<int>(greedy_dominating_set(graph).size());
  metrics.inverse_neighborhood_sum = inverse_neighborhood_sum(graph);

  if (!quiet) {
    std::cout << "graph " << graph_spec << "\n"
              << "n=" << metrics.n << " m=" << metrics.m << "\n";
    if (metrics.alpha_exact) {
      std::cout << "alpha (exact) = " << *metrics.alpha_exact << "\n";
    } else {
      std::cout << "alpha (greedy lower bound, heuristic) = "
                << *metrics.alpha_greedy_lower_bound << "\n";
    }
    std::cout << "greedy clique cover size = " << metrics.cover_size << "\n"
              << "greedy dominating set size = " << metrics.dominating_size << "\n"
              << "sum 1/|N_v| = " << format_double(metrics.inverse_neighborhood_sum)
              << "\n";
  }
  return metrics;
}

int cmd_verify(const VerifyFlags& flags) {
  VerifyOptions options;
  options.seed = flags.seed;
  options.inject_fault = flags.inject_fault;
  const VerificationReport report = verify_appendix(options);

  const auto dir = ensure_out_dir(flags.out_dir);
  const auto csv_path = dir + "/verification.csv";
  {
    std::ostringstream buffer;
    write_verification_csv(buffer, report);
    write_file(csv_path, buffer.str());
  }

  if (!flags.quiet) {
    std::cout << summarize_verification(report) << "verification table: " << csv_path
              << "\n";
    for (const auto& check : report.checks) {
      if (!check.pass && check.required) {
        std::cout << "counterexample [" << check.check_id << " #" << check.sample_id
                  << "] value=" << format_double(check.value)
                  << " bound=" << format_double(check.bound) << ' ' << check.detail
                  << "\n";
      }
    }
  }
  return report.all_pass() ? kExitOk : kExitCheckFailure;
}

}  // namespace coopnet::cli
