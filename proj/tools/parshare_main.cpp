// Copyright 2026 The parshare Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// parshare: benchmark, trace, fit and oracle front-end.

#include <algorithm>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "parshare/errors.hpp"
#include "parshare/experiments.hpp"
#include "parshare/oracle.hpp"
#include "parshare/policies.hpp"
#include "parshare/simulator.hpp"
#include "parshare/speedup.hpp"

namespace {

using namespace parshare;

// "pareto:shape=1.5,scale=1"
void apply_distribution(const std::string& text, ExperimentConfig& config) {
  const auto colon = text.find(':');
  if (text.substr(0, colon) != "pareto") {
    throw InvalidInput("only the pareto distribution is supported, got '" +
                       text + "'");
  }
  if (colon == std::string::npos) return;
  std::string rest = text.substr(colon + 1);
  std::size_t start = 0;
  while (start <= rest.size()) {
    const auto comma = rest.find(',', start);
    const std::string item = rest.substr(start, comma - start);
    if (!item.empty()) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) {
        throw InvalidInput("bad distribution parameter '" + item + "'");
      }
      const std::string key = item.substr(0, eq);
      const double value = std::stod(item.substr(eq + 1));
      if (key == "shape") {
        config.pareto_shape = value;
      } else if (key == "scale") {
        config.pareto_scale = value;
      } else {
        throw InvalidInput("unknown distribution parameter '" + key + "'");
      }
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

int run_bench(ExperimentConfig config, const std::string& dist,
              const std::string& policies) {
  apply_distribution(dist, config);
  config.policies = parse_policy_list(policies);
  const ResultTable table = run_matrix(config);
  emit(table, config.output_path);
  std::cout << "policy,p,median_mean_flow_time,ratio_to_hesrpt\n";
  for (const auto& a : table.aggregates) {
    std::cout << to_string(a.policy) << ',' << fmt(a.p) << ','
              << fmt(a.median_mean_flow_time) << ','
              << fmt(a.ratio_to_hesrpt) << '\n';
  }
  std::size_t failed = 0;
  for (const auto& r : table.rows) {
    if (r.failed) {
      ++failed;
      std::cerr << "cell failed: " << to_string(r.policy) << " p=" << fmt(r.p)
                << " seed=" << r.seed << ": " << r.error << '\n';
    }
  }
  std::cerr << "wrote " << config.output_path << "/{raw,aggregate,ratios}.csv\n";
  return failed == 0 ? 0 : 3;
}

SpeedupFunction resolve_speedup(const std::optional<double>& p,
                                const std::string& spec) {
  if (!spec.empty()) return parse_speedup(spec);
  if (p) return SpeedupFunction::PowerLaw(*p);
  throw InvalidInput("give either --p or --speedup");
}

int run_trace(const std::string& policy_name, const std::string& sizes_file,
              const std::optional<double>& p, const std::string& speedup_spec,
              double n_servers, const std::string& out,
              const PolicyParams& params) {
  const auto speedup = resolve_speedup(p, speedup_spec);
  const JobSet jobs = read_sizes_csv_file(sizes_file);
  const Policy policy = make_policy(parse_policy_kind(policy_name), params);
  const Trajectory traj = run(policy, jobs, n_servers, speedup);
  write_trajectory_csv_file(out, traj);
  std::cout << "phases=" << traj.phases.size()
            << " total_flow_time=" << fmt(traj.total_flow_time)
            << " mean_flow_time=" << fmt(traj.mean_flow_time)
            << " makespan=" << fmt(traj.makespan) << '\n';
  return 0;
}

int run_fit(const std::string& curve_file) {
  const auto fit = fit_power_law(read_curve_csv_file(curve_file));
  std::cout << "p=" << fmt(fit.p) << '\n';
  if (fit.clamped) {
    std::cerr << "warning: fitted exponent fell outside (0, 1) and was "
                 "clamped\n";
  }
  return 0;
}

int run_oracle(std::vector<double> sizes, const std::string& speedup_spec,
               double n_servers, double grid_step) {
  const auto speedup = parse_speedup(speedup_spec);
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  GridSearchResult result;
  if (sizes.size() == 2) {
    result = grid_search_two_jobs(sizes[0], sizes[1], speedup, n_servers,
                                  grid_step);
  } else {
    result = grid_search_small(JobSet::FromSizes(sizes), speedup, n_servers,
                               grid_step);
  }
  std::cout << "speedup=" << speedup.ToString() << " n_servers="
            << fmt(n_servers) << " grid_step=" << fmt(grid_step) << '\n';
  std::cout << "best_total_flow_time=" << fmt(result.best_objective) << '\n';
  for (std::size_t i = 0; i < result.best_allocation_per_phase.size(); ++i) {
    std::cout << "phase " << i + 1 << ":";
    for (const auto& s : result.best_allocation_per_phase[i].shares()) {
      std::cout << " job" << s.id << "(size " << fmt(sizes[s.id])
                << ")=" << fmt(s.theta);
    }
    std::cout << '\n';
  }
  std::cout << "completion_order=";
  for (std::size_t i = 0; i < result.completion_order.size(); ++i) {
    std::cout << (i ? "," : "") << "job" << result.completion_order[i];
  }
  std::cout << '\n';
  if (!result.completion_order.empty()) {
    const JobId first = result.completion_order.front();
    std::cout << "first_finisher_share="
              << fmt(result.best_allocation_per_phase.front().theta_of(first))
              << '\n';
  }
  if (speedup.is_power_law()) {
    std::cout << "closed_form_total_flow_time="
              << fmt(hesrpt_total_flow_time(sizes, speedup.exponent(),
                                            n_servers))
              << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Server allocation for parallelizable jobs with sublinear "
               "speedup"};
  app.require_subcommand(1);

  ExperimentConfig bench_config;
  std::string dist = "pareto:shape=1.5,scale=1";
  std::string bench_policies = "hesrpt,srpt,equi,hell,knee";
  std::int64_t bench_granularity = 0;
  auto* bench = app.add_subcommand("bench", "Run the policy comparison sweep");
  bench->add_option("--n-servers", bench_config.n_servers, "Server count N")
      ->capture_default_str();
  bench->add_option("--jobs", bench_config.n_jobs, "Jobs per instance M")
      ->capture_default_str();
  bench->add_option("--p", bench_config.p_values, "Speedup exponents")
      ->delimiter(',')
      ->capture_default_str();
  bench->add_option("--dist", dist, "Job size distribution")
      ->capture_default_str();
  bench->add_option("--seeds", bench_config.n_seeds, "Instances per cell")
      ->capture_default_str();
  bench->add_option("--base-seed", bench_config.base_seed, "First seed")
      ->capture_default_str();
  bench->add_option("--policies", bench_policies, "Comma-separated policies")
      ->capture_default_str();
  bench->add_option("--knee-alphas", bench_config.knee_alpha_grid,
                    "KNEE alpha grid (default: 40 log-spaced points)")
      ->delimiter(',');
  bench->add_option("--granularity", bench_granularity,
                    "HELL/KNEE grain count (default: N)");
  bench->add_option("--out", bench_config.output_path, "Output directory")
      ->capture_default_str();

  std::string trace_policy = "hesrpt";
  std::string sizes_file;
  std::optional<double> trace_p;
  std::string trace_speedup;
  double trace_servers = 1.0;
  std::string trace_out = "trace.csv";
  PolicyParams trace_params;
  std::int64_t trace_granularity = 0;
  auto* trace = app.add_subcommand("trace", "Simulate one policy and dump "
                                            "its phases");
  trace->add_option("--policy", trace_policy, "Policy name")
      ->capture_default_str();
  trace->add_option("--sizes-file", sizes_file, "CSV with header 'size'")
      ->required();
  trace->add_option("--p", trace_p, "Power-law exponent");
  trace->add_option("--speedup", trace_speedup,
                    "Speedup spec, e.g. amdahl:f=0.9");
  trace->add_option("--n-servers", trace_servers, "Server count N")
      ->capture_default_str();
  trace->add_option("--alpha", trace_params.alpha, "KNEE threshold")
      ->capture_default_str();
  trace->add_option("--granularity", trace_granularity, "HELL/KNEE grains");
  trace->add_option("--out", trace_out, "Trajectory CSV")
      ->capture_default_str();

  std::string curve_file;
  auto* fit = app.add_subcommand("fit", "Fit s(k) = k^p to a measured curve");
  fit->add_option("--curve", curve_file, "CSV with header 'cores,speedup'")
      ->required();

  std::vector<double> oracle_sizes;
  std::string oracle_speedup = "power:p=0.5";
  double oracle_servers = 10.0;
  double grid_step = 0.005;
  auto* oracle = app.add_subcommand("oracle", "Grid-search the best schedule "
                                              "for two or three jobs");
  oracle->add_option("--sizes", oracle_sizes, "Job sizes")
      ->delimiter(',')
      ->required();
  oracle->add_option("--speedup", oracle_speedup, "Speedup spec")
      ->capture_default_str();
  oracle->add_option("--n-servers", oracle_servers, "Server count N")
      ->capture_default_str();
  oracle->add_option("--grid-step", grid_step, "Grid resolution")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*bench) {
      if (bench_granularity > 0) bench_config.hell_granularity = bench_granularity;
      return run_bench(bench_config, dist, bench_policies);
    }
    if (*trace) {
      if (trace_granularity > 0) trace_params.granularity = trace_granularity;
      return run_trace(trace_policy, sizes_file, trace_p, trace_speedup,
                       trace_servers, trace_out, trace_params);
    }
    if (*fit) return run_fit(curve_file);
    if (*oracle) {
      return run_oracle(oracle_sizes, oracle_speedup, oracle_servers,
                        grid_step);
    }
  } catch (const parshare::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
