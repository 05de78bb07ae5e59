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

#include "parshare/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <random>

#include "csv_util.hpp"
#include "parshare/errors.hpp"
#include "parshare/simulator.hpp"

namespace parshare {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

ResultRow simulate_cell(PolicyKind kind, double p, std::uint64_t seed,
                        const JobSet& jobs, const ExperimentConfig& config,
                        const std::vector<double>& alpha_grid) {
  ResultRow row{kind, p, seed, kNaN, kNaN, kNaN, false, {}};
  try {
    const auto speedup = SpeedupFunction::PowerLaw(p);
    const auto n = static_cast<double>(jobs.size());
    if (kind == PolicyKind::kKNEE) {
      const auto best = knee_alpha_search(jobs, p, config.n_servers,
                                          config.hell_granularity, alpha_grid);
      PolicyParams params;
      params.alpha = best.best_alpha;
      params.granularity = config.hell_granularity;
      const auto traj =
          run(make_policy(kind, params), jobs, config.n_servers, speedup);
      row.total_flow_time = traj.total_flow_time;
      row.mean_flow_time = traj.total_flow_time / n;
      row.makespan = traj.makespan;
      return row;
    }
    PolicyParams params;
    params.granularity = config.hell_granularity;
    const auto traj =
        run(make_policy(kind, params), jobs, config.n_servers, speedup);
    row.total_flow_time = traj.total_flow_time;
    row.mean_flow_time = traj.total_flow_time / n;
    row.makespan = traj.makespan;
  } catch (const std::exception& e) {
    row.failed = true;
    row.error = e.what();
    row.total_flow_time = row.mean_flow_time = row.makespan = kNaN;
  }
  return row;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!(n_servers > 0.0) || !std::isfinite(n_servers)) {
    throw InvalidInput("n_servers must be positive");
  }
  if (n_jobs == 0) throw InvalidInput("n_jobs must be positive");
  if (n_seeds == 0) throw InvalidInput("n_seeds must be positive");
  if (p_values.empty()) throw InvalidInput("p_values is empty");
  for (double p : p_values) {
    if (!(p > 0.0 && p < 1.0)) {
      throw InvalidInput("p values must lie in (0, 1), got " +
                         detail::format_double(p));
    }
  }
  if (!(pareto_shape > 0.0) || !(pareto_scale > 0.0)) {
    throw InvalidInput("Pareto shape and scale must be positive");
  }
  if (policies.empty()) throw InvalidInput("no policies selected");
  for (double a : knee_alpha_grid) {
    if (!(a > 0.0)) throw InvalidInput("KNEE alpha values must be positive");
  }
  if (hell_granularity && *hell_granularity < 1) {
    throw InvalidInput("granularity must be at least 1");
  }
}

std::vector<double> ExperimentConfig::effective_alpha_grid() const {
  if (!knee_alpha_grid.empty()) return knee_alpha_grid;
  return log_spaced(1e-6 * pareto_scale, 1e3 * pareto_scale, 40);
}

double pareto_from_uniform(double u, double shape, double scale) {
  if (!(u > 0.0 && u < 1.0)) throw InvalidInput("uniform draw must lie in (0, 1)");
  return scale * std::pow(u, -1.0 / shape);
}

std::vector<double> sample_pareto(double shape, double scale,
                                  std::size_t count, std::uint64_t seed) {
  if (!(shape > 0.0) || !(scale > 0.0)) {
    throw InvalidInput("Pareto shape and scale must be positive");
  }
  std::mt19937_64 gen(seed);
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double u =
        (static_cast<double>(gen() >> 11) + 0.5) * 0x1.0p-53;
    out.push_back(pareto_from_uniform(u, shape, scale));
  }
  return out;
}

double median(std::vector<double> values) {
  std::erase_if(values, [](double v) { return std::isnan(v); });
  if (values.empty()) return kNaN;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  if (n % 2 == 1) return values[n / 2];
  return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

ResultTable run_matrix(const ExperimentConfig& config) {
  config.validate();
  const auto alpha_grid = config.effective_alpha_grid();

  ResultTable table;
  table.policies = config.policies;
  table.p_values = config.p_values;

  const bool lists_hesrpt =
      std::find(config.policies.begin(), config.policies.end(),
                PolicyKind::kHeSRPT) != config.policies.end();
  std::vector<PolicyKind> kinds = config.policies;
  if (!lists_hesrpt) kinds.push_back(PolicyKind::kHeSRPT);

  // (policy index, p index) -> rows over seeds.
  std::map<std::pair<std::size_t, std::size_t>, std::vector<ResultRow>> cells;
  for (std::size_t s = 0; s < config.n_seeds; ++s) {
    const std::uint64_t seed = config.base_seed + s;
    auto sizes = sample_pareto(config.pareto_shape, config.pareto_scale,
                               config.n_jobs, seed);
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    const JobSet jobs = JobSet::FromSizes(sizes);
    for (std::size_t pi = 0; pi < config.p_values.size(); ++pi) {
      for (std::size_t k = 0; k < kinds.size(); ++k) {
        cells[{k, pi}].push_back(simulate_cell(
            kinds[k], config.p_values[pi], seed, jobs, config, alpha_grid));
      }
    }
  }

  const std::size_t base = static_cast<std::size_t>(
      std::find(kinds.begin(), kinds.end(), PolicyKind::kHeSRPT) -
      kinds.begin());
  for (std::size_t k = 0; k < config.policies.size(); ++k) {
    for (std::size_t pi = 0; pi < config.p_values.size(); ++pi) {
      const auto& rows = cells[{k, pi}];
      table.rows.insert(table.rows.end(), rows.begin(), rows.end());
    }
  }
  for (std::size_t k = 0; k < config.policies.size(); ++k) {
    for (std::size_t pi = 0; pi < config.p_values.size(); ++pi) {
      auto collect = [&](std::size_t which) {
        std::vector<double> means;
        for (const auto& r : cells[{which, pi}]) means.push_back(r.mean_flow_time);
        return median(std::move(means));
      };
      const double med = collect(k);
      const double ref = collect(base);
      table.aggregates.push_back(
          {config.policies[k], config.p_values[pi], med, med / ref});
    }
  }
  return table;
}

void emit(const ResultTable& table, const std::string& directory) {
  namespace fs = std::filesystem;
  const fs::path dir(directory);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create output directory '" + directory +
                  "': " + ec.message());
  }
  using detail::format_double;

  const fs::path raw_path = dir / "raw.csv";
  auto raw = open_output(raw_path);
  raw << "policy,p,seed,total_flow_time,mean_flow_time,makespan\n";
  for (const auto& r : table.rows) {
    raw << to_string(r.policy) << ',' << format_double(r.p) << ',' << r.seed
        << ',' << format_double(r.total_flow_time) << ','
        << format_double(r.mean_flow_time) << ','
        << format_double(r.makespan) << '\n';
  }
  finish(raw, raw_path);

  const fs::path agg_path = dir / "aggregate.csv";
  auto agg = open_output(agg_path);
  agg << "policy,p,median_mean_flow_time,ratio_to_hesrpt\n";
  for (const auto& a : table.aggregates) {
    agg << to_string(a.policy) << ',' << format_double(a.p) << ','
        << format_double(a.median_mean_flow_time) << ','
        << format_double(a.ratio_to_hesrpt) << '\n';
  }
  finish(agg, agg_path);

  const fs::path plot_path = dir / "ratios.csv";
  auto plot = open_output(plot_path);
  plot << "policy";
  for (double p : table.p_values) plot << ',' << format_double(p);
  plot << '\n';
  for (PolicyKind kind : table.policies) {
    plot << to_string(kind);
    for (double p : table.p_values) {
      double ratio = kNaN;
      for (const auto& a : table.aggregates) {
        if (a.policy == kind && a.p == p) ratio = a.ratio_to_hesrpt;
      }
      plot << ',' << format_double(ratio);
    }
    plot << '\n';
  }
  finish(plot, plot_path);
}

}  // namespace parshare
