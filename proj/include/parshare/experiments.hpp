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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "parshare/policies.hpp"

namespace parshare {

/// Settings for one policy sweep. Seed i of n_seeds uses base_seed + i, and
/// the same job sizes are shared by every policy and p at that seed.
struct ExperimentConfig {
  double n_servers = 1'000'000.0;
  std::size_t n_jobs = 500;
  std::vector<double> p_values = {0.05, 0.3, 0.5, 0.9, 0.99};
  double pareto_shape = 1.5;
  double pareto_scale = 1.0;
  std::size_t n_seeds = 10;
  std::uint64_t base_seed = 42;
  std::vector<PolicyKind> policies = {PolicyKind::kHeSRPT, PolicyKind::kSRPT,
                                      PolicyKind::kEQUI, PolicyKind::kHELL,
                                      PolicyKind::kKNEE};
  // Empty means log-spaced over [1e-6, 1e3] * pareto_scale, 40 points.
  std::vector<double> knee_alpha_grid;
  std::optional<std::int64_t> hell_granularity;  // also used by KNEE
  std::string output_path = "results";

  // Throws InvalidInput on non-positive counts or p outside (0, 1).
  void validate() const;
  std::vector<double> effective_alpha_grid() const;
};

struct ResultRow {
  PolicyKind policy;
  double p;
  std::uint64_t seed;
  double total_flow_time;
  double mean_flow_time;
  double makespan;
  bool failed = false;
  std::string error;  // set when failed
};

struct AggregateRow {
  PolicyKind policy;
  double p;
  double median_mean_flow_time;
  double ratio_to_hesrpt;
};

struct ResultTable {
  std::vector<ResultRow> rows;            // policy-major, then p, then seed
  std::vector<AggregateRow> aggregates;   // policy-major, then p
  std::vector<PolicyKind> policies;
  std::vector<double> p_values;
};

/// Inverse-CDF Pareto draws, scale * U^(-1/shape). U comes from
/// std::mt19937_64 seeded with `seed`, as ((word >> 11) + 0.5) * 2^-53, so
/// U lies strictly inside (0, 1) and the stream is the same on every
/// platform.
std::vector<double> sample_pareto(double shape, double scale,
                                  std::size_t count, std::uint64_t seed);

double pareto_from_uniform(double u, double shape, double scale);

/// Runs every (policy, p, seed) cell and aggregates medians over seeds.
/// The ratio column divides by the heSRPT median at the same p; heSRPT is
/// evaluated for that purpose even when it is not among the listed
/// policies.
ResultTable run_matrix(const ExperimentConfig& config);

/// Writes raw.csv, aggregate.csv and ratios.csv (policy x p matrix of
/// ratios) under `directory`, creating it if needed.
void emit(const ResultTable& table, const std::string& directory);

double median(std::vector<double> values);

}  // namespace parshare
