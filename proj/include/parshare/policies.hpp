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
#include <span>
#include <string>
#include <vector>

#include "parshare/types.hpp"

namespace parshare {

// Closed forms. Ranks follow the descending-size convention: index 0 is the
// largest job (rank 1), index m-1 the smallest. The exponent p must lie in
// (0, 1); these functions have no meaning for non-power-law speedups.

/// Optimal flow-time shares when m jobs remain. Entry i-1 is
/// (i/m)^(1/(1-p)) - ((i-1)/m)^(1/(1-p)); the last entry is taken as one
/// minus the others so the vector sums to 1. Depends only on (m, p).
///
/// With p close to 1 the leading shares can underflow to exactly 0.
std::vector<double> hesrpt_allocation(std::size_t m, double p);

struct ScaleFreeConstants {
  std::vector<double> omega;  // omega[k-1] for k = 1..M; omega[0] == 0
};

ScaleFreeConstants scale_free_constants(std::size_t M, double p);

/// k * s(1 + omega_k) - (k - 1) * s(omega_k), the weight of the k-th largest
/// job in the optimal total flow time.
double flow_time_coefficient(std::size_t k, double p);

/// Optimal total flow time for sizes given in descending order. Unsorted
/// input is rejected rather than reordered.
double hesrpt_total_flow_time(std::span<const double> sizes_descending,
                              double p, double n_servers);

/// Makespan-optimal constant shares x_i^(1/p) / sum_j x_j^(1/p), in the
/// order the sizes were given.
std::vector<double> helrpt_allocation(std::span<const double> sizes, double p);

/// (sum_j x_j^(1/p))^p / N^p.
double helrpt_makespan(std::span<const double> sizes, double p,
                       double n_servers);

// State rules. Each returns a vector in the state's canonical order that
// covers exactly the jobs in the state.

AllocationVector hesrpt_allocation(const SystemState& state);
AllocationVector helrpt_allocation(const SystemState& state);
AllocationVector srpt_allocation(const SystemState& state);
AllocationVector equi_allocation(const SystemState& state);

/// HELL over a pool of `granularity` equal grains. Each round awards the
/// (job, grain count) pair maximizing efficiency / remaining run time,
/// i.e. (s(k)/k) / (x / s(k)) with k = g*N/G, and retires that job. Grains
/// left once every job has been served go round-robin, smallest job first.
/// Requires granularity >= m.
AllocationVector hell_allocation(const SystemState& state,
                                 std::int64_t granularity);

/// KNEE over a pool of `granularity` grains. A job's knee is the fewest
/// grains g at which one more grain would cut its run time by less than
/// alpha. Jobs are served smallest knee first (ties by id), each granted
/// its knee capped at the grains left; leftovers go round-robin, smallest
/// job first.
AllocationVector knee_allocation(const SystemState& state, double alpha,
                                 std::int64_t granularity);

/// Knee of a single job in grains of N / granularity, not capped by the
/// pool (saturates at 2^50).
std::int64_t knee_grains(double remaining, const SpeedupFunction& s,
                         double n_servers, double alpha,
                         std::int64_t granularity);

/// Grain count used when none is given: N if N is a whole number in
/// [max(m, 1), 10^6], otherwise 10^6 (and at least m).
std::int64_t default_granularity(double n_servers, std::size_t m = 1);

enum class PolicyKind { kHeSRPT, kHeLRPT, kSRPT, kEQUI, kHELL, kKNEE };

std::string to_string(PolicyKind kind);
PolicyKind parse_policy_kind(const std::string& name);
std::vector<PolicyKind> parse_policy_list(const std::string& csv);

struct PolicyParams {
  std::optional<std::int64_t> granularity;  // HELL and KNEE
  double alpha = 1.0;                       // KNEE only
};

Policy make_policy(PolicyKind kind, const PolicyParams& params = {});

struct KneeSearchResult {
  double best_alpha;
  double best_total_flow_time;
};

/// Simulates KNEE for every alpha in the grid and keeps the one with the
/// lowest total flow time (ties go to the smaller alpha).
KneeSearchResult knee_alpha_search(const JobSet& jobs, double p,
                                   double n_servers,
                                   std::optional<std::int64_t> granularity,
                                   std::span<const double> alpha_grid);

/// `count` points spaced evenly in log between lo and hi inclusive.
std::vector<double> log_spaced(double lo, double hi, std::size_t count);

}  // namespace parshare
