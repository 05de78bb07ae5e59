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

#include "parshare/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "csv_util.hpp"
#include "parshare/errors.hpp"

namespace parshare {

namespace {

constexpr double kDepartureTolerance = 1e-12;
constexpr double kTieTolerance = 1e-12;

std::int64_t grid_units(double grid_step, double max_step) {
  if (!(grid_step > 0.0 && grid_step <= max_step)) {
    throw InvalidInput("grid step must lie in (0, " +
                       detail::format_double(max_step) + "]");
  }
  const double n = std::round(1.0 / grid_step);
  if (std::abs(n * grid_step - 1.0) > 1e-9) {
    throw InvalidInput("grid step must divide 1 evenly");
  }
  return static_cast<std::int64_t>(n);
}

// Lower objective wins; near-equal objectives fall back to the
// lexicographically smaller allocation sequence.
bool better(double cost, const std::vector<double>& key, double best_cost,
            const std::vector<double>& best_key) {
  if (!std::isfinite(best_cost)) return true;
  const double scale = std::max(std::abs(cost), std::abs(best_cost));
  if (cost < best_cost - kTieTolerance * scale) return true;
  if (cost > best_cost + kTieTolerance * scale) return false;
  return std::lexicographical_compare(key.begin(), key.end(),
                                      best_key.begin(), best_key.end());
}

// Shares reordered to follow `ids`.
AllocationVector in_order(const AllocationVector& alloc,
                          const std::vector<JobId>& ids) {
  std::vector<Share> shares;
  for (JobId id : ids) {
    for (const auto& s : alloc.shares()) {
      if (s.id == id) shares.push_back(s);
    }
  }
  return AllocationVector(std::move(shares));
}

struct OracleJob {
  JobId id;
  double remaining;
  double initial;
};

struct Plan {
  double cost = std::numeric_limits<double>::infinity();
  // Concatenated phase shares, the tie-break key.
  std::vector<double> key;
  std::vector<AllocationVector> phases;
  std::vector<JobId> order;
};

class SimplexSearch {
 public:
  SimplexSearch(const SpeedupFunction& s, double n_servers, std::int64_t units)
      : speedup_(s), n_servers_(n_servers), units_(units) {}

  // Best schedule for `jobs` starting now; cost is the sum of their
  // completion times measured from now.
  Plan solve(const std::vector<OracleJob>& jobs) const {
    if (jobs.size() == 1) {
      Plan plan;
      plan.cost = jobs[0].remaining / speedup_(n_servers_);
      plan.key = {1.0};
      plan.phases.emplace_back(std::vector<Share>{{jobs[0].id, 1.0}});
      plan.order = {jobs[0].id};
      return plan;
    }
    Plan best;
    std::vector<std::int64_t> parts(jobs.size(), 0);
    enumerate(jobs, parts, 0, units_, best);
    return best;
  }

 private:
  void enumerate(const std::vector<OracleJob>& jobs,
                 std::vector<std::int64_t>& parts, std::size_t index,
                 std::int64_t left, Plan& best) const {
    if (index + 1 == parts.size()) {
      parts[index] = left;
      evaluate(jobs, parts, best);
      return;
    }
    for (std::int64_t u = 0; u <= left; ++u) {
      parts[index] = u;
      enumerate(jobs, parts, index + 1, left - u, best);
    }
  }

  void evaluate(const std::vector<OracleJob>& jobs,
                const std::vector<std::int64_t>& parts, Plan& best) const {
    const std::size_t m = jobs.size();
    std::vector<double> thetas(m);
    std::vector<double> rates(m);
    double step = std::numeric_limits<double>::infinity();
    std::size_t first = m;
    for (std::size_t i = 0; i < m; ++i) {
      thetas[i] = static_cast<double>(parts[i]) / static_cast<double>(units_);
      rates[i] = speedup_(thetas[i] * n_servers_);
      if (rates[i] > 0.0 && jobs[i].remaining / rates[i] < step) {
        step = jobs[i].remaining / rates[i];
        first = i;
      }
    }
    std::vector<OracleJob> survivors;
    std::vector<JobId> leaving;
    for (std::size_t i = 0; i < m; ++i) {
      const double rem =
          i == first ? 0.0 : jobs[i].remaining - step * rates[i];
      if (rem <= kDepartureTolerance * jobs[i].initial) {
        leaving.push_back(jobs[i].id);
      } else {
        survivors.push_back({jobs[i].id, rem, jobs[i].initial});
      }
    }
    double cost = static_cast<double>(m) * step;
    Plan tail;
    if (!survivors.empty()) {
      tail = solve(survivors);
      cost += tail.cost;
    }
    std::vector<double> key = thetas;
    key.insert(key.end(), tail.key.begin(), tail.key.end());
    if (!better(cost, key, best.cost, best.key)) return;

    best.cost = cost;
    best.key = std::move(key);
    best.phases.clear();
    std::vector<Share> shares;
    for (std::size_t i = 0; i < m; ++i) shares.push_back({jobs[i].id, thetas[i]});
    best.phases.emplace_back(std::move(shares));
    best.phases.insert(best.phases.end(), tail.phases.begin(),
                       tail.phases.end());
    std::sort(leaving.begin(), leaving.end());
    best.order = leaving;
    best.order.insert(best.order.end(), tail.order.begin(), tail.order.end());
  }

  SpeedupFunction speedup_;
  double n_servers_;
  std::int64_t units_;
};

}  // namespace

GridSearchResult grid_search_two_jobs(double x1, double x2,
                                      const SpeedupFunction& speedup,
                                      double n_servers, double grid_step) {
  if (!(x1 >= x2 && x2 > 0.0)) {
    throw InvalidInput("grid_search_two_jobs needs x1 >= x2 > 0");
  }
  if (!(n_servers > 0.0)) throw InvalidInput("server count must be positive");
  const std::int64_t units = grid_units(grid_step, 0.01);
  const JobSet jobs({{0, x1}, {1, x2}});
  const std::vector<JobId> ids = {0, 1};

  GridSearchResult result;
  result.grid_step = grid_step;
  result.best_objective = std::numeric_limits<double>::infinity();
  std::vector<double> best_key;

  for (JobId first : ids) {
    for (std::int64_t u = 0; u <= units; ++u) {
      const double q = static_cast<double>(u) / static_cast<double>(units);
      const Policy policy = [first, q](const SystemState& state) {
        std::vector<Share> shares;
        for (const auto& job : state.jobs()) {
          if (state.size() == 1) {
            shares.push_back({job.id, 1.0});
          } else {
            shares.push_back({job.id, job.id == first ? q : 1.0 - q});
          }
        }
        return AllocationVector(std::move(shares));
      };
      const Trajectory traj = run(policy, jobs, n_servers, speedup);

      std::vector<AllocationVector> phases;
      std::vector<double> key;
      for (const auto& phase : traj.phases) {
        std::vector<JobId> present;
        for (JobId id : ids) {
          for (const auto& s : phase.allocation.shares()) {
            if (s.id == id) present.push_back(id);
          }
        }
        phases.push_back(in_order(phase.allocation, present));
        for (const auto& s : phases.back().shares()) key.push_back(s.theta);
      }
      if (better(traj.total_flow_time, key, result.best_objective, best_key)) {
        result.best_objective = traj.total_flow_time;
        result.best_allocation_per_phase = std::move(phases);
        result.completion_order = traj.completion_order;
        best_key = std::move(key);
      }
    }
  }
  return result;
}

GridSearchResult grid_search_small(const JobSet& jobs,
                                   const SpeedupFunction& speedup,
                                   double n_servers, double grid_step) {
  if (jobs.empty()) throw InvalidInput("grid search needs at least one job");
  if (jobs.size() > 3) {
    throw UnsupportedSize("grid search supports at most 3 jobs, got " +
                          std::to_string(jobs.size()));
  }
  if (!(n_servers > 0.0)) throw InvalidInput("server count must be positive");
  const std::int64_t units = grid_units(grid_step, 0.5);

  std::vector<OracleJob> start;
  for (const auto& job : jobs.jobs()) start.push_back({job.id, job.size, job.size});
  const SimplexSearch search(speedup, n_servers, units);
  Plan plan = search.solve(start);

  GridSearchResult result;
  result.best_allocation_per_phase = std::move(plan.phases);
  result.best_objective = plan.cost;
  result.grid_step = grid_step;
  result.completion_order = std::move(plan.order);
  return result;
}

Trajectory stepping_verify(const Policy& policy, const JobSet& jobs,
                           double n_servers, const SpeedupFunction& speedup,
                           double dt) {
  if (jobs.empty()) throw InvalidInput("cannot simulate an empty job set");
  if (!(dt > 0.0)) throw InvalidInput("time step must be positive");
  if (!(n_servers > 0.0)) throw InvalidInput("server count must be positive");

  std::unordered_map<JobId, double> initial;
  std::vector<JobState> active;
  for (const auto& job : jobs.jobs()) {
    initial.emplace(job.id, job.size);
    active.push_back({job.id, job.size});
  }

  Trajectory traj;
  std::int64_t steps = 0;
  while (!active.empty()) {
    const double now = static_cast<double>(steps) * dt;
    SystemState state(now, active, n_servers, speedup);
    AllocationVector alloc = policy(state);
    if (!alloc.covers(state)) {
      throw ContractViolation("policy allocation does not cover the active "
                              "jobs");
    }
    if (alloc.total() > 1.0 + 1e-9) {
      throw ContractViolation("policy over-allocated the system");
    }
    std::vector<JobState> current(state.jobs().begin(), state.jobs().end());
    std::vector<double> rates(current.size());
    bool any = false;
    for (std::size_t i = 0; i < current.size(); ++i) {
      rates[i] = speedup(alloc.theta_of(current[i].id) * n_servers);
      any = any || rates[i] > 0.0;
    }
    if (!any) throw LivelockError("policy starves every remaining job");

    Phase phase;
    phase.start = now;
    for (const auto& s : alloc.shares()) {
      for (const auto& job : current) {
        if (job.id == s.id) phase.remaining_at_start.push_back(job.remaining);
      }
    }
    phase.allocation = std::move(alloc);

    std::vector<JobId> leaving;
    while (leaving.empty()) {
      ++steps;
      for (std::size_t i = 0; i < current.size(); ++i) {
        current[i].remaining -= dt * rates[i];
        if (current[i].remaining <=
            kDepartureTolerance * initial.at(current[i].id)) {
          leaving.push_back(current[i].id);
        }
      }
    }
    const double end = static_cast<double>(steps) * dt;
    phase.end = end;
    traj.phases.push_back(std::move(phase));

    std::sort(leaving.begin(), leaving.end());
    for (JobId id : leaving) {
      traj.departures.push_back({id, end});
      traj.completion_order.push_back(id);
      traj.total_flow_time += end;
    }
    active.clear();
    for (const auto& job : current) {
      if (std::find(leaving.begin(), leaving.end(), job.id) == leaving.end()) {
        active.push_back(job);
      }
    }
  }
  traj.makespan = static_cast<double>(steps) * dt;
  traj.mean_flow_time =
      traj.total_flow_time / static_cast<double>(jobs.size());
  return traj;
}

}  // namespace parshare
