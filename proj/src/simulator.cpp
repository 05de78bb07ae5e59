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

#include "parshare/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <unordered_map>

#include "csv_util.hpp"
#include "parshare/errors.hpp"

namespace parshare {

namespace {

constexpr double kDepartureTolerance = 1e-12;
constexpr double kOverAllocationSlack = 1e-9;

std::string describe(const SystemState& state) {
  std::string out = "t=" + detail::format_double(state.time()) + " jobs={";
  bool first = true;
  for (const auto& job : state.jobs()) {
    if (!first) out += ", ";
    first = false;
    out += std::to_string(job.id) + ":" + detail::format_double(job.remaining);
  }
  return out + "}";
}

Trajectory execute(const Policy& policy, const JobSet& jobs, double n_servers,
                   const SpeedupFunction& speedup, double beta) {
  if (jobs.empty()) throw InvalidInput("cannot simulate an empty job set");
  if (!(n_servers > 0.0) || !std::isfinite(n_servers)) {
    throw InvalidInput("server count must be positive and finite");
  }
  if (!(beta >= 0.0 && beta < 1.0)) {
    throw InvalidInput("idle fraction beta must lie in [0, 1)");
  }
  const double usable = 1.0 - beta;

  std::unordered_map<JobId, double> initial;
  std::vector<JobState> active;
  active.reserve(jobs.size());
  for (const auto& job : jobs.jobs()) {
    initial.emplace(job.id, job.size);
    active.push_back({job.id, job.size});
  }

  Trajectory traj;
  traj.phases.reserve(jobs.size());
  traj.departures.reserve(jobs.size());
  double now = 0.0;
  std::vector<double> rates;
  std::vector<double> thetas;
  std::vector<std::size_t> slot;

  while (!active.empty()) {
    SystemState state(now, active, n_servers, speedup);
    AllocationVector alloc = policy(state);
    const auto ordered = state.jobs();
    const auto shares = alloc.shares();

    // Shares lined up with the state's canonical order, so ties resolve
    // deterministically. Built-in policies already answer in that order.
    thetas.assign(ordered.size(), 0.0);
    slot.assign(shares.size(), 0);
    bool aligned = shares.size() == ordered.size();
    for (std::size_t i = 0; aligned && i < shares.size(); ++i) {
      aligned = shares[i].id == ordered[i].id;
      thetas[i] = shares[i].theta;
      slot[i] = i;
    }
    if (!aligned) {
      if (!alloc.covers(state)) {
        throw ContractViolation("policy allocation does not cover the "
                                "active jobs at " + describe(state));
      }
      std::unordered_map<JobId, std::size_t> position;
      for (std::size_t i = 0; i < ordered.size(); ++i) {
        position.emplace(ordered[i].id, i);
      }
      for (std::size_t i = 0; i < shares.size(); ++i) {
        slot[i] = position.at(shares[i].id);
        thetas[slot[i]] = shares[i].theta;
      }
    }
    if (alloc.total() > 1.0 + kOverAllocationSlack) {
      throw ContractViolation("policy allocated " +
                              detail::format_double(alloc.total()) +
                              " of the system at " + describe(state));
    }

    rates.assign(ordered.size(), 0.0);
    double step = std::numeric_limits<double>::infinity();
    std::size_t first = ordered.size();
    for (std::size_t i = 0; i < ordered.size(); ++i) {
      rates[i] = speedup(thetas[i] * usable * n_servers);
      if (rates[i] > 0.0) {
        const double t = ordered[i].remaining / rates[i];
        if (t < step) {
          step = t;
          first = i;
        }
      }
    }
    if (first == ordered.size()) {
      throw LivelockError("policy starves every remaining job at " +
                          describe(state));
    }

    Phase phase;
    phase.start = now;
    phase.end = now + step;
    phase.remaining_at_start.reserve(shares.size());
    for (std::size_t i = 0; i < shares.size(); ++i) {
      phase.remaining_at_start.push_back(ordered[slot[i]].remaining);
    }
    phase.allocation = std::move(alloc);
    traj.phases.push_back(std::move(phase));

    std::vector<JobState> survivors;
    std::vector<JobId> leaving;
    survivors.reserve(ordered.size());
    for (std::size_t i = 0; i < ordered.size(); ++i) {
      const JobId id = ordered[i].id;
      const double rem =
          i == first ? 0.0 : ordered[i].remaining - step * rates[i];
      if (rem <= kDepartureTolerance * initial.at(id)) {
        leaving.push_back(id);
      } else {
        survivors.push_back({id, rem});
      }
    }
    now += step;
    std::sort(leaving.begin(), leaving.end());
    for (JobId id : leaving) {
      traj.departures.push_back({id, now});
      traj.completion_order.push_back(id);
      traj.total_flow_time += now;
    }
    active = std::move(survivors);
  }

  traj.makespan = now;
  traj.mean_flow_time =
      traj.total_flow_time / static_cast<double>(jobs.size());
  return traj;
}

}  // namespace

double Trajectory::completion_time(JobId id) const {
  for (const auto& d : departures) {
    if (d.id == id) return d.completion_time;
  }
  throw InvalidInput("job " + std::to_string(id) + " never departed");
}

Trajectory run(const Policy& policy, const JobSet& jobs, double n_servers,
               const SpeedupFunction& speedup) {
  return execute(policy, jobs, n_servers, speedup, 0.0);
}

Trajectory scaled_run(const Policy& policy, const JobSet& jobs,
                      double n_servers, const SpeedupFunction& speedup,
                      double beta) {
  return execute(policy, jobs, n_servers, speedup, beta);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  out << "phase_start,phase_end,job_id,theta,remaining_at_start\n";
  for (const auto& phase : trajectory.phases) {
    const auto shares = phase.allocation.shares();
    for (std::size_t i = 0; i < shares.size(); ++i) {
      out << detail::format_double(phase.start) << ','
          << detail::format_double(phase.end) << ',' << shares[i].id << ','
          << detail::format_double(shares[i].theta) << ','
          << detail::format_double(phase.remaining_at_start[i]) << '\n';
    }
  }
}

void write_trajectory_csv_file(const std::string& path,
                               const Trajectory& trajectory) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_trajectory_csv(out, trajectory);
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

JobSet read_sizes_csv(std::istream& in) {
  const auto rows = detail::read_csv(in, {"size"});
  std::vector<double> sizes;
  sizes.reserve(rows.size());
  for (const auto& row : rows) {
    sizes.push_back(detail::parse_double(row[0], "size"));
  }
  if (sizes.empty()) throw InvalidInput("size file lists no jobs");
  return JobSet::FromSizes(sizes);
}

JobSet read_sizes_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open size file '" + path + "'");
  try {
    return read_sizes_csv(in);
  } catch (const InvalidInput& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

}  // namespace parshare
