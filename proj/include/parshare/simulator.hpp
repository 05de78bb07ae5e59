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

#include <iosfwd>
#include <string>
#include <vector>

#include "parshare/types.hpp"

namespace parshare {

struct Phase {
  double start;
  double end;
  AllocationVector allocation;
  // Aligned with allocation.shares().
  std::vector<double> remaining_at_start;
};

struct Departure {
  JobId id;
  double completion_time;
};

/// Record of one execution. Phases are contiguous from 0 to the makespan
/// and the allocation is constant inside each; departures are listed in
/// completion order (simultaneous ones by ascending id).
struct Trajectory {
  std::vector<Phase> phases;
  std::vector<Departure> departures;
  std::vector<JobId> completion_order;
  double total_flow_time = 0.0;
  double mean_flow_time = 0.0;
  double makespan = 0.0;

  // Throws InvalidInput for an unknown id.
  double completion_time(JobId id) const;
};

/// Event-driven execution: the policy is queried once per phase, each job
/// drains at rate s(theta * N), and the phase ends at the next departure.
/// Jobs within 1e-12 of their initial size of finishing leave together.
///
/// Throws LivelockError if every remaining job gets a zero share and
/// ContractViolation if the policy over-allocates (sum > 1 + 1e-9) or
/// names the wrong jobs.
Trajectory run(const Policy& policy, const JobSet& jobs, double n_servers,
               const SpeedupFunction& speedup);

/// As run, with every share multiplied by (1 - beta) before use, leaving a
/// beta fraction of the system idle. 0 <= beta < 1.
Trajectory scaled_run(const Policy& policy, const JobSet& jobs,
                      double n_servers, const SpeedupFunction& speedup,
                      double beta);

/// One row per job per phase:
/// `phase_start,phase_end,job_id,theta,remaining_at_start`.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);
void write_trajectory_csv_file(const std::string& path,
                               const Trajectory& trajectory);

// Job-size files: header `size`, one positive real per row. Ids are
// assigned 0..n-1 in file order.
JobSet read_sizes_csv(std::istream& in);
JobSet read_sizes_csv_file(const std::string& path);

}  // namespace parshare
