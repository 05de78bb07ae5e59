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

#include <vector>

#include "parshare/simulator.hpp"
#include "parshare/types.hpp"

namespace parshare {

// Brute-force checks of the optimal policies at small scale. The searches
// only consider allocations that stay fixed between departures; for
// concave speedups nothing better exists, so a finite grid per phase
// covers the optimum up to grid resolution.

struct GridSearchResult {
  // One vector per phase of the minimizing schedule, over the jobs present
  // in that phase (input order).
  std::vector<AllocationVector> best_allocation_per_phase;
  double best_objective = 0.0;  // total flow time
  double grid_step = 0.0;
  std::vector<JobId> completion_order;
};

/// Two jobs, x1 >= x2 > 0, 0 < grid_step <= 0.01. Tries every first-phase
/// split q on the grid for either job finishing first, with the survivor
/// taking the whole system afterwards, each candidate run through the
/// simulator. Job ids are 0 (x1) and 1 (x2).
GridSearchResult grid_search_two_jobs(double x1, double x2,
                                      const SpeedupFunction& speedup,
                                      double n_servers, double grid_step);

/// Up to three jobs: enumerates a work-conserving simplex grid in every
/// phase, recursing on whichever jobs survive, so every completion order is
/// covered. Throws UnsupportedSize for more than three jobs.
GridSearchResult grid_search_small(const JobSet& jobs,
                                   const SpeedupFunction& speedup,
                                   double n_servers, double grid_step);

/// Explicit Euler cross-check of the event engine. Each step subtracts
/// dt * s(theta N); a job departs at the end of the step that exhausts it and
/// the policy is re-queried after every departure. Error is first order
/// in dt.
Trajectory stepping_verify(const Policy& policy, const JobSet& jobs,
                           double n_servers, const SpeedupFunction& speedup,
                           double dt);

}  // namespace parshare
