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

#include "parshare/types.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "parshare/errors.hpp"

namespace parshare {

namespace {

bool canonical_less(const JobState& a, const JobState& b) {
  if (a.remaining != b.remaining) return a.remaining > b.remaining;
  return a.id < b.id;
}

}  // namespace

JobSet::JobSet(std::vector<Job> jobs) : jobs_(std::move(jobs)) {
  std::unordered_set<JobId> seen;
  for (const auto& job : jobs_) {
    if (!(job.size > 0.0) || !std::isfinite(job.size)) {
      throw InvalidInput("job " + std::to_string(job.id) +
                         " must have a positive finite size");
    }
    if (!seen.insert(job.id).second) {
      throw InvalidInput("duplicate job id " + std::to_string(job.id));
    }
  }
}

JobSet JobSet::FromSizes(std::span<const double> sizes) {
  std::vector<Job> jobs;
  jobs.reserve(sizes.size());
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    jobs.push_back({static_cast<JobId>(i), sizes[i]});
  }
  return JobSet(std::move(jobs));
}

std::vector<double> JobSet::sorted_sizes_descending() const {
  std::vector<double> sizes;
  sizes.reserve(jobs_.size());
  for (const auto& job : jobs_) sizes.push_back(job.size);
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  return sizes;
}

SystemState::SystemState(double time, std::vector<JobState> remaining,
                         double n_servers, SpeedupFunction speedup)
    : time_(time),
      jobs_(std::move(remaining)),
      n_servers_(n_servers),
      speedup_(speedup) {
  if (!(time >= 0.0)) throw InvalidInput("state time must be nonnegative");
  if (!(n_servers > 0.0) || !std::isfinite(n_servers)) {
    throw InvalidInput("server count must be positive and finite");
  }
  for (const auto& job : jobs_) {
    if (!(job.remaining > 0.0)) {
      throw InvalidInput("remaining size of job " + std::to_string(job.id) +
                         " must be positive");
    }
  }
  std::sort(jobs_.begin(), jobs_.end(), canonical_less);
  for (std::size_t i = 1; i < jobs_.size(); ++i) {
    if (jobs_[i].id == jobs_[i - 1].id) {
      throw InvalidInput("duplicate job id " + std::to_string(jobs_[i].id));
    }
  }
}

std::vector<JobState> SystemState::smallest_first() const {
  std::vector<JobState> out(jobs_.begin(), jobs_.end());
  std::sort(out.begin(), out.end(), [](const JobState& a, const JobState& b) {
    if (a.remaining != b.remaining) return a.remaining < b.remaining;
    return a.id < b.id;
  });
  return out;
}

AllocationVector::AllocationVector(std::vector<Share> shares)
    : shares_(std::move(shares)) {
  for (const auto& s : shares_) {
    if (!(s.theta >= 0.0 && s.theta <= 1.0 + 1e-12)) {
      throw InvalidInput("share of job " + std::to_string(s.id) +
                         " must lie in [0, 1]");
    }
  }
}

double AllocationVector::total() const {
  double sum = 0.0;
  for (const auto& s : shares_) sum += s.theta;
  return sum;
}

double AllocationVector::theta_of(JobId id) const {
  for (const auto& s : shares_) {
    if (s.id == id) return s.theta;
  }
  throw InvalidInput("job " + std::to_string(id) + " has no share");
}

bool AllocationVector::covers(const SystemState& state) const {
  if (shares_.size() != state.size()) return false;
  std::unordered_set<JobId> ids;
  for (const auto& s : shares_) ids.insert(s.id);
  if (ids.size() != shares_.size()) return false;
  for (const auto& job : state.jobs()) {
    if (!ids.contains(job.id)) return false;
  }
  return true;
}

}  // namespace parshare
