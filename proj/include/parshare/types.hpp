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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "parshare/speedup.hpp"

namespace parshare {

using JobId = std::int64_t;

struct Job {
  JobId id;
  double size;
};

/// The jobs of one instance. Sizes are positive and ids unique; the order
/// given at construction is kept.
class JobSet {
 public:
  explicit JobSet(std::vector<Job> jobs);

  // Ids 0..n-1 in the given order.
  static JobSet FromSizes(std::span<const double> sizes);

  std::span<const Job> jobs() const { return jobs_; }
  std::size_t size() const { return jobs_.size(); }
  bool empty() const { return jobs_.empty(); }

  // Sizes in descending order, the indexing used by the closed forms.
  std::vector<double> sorted_sizes_descending() const;

 private:
  std::vector<Job> jobs_;
};

struct JobState {
  JobId id;
  double remaining;
};

/// Snapshot handed to a policy: the m(t) jobs still present, kept in
/// canonical order (descending remaining size, ties by ascending id), so
/// jobs()[0] is rank 1, the largest job.
class SystemState {
 public:
  SystemState(double time, std::vector<JobState> remaining, double n_servers,
              SpeedupFunction speedup);

  double time() const { return time_; }
  std::span<const JobState> jobs() const { return jobs_; }
  std::size_t size() const { return jobs_.size(); }
  double n_servers() const { return n_servers_; }
  const SpeedupFunction& speedup() const { return speedup_; }

  // Ascending remaining size, ties by ascending id.
  std::vector<JobState> smallest_first() const;

 private:
  double time_;
  std::vector<JobState> jobs_;
  double n_servers_;
  SpeedupFunction speedup_;
};

struct Share {
  JobId id;
  double theta;
};

/// Fractions of the server pool per job. Each theta lies in [0, 1] and the
/// total is at most 1 + 1e-12.
class AllocationVector {
 public:
  AllocationVector() = default;
  explicit AllocationVector(std::vector<Share> shares);

  std::span<const Share> shares() const { return shares_; }
  std::size_t size() const { return shares_.size(); }
  double total() const;
  // Throws InvalidInput if the id is absent.
  double theta_of(JobId id) const;

  // True when the vector names exactly the ids present in `state`.
  bool covers(const SystemState& state) const;

 private:
  std::vector<Share> shares_;
};

using Policy = std::function<AllocationVector(const SystemState&)>;

}  // namespace parshare
