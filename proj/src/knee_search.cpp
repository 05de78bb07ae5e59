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

#include <limits>

#include "parshare/errors.hpp"
#include "parshare/policies.hpp"
#include "parshare/simulator.hpp"

namespace parshare {

KneeSearchResult knee_alpha_search(const JobSet& jobs, double p,
                                   double n_servers,
                                   std::optional<std::int64_t> granularity,
                                   std::span<const double> alpha_grid) {
  if (alpha_grid.empty()) throw InvalidInput("KNEE alpha grid is empty");
  const auto speedup = SpeedupFunction::PowerLaw(p);
  KneeSearchResult best{0.0, std::numeric_limits<double>::infinity()};
  for (double alpha : alpha_grid) {
    PolicyParams params;
    params.alpha = alpha;
    params.granularity = granularity;
    const double flow =
        run(make_policy(PolicyKind::kKNEE, params), jobs, n_servers, speedup)
            .total_flow_time;
    if (flow < best.best_total_flow_time ||
        (flow == best.best_total_flow_time && alpha < best.best_alpha)) {
      best = {alpha, flow};
    }
  }
  return best;
}

}  // namespace parshare
