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

#include "parshare/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "csv_util.hpp"
#include "parshare/errors.hpp"

namespace parshare {

namespace {

constexpr std::int64_t kMaxDefaultGranularity = 1'000'000;
// Knees past this many grains are reported as this many.
constexpr std::int64_t kMaxKnee = std::int64_t{1} << 50;

void check_exponent(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw InvalidInput("speedup exponent must lie in (0, 1), got " +
                       detail::format_double(p));
  }
}

void check_sizes(std::span<const double> sizes) {
  if (sizes.empty()) throw InvalidInput("job list is empty");
  for (double x : sizes) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw InvalidInput("job sizes must be positive and finite");
    }
  }
}

double state_exponent(const SystemState& state, const char* policy) {
  if (!state.speedup().is_power_law()) {
    throw InvalidInput(std::string(policy) +
                       " is defined only for power-law speedups");
  }
  return state.speedup().exponent();
}

AllocationVector from_canonical(const SystemState& state,
                                const std::vector<double>& thetas) {
  std::vector<Share> shares;
  shares.reserve(state.size());
  const auto jobs = state.jobs();
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    shares.push_back({jobs[i].id, thetas[i]});
  }
  return AllocationVector(std::move(shares));
}

// Grants in canonical order -> fractions of the grain pool.
AllocationVector from_grains(const SystemState& state,
                             const std::vector<std::int64_t>& grains,
                             std::int64_t granularity) {
  std::vector<double> thetas(grains.size());
  const double g = static_cast<double>(granularity);
  for (std::size_t i = 0; i < grains.size(); ++i) {
    thetas[i] = static_cast<double>(grains[i]) / g;
  }
  return from_canonical(state, thetas);
}

// Positions in canonical order, smallest remaining first, ties by id.
std::vector<std::size_t> smallest_first_positions(const SystemState& state) {
  const auto jobs = state.jobs();
  std::vector<std::size_t> idx(jobs.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (jobs[a].remaining != jobs[b].remaining) {
      return jobs[a].remaining < jobs[b].remaining;
    }
    return jobs[a].id < jobs[b].id;
  });
  return idx;
}

void distribute_leftover(std::vector<std::int64_t>& grains,
                         const std::vector<std::size_t>& order,
                         std::int64_t leftover) {
  if (leftover <= 0 || order.empty()) return;
  const auto m = static_cast<std::int64_t>(order.size());
  const std::int64_t each = leftover / m;
  const std::int64_t extra = leftover % m;
  for (std::int64_t r = 0; r < m; ++r) {
    grains[order[static_cast<std::size_t>(r)]] += each + (r < extra ? 1 : 0);
  }
}

// Grain count in [1, pool] maximizing s(k)^2 / k, ties to the smaller count.
class HellGrainChooser {
 public:
  HellGrainChooser(const SpeedupFunction& s, double n_servers,
                   std::int64_t granularity)
      : speedup_(s) {
    if (s.is_power_law()) {
      exponent_sign_ = 2.0 * s.exponent() - 1.0;
      return;
    }
    // General concave speedup: prefix argmax of the ratio over grain counts.
    const double grain = n_servers / static_cast<double>(granularity);
    best_.resize(static_cast<std::size_t>(granularity) + 1, 1);
    double best_value = -1.0;
    std::int64_t best_g = 1;
    for (std::int64_t g = 1; g <= granularity; ++g) {
      const double k = static_cast<double>(g) * grain;
      const double rate = s(k);
      const double value = (rate / k) * rate;
      if (value > best_value) {
        best_value = value;
        best_g = g;
      }
      best_[static_cast<std::size_t>(g)] = best_g;
    }
  }

  std::int64_t best(std::int64_t pool) const {
    if (speedup_.is_power_law()) {
      return exponent_sign_ > 0.0 ? pool : 1;
    }
    return best_[static_cast<std::size_t>(pool)];
  }

 private:
  SpeedupFunction speedup_;
  double exponent_sign_ = 0.0;
  std::vector<std::int64_t> best_;
};

}  // namespace

std::vector<double> hesrpt_allocation(std::size_t m, double p) {
  if (m == 0) throw InvalidInput("heSRPT needs at least one job");
  check_exponent(p);
  const double c = 1.0 / (1.0 - p);
  const double md = static_cast<double>(m);
  std::vector<double> theta(m);
  double partial = 0.0;
  for (std::size_t i = 1; i < m; ++i) {
    const double id = static_cast<double>(i);
    const double upper = std::pow(id / md, c);
    // upper * (1 - ((i-1)/i)^c), without cancellation.
    theta[i - 1] =
        i == 1 ? upper : upper * -std::expm1(c * std::log1p(-1.0 / id));
    partial += theta[i - 1];
  }
  theta[m - 1] = 1.0 - partial;
  return theta;
}

ScaleFreeConstants scale_free_constants(std::size_t M, double p) {
  if (M == 0) throw InvalidInput("need at least one job");
  check_exponent(p);
  const double c = 1.0 / (1.0 - p);
  ScaleFreeConstants out;
  out.omega.resize(M, 0.0);
  for (std::size_t k = 2; k <= M; ++k) {
    const double km1 = static_cast<double>(k - 1);
    out.omega[k - 1] = 1.0 / std::expm1(c * std::log1p(1.0 / km1));
  }
  return out;
}

double flow_time_coefficient(std::size_t k, double p) {
  if (k == 0) throw InvalidInput("rank starts at 1");
  check_exponent(p);
  if (k == 1) return 1.0;
  const double c = 1.0 / (1.0 - p);
  const double km1 = static_cast<double>(k - 1);
  const double omega = 1.0 / std::expm1(c * std::log1p(1.0 / km1));
  return static_cast<double>(k) * std::pow(1.0 + omega, p) -
         km1 * std::pow(omega, p);
}

double hesrpt_total_flow_time(std::span<const double> sizes_descending,
                              double p, double n_servers) {
  check_sizes(sizes_descending);
  check_exponent(p);
  if (!(n_servers > 0.0)) throw InvalidInput("server count must be positive");
  for (std::size_t i = 1; i < sizes_descending.size(); ++i) {
    if (sizes_descending[i] > sizes_descending[i - 1]) {
      throw InvalidInput("sizes must be sorted in descending order");
    }
  }
  double total = 0.0;
  for (std::size_t k = 1; k <= sizes_descending.size(); ++k) {
    total += sizes_descending[k - 1] * flow_time_coefficient(k, p);
  }
  return total / std::pow(n_servers, p);
}

std::vector<double> helrpt_allocation(std::span<const double> sizes,
                                      double p) {
  check_sizes(sizes);
  check_exponent(p);
  const double largest = *std::max_element(sizes.begin(), sizes.end());
  std::vector<double> weights(sizes.size());
  double total = 0.0;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    weights[i] = std::pow(sizes[i] / largest, 1.0 / p);
    total += weights[i];
  }
  for (double& w : weights) w /= total;
  return weights;
}

double helrpt_makespan(std::span<const double> sizes, double p,
                       double n_servers) {
  check_sizes(sizes);
  check_exponent(p);
  if (!(n_servers > 0.0)) throw InvalidInput("server count must be positive");
  const double largest = *std::max_element(sizes.begin(), sizes.end());
  double total = 0.0;
  for (double x : sizes) total += std::pow(x / largest, 1.0 / p);
  return largest * std::pow(total / n_servers, p);
}

AllocationVector hesrpt_allocation(const SystemState& state) {
  const double p = state_exponent(state, "heSRPT");
  return from_canonical(state, hesrpt_allocation(state.size(), p));
}

AllocationVector helrpt_allocation(const SystemState& state) {
  const double p = state_exponent(state, "heLRPT");
  std::vector<double> sizes;
  sizes.reserve(state.size());
  for (const auto& job : state.jobs()) sizes.push_back(job.remaining);
  return from_canonical(state, helrpt_allocation(sizes, p));
}

AllocationVector srpt_allocation(const SystemState& state) {
  if (state.size() == 0) throw InvalidInput("SRPT needs at least one job");
  const auto order = smallest_first_positions(state);
  std::vector<double> thetas(state.size(), 0.0);
  thetas[order.front()] = 1.0;
  return from_canonical(state, thetas);
}

AllocationVector equi_allocation(const SystemState& state) {
  if (state.size() == 0) throw InvalidInput("EQUI needs at least one job");
  const double share = 1.0 / static_cast<double>(state.size());
  return from_canonical(state, std::vector<double>(state.size(), share));
}

AllocationVector hell_allocation(const SystemState& state,
                                 std::int64_t granularity) {
  const auto m = static_cast<std::int64_t>(state.size());
  if (m == 0) throw InvalidInput("HELL needs at least one job");
  if (granularity < m) {
    throw InvalidInput("HELL granularity " + std::to_string(granularity) +
                       " is smaller than the job count " + std::to_string(m));
  }
  // The ratio factors as (s(k)^2 / k) / x_i: the same grain count is best
  // for every candidate, and the smallest remaining job always wins the
  // round.
  const HellGrainChooser chooser(state.speedup(), state.n_servers(),
                                 granularity);
  const auto order = smallest_first_positions(state);
  std::vector<std::int64_t> grains(state.size(), 0);
  std::int64_t pool = granularity;
  for (std::size_t pos : order) {
    if (pool == 0) break;
    const std::int64_t g = chooser.best(pool);
    grains[pos] = g;
    pool -= g;
  }
  distribute_leftover(grains, order, pool);
  return from_grains(state, grains, granularity);
}

std::int64_t knee_grains(double remaining, const SpeedupFunction& s,
                         double n_servers, double alpha,
                         std::int64_t granularity) {
  if (!(alpha > 0.0)) throw InvalidInput("KNEE alpha must be positive");
  if (granularity < 1) throw InvalidInput("granularity must be at least 1");
  const double grain = n_servers / static_cast<double>(granularity);

  // Run-time reduction from grain g to g + 1; decreasing in g because
  // 1/s is convex.
  auto gain_below_alpha = [&](std::int64_t g) {
    const double gd = static_cast<double>(g);
    double gain;
    if (s.is_power_law()) {
      const double p = s.exponent();
      gain = remaining * std::pow(gd * grain, -p) *
             -std::expm1(-p * std::log1p(1.0 / gd));
    } else {
      gain = remaining / s(gd * grain) - remaining / s((gd + 1.0) * grain);
    }
    return gain < alpha;
  };

  auto bisect = [&]() {
    std::int64_t hi = 1;
    while (hi < kMaxKnee && !gain_below_alpha(hi)) hi = std::min(kMaxKnee, 2 * hi);
    if (!gain_below_alpha(hi)) return kMaxKnee;
    std::int64_t lo = hi / 2;  // gain(lo) >= alpha, or lo == 0
    while (hi - lo > 1) {
      const std::int64_t mid = lo + (hi - lo) / 2;
      if (gain_below_alpha(mid)) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return hi;
  };

  if (!s.is_power_law()) return bisect();

  // gain(g) = x (g grain)^-p (1 - (1 + 1/g)^-p) is bracketed by
  // p x grain^-p (g+1)^-(p+1) and p x grain^-p g^-(p+1), so the knee sits
  // within a step of g0 below.
  const double p = s.exponent();
  const double g0 =
      std::pow(p * remaining * std::pow(grain, -p) / alpha, 1.0 / (1.0 + p));
  std::int64_t g = kMaxKnee;
  if (g0 < static_cast<double>(kMaxKnee)) {
    g = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(g0)));
  }
  constexpr int kMaxWalk = 64;
  int steps = 0;
  if (gain_below_alpha(g)) {
    while (g > 1 && gain_below_alpha(g - 1)) {
      --g;
      if (++steps > kMaxWalk) return bisect();
    }
  } else {
    while (g < kMaxKnee && !gain_below_alpha(g)) {
      ++g;
      if (++steps > kMaxWalk) return bisect();
    }
  }
  return g;
}

AllocationVector knee_allocation(const SystemState& state, double alpha,
                                 std::int64_t granularity) {
  if (state.size() == 0) throw InvalidInput("KNEE needs at least one job");
  if (!(alpha > 0.0)) throw InvalidInput("KNEE alpha must be positive");
  if (granularity < 1) throw InvalidInput("granularity must be at least 1");
  const auto jobs = state.jobs();
  std::vector<std::int64_t> knees(jobs.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    knees[i] = knee_grains(jobs[i].remaining, state.speedup(),
                           state.n_servers(), alpha, granularity);
  }
  std::vector<std::size_t> by_knee(jobs.size());
  for (std::size_t i = 0; i < by_knee.size(); ++i) by_knee[i] = i;
  std::sort(by_knee.begin(), by_knee.end(), [&](std::size_t a, std::size_t b) {
    if (knees[a] != knees[b]) return knees[a] < knees[b];
    return jobs[a].id < jobs[b].id;
  });

  std::vector<std::int64_t> grains(jobs.size(), 0);
  std::int64_t pool = granularity;
  for (std::size_t pos : by_knee) {
    if (pool == 0) break;
    grains[pos] = std::min(knees[pos], pool);
    pool -= grains[pos];
  }
  distribute_leftover(grains, smallest_first_positions(state), pool);
  return from_grains(state, grains, granularity);
}

std::int64_t default_granularity(double n_servers, std::size_t m) {
  const auto need = static_cast<std::int64_t>(std::max<std::size_t>(m, 1));
  if (n_servers == std::floor(n_servers) &&
      n_servers <= static_cast<double>(kMaxDefaultGranularity) &&
      n_servers >= static_cast<double>(need)) {
    return static_cast<std::int64_t>(n_servers);
  }
  return std::max(kMaxDefaultGranularity, need);
}

std::string to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kHeSRPT:
      return "hesrpt";
    case PolicyKind::kHeLRPT:
      return "helrpt";
    case PolicyKind::kSRPT:
      return "srpt";
    case PolicyKind::kEQUI:
      return "equi";
    case PolicyKind::kHELL:
      return "hell";
    case PolicyKind::kKNEE:
      return "knee";
  }
  return "?";
}

PolicyKind parse_policy_kind(const std::string& name) {
  for (auto kind : {PolicyKind::kHeSRPT, PolicyKind::kHeLRPT,
                    PolicyKind::kSRPT, PolicyKind::kEQUI, PolicyKind::kHELL,
                    PolicyKind::kKNEE}) {
    if (to_string(kind) == name) return kind;
  }
  throw InvalidInput("unknown policy '" + name + "'");
}

std::vector<PolicyKind> parse_policy_list(const std::string& csv) {
  std::vector<PolicyKind> out;
  for (const auto& name : detail::split(csv, ',')) {
    if (name.empty()) continue;
    const auto kind = parse_policy_kind(name);
    if (std::find(out.begin(), out.end(), kind) != out.end()) {
      throw InvalidInput("policy '" + name + "' listed twice");
    }
    out.push_back(kind);
  }
  if (out.empty()) throw InvalidInput("policy list is empty");
  return out;
}

Policy make_policy(PolicyKind kind, const PolicyParams& params) {
  switch (kind) {
    case PolicyKind::kHeSRPT:
      return [](const SystemState& s) { return hesrpt_allocation(s); };
    case PolicyKind::kHeLRPT:
      return [](const SystemState& s) { return helrpt_allocation(s); };
    case PolicyKind::kSRPT:
      return [](const SystemState& s) { return srpt_allocation(s); };
    case PolicyKind::kEQUI:
      return [](const SystemState& s) { return equi_allocation(s); };
    case PolicyKind::kHELL:
      return [g = params.granularity](const SystemState& s) {
        return hell_allocation(
            s, g.value_or(default_granularity(s.n_servers(), s.size())));
      };
    case PolicyKind::kKNEE:
      if (!(params.alpha > 0.0)) {
        throw InvalidInput("KNEE alpha must be positive");
      }
      return [g = params.granularity, alpha = params.alpha](
                 const SystemState& s) {
        return knee_allocation(
            s, alpha, g.value_or(default_granularity(s.n_servers())));
      };
  }
  throw InvalidInput("unknown policy kind");
}

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi >= lo) || count == 0) {
    throw InvalidInput("log_spaced needs 0 < lo <= hi and count >= 1");
  }
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = lo;
    return out;
  }
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) /
                              static_cast<double>(count - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

}  // namespace parshare
