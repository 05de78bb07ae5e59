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
#include <span>
#include <string>
#include <vector>

namespace parshare {

/// Service rate of a job as a function of the (possibly fractional) number
/// of servers it holds. Rates are normalized so that one server runs at 1.
///
/// Two families are supported. PowerLaw is s(k) = k^p with 0 < p < 1 and is
/// the only family the closed-form policies accept. Amdahl is
/// s(k) = 1 / ((1 - f) + f / k) with 0 < f < 1 and is usable by the
/// simulator and the brute-force oracle.
///
/// Note that for k < 1 a power law yields s(k) > k: a fraction of a server
/// "runs faster" than that fraction of work. This is a property of the
/// continuously divisible model, not a bug.
class SpeedupFunction {
 public:
  enum class Kind { kPowerLaw, kAmdahl };

  static SpeedupFunction PowerLaw(double p);
  static SpeedupFunction Amdahl(double f);

  Kind kind() const { return kind_; }
  bool is_power_law() const { return kind_ == Kind::kPowerLaw; }

  // Throws InvalidInput when called on the wrong family.
  double exponent() const;
  double parallel_fraction() const;

  double operator()(double k) const;

  std::string ToString() const;

 private:
  SpeedupFunction(Kind kind, double param) : kind_(kind), param_(param) {}

  Kind kind_;
  double param_;
};

double evaluate(const SpeedupFunction& s, double k);

/// Parses "power:p=0.5", "powerlaw:p=0.5" or "amdahl:f=0.9".
SpeedupFunction parse_speedup(const std::string& text);

struct CurvePoint {
  double cores;
  double speedup;
};

/// A measured speedup curve: at least two points, cores strictly
/// increasing, and speedup(1) == 1 (within 1e-6) when a one-core point is
/// present.
class MeasuredCurve {
 public:
  static MeasuredCurve FromPoints(std::vector<CurvePoint> points);

  std::span<const CurvePoint> points() const { return points_; }

 private:
  explicit MeasuredCurve(std::vector<CurvePoint> points)
      : points_(std::move(points)) {}

  std::vector<CurvePoint> points_;
};

// CSV with header `cores,speedup`.
MeasuredCurve read_curve_csv(std::istream& in);
MeasuredCurve read_curve_csv_file(const std::string& path);

struct PowerLawFit {
  SpeedupFunction speedup;
  double p;
  bool clamped;  // raw slope fell outside [1e-6, 1 - 1e-6]
};

/// Least-squares fit of log(speedup) = p * log(cores), slope through the
/// origin.
PowerLawFit fit_power_law(const MeasuredCurve& curve);

}  // namespace parshare
