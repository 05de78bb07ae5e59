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

#include "parshare/speedup.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "csv_util.hpp"
#include "parshare/errors.hpp"

namespace parshare {

namespace {

constexpr double kMinFitExponent = 1e-6;
constexpr double kMaxFitExponent = 1.0 - 1e-6;
constexpr double kNormalizationTolerance = 1e-6;

}  // namespace

SpeedupFunction SpeedupFunction::PowerLaw(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw InvalidInput("power-law exponent must lie in (0, 1), got " +
                       detail::format_double(p));
  }
  return SpeedupFunction(Kind::kPowerLaw, p);
}

SpeedupFunction SpeedupFunction::Amdahl(double f) {
  if (!(f > 0.0 && f < 1.0)) {
    throw InvalidInput("Amdahl parallel fraction must lie in (0, 1), got " +
                       detail::format_double(f));
  }
  return SpeedupFunction(Kind::kAmdahl, f);
}

double SpeedupFunction::exponent() const {
  if (kind_ != Kind::kPowerLaw) {
    throw InvalidInput("speedup " + ToString() + " is not a power law");
  }
  return param_;
}

double SpeedupFunction::parallel_fraction() const {
  if (kind_ != Kind::kAmdahl) {
    throw InvalidInput("speedup " + ToString() + " is not an Amdahl curve");
  }
  return param_;
}

double SpeedupFunction::operator()(double k) const {
  if (k <= 0.0) return 0.0;
  switch (kind_) {
    case Kind::kPowerLaw:
      return std::pow(k, param_);
    case Kind::kAmdahl:
      return 1.0 / ((1.0 - param_) + param_ / k);
  }
  return 0.0;
}

std::string SpeedupFunction::ToString() const {
  switch (kind_) {
    case Kind::kPowerLaw:
      return "power:p=" + detail::format_double(param_);
    case Kind::kAmdahl:
      return "amdahl:f=" + detail::format_double(param_);
  }
  return "?";
}

double evaluate(const SpeedupFunction& s, double k) { return s(k); }

SpeedupFunction parse_speedup(const std::string& text) {
  const auto colon = text.find(':');
  const std::string family = text.substr(0, colon);
  if (colon == std::string::npos) {
    throw InvalidInput("speedup spec '" + text +
                       "' must look like power:p=<x> or amdahl:f=<x>");
  }
  const std::string rest = text.substr(colon + 1);
  const auto eq = rest.find('=');
  if (eq == std::string::npos) {
    throw InvalidInput("speedup spec '" + text + "' is missing '='");
  }
  const std::string key = rest.substr(0, eq);
  const double value = detail::parse_double(rest.substr(eq + 1), "speedup");
  if ((family == "power" || family == "powerlaw") && key == "p") {
    return SpeedupFunction::PowerLaw(value);
  }
  if (family == "amdahl" && key == "f") {
    return SpeedupFunction::Amdahl(value);
  }
  throw InvalidInput("unknown speedup spec '" + text + "'");
}

MeasuredCurve MeasuredCurve::FromPoints(std::vector<CurvePoint> points) {
  if (points.size() < 2) {
    throw InvalidInput("a measured curve needs at least 2 points");
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& pt = points[i];
    if (!(pt.cores > 0.0) || !(pt.speedup > 0.0) || !std::isfinite(pt.cores) ||
        !std::isfinite(pt.speedup)) {
      throw InvalidInput("curve points must have positive finite cores and "
                         "speedup");
    }
    if (i > 0 && !(pt.cores > points[i - 1].cores)) {
      throw InvalidInput("curve cores must be strictly increasing (row " +
                         std::to_string(i + 1) + ")");
    }
    if (pt.cores == 1.0 &&
        std::abs(pt.speedup - 1.0) > kNormalizationTolerance) {
      throw InvalidInput("curve must be normalized so that speedup(1) = 1");
    }
  }
  return MeasuredCurve(std::move(points));
}

MeasuredCurve read_curve_csv(std::istream& in) {
  const auto rows = detail::read_csv(in, {"cores", "speedup"});
  std::vector<CurvePoint> points;
  points.reserve(rows.size());
  for (const auto& row : rows) {
    points.push_back({detail::parse_double(row[0], "cores"),
                      detail::parse_double(row[1], "speedup")});
  }
  return MeasuredCurve::FromPoints(std::move(points));
}

MeasuredCurve read_curve_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open curve file '" + path + "'");
  try {
    return read_curve_csv(in);
  } catch (const InvalidInput& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

PowerLawFit fit_power_law(const MeasuredCurve& curve) {
  double sxy = 0.0;
  double sxx = 0.0;
  for (const auto& pt : curve.points()) {
    const double lx = std::log(pt.cores);
    sxy += lx * std::log(pt.speedup);
    sxx += lx * lx;
  }
  if (!(sxx > 0.0)) {
    throw InvalidInput("degenerate curve: no spread in log(cores)");
  }
  double p = sxy / sxx;
  bool clamped = false;
  if (!(p >= kMinFitExponent)) {
    p = kMinFitExponent;
    clamped = true;
  } else if (p > kMaxFitExponent) {
    p = kMaxFitExponent;
    clamped = true;
  }
  return {SpeedupFunction::PowerLaw(p), p, clamped};
}

}  // namespace parshare
