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

#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "parshare/errors.hpp"
#include "parshare/speedup.hpp"

using namespace parshare;

namespace {

MeasuredCurve synthetic_curve(double p, std::vector<double> cores,
                              double noise, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> jitter(-noise, noise);
  std::vector<CurvePoint> pts;
  for (double k : cores) {
    double v = std::pow(k, p);
    if (k != 1.0) v *= 1.0 + jitter(gen);
    pts.push_back({k, v});
  }
  return MeasuredCurve::FromPoints(std::move(pts));
}

}  // namespace

TEST_CASE("power law evaluation") {
  const auto s = SpeedupFunction::PowerLaw(0.5);
  CHECK(s(4.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(s(0.25) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(s(0.0) == 0.0);
  for (double p : {0.05, 0.3, 0.7, 0.99}) {
    CHECK(evaluate(SpeedupFunction::PowerLaw(p), 1.0) == 1.0);
  }
}

TEST_CASE("Amdahl evaluation") {
  const auto s = SpeedupFunction::Amdahl(0.9);
  // 1 / (0.1 + 0.9 / 10) = 1 / 0.19
  CHECK(s(10.0) == doctest::Approx(1.0 / 0.19).epsilon(1e-14));
  CHECK(s(10.0) == doctest::Approx(5.2632).epsilon(1e-4));
  CHECK(s(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s(0.0) == 0.0);
}

TEST_CASE("construction rejects out-of-range parameters") {
  for (double bad : {0.0, 1.0, -0.2, 1.5, std::nan("")}) {
    CHECK_THROWS_AS(SpeedupFunction::PowerLaw(bad), InvalidInput);
    CHECK_THROWS_AS(SpeedupFunction::Amdahl(bad), InvalidInput);
  }
  CHECK_THROWS_AS(SpeedupFunction::Amdahl(0.9).exponent(), InvalidInput);
  CHECK_THROWS_AS(SpeedupFunction::PowerLaw(0.9).parallel_fraction(),
                  InvalidInput);
}

TEST_CASE("parse_speedup") {
  CHECK(parse_speedup("power:p=0.5").exponent() == 0.5);
  CHECK(parse_speedup("amdahl:f=0.9").parallel_fraction() == 0.9);
  CHECK_THROWS_AS(parse_speedup("amdahl:p=0.9"), InvalidInput);
  CHECK_THROWS_AS(parse_speedup("linear"), InvalidInput);
  CHECK_THROWS_AS(parse_speedup("power:p=1"), InvalidInput);
}

TEST_CASE("shape properties over sampled points") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> log_k(std::log(1e-6), std::log(1e6));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::vector<SpeedupFunction> family = {
      SpeedupFunction::PowerLaw(0.05), SpeedupFunction::PowerLaw(0.5),
      SpeedupFunction::PowerLaw(0.99), SpeedupFunction::Amdahl(0.5),
      SpeedupFunction::Amdahl(0.9)};
  for (const auto& s : family) {
    for (int trial = 0; trial < 2000; ++trial) {
      double a = std::exp(log_k(gen));
      double b = std::exp(log_k(gen));
      if (a > b) std::swap(a, b);
      if (a == b) continue;
      CHECK(s(a) < s(b));
      const double lambda = unit(gen);
      const double mid = s(lambda * a + (1.0 - lambda) * b);
      const double chord = lambda * s(a) + (1.0 - lambda) * s(b);
      CHECK(mid >= chord - 1e-12 * std::max(1.0, chord));
    }
  }
}

TEST_CASE("power law is multiplicative and sublinear") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> log_k(std::log(1e-3), std::log(1e6));
  for (double p : {0.05, 0.3, 0.5, 0.9, 0.99}) {
    const auto s = SpeedupFunction::PowerLaw(p);
    for (int trial = 0; trial < 500; ++trial) {
      const double a = std::exp(log_k(gen));
      const double b = std::exp(log_k(gen));
      CHECK(s(a * b) == doctest::Approx(s(a) * s(b)).epsilon(1e-12));
      if (a >= 1.0) {
        CHECK(s(a) <= a);
      } else {
        CHECK(s(a) >= a);
      }
    }
  }
}

TEST_CASE("measured curve validation") {
  CHECK_THROWS_AS(MeasuredCurve::FromPoints({{1, 1}}), InvalidInput);
  CHECK_THROWS_AS(MeasuredCurve::FromPoints({{1, 1}, {1, 1}}), InvalidInput);
  CHECK_THROWS_AS(MeasuredCurve::FromPoints({{2, 1.5}, {1, 1}}), InvalidInput);
  CHECK_THROWS_AS(MeasuredCurve::FromPoints({{1, 1.1}, {2, 1.5}}),
                  InvalidInput);
  CHECK_THROWS_AS(MeasuredCurve::FromPoints({{1, 1}, {2, -1}}), InvalidInput);
  CHECK_NOTHROW(MeasuredCurve::FromPoints({{1, 1 + 5e-7}, {2, 1.5}}));
}

TEST_CASE("fit recovers noiseless power laws") {
  for (double p : {0.05, 0.3, 0.69, 0.82, 0.89, 0.99}) {
    const auto fit = fit_power_law(synthetic_curve(p, {1, 2, 4, 8, 16}, 0, 0));
    CHECK(fit.p == doctest::Approx(p).epsilon(1e-9));
    CHECK_FALSE(fit.clamped);
    // Different core spacing, same generator.
    const auto fit3 = fit_power_law(synthetic_curve(p, {1, 3, 9, 27}, 0, 0));
    CHECK(std::abs(fit3.p - p) < 1e-6);
  }
}

TEST_CASE("fit tolerates one percent noise") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto fit =
        fit_power_law(synthetic_curve(0.82, {1, 2, 4, 8, 16}, 0.01, seed));
    CHECK(std::abs(fit.p - 0.82) <= 0.02);
  }
}

TEST_CASE("fit clamps out-of-range slopes") {
  // Superlinear data.
  auto fit = fit_power_law(MeasuredCurve::FromPoints({{1, 1}, {2, 2.5}}));
  CHECK(fit.clamped);
  CHECK(fit.p == doctest::Approx(1.0 - 1e-6));
  // Slowdown with more cores.
  fit = fit_power_law(MeasuredCurve::FromPoints({{1, 1}, {4, 0.8}}));
  CHECK(fit.clamped);
  CHECK(fit.p == doctest::Approx(1e-6));
}

TEST_CASE("curve CSV") {
  std::istringstream good("cores,speedup\n1,1\n2,1.6245047927124710\n\n4,2.639\n");
  const auto curve = read_curve_csv(good);
  CHECK(curve.points().size() == 3);
  CHECK(curve.points()[1].speedup == doctest::Approx(1.6245047927124710));

  std::istringstream bad_header("core,speed\n1,1\n2,2\n");
  CHECK_THROWS_AS(read_curve_csv(bad_header), InvalidInput);
  std::istringstream bad_number("cores,speedup\n1,1\n2,abc\n");
  CHECK_THROWS_AS(read_curve_csv(bad_number), InvalidInput);
  CHECK_THROWS_AS(read_curve_csv_file("/nonexistent/curve.csv"), IoError);
}
