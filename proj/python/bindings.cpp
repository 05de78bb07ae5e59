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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "parshare/errors.hpp"
#include "parshare/experiments.hpp"
#include "parshare/oracle.hpp"
#include "parshare/policies.hpp"
#include "parshare/simulator.hpp"
#include "parshare/speedup.hpp"

namespace py = pybind11;
using namespace parshare;

namespace {

std::vector<std::pair<JobId, double>> shares_of(const AllocationVector& a) {
  std::vector<std::pair<JobId, double>> out;
  for (const auto& s : a.shares()) out.emplace_back(s.id, s.theta);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Malleable job scheduling on concave speedup curves";

  py::register_exception<InvalidInput>(m, "InvalidInput", PyExc_ValueError);
  py::register_exception<ContractViolation>(m, "ContractViolation",
                                            PyExc_RuntimeError);
  py::register_exception<LivelockError>(m, "LivelockError", PyExc_RuntimeError);
  py::register_exception<UnsupportedSize>(m, "UnsupportedSize",
                                          PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<SpeedupFunction>(m, "Speedup")
      .def_static("power_law", &SpeedupFunction::PowerLaw, py::arg("p"))
      .def_static("amdahl", &SpeedupFunction::Amdahl, py::arg("f"))
      .def_static("parse", &parse_speedup, py::arg("text"))
      .def("__call__", &SpeedupFunction::operator(), py::arg("k"))
      .def_property_readonly("is_power_law", &SpeedupFunction::is_power_law)
      .def("__repr__", &SpeedupFunction::ToString);

  m.def(
      "fit_power_law",
      [](const std::vector<double>& cores, const std::vector<double>& speedups) {
        if (cores.size() != speedups.size()) {
          throw InvalidInput("cores and speedups differ in length");
        }
        std::vector<CurvePoint> pts;
        for (std::size_t i = 0; i < cores.size(); ++i) {
          pts.push_back({cores[i], speedups[i]});
        }
        const auto fit = fit_power_law(MeasuredCurve::FromPoints(std::move(pts)));
        return py::make_tuple(fit.p, fit.clamped);
      },
      py::arg("cores"), py::arg("speedups"),
      "Least-squares exponent through the origin in log-log space; returns "
      "(p, clamped).");

  m.def("hesrpt_allocation",
        py::overload_cast<std::size_t, double>(&hesrpt_allocation),
        py::arg("m"), py::arg("p"));
  m.def("scale_free_constants",
        [](std::size_t M, double p) { return scale_free_constants(M, p).omega; },
        py::arg("M"), py::arg("p"));
  m.def("hesrpt_total_flow_time",
        [](const std::vector<double>& sizes, double p, double n) {
          return hesrpt_total_flow_time(sizes, p, n);
        },
        py::arg("sizes_descending"), py::arg("p"), py::arg("n_servers"));
  m.def("helrpt_allocation",
        [](const std::vector<double>& sizes, double p) {
          return helrpt_allocation(sizes, p);
        },
        py::arg("sizes"), py::arg("p"));
  m.def("helrpt_makespan",
        [](const std::vector<double>& sizes, double p, double n) {
          return helrpt_makespan(sizes, p, n);
        },
        py::arg("sizes"), py::arg("p"), py::arg("n_servers"));

  m.def(
      "simulate",
      [](const std::string& policy, const std::vector<double>& sizes,
         const SpeedupFunction& speedup, double n_servers, double alpha,
         std::optional<std::int64_t> granularity, double beta) {
        PolicyParams params;
        params.alpha = alpha;
        params.granularity = granularity;
        const auto p = make_policy(parse_policy_kind(policy), params);
        const auto t =
            scaled_run(p, JobSet::FromSizes(sizes), n_servers, speedup, beta);
        py::dict out;
        out["total_flow_time"] = t.total_flow_time;
        out["mean_flow_time"] = t.mean_flow_time;
        out["makespan"] = t.makespan;
        out["completion_order"] = t.completion_order;
        std::vector<double> times(sizes.size());
        for (const auto& d : t.departures) {
          times[static_cast<std::size_t>(d.id)] = d.completion_time;
        }
        out["completion_times"] = times;
        py::list phases;
        for (const auto& ph : t.phases) {
          phases.append(py::make_tuple(ph.start, ph.end, shares_of(ph.allocation)));
        }
        out["phases"] = phases;
        return out;
      },
      py::arg("policy"), py::arg("sizes"), py::arg("speedup"),
      py::arg("n_servers"), py::arg("alpha") = 1.0,
      py::arg("granularity") = std::nullopt, py::arg("beta") = 0.0,
      "Runs a named policy (hesrpt, helrpt, srpt, equi, hell, knee). Job i "
      "of `sizes` gets id i.");

  m.def(
      "grid_search_two_jobs",
      [](double x1, double x2, const SpeedupFunction& s, double n, double step) {
        const auto r = grid_search_two_jobs(x1, x2, s, n, step);
        py::list phases;
        for (const auto& a : r.best_allocation_per_phase) phases.append(shares_of(a));
        py::dict out;
        out["best_objective"] = r.best_objective;
        out["phases"] = phases;
        out["completion_order"] = r.completion_order;
        return out;
      },
      py::arg("x1"), py::arg("x2"), py::arg("speedup"), py::arg("n_servers"),
      py::arg("grid_step") = 0.005);

  m.def("sample_pareto", &sample_pareto, py::arg("shape"), py::arg("scale"),
        py::arg("count"), py::arg("seed"));
}
