# Copyright 2026 The parshare Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#  http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Malleable job scheduling on concave speedup curves."""

from ._core import (
    ContractViolation,
    InvalidInput,
    IoError,
    LivelockError,
    Speedup,
    UnsupportedSize,
    fit_power_law,
    grid_search_two_jobs,
    helrpt_allocation,
    helrpt_makespan,
    hesrpt_allocation,
    hesrpt_total_flow_time,
    sample_pareto,
    scale_free_constants,
    simulate,
)

__all__ = [
    "ContractViolation",
    "InvalidInput",
    "IoError",
    "LivelockError",
    "Speedup",
    "UnsupportedSize",
    "fit_power_law",
    "grid_search_two_jobs",
    "helrpt_allocation",
    "helrpt_makespan",
    "hesrpt_allocation",
    "hesrpt_total_flow_time",
    "sample_pareto",
    "scale_free_constants",
    "simulate",
]

__version__ = "0.1.0"
