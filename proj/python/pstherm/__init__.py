# Copyright 2026 The pstherm Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Pseudothermalization circuit simulator and statistical verifier."""

import json

from ._core import (
    Circuit,
    __version__,
    apply_circuit,
    ccx_cost,
    cli,
    full_rank_bound,
    full_rank_sequential,
    generate,
    gf2_rank,
    haar_trace_distance,
    monte_carlo_full_rank,
    predicted_cost,
    premise_violations,
    sample_initial_copies,
    theorem1_pt,
    theorem2_pt,
)

__all__ = [
    "Circuit",
    "__version__",
    "apply_circuit",
    "ccx_cost",
    "cli",
    "full_rank_bound",
    "full_rank_sequential",
    "generate",
    "gf2_rank",
    "haar_trace_distance",
    "monte_carlo_full_rank",
    "predicted_cost",
    "premise_violations",
    "sample_initial_copies",
    "theorem1_pt",
    "theorem2_pt",
    "verify",
]


def verify(algorithm, n, t, k=None, alpha=None, m=None, p=None, trials=1000, tests=None, source="algorithm",
           seed=1):
    """Run the test battery and return the list of report dicts."""
    args = ["--seed", str(seed), "verify", "--algorithm", algorithm, "--n", str(n), "--t", str(t),
            "--trials", str(trials), "--source", source]
    for flag, value in (("--k", k), ("--alpha", alpha), ("--m", m), ("--p", p)):
        if value is not None:
            args += [flag, str(value)]
    if tests:
        args += ["--tests", ",".join(tests)]
    code, out, err = cli(args)
    if code != 0:
        raise RuntimeError(err.strip() or "verify exited with %d" % code)
    return json.loads(out)
