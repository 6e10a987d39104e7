"""Volume-preserving vector fields generated by 2-forms on R^{2n}.

Points are flat sequences (q1..qn, p1..pn). A 2-form is given as a spec
string: ``"zero"``, ``"coupled-oscillators"``, ``"random:<seed>"`` or
assignments such as ``"A12=q1; H=0.5*p1^2"``.
"""

import json

from ._core import (
    EvaluationError,
    divergence,
    generate,
    hamiltonian_field,
    omega_power,
    oracle,
    poisson_bracket,
    system_names,
    trace,
)
from . import _core

__all__ = [
    "EvaluationError",
    "check",
    "divergence",
    "generate",
    "hamiltonian_field",
    "omega_power",
    "oracle",
    "poisson_bracket",
    "simulate",
    "system_names",
    "trace",
]


def check(ns=(2, 3), trials=100, seed=42):
    """Run the verification suites; returns (all_passed, report dict)."""
    ok, report = _core.check_report(list(ns), trials, seed)
    return ok, json.loads(report)


def simulate(config):
    """Integrate a built-in system. `config` is a dict or JSON string.

    Returns (times, states, diagnostics) with states shaped (samples, 2n)
    holding every step.
    """
    text = config if isinstance(config, str) else json.dumps(config)
    times, states, diag = _core.simulate_json(text)
    return times, states, json.loads(diag)
