"""Exact chain-level workbench for symmetric Poincare complexes.

All operations exchange canonical JSON strings; see the package README for
the matrix, complex, pair, and report formats.
"""

from ._symsig import (
    SymsigError,
    fingerprint,
    fixture,
    fixture_names,
    glue,
    random_pair,
    run_scenario,
    run_scenario_text,
    sigma_even,
    sigma_odd,
    torus,
    validate,
    version,
)

__all__ = [
    "SymsigError",
    "fingerprint",
    "fixture",
    "fixture_names",
    "glue",
    "random_pair",
    "run_scenario",
    "run_scenario_text",
    "sigma_even",
    "sigma_odd",
    "torus",
    "validate",
    "version",
]

__version__ = version()
