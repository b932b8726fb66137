"""Exception types shared across the package.

ConfigError covers everything a user can get wrong before any number is
crunched (bad files, bad preset names, inconsistent parameters).
NumericalError covers failures of the solvers themselves and violations
of internal invariants that should hold for every well-posed run.
"""

from __future__ import annotations

__all__ = ["ConfigError", "NumericalError"]


class ConfigError(ValueError):
    """Invalid configuration, preset, or input file."""


class NumericalError(RuntimeError):
    """A solver failed to converge or an internal invariant was violated."""
