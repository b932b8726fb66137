"""Time-dependent boundary displacements for the bar.

A loading program is a pair of piecewise-linear boundary traces sampled
at shared knots.  Only the jump ``J(t) = wL(t) - w0(t)`` enters the
homogeneous solvers, but both traces are kept so displacement fields can
be reconstructed with the correct rigid offset.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["BoundaryDatum", "refined_time_grid", "validate_time_grid"]


@dataclass(frozen=True, eq=False)
class BoundaryDatum:
    """Piecewise-linear boundary traces ``w0`` (left) and ``wL`` (right) over shared ``times``."""

    times: np.ndarray
    w0: np.ndarray
    wL: np.ndarray

    def __post_init__(self) -> None:
        for name in ("times", "w0", "wL"):
            object.__setattr__(self, name, np.asarray(getattr(self, name), dtype=float).copy())
        if self.times.ndim != 1 or self.times.size < 2:
            raise ValueError("need at least two sample times")
        if self.w0.shape != self.times.shape or self.wL.shape != self.times.shape:
            raise ValueError("times, w0 and wL must have matching shapes")
        if np.any(np.diff(self.times) <= 0.0):
            raise ValueError("sample times must be strictly increasing")
        if self.times[0] != 0.0:
            raise ValueError(f"loading must start at t=0, got t={self.times[0]!r}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BoundaryDatum):
            return NotImplemented
        return (
            np.array_equal(self.times, other.times)
            and np.array_equal(self.w0, other.w0)
            and np.array_equal(self.wL, other.wL)
        )

    @property
    def duration(self) -> float:
        return float(self.times[-1])

    def jump(self, t):
        """Boundary jump ``J(t) = wL(t) - w0(t)``, linearly interpolated."""
        return np.interp(t, self.times, self.wL - self.w0)

    def trace0(self, t):
        return np.interp(t, self.times, self.w0)

    def traceL(self, t):
        return np.interp(t, self.times, self.wL)


def refined_time_grid(w: BoundaryDatum, steps: int) -> np.ndarray:
    """Uniform grid with ``steps`` intervals over the loading span, merged with the datum knots.

    Merging keeps every kink of the loading program on the grid, so
    piecewise-linear data are sampled exactly.
    """
    if steps < 1:
        raise ValueError(f"need at least one step, got {steps!r}")
    uniform = np.linspace(0.0, w.duration, steps + 1)
    return np.unique(np.concatenate([uniform, w.times]))


def validate_time_grid(w: BoundaryDatum, grid) -> np.ndarray:
    """Check that ``grid`` is a strictly increasing refinement of the datum knots."""
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or g.size < 2:
        raise ValueError("time grid must hold at least two instants")
    if np.any(np.diff(g) <= 0.0):
        raise ValueError("time grid must be strictly increasing")
    if abs(g[0] - w.times[0]) > 1e-12 or abs(g[-1] - w.times[-1]) > 1e-12:
        raise ValueError("time grid must span the full loading interval")
    pos = np.searchsorted(g, w.times)
    pos = np.clip(pos, 0, g.size - 1)
    near = np.minimum(np.abs(g[pos] - w.times), np.abs(g[np.maximum(pos - 1, 0)] - w.times))
    if np.any(near > 1e-12):
        raise ValueError("time grid must contain every knot of the loading program")
    return g
