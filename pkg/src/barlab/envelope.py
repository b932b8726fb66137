"""Closed-form energetics of a two-phase elastic bar.

A material point can keep its strong stiffness or trade a volume
fraction ``theta`` of it for a weak phase, paying a cost proportional to
``theta``.  In one dimension laminates are optimal and the mixed
stiffness is the harmonic mean, so the relaxed energy of the two-well
density ``min(K + a*xi**2, b*xi**2)`` is its convex envelope: a strong
quadratic branch, a stress plateau, and a weak quadratic branch.  All
operations here are exact closed forms; no numerical minimization is
involved.

The module also holds the bar-level material record and the small
closed-form objects attached to it: the yield stress of the effective
model, the Huber-type effective density ``wbar_1d``, the support
function of the yield interval, and the dissipation-potential surrogate
``g_constraint`` used for cross-checking the one-dimensional reduction
against its multi-dimensional counterpart.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "TwoWellParams",
    "MaterialParams",
    "raw_energy",
    "convex_envelope",
    "envelope_slope_bounds",
    "optimal_theta",
    "mixture_energy",
    "gclosure_1d",
    "wbar_1d",
    "g_constraint",
    "in_yield_set",
    "support_1d",
]


@dataclass(frozen=True)
class TwoWellParams:
    """Two quadratic wells: damaged branch ``K + a*xi**2``, sound branch ``b*xi**2``.

    Requires ``0 < a < b`` and ``K > 0`` so that the envelope has a
    genuine plateau between two distinct quadratic regimes.
    """

    a: float
    b: float
    K: float

    def __post_init__(self) -> None:
        if not (0.0 < self.a < self.b):
            raise ValueError(f"need 0 < a < b, got a={self.a!r}, b={self.b!r}")
        if not self.K > 0.0:
            raise ValueError(f"need K > 0, got K={self.K!r}")


@dataclass(frozen=True)
class MaterialParams:
    """Bar material: toughness ``kappa``, damaged/sound stiffnesses ``a0 < a1``, length ``L``, time horizon ``T``."""

    kappa: float
    a0: float
    a1: float
    L: float
    T: float

    def __post_init__(self) -> None:
        for name in ("kappa", "a0", "a1", "L", "T"):
            value = getattr(self, name)
            if not value > 0.0:
                raise ValueError(f"need {name} > 0, got {value!r}")
        if not self.a0 < self.a1:
            raise ValueError(f"need a0 < a1, got a0={self.a0!r}, a1={self.a1!r}")

    @property
    def yield_stress(self) -> float:
        """Stress threshold sqrt(2*kappa*a0) of the effective model."""
        return math.sqrt(2.0 * self.kappa * self.a0)

    @property
    def jump_threshold(self) -> float:
        """Largest boundary jump the bar carries elastically: yield_stress*L/a1."""
        return self.yield_stress * self.L / self.a1


def _wrap(xi) -> tuple[np.ndarray, bool]:
    arr = np.asarray(xi, dtype=float)
    return arr, arr.ndim == 0


def _unwrap(out: np.ndarray, scalar: bool):
    return float(out) if scalar else out


def raw_energy(p: TwoWellParams, xi):
    """Unrelaxed two-well density ``min(K + a*xi**2, b*xi**2)``."""
    arr, scalar = _wrap(xi)
    out = np.minimum(p.K + p.a * arr**2, p.b * arr**2)
    return _unwrap(out, scalar)


def envelope_slope_bounds(p: TwoWellParams) -> tuple[float, float, float]:
    """Kink strains ``(xi1, xi2)`` and the plateau slope of the convex envelope.

    The envelope follows ``b*xi**2`` up to ``xi1``, is affine with slope
    ``sqrt(4*a*b*K/(b-a))`` up to ``xi2 = (b/a)*xi1``, and follows
    ``K + a*xi**2`` beyond.
    """
    xi1 = math.sqrt(p.a * p.K / (p.b * (p.b - p.a)))
    xi2 = (p.b / p.a) * xi1
    slope = math.sqrt(4.0 * p.a * p.b * p.K / (p.b - p.a))
    return xi1, xi2, slope


def convex_envelope(p: TwoWellParams, xi):
    """Convex envelope of ``raw_energy`` at strain ``xi`` (scalar or array).

    Exact kink abscissas are assigned to the adjacent quadratic branch;
    all three expressions agree there anyway.
    """
    arr, scalar = _wrap(xi)
    xi1, xi2, slope = envelope_slope_bounds(p)
    offset = p.a * p.K / (p.b - p.a)
    x = np.abs(arr)
    out = np.where(
        x <= xi1,
        p.b * arr**2,
        np.where(x < xi2, slope * x - offset, p.K + p.a * arr**2),
    )
    return _unwrap(out, scalar)


def optimal_theta(p: TwoWellParams, xi):
    """Minimizing weak-phase fraction of the mixture energy at strain ``xi``.

    Zero below ``xi1``, one beyond ``xi2``, and on the plateau the unique
    fraction at which the mixed stiffness carries the plateau stress:
    ``1/c(theta) = |xi| / sqrt(a*b*K/(b-a))``.
    """
    arr, scalar = _wrap(xi)
    xi1, xi2, slope = envelope_slope_bounds(p)
    x = np.abs(arr)
    inv_a, inv_b = 1.0 / p.a, 1.0 / p.b
    with np.errstate(divide="ignore", invalid="ignore"):
        inv_c = x / (0.5 * slope)
        theta = (inv_c - inv_b) / (inv_a - inv_b)
    out = np.where(x <= xi1, 0.0, np.where(x >= xi2, 1.0, np.clip(theta, 0.0, 1.0)))
    return _unwrap(out, scalar)


def mixture_energy(p: TwoWellParams, xi, theta):
    """Energy of a laminate with weak-phase fraction ``theta``: ``K*theta + c(theta)*xi**2``.

    ``c(theta)`` is the harmonic mixture ``(theta/a + (1-theta)/b)**-1``.
    Minimizing this over ``theta in [0, 1]`` reproduces ``convex_envelope``.
    """
    arr, scalar = _wrap(xi)
    th = np.asarray(theta, dtype=float)
    c = 1.0 / (th / p.a + (1.0 - th) / p.b)
    out = p.K * th + c * arr**2
    return _unwrap(np.asarray(out), scalar and th.ndim == 0)


def gclosure_1d(theta, a_weak: float, a_strong: float):
    """Harmonic-mean stiffness of a 1D mixture: ``a_weak*a_strong/(theta*a_strong + (1-theta)*a_weak)``.

    ``theta`` is the weak-phase volume fraction and must lie in [0, 1];
    in one dimension every microstructure attains this bound, so the
    formula is the exact effective stiffness, not just an estimate.
    """
    th, scalar = _wrap(theta)
    if np.any(th < 0.0) or np.any(th > 1.0):
        raise ValueError(f"volume fraction must lie in [0, 1], got {theta!r}")
    if not (0.0 < a_weak <= a_strong):
        raise ValueError(f"need 0 < a_weak <= a_strong, got {a_weak!r}, {a_strong!r}")
    out = a_weak * a_strong / (th * a_strong + (1.0 - th) * a_weak)
    return _unwrap(out, scalar)


def wbar_1d(m: MaterialParams, xi):
    """Effective stored-energy density of the limit model (Huber form).

    Quadratic ``(a1/2)*xi**2`` while the sound stress stays inside the
    yield interval, affine ``s*|xi| - s**2/(2*a1)`` beyond, with
    ``s = m.yield_stress``.
    """
    arr, scalar = _wrap(xi)
    s = m.yield_stress
    x = np.abs(arr)
    out = np.where(x <= s / m.a1, 0.5 * m.a1 * arr**2, s * x - s**2 / (2.0 * m.a1))
    return _unwrap(out, scalar)


def g_constraint(tau_eigs, lam0: float, mu0: float) -> float:
    """Constrained quadratic complementary energy of an ordered stress spectrum.

    ``tau_eigs`` are the eigenvalues sorted ascending.  The value switches
    between three closed forms depending on where the weighted mean
    ``m = (lam0+2*mu0)/(2*(lam0+mu0)) * (tau_min + tau_max)`` falls
    relative to the extreme eigenvalues.  For a single eigenvalue this
    reduces to ``tau**2 / (lam0 + 2*mu0)``, the 1D compliance with
    ``a0 = lam0 + 2*mu0``.
    """
    tau = np.asarray(tau_eigs, dtype=float).reshape(-1)
    if tau.size == 0:
        raise ValueError("need at least one eigenvalue")
    if np.any(np.diff(tau) < 0.0):
        raise ValueError("eigenvalues must be sorted in ascending order")
    if not (lam0 > 0.0 and mu0 > 0.0):
        raise ValueError(f"need lam0 > 0 and mu0 > 0, got {lam0!r}, {mu0!r}")
    t1, tn = float(tau[0]), float(tau[-1])
    mean = (lam0 + 2.0 * mu0) / (2.0 * (lam0 + mu0)) * (t1 + tn)
    if mean < t1:
        return t1**2 / (lam0 + 2.0 * mu0)
    if mean > tn:
        return tn**2 / (lam0 + 2.0 * mu0)
    return (t1 - tn) ** 2 / (4.0 * mu0) + (t1 + tn) ** 2 / (4.0 * (lam0 + mu0))


def in_yield_set(m: MaterialParams, sigma: float) -> bool:
    """Whether ``sigma`` lies in the closed yield interval ``[-s, s]``."""
    return abs(sigma) <= m.yield_stress


def support_1d(m: MaterialParams, q: float) -> float:
    """Support function of the yield interval: ``yield_stress * |q|``."""
    return m.yield_stress * abs(q)
