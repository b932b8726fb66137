"""Effective evolution of the bar in the vanishing-regularization limit.

The limit model keeps a single internal variable: the accumulated
damage mass ``l >= 0``.  The bar responds like two springs in series,
``J = sigma * (l/a0 + L/a1)``, the stress is confined to the yield
interval ``[-s, s]`` with ``s = sqrt(2*kappa*a0)``, and ``l`` grows only
while the stress sits on the boundary of that interval.  This gives an
explicit return map per load sample, so every recorded state is exact
up to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .envelope import MaterialParams
from .errors import NumericalError
from .loading import BoundaryDatum, validate_time_grid

__all__ = [
    "LimitState",
    "LimitTrajectory",
    "LimitFields",
    "initial_limit_state",
    "limit_step",
    "run_limit",
    "limit_fields",
    "mass_reconstruction",
]


@dataclass(frozen=True)
class LimitState:
    """Effective state: stress, damage mass, energy, and the derived strain split."""

    t: float
    sigma: float
    l: float
    E: float
    e: float            # elastic strain sigma/a1
    p_total: float      # total plastic-like mass sigma*l/a0
    mu_density: float   # damage density l/L
    c_density: float    # compliance density mu/a0 + 1/a1


def _assemble(m: MaterialParams, t: float, J: float, l: float) -> LimitState:
    compliance = l / m.a0 + m.L / m.a1
    sigma = J / compliance
    s = m.yield_stress
    if abs(sigma) > s:
        # Analytically |sigma| <= s always; only rounding dust may poke out.
        if abs(sigma) > s * (1.0 + 1e-10):
            raise NumericalError(f"stress {sigma!r} left the yield interval at t={t!r}")
        sigma = s if sigma > 0.0 else -s
    E = 0.5 * J * sigma + m.kappa * l
    return LimitState(
        t=float(t),
        sigma=float(sigma),
        l=float(l),
        E=float(E),
        e=float(sigma / m.a1),
        p_total=float(sigma * l / m.a0),
        mu_density=float(l / m.L),
        c_density=float(l / (m.L * m.a0) + 1.0 / m.a1),
    )


def _trial_mass(m: MaterialParams, J: float) -> float:
    # Mass needed to carry J at exactly the yield stress; negative if elastic.
    return m.a0 * (abs(J) / m.yield_stress - m.L / m.a1)


def initial_limit_state(m: MaterialParams, J0: float, t: float = 0.0) -> LimitState:
    """Globally minimal state under the initial jump ``J0``.

    Purely elastic when ``|J0|`` is below ``m.jump_threshold``; otherwise
    the damage mass jumps so that the stress sits exactly at yield.
    """
    l0 = max(0.0, _trial_mass(m, J0))
    return _assemble(m, t, J0, l0)


def limit_step(prev: LimitState, m: MaterialParams, J_new: float, t_new: float) -> LimitState:
    """Return map of the effective model: ``l`` ratchets up, never down."""
    l_new = max(prev.l, _trial_mass(m, J_new))
    return _assemble(m, t_new, J_new, l_new)


@dataclass(frozen=True, eq=False)
class LimitTrajectory:
    """Recorded limit evolution with both energy accountings."""

    m: MaterialParams
    times: np.ndarray
    J: np.ndarray
    sigma: np.ndarray
    l: np.ndarray
    E_closed: np.ndarray
    E_integrated: np.ndarray
    work_cum: np.ndarray
    t0: float           # last recorded instant with l = 0
    t0_star: float      # first recorded instant with |J| above the jump threshold

    def state_at(self, k: int) -> LimitState:
        return _assemble(self.m, float(self.times[k]), float(self.J[k]), float(self.l[k]))


def run_limit(m: MaterialParams, w: BoundaryDatum, time_grid) -> LimitTrajectory:
    """Run the return map along ``w`` and record closed-form and integrated energies."""
    if abs(w.duration - m.T) > 1e-12:
        raise ValueError(f"loading ends at t={w.duration!r} but the horizon is T={m.T!r}")
    grid = validate_time_grid(w, time_grid)
    J = np.asarray(w.jump(grid), dtype=float)
    steps = grid.size

    sigma = np.zeros(steps)
    mass = np.zeros(steps)
    e_closed = np.zeros(steps)
    work = np.zeros(steps)

    state = initial_limit_state(m, float(J[0]), t=float(grid[0]))
    sigma[0], mass[0], e_closed[0] = state.sigma, state.l, state.E
    for k in range(1, steps):
        state = limit_step(state, m, float(J[k]), float(grid[k]))
        sigma[k], mass[k], e_closed[k] = state.sigma, state.l, state.E
        work[k] = work[k - 1] + 0.5 * (sigma[k - 1] + sigma[k]) * (J[k] - J[k - 1])

    zero = np.flatnonzero(mass == 0.0)
    t0 = float(grid[zero[-1]]) if zero.size else float(grid[0])
    above = np.flatnonzero(np.abs(J) > m.jump_threshold)
    t0_star = float(grid[above[0]]) if above.size else float(grid[-1])

    return LimitTrajectory(
        m=m,
        times=grid,
        J=J,
        sigma=sigma,
        l=mass,
        E_closed=e_closed,
        E_integrated=e_closed[0] + work,
        work_cum=work,
        t0=t0,
        t0_star=t0_star,
    )


@dataclass(frozen=True)
class LimitFields:
    """Spatial reconstruction of a limit state: affine displacement and strain split."""

    slope: float        # uniform displacement gradient sigma * c_density
    u0: float           # trace at x = 0 (attached to the boundary datum)
    uL: float           # trace at x = L
    e: float            # elastic strain density
    p_density: float    # plastic-like strain density sigma*l/(a0*L)


def limit_fields(state: LimitState, m: MaterialParams, w0: float = 0.0) -> LimitFields:
    """Affine displacement carrying the state's strain decomposition.

    The gradient splits as ``slope = e + p_density`` and the traces match
    the boundary datum exactly, so no boundary plastic mass is needed.
    """
    slope = state.sigma * state.c_density
    return LimitFields(
        slope=float(slope),
        u0=float(w0),
        uL=float(w0 + slope * m.L),
        e=state.e,
        p_density=float(state.sigma * state.l / (m.a0 * m.L)),
    )


def mass_reconstruction(m: MaterialParams, E: float, J: float) -> tuple[float, float]:
    """Recover the damage mass from energy and jump alone.

    Returns ``(delta, l)`` where ``delta`` is the discriminant
    ``(E/a0 + kappa*L/a1)**2 - (2*kappa/a0)*J**2``; it is nonnegative for
    every reachable state and the positive root reproduces ``l``.
    """
    delta = (E / m.a0 + m.kappa * m.L / m.a1) ** 2 - (2.0 * m.kappa / m.a0) * J**2
    root = math.sqrt(max(delta, 0.0))
    l = (m.a0 / (2.0 * m.kappa)) * (E / m.a0 - m.kappa * m.L / m.a1 + root)
    return float(delta), float(l)
