"""Quasi-static damage evolution of the bar at a fixed regularization scale.

At scale ``eps`` the damaged phase keeps the small stiffness ``eps*a0``
while breaking costs ``kappa/eps`` per unit damaged volume.  Each time
step solves one incremental minimization: every cell may convert a
further fraction of its sound material into the weak phase, strains are
coupled only through the prescribed mean ``J(t)/L``, and the common
stress is the Lagrange multiplier of that constraint.

Per cell the relaxed incremental density is the convex envelope of a
two-well energy with wells ``(eps*a0/2, a_prev/2)`` and offset
``kappa*Theta_prev/eps``.  A consequence of the stiffness identity
``1/a = (1-Theta)/(eps*a0) + Theta/a1`` is that the plateau stress of
that envelope is the same for every cell and every step:
``sqrt(2*kappa*a0) * plateau_factor``.  The stress solve therefore has
three regimes (elastic, plateau, fully damaged) and the plateau regime
fixes the damage increments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .envelope import MaterialParams
from .errors import NumericalError
from .loading import BoundaryDatum, validate_time_grid

__all__ = [
    "EpsState",
    "EpsTrajectory",
    "plateau_factor",
    "pristine_state",
    "initial_step",
    "incremental_step",
    "run_eps",
    "derived_fields",
    "damage_mass",
    "total_energy",
]

_BISECT_TOL = 1e-12
_BISECT_MAXIT = 200
_IDENTITY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class EpsState:
    """Bar state at scale ``epsilon``: per-cell sound fraction and homogenized stiffness, plus the common stress."""

    epsilon: float
    t: float
    sigma: float
    theta: np.ndarray
    stiffness: np.ndarray

    @property
    def n_cells(self) -> int:
        return int(self.theta.size)


@dataclass(frozen=True, eq=False)
class EpsTrajectory:
    """Recorded run of the fixed-scale solver on a time grid."""

    m: MaterialParams
    epsilon: float
    times: np.ndarray
    J: np.ndarray
    sigma: np.ndarray
    theta: np.ndarray       # shape (steps+1, cells)
    stiffness: np.ndarray   # shape (steps+1, cells)
    energy: np.ndarray
    work_cum: np.ndarray
    eb_residual: np.ndarray
    l_eps: np.ndarray

    def state_at(self, k: int) -> EpsState:
        return EpsState(
            epsilon=self.epsilon,
            t=float(self.times[k]),
            sigma=float(self.sigma[k]),
            theta=self.theta[k].copy(),
            stiffness=self.stiffness[k].copy(),
        )


def plateau_factor(m: MaterialParams, eps: float) -> float:
    """Amplification ``sqrt(a1/(a1 - eps*a0))`` of the damage-onset stress at scale ``eps``."""
    _check_eps(m, eps)
    return math.sqrt(m.a1 / (m.a1 - eps * m.a0))


def _check_eps(m: MaterialParams, eps: float) -> None:
    if not 0.0 < eps:
        raise ValueError(f"need eps > 0, got {eps!r}")
    if not eps * m.a0 < m.a1:
        raise ValueError(f"need eps*a0 < a1, got eps*a0={eps * m.a0!r}, a1={m.a1!r}")


def pristine_state(m: MaterialParams, eps: float, n_cells: int) -> EpsState:
    """Undamaged bar: full sound fraction and stiffness ``a1`` in every cell."""
    _check_eps(m, eps)
    if n_cells < 1:
        raise ValueError(f"need at least one cell, got {n_cells!r}")
    return EpsState(
        epsilon=eps,
        t=0.0,
        sigma=0.0,
        theta=np.ones(n_cells),
        stiffness=np.full(n_cells, m.a1),
    )


def _aggregate_strain(sigma: float, stiffness: np.ndarray, weak: float, s_plateau: float, dx: float) -> float:
    # Minimal selection of the set-valued strain response at the plateau stress.
    if abs(sigma) <= s_plateau:
        return float((sigma / stiffness).sum() * dx)
    return float(sigma / weak * stiffness.size * dx)


def _bisect_sigma(m: MaterialParams, state_stiffness: np.ndarray, weak: float,
                  s_plateau: float, dx: float, J_new: float) -> float:
    """Locate the multiplier by monotone bisection of the aggregate-strain residual."""
    span = s_plateau + m.a1 * abs(J_new) / m.L
    lo, hi = -span, span
    g_lo = _aggregate_strain(lo, state_stiffness, weak, s_plateau, dx) - J_new
    g_hi = _aggregate_strain(hi, state_stiffness, weak, s_plateau, dx) - J_new
    if g_lo > 0.0 or g_hi < 0.0:
        raise NumericalError(
            f"stress bracket [-{span!r}, {span!r}] does not enclose the load J={J_new!r}"
        )
    for _ in range(_BISECT_MAXIT):
        mid = 0.5 * (lo + hi)
        if _aggregate_strain(mid, state_stiffness, weak, s_plateau, dx) - J_new < 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= _BISECT_TOL:
            return 0.5 * (lo + hi)
    raise NumericalError(
        f"stress bisection did not reach tolerance {_BISECT_TOL} in {_BISECT_MAXIT} iterations"
    )


def incremental_step(prev: EpsState, m: MaterialParams, J_new: float, t_new: float | None = None) -> EpsState:
    """Advance one load increment by incremental minimization.

    The stress is bracketed by bisection and then resolved exactly within
    the identified regime, so the recorded state satisfies the structural
    identities to rounding.  On the plateau the damage increment is the
    same fraction of each cell's admissible range; the energy is affine
    there, and the common fraction keeps homogeneous data homogeneous
    while respecting every cell's bounds.
    """
    eps = prev.epsilon
    _check_eps(m, eps)
    weak = eps * m.a0
    n = prev.n_cells
    dx = m.L / n
    s_plateau = m.yield_stress * plateau_factor(m, eps)

    theta_prev = prev.theta
    a_prev = prev.stiffness
    live = theta_prev > 0.0

    # Aggregate strain window at the common plateau stress.  Dead cells
    # respond linearly with the weak stiffness on both edges.
    compliance_elastic = float((1.0 / a_prev).sum() * dx)
    agg_lo = s_plateau * compliance_elastic
    agg_hi = s_plateau * m.L / weak

    sigma_bis = _bisect_sigma(m, a_prev, weak, s_plateau, dx, J_new)

    j_abs = abs(J_new)
    sign = 1.0 if J_new >= 0.0 else -1.0
    if j_abs <= agg_lo:
        sigma = J_new / compliance_elastic
        frac = np.zeros(n)
    elif j_abs >= agg_hi:
        sigma = J_new * weak / m.L
        frac = np.where(live, 1.0, 0.0)
    else:
        sigma = sign * s_plateau
        share = (j_abs - agg_lo) / (agg_hi - agg_lo)
        frac = np.where(live, share, 0.0)

    if abs(sigma - sigma_bis) > 1e-9 * max(1.0, abs(sigma)):
        raise NumericalError(
            f"bisected stress {sigma_bis!r} disagrees with the regime solve {sigma!r}"
        )

    theta_new = (1.0 - frac) * theta_prev
    a_new = weak * a_prev / (frac * a_prev + (1.0 - frac) * weak)

    # Stiffness identity: the homogenized modulus must stay the harmonic
    # mixture of the two pure phases at the current sound fraction.
    a_identity = 1.0 / ((1.0 - theta_new) / weak + theta_new / m.a1)
    if np.any(np.abs(a_new - a_identity) > _IDENTITY_TOL * np.maximum(1.0, a_new)):
        raise NumericalError("stiffness identity violated after damage update")
    if np.any(theta_new > theta_prev) or np.any(a_new > a_prev * (1.0 + 1e-14)):
        raise NumericalError("damage update would heal the bar")

    return EpsState(
        epsilon=eps,
        t=prev.t if t_new is None else float(t_new),
        sigma=float(sigma),
        theta=theta_new,
        stiffness=a_new,
    )


def initial_step(m: MaterialParams, eps: float, n_cells: int, J0: float) -> EpsState:
    """State at the initial load: one incremental step from the pristine bar."""
    return incremental_step(pristine_state(m, eps, n_cells), m, J0, t_new=0.0)


def total_energy(state: EpsState, m: MaterialParams) -> float:
    """Stored elastic energy plus the accumulated breaking cost ``(kappa/eps) * (1 - Theta)``."""
    dx = m.L / state.n_cells
    elastic = float((state.sigma**2 / (2.0 * state.stiffness)).sum() * dx)
    broken = float((1.0 - state.theta).sum() * dx) * m.kappa / state.epsilon
    return elastic + broken


def damage_mass(state: EpsState, m: MaterialParams) -> float:
    """Rescaled damaged volume ``integral (1 - Theta)/eps dx``."""
    dx = m.L / state.n_cells
    return float((1.0 - state.theta).sum() * dx) / state.epsilon


def derived_fields(state: EpsState, m: MaterialParams) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-cell elastic strain, plastic-like strain, and rescaled damage density.

    The splitting ``u' = e + p`` with ``e = sigma*Theta/a1`` and
    ``p = sigma*(1-Theta)/(eps*a0)`` follows from the stiffness identity.
    """
    e = state.sigma * state.theta / m.a1
    p = state.sigma * (1.0 - state.theta) / (state.epsilon * m.a0)
    mu = (1.0 - state.theta) / state.epsilon
    return e, p, mu


def run_eps(m: MaterialParams, eps: float, n_cells: int, w: BoundaryDatum,
            time_grid) -> EpsTrajectory:
    """Drive the bar through ``w`` on ``time_grid`` and record energetics.

    Asserts the running energy bound and the stress bound at every step;
    these certify that the scheme stays on the physical branch.  Step
    failures are re-raised with the offending time attached.
    """
    if abs(w.duration - m.T) > 1e-12:
        raise ValueError(f"loading ends at t={w.duration!r} but the horizon is T={m.T!r}")
    grid = validate_time_grid(w, time_grid)
    J = np.asarray(w.jump(grid), dtype=float)
    steps = grid.size

    s_plateau = m.yield_stress * plateau_factor(m, eps)
    sigma = np.zeros(steps)
    theta = np.zeros((steps, n_cells))
    stiff = np.zeros((steps, n_cells))
    energy = np.zeros(steps)
    work = np.zeros(steps)
    l_eps = np.zeros(steps)

    state = initial_step(m, eps, n_cells, float(J[0]))
    for k in range(steps):
        if k > 0:
            try:
                state = incremental_step(state, m, float(J[k]), t_new=float(grid[k]))
            except NumericalError as err:
                raise NumericalError(f"time step {k} (t={grid[k]!r}): {err}") from err
        sigma[k] = state.sigma
        theta[k] = state.theta
        stiff[k] = state.stiffness
        energy[k] = total_energy(state, m)
        l_eps[k] = damage_mass(state, m)
        if k > 0:
            work[k] = work[k - 1] + 0.5 * (sigma[k - 1] + sigma[k]) * (J[k] - J[k - 1])

    # Running a-priori bound: each step can raise the energy by at most the
    # worst-case work of the increment, so the recursion below dominates.
    cert = energy[0]
    for k in range(1, steps):
        dj = abs(J[k] - J[k - 1])
        cert = cert + math.sqrt(2.0 * m.a1 * cert / m.L) * dj + m.a1 * dj**2 / (2.0 * m.L)
        if energy[k] > cert * (1.0 + 1e-9) + 1e-9:
            raise NumericalError(f"energy bound violated at t={grid[k]!r}")
        if abs(sigma[k]) > math.sqrt(2.0 * m.a1 * cert / m.L) * (1.0 + 1e-9) + 1e-9:
            raise NumericalError(f"stress bound violated at t={grid[k]!r}")
        if np.any(theta[k] > 0.0) and abs(sigma[k]) > s_plateau * (1.0 + 1e-12):
            raise NumericalError(f"stress exceeded the damage-onset plateau at t={grid[k]!r}")

    return EpsTrajectory(
        m=m,
        epsilon=eps,
        times=grid,
        J=J,
        sigma=sigma,
        theta=theta,
        stiffness=stiff,
        energy=energy,
        work_cum=work,
        eb_residual=energy - energy[0] - work,
        l_eps=l_eps,
    )
