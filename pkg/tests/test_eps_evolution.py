import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from barlab import (BoundaryDatum, EpsState, TwoWellParams, convex_envelope,
                    derived_fields, envelope_slope_bounds, incremental_step,
                    initial_step, optimal_theta, plateau_factor, preset_datum,
                    pristine_state, refined_time_grid, run_eps, total_energy)
from oracles import exhaustive_step_minimum


def identity_stiffness(m, eps, theta):
    """Per-cell stiffness the mixture formula dictates for a sound fraction."""
    return 1.0 / ((1.0 - theta) / (eps * m.a0) + theta / m.a1)


class TestPlateauFactor:
    def test_values(self, material):
        assert plateau_factor(material, 0.02) == pytest.approx(np.sqrt(2.0 / 1.98), rel=1e-14)
        assert plateau_factor(material, 1e-6) == pytest.approx(1.0, abs=1e-6)

    def test_rejects_bad_eps(self, material):
        with pytest.raises(ValueError):
            plateau_factor(material, 0.0)
        with pytest.raises(ValueError):
            plateau_factor(material, 2.5)  # eps*a0 >= a1


class TestInitialStep:
    def test_zero_load(self, material):
        state = initial_step(material, 0.01, 8, 0.0)
        assert state.sigma == 0.0
        assert np.all(state.theta == 1.0)
        assert total_energy(state, material) == 0.0

    def test_elastic_load(self, material):
        state = initial_step(material, 0.01, 8, 0.4)
        assert np.all(state.theta == 1.0)
        assert state.sigma == pytest.approx(0.8, abs=1e-12)
        assert abs(state.sigma) <= material.yield_stress * plateau_factor(material, 0.01)

    def test_large_load_matches_envelope_quadrature(self, material):
        # The pristine incremental problem relaxes to the two-well envelope:
        # weak well eps*a0/2 with offset kappa/eps, strong well a1/2.
        eps, J0 = 0.01, 3.0
        state = initial_step(material, eps, 8, J0)
        cell = TwoWellParams(a=eps * material.a0 / 2.0, b=material.a1 / 2.0,
                             K=material.kappa / eps)
        want = convex_envelope(cell, J0 / material.L) * material.L
        assert total_energy(state, material) == pytest.approx(want, abs=1e-8)
        # Homogeneous data: the per-cell damage fraction is the envelope's
        # optimal phase fraction at the mean strain.
        frac = 1.0 - state.theta
        assert np.max(np.abs(frac - optimal_theta(cell, J0 / material.L))) <= 1e-10
        # That load lands on the plateau, where the stress saturates exactly.
        _, _, slope = envelope_slope_bounds(cell)
        assert state.sigma == pytest.approx(slope, abs=1e-12)


class TestIncrementalStep:
    def test_repeated_load_is_a_fixed_point(self, material):
        a = initial_step(material, 0.05, 4, 0.9)
        b = incremental_step(a, material, 0.9)
        assert b.sigma == pytest.approx(a.sigma, abs=1e-12)
        assert np.allclose(b.theta, a.theta, rtol=0.0, atol=1e-12)
        assert np.allclose(b.stiffness, a.stiffness, rtol=0.0, atol=1e-12)

    def test_plateau_stress_saturates_amplified_yield(self, material):
        eps = 0.01
        state = initial_step(material, eps, 8, 1.0)
        s_plateau = material.yield_stress * plateau_factor(material, eps)
        assert state.sigma > material.yield_stress
        assert state.sigma == pytest.approx(s_plateau, abs=1e-12)

    def test_unloading_freezes_damage(self, material):
        eps = 0.05
        loaded = initial_step(material, eps, 4, 1.0)
        unloaded = incremental_step(loaded, material, 0.4)
        assert np.array_equal(unloaded.theta, loaded.theta)
        assert abs(unloaded.sigma) < material.yield_stress
        # Homogeneous elastic response at the damaged stiffness.
        assert unloaded.sigma == pytest.approx(
            0.4 * float(loaded.stiffness[0]) / material.L, abs=1e-12)
        # Re-minimization confirms zero extra damage is optimal.
        dx = material.L / 4
        oracle, best = exhaustive_step_minimum(
            material.kappa, eps, eps * material.a0,
            loaded.theta, loaded.stiffness, dx, 0.4)
        assert np.all(best == 0.0)
        assert total_energy(unloaded, material) <= oracle + 1e-9

    def test_inhomogeneous_state_keeps_stress_homogeneous(self, material):
        eps = 0.1
        theta = np.array([0.3, 0.6, 0.85, 1.0])
        prev = EpsState(epsilon=eps, t=0.0, sigma=0.0, theta=theta,
                        stiffness=identity_stiffness(material, eps, theta))
        dx = material.L / theta.size
        for J in (0.2, 0.9, -1.4):
            new = incremental_step(prev, material, J)
            # One scalar stress reproduces the imposed gap through the cells.
            assert np.sum(new.sigma / new.stiffness * dx) == pytest.approx(J, abs=1e-10)
            # Identity survives the update.
            want = identity_stiffness(material, eps, new.theta)
            assert np.max(np.abs(new.stiffness - want)) <= 1e-12 * material.a1
            # No healing.
            assert np.all(new.theta <= prev.theta + 1e-15)


class TestDerivedFields:
    def test_pristine_cell(self, material):
        state = initial_step(material, 0.05, 4, 0.4)
        e, p, mu = derived_fields(state, material)
        assert np.allclose(e, state.sigma / material.a1, atol=1e-15)
        assert np.all(p == 0.0)
        assert np.all(mu == 0.0)

    def test_hand_checked_mixture_cell(self, material):
        eps, theta = 0.1, np.array([0.5])
        state = EpsState(epsilon=eps, t=0.0, sigma=1.0, theta=theta,
                         stiffness=identity_stiffness(material, eps, theta))
        e, p, mu = derived_fields(state, material)
        assert e[0] == pytest.approx(0.25, abs=1e-15)
        assert p[0] == pytest.approx(5.0, abs=1e-12)
        assert mu[0] == pytest.approx(5.0, abs=1e-12)
        assert e[0] + p[0] == pytest.approx(1.0 / state.stiffness[0], rel=1e-14)

    def test_strain_split_along_a_run(self, material):
        w = preset_datum("loading-unloading", material)
        traj = run_eps(material, 0.05, 8, w, refined_time_grid(w, 40))
        for k in (10, 25, 40):
            state = traj.state_at(k)
            e, p, mu = derived_fields(state, material)
            assert np.max(np.abs(e + p - state.sigma / state.stiffness)) <= 1e-12


class TestRunEps:
    def test_constant_datum_is_static_after_initial_step(self, material):
        w = preset_datum("constant", material)
        traj = run_eps(material, 0.05, 8, w, refined_time_grid(w, 20))
        assert np.max(np.abs(np.diff(traj.sigma))) == 0.0
        assert np.max(np.abs(traj.work_cum)) == 0.0
        assert np.max(np.abs(traj.eb_residual)) == 0.0

    def test_horizon_mismatch_rejected(self, material):
        w = BoundaryDatum(times=[0.0, 1.0], w0=[0.0, 0.0], wL=[0.0, 1.0])
        with pytest.raises(ValueError):
            run_eps(material, 0.05, 4, w, np.linspace(0.0, 1.0, 11))

    def test_grid_must_refine_knots(self, material):
        w = preset_datum("loading-unloading", material)
        with pytest.raises(ValueError):
            run_eps(material, 0.05, 4, w, np.array([0.0, 0.7, 1.6, 2.0]))

    def test_homogeneous_data_stays_homogeneous(self, material):
        w = preset_datum("loading-unloading", material)
        traj = run_eps(material, 0.02, 16, w, refined_time_grid(w, 60))
        spread = np.max(traj.theta, axis=1) - np.min(traj.theta, axis=1)
        assert np.max(spread) <= 1e-12

    def test_monotone_damage_and_identity_every_step(self, material):
        w = preset_datum("loading-unloading", material)
        traj = run_eps(material, 0.05, 8, w, refined_time_grid(w, 80))
        assert np.all(np.diff(traj.theta, axis=0) <= 1e-15)
        assert np.all(np.diff(traj.stiffness, axis=0) <= 1e-15)
        want = identity_stiffness(material, 0.05, traj.theta)
        assert np.max(np.abs(traj.stiffness - want)) <= 1e-12 * material.a1

    def test_stress_bound_and_energy_certificate(self, material):
        eps = 0.05
        w = preset_datum("monotone", material)
        traj = run_eps(material, eps, 8, w, refined_time_grid(w, 100))
        s_plateau = material.yield_stress * plateau_factor(material, eps)
        assert np.max(np.abs(traj.sigma)) <= s_plateau + 1e-12
        # A-priori bound: C_k = C_{k-1} + sqrt(2 a1 C_{k-1}/L)|dJ| + a1 dJ^2/(2L)
        # dominates the recorded energy, and the stress obeys sqrt(2 a1 C/L).
        cert = traj.energy[0]
        for k in range(1, traj.times.size):
            dj = abs(traj.J[k] - traj.J[k - 1])
            cert = (cert + np.sqrt(2.0 * material.a1 * cert / material.L) * dj
                    + material.a1 * dj**2 / (2.0 * material.L))
            assert traj.energy[k] <= cert * (1.0 + 1e-9) + 1e-9
            assert abs(traj.sigma[k]) <= np.sqrt(2.0 * material.a1 * cert / material.L) + 1e-9

    def test_balance_residual_shrinks_with_the_step(self, material):
        # 131 and 262 keep the damage-onset kink off both grids, so the
        # quadrature error actually has to decay rather than cancel.
        w = preset_datum("monotone", material)
        coarse = run_eps(material, 0.05, 8, w, refined_time_grid(w, 131))
        fine = run_eps(material, 0.05, 8, w, refined_time_grid(w, 262))
        rc = np.max(np.abs(coarse.eb_residual))
        rf = np.max(np.abs(fine.eb_residual))
        assert rc > 0.0
        assert rf <= 0.6 * rc


@settings(max_examples=30)
@given(loads=st.lists(st.floats(-2.0, 2.0), min_size=1, max_size=8),
       n_cells=st.integers(1, 3))
def test_random_load_paths_preserve_invariants(loads, n_cells):
    import barlab
    m = barlab.DEFAULT_MATERIAL
    eps = 0.1
    s_plateau = m.yield_stress * plateau_factor(m, eps)
    state = pristine_state(m, eps, n_cells)
    for J in loads:
        new = incremental_step(state, m, J)
        assert np.all(new.theta <= state.theta + 1e-15)
        assert np.all(new.stiffness <= state.stiffness + 1e-15)
        want = identity_stiffness(m, eps, new.theta)
        assert np.max(np.abs(new.stiffness - want)) <= 1e-11 * m.a1
        if np.any(new.stiffness > eps * m.a0 * (1.0 + 1e-9)):
            assert abs(new.sigma) <= s_plateau + 1e-10
        state = new
