import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from eitswap import bloch
from eitswap.bloch import (DriveHistory, adiabatic_residual, bloch_rhs, dark_state,
                           density_violations, fig2_drive_history, ground_state,
                           integrate_bloch)
from eitswap.errors import IntegrationUnstable


def _const(v):
    return lambda t: np.full(np.shape(t), v, dtype=float)


def test_ground_state_is_stationary_without_probe():
    assert np.array_equal(bloch_rhs(ground_state(), 0.0, 7.0), np.zeros((3, 3)))


@given(st.floats(-3, 3), st.floats(0.1, 20))
def test_dark_state_is_stationary(p, c):
    rho = dark_state(p, c)
    assert np.max(np.abs(bloch_rhs(rho, p, c))) < 1e-12
    assert not density_violations(rho)
    # the reduced coherence of the dark state
    assert rho[1, 0].real == pytest.approx(-p * c / (p * p + c * c), abs=1e-15)


@settings(max_examples=30)
@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(-1, 1), st.floats(0, 3), st.floats(0, 1))
def test_rhs_preserves_trace_and_hermiticity(p, c, d, g3, g21):
    rng = np.random.default_rng(1)
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    rho = a @ a.conj().T
    rho /= np.trace(rho)
    drho = bloch_rhs(rho, p, c, d, g3, g21)
    assert abs(np.trace(drho)) < 1e-12
    assert np.max(np.abs(drho - drho.conj().T)) < 1e-12


def _smooth_history(t_end=2.0):
    return DriveHistory(lambda t: 0.5 * np.sin(np.asarray(t)) ** 2, _const(2.0), 0.0, t_end)


def test_rk4_richardson_ratio():
    h = _smooth_history()
    finals = [integrate_bloch(h, ground_state(), dt).final for dt in (4e-3, 2e-3, 1e-3)]
    e1 = np.max(np.abs(finals[0] - finals[1]))
    e2 = np.max(np.abs(finals[1] - finals[2]))
    assert e1 / e2 == pytest.approx(16.0, rel=0.1)


def test_purity_conserved_without_decay():
    traj = integrate_bloch(_smooth_history(), ground_state(), 2e-3)
    purity = np.einsum("nij,nji->n", traj.rho, traj.rho).real
    assert np.max(np.abs(purity - 1.0)) < 1e-9


def test_decay_keeps_density_matrix_valid():
    h = DriveHistory(_const(1.0), _const(1.0), 0.0, 3.0, gamma3=2.0, gamma21=0.1)
    traj = integrate_bloch(h, ground_state(), 1e-3)
    assert not density_violations(traj.final)
    assert abs(np.trace(traj.final) - 1.0) < 1e-12


def test_constant_drives_keep_dark_state():
    h = DriveHistory(_const(0.3), _const(3.0), 0.0, 5.0)
    rho0 = dark_state(0.3, 3.0)
    traj = integrate_bloch(h, rho0, 2e-3)
    assert np.max(np.abs(traj.final - rho0)) < 1e-12


def test_step_precondition():
    with pytest.raises(ValueError, match="exceeds"):
        integrate_bloch(_smooth_history(), ground_state(), 0.01)
    with pytest.raises(ValueError, match="whole number"):
        integrate_bloch(_smooth_history(2.0005), ground_state(), 1e-3)
    with pytest.raises(ValueError, match="density matrix"):
        integrate_bloch(_smooth_history(), 2 * ground_state(), 1e-3)


def test_instability_detected():
    # population pumped with a negative decay rate leaves the density-matrix set
    h = DriveHistory(_const(0.0), _const(0.0), 0.0, 1.0, gamma21=-50.0)
    rho0 = dark_state(1.0, 1.0)
    with pytest.raises(IntegrationUnstable):
        integrate_bloch(h, rho0, 1e-4)


def test_adiabatic_reduction_holds_for_strong_coupling():
    h = fig2_drive_history(coupling=10.0)
    m = adiabatic_residual(integrate_bloch(h, ground_state(), 1e-3), h)
    assert m.scale == pytest.approx(0.12, rel=1e-3)
    assert m.maxima["rho21"] <= 0.05
    assert m.raw_max["rho33"] <= 0.02


def test_adiabatic_reduction_fails_for_weak_coupling():
    h = fig2_drive_history(coupling=1.0)
    m = adiabatic_residual(integrate_bloch(h, ground_state(), 1e-3), h)
    assert m.maxima["rho21"] > 0.05


def test_zero_drives_give_zero_residual():
    h = fig2_drive_history(coupling=0.0)
    m = adiabatic_residual(integrate_bloch(h, ground_state(), 1e-3), h)
    assert m.scale == 0.0
    assert all(v == 0.0 for v in m.maxima.values())


def test_residual_decreases_with_pulse_length():
    # weak enough probe that the O(ratio**2) floor sits below the adiabatic error
    res = []
    for s in (1.0, 2.0, 4.0):
        h = fig2_drive_history(coupling=10.0, time_scale=s, probe_scale=0.1)
        m = adiabatic_residual(integrate_bloch(h, ground_state(), 1e-3), h)
        res.append((m.maxima["rho21"], m.raw_max["rho33"]))
    assert res[0][0] > res[1][0] > res[2][0]
    assert res[0][1] > res[1][1] > res[2][1]


def test_residual_rejects_dark_coupling_with_probe():
    h = DriveHistory(_const(0.1), _const(0.0), 0.0, 0.1)
    traj = integrate_bloch(h, ground_state(), 1e-3)
    with pytest.raises(ValueError):
        adiabatic_residual(traj, h)


def test_hamiltonian_is_hermitian():
    h = bloch.hamiltonian(0.3, 2.0, 0.5)
    assert np.array_equal(h, h.conj().T)
