"""Single-atom three-level density-matrix integrator.

Levels are indexed 0, 1, 2 for ``|1>``, ``|2>``, ``|3>``. With hbar = 1 the
rotating-wave Hamiltonian is::

    H = Delta |3><3| - Omega_p |3><1| - Omega_c |3><2| + h.c.

and the density matrix obeys ``d rho/dt = -i [H, rho] + L(rho)``, where the
relaxation ``L`` decays ``|3>`` at ``gamma3`` into ``|1>`` and ``|2>`` with equal
branching, damps ``rho31``, ``rho32`` at ``gamma3 / 2`` and ``rho21`` at
``gamma21``. The oracle is used to check the adiabatic dark-state reduction
``rho21 = -Omega_p / Omega_c`` against the full dynamics.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, Optional

import numpy as np

from .envelopes import fig2_probe
from .errors import IntegrationUnstable

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-8
FIG2_PROBE_RATIO = 0.12


def ground_state() -> np.ndarray:
    rho = np.zeros((3, 3), dtype=complex)
    rho[0, 0] = 1.0
    return rho


def dark_state(omega_p: float, omega_c: float) -> np.ndarray:
    """Projector on ``(Omega_c|1> - Omega_p|2>) / sqrt(Omega_p**2 + Omega_c**2)``."""
    norm = np.hypot(omega_p, omega_c)
    if norm == 0:
        return ground_state()
    psi = np.array([omega_c, -omega_p, 0.0], dtype=complex) / norm
    return np.outer(psi, psi.conj())


def density_violations(rho: np.ndarray) -> Dict[str, float]:
    """Deviations from Hermiticity, unit trace and positivity that exceed tolerance."""
    out = {}
    herm = float(np.max(np.abs(rho - rho.conj().T)))
    if herm > HERMITIAN_TOL:
        out["hermiticity"] = herm
    trace = abs(complex(np.trace(rho)) - 1.0)
    if trace > TRACE_TOL:
        out["trace"] = trace
    lowest = float(np.min(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))))
    if lowest < -POSITIVITY_TOL:
        out["positivity"] = lowest
    return out


def hamiltonian(omega_p, omega_c, delta=0.0) -> np.ndarray:
    h = np.zeros((3, 3), dtype=complex)
    h[2, 2] = delta
    h[2, 0] = -omega_p
    h[0, 2] = -np.conj(omega_p)
    h[2, 1] = -omega_c
    h[1, 2] = -np.conj(omega_c)
    return h


def bloch_rhs(rho: np.ndarray, omega_p, omega_c, delta=0.0, gamma3=0.0,
              gamma21=0.0) -> np.ndarray:
    h = hamiltonian(omega_p, omega_c, delta)
    drho = -1j * (h @ rho - rho @ h)
    if gamma3:
        p3 = rho[2, 2]
        drho[2, 2] -= gamma3 * p3
        drho[0, 0] += 0.5 * gamma3 * p3
        drho[1, 1] += 0.5 * gamma3 * p3
        for i in (0, 1):
            drho[2, i] -= 0.5 * gamma3 * rho[2, i]
            drho[i, 2] -= 0.5 * gamma3 * rho[i, 2]
    if gamma21:
        drho[1, 0] -= gamma21 * rho[1, 0]
        drho[0, 1] -= gamma21 * rho[0, 1]
    return drho


@dataclass(frozen=True)
class DriveHistory:
    """Probe and coupling Rabi frequencies as functions of time."""

    probe: Callable
    coupling: Callable
    t_start: float = 0.0
    t_end: float = 12.0
    delta: float = 0.0
    gamma3: float = 0.0
    gamma21: float = 0.0

    def sample(self, t):
        t = np.asarray(t, dtype=float)
        return (np.broadcast_to(np.asarray(self.probe(t), dtype=float), t.shape),
                np.broadcast_to(np.asarray(self.coupling(t), dtype=float), t.shape))

    def rate_bound(self, samples: int = 4001) -> float:
        t = np.linspace(self.t_start, self.t_end, samples)
        p, c = self.sample(t)
        return float(max(np.max(np.abs(p)), np.max(np.abs(c)), abs(self.delta),
                         self.gamma3, self.gamma21))


def fig2_drive_history(coupling: float = 10.0, time_scale: float = 1.0,
                       probe_scale: float = 1.0, **rates) -> DriveHistory:
    """Constant coupling with the two-humped probe stretched by ``time_scale``.

    The probe is normalized so that ``max Omega_p / Omega_c = 0.12 * probe_scale``
    whatever the coupling. The window opens ``4 * time_scale`` before ``t = 0``
    so the atom, prepared in ``|1>``, starts in the dark state to round-off.
    """
    shape = fig2_probe()
    scale = FIG2_PROBE_RATIO * probe_scale * coupling / shape.peak

    def probe(t):
        return scale * shape(np.asarray(t) / time_scale)

    def const(t):
        return np.full(np.shape(t), coupling, dtype=float)

    return DriveHistory(probe, const, -4.0 * time_scale, 10.0 * time_scale, **rates)


@dataclass
class Trajectory:
    times: np.ndarray
    rho: np.ndarray  # (n, 3, 3)

    @property
    def final(self) -> np.ndarray:
        return self.rho[-1]


def integrate_bloch(history: DriveHistory, rho0: np.ndarray, dt: float,
                    t_end: Optional[float] = None) -> Trajectory:
    """Classical fixed-step RK4 from ``history.t_start`` to ``t_end``."""
    t_end = history.t_end if t_end is None else t_end
    bound = history.rate_bound()
    if not dt > 0 or (bound > 0 and dt > 1e-2 / bound * (1 + 1e-12)):
        raise ValueError(f"dt={dt:g} exceeds 1e-2 / max rate = {1e-2 / bound if bound else np.inf:g}")
    n = int(round((t_end - history.t_start) / dt))
    if n < 1 or abs(history.t_start + n * dt - t_end) > 1e-9 * max(1.0, abs(t_end)):
        raise ValueError("integration window must be a whole number of steps")
    rho = np.array(rho0, dtype=complex)
    bad = density_violations(rho)
    if bad:
        raise ValueError(f"initial state is not a density matrix: {bad}")
    half = history.t_start + 0.5 * dt * np.arange(2 * n + 1)
    p, c = history.sample(half)
    d, g3, g21 = history.delta, history.gamma3, history.gamma21
    out = np.empty((n + 1, 3, 3), dtype=complex)
    out[0] = rho
    for k in range(n):
        i = 2 * k
        k1 = bloch_rhs(rho, p[i], c[i], d, g3, g21)
        k2 = bloch_rhs(rho + 0.5 * dt * k1, p[i + 1], c[i + 1], d, g3, g21)
        k3 = bloch_rhs(rho + 0.5 * dt * k2, p[i + 1], c[i + 1], d, g3, g21)
        k4 = bloch_rhs(rho + dt * k3, p[i + 2], c[i + 2], d, g3, g21)
        rho = rho + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        out[k + 1] = rho
    bad = density_violations(rho)
    if bad:
        raise IntegrationUnstable(f"density matrix invariants broken at t={t_end:g}: {bad}")
    return Trajectory(half[::2].copy(), out)


@dataclass
class ResidualMetrics:
    """Max and RMS deviation of each element from its adiabatic value.

    ``maxima``/``rms`` are normalized by ``scale = max |Omega_p / Omega_c|``;
    ``raw_max`` holds the unnormalized maxima.
    """

    scale: float
    maxima: Dict[str, float]
    rms: Dict[str, float]
    raw_max: Dict[str, float]


def adiabatic_residual(traj: Trajectory, history: DriveHistory,
                       coupling_floor: float = 1e-6) -> ResidualMetrics:
    """Compare a trajectory with ``rho21 = -Omega_p/Omega_c``,
    ``rho31 = -(i/Omega_c) d rho21/dt`` and ``rho22 = rho33 = rho32 = 0``.

    Where the probe vanishes the reduced values are zero whatever the
    coupling; elsewhere the coupling must stay above ``coupling_floor``.
    """
    t = traj.times
    p, c = history.sample(t)
    driven = p != 0
    if np.any(driven & (np.abs(c) <= coupling_floor)):
        raise ValueError("coupling falls below the floor where the probe is on")
    inv_c = np.where(np.abs(c) > coupling_floor, 1.0 / np.where(c == 0, 1.0, c), 0.0)
    ratio = p * inv_c
    rho21 = traj.rho[:, 1, 0]
    d21 = np.gradient(rho21, t) if len(t) > 2 else np.zeros_like(rho21)
    raw = {
        "rho21": np.abs(rho21 + ratio),
        "rho31": np.abs(traj.rho[:, 2, 0] + 1j * inv_c * d21),
        "rho22": np.abs(traj.rho[:, 1, 1]),
        "rho33": np.abs(traj.rho[:, 2, 2]),
        "rho32": np.abs(traj.rho[:, 2, 1]),
    }
    scale = float(np.max(np.abs(ratio)))
    norm = scale if scale > 0 else 1.0
    return ResidualMetrics(
        scale=scale,
        maxima={k: float(v.max()) / norm for k, v in raw.items()},
        rms={k: float(np.sqrt(np.mean(v ** 2))) / norm for k, v in raw.items()},
        raw_max={k: float(v.max()) for k, v in raw.items()},
    )
