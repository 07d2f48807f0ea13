"""Closed-form storage and perpendicular-retrieval solutions.

In the adiabatic, weak-probe limit the dark-state amplitude ``S = Omega_p /
Omega_c`` is transported rigidly with speed ``Omega_c(t)**2 / q``, so every
field is a fixed shape evaluated at a coordinate shifted by the retardation
length ``Phi(t) = int Omega_c(t')**2 / q dt'``:

* storage (``t < tau1``):
  ``Omega_p = Omega_c1(t - x/c) f(x - Phi_1(t - x/c)) a(y)``,
  ``rho21 = -f(x - Phi_1(t - x/c)) a(y)``;
* retrieval (``t >= tau1``):
  ``Omega_n = Omega_c2(t - y/c) a(y - Phi_2(t - y/c)) b(x)``,
  ``rho21 = -a(y - Phi_2(t - y/c)) b(x)``,

with ``b(x) = f(x - Phi_1(tau1 - x/c))`` the stored x-profile and ``Phi_2``
accumulated from ``tau1``. The retrieved pulse thus carries the probe's
transverse profile as its time shape and the probe's time shape as its
transverse profile.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Tuple

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .envelopes import CouplingSchedule, Envelope
from .scenario import ScenarioConfig

QUADRATURE_STEP = 1.0 / 200.0


class RetardationTable:
    """Cumulative trapezoid table of ``Phi(t) = int_start^t Omega_c(t')**2 / q dt'``.

    Samples are spaced by at most ``step``; values in between are linear
    interpolations of the cumulative sums.
    """

    def __init__(self, schedule: CouplingSchedule, q: float, start: float, stop: float,
                 step: float = QUADRATURE_STEP):
        if not stop > start:
            raise ValueError("table needs stop > start")
        if not (q > 0 and step > 0):
            raise ValueError("q and step must be positive")
        n = max(1, math.ceil((stop - start) / step))
        self.schedule = schedule
        self.q = q
        self.start = float(start)
        self.stop = float(stop)
        self.times = np.linspace(self.start, self.stop, n + 1)
        self.step = (self.stop - self.start) / n
        rate = np.asarray(schedule(self.times)) ** 2 / q
        self.phi = cumulative_trapezoid(rate, self.times, initial=0.0)
        keep = np.concatenate(([True], np.diff(self.phi) > 0))
        self._inv_phi = self.phi[keep]
        self._inv_t = self.times[keep]

    def __call__(self, t):
        """``Phi(t)``; raises for times outside the table."""
        arr = np.asarray(t, dtype=float)
        tol = 1e-9 * max(1.0, abs(self.stop))
        if np.any(arr < self.start - tol) or np.any(arr > self.stop + tol):
            raise ValueError(
                f"time outside retardation table [{self.start:g}, {self.stop:g}]")
        out = np.interp(arr, self.times, self.phi)
        return float(out) if np.ndim(t) == 0 else out

    def clamped(self, t):
        """``Phi`` with times before the table start mapped to 0."""
        arr = np.maximum(np.asarray(t, dtype=float), self.start)
        return self(arr if np.ndim(t) else float(arr))

    @property
    def total(self) -> float:
        return float(self.phi[-1])

    def entry_time(self, phi):
        """Earliest time at which ``Phi`` reaches ``phi`` (NaN beyond the table)."""
        arr = np.asarray(phi, dtype=float)
        out = np.interp(arr, self._inv_phi, self._inv_t, left=np.nan, right=np.nan)
        return out


def retardation_length(tab: RetardationTable, t0: float, t1: float) -> float:
    """Distance a dark-state feature travels between ``t0`` and ``t1``."""
    if t0 > t1:
        raise ValueError("retardation_length needs t0 <= t1")
    return tab(t1) - tab(t0)


class _Solution:
    """Tables and shapes shared by every evaluation for one scenario."""

    def __init__(self, scn: ScenarioConfig):
        self.scn = scn
        q = scn.medium.q_p
        stop = max(scn.t_max, scn.tau1)
        self.phi1 = RetardationTable(scn.storing, q, 0.0, stop)
        if scn.t_max > scn.tau1:
            self.phi2 = RetardationTable(scn.retrieving, q, scn.tau1, scn.t_max)
        else:
            self.phi2 = None

    def entry_ratio(self, t):
        """Dark-state amplitude ``Omega_p / Omega_c1`` injected at x = 0 at time ``t``."""
        t = np.asarray(t, dtype=float)
        ok = np.isfinite(t)
        tt = np.where(ok, t, 0.0)
        coupling = np.asarray(self.scn.storing(tt))
        probe = np.asarray(self.scn.probe(tt))
        safe = np.where(coupling > 0, coupling, 1.0)
        return np.where(ok & (coupling > 0), probe / safe, 0.0)

    def f(self, xi):
        """Probe shape in the co-moving coordinate ``xi = x - Phi_1``.

        ``f(-Phi_1(t_e))`` is the amplitude that entered at ``t_e``; positions
        ahead of the first injected feature (``xi > 0``) are empty.
        """
        xi = np.asarray(xi, dtype=float)
        t_entry = self.phi1.entry_time(-xi)
        return np.where(xi <= 0, self.entry_ratio(t_entry), 0.0)

    def stage1_phi(self, t, x):
        tau = t - np.asarray(x, dtype=float) / self.scn.medium.c
        return tau, self.phi1.clamped(tau)

    def b(self, x):
        x = np.asarray(x, dtype=float)
        _, phi = self.stage1_phi(self.scn.tau1, x)
        return self.f(x - phi)

    def stage2_phi(self, t, y):
        sigma = t - np.asarray(y, dtype=float) / self.scn.medium.c
        if self.phi2 is None:
            raise ValueError("scenario ends before tau1; no retrieval stage")
        return sigma, self.phi2.clamped(sigma)


@lru_cache(maxsize=16)
def _solution(scn: ScenarioConfig) -> _Solution:
    return _Solution(scn)


def stored_shape(scn: ScenarioConfig, xi):
    """The function ``f`` of the storage-stage solution."""
    return _solution(scn).f(xi)


def probe_field(scn: ScenarioConfig, t: float, x, y):
    sol = _solution(scn)
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    tau, phi = sol.stage1_phi(t, x)
    tau = np.broadcast_to(tau, x.shape)
    coupling = np.where(tau < 0, 0.0, scn.storing(np.maximum(tau, 0.0)))
    out = coupling * sol.f(x - phi) * scn.profile(y)
    return float(out) if out.ndim == 0 else out


def coherence(scn: ScenarioConfig, t: float, x, y):
    """Ground-state coherence ``rho21`` (the stored spin wave)."""
    sol = _solution(scn)
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    if t < scn.tau1:
        _, phi = sol.stage1_phi(t, x)
        out = -sol.f(x - phi) * scn.profile(y)
    else:
        _, phi2 = sol.stage2_phi(t, y)
        out = -scn.profile(y - phi2) * sol.b(x)
    return float(out) if np.ndim(out) == 0 else out


def new_field(scn: ScenarioConfig, t: float, x, y):
    """Field generated along y by the retrieving coupling."""
    sol = _solution(scn)
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    if t < scn.tau1:
        out = np.zeros(x.shape)
    else:
        sigma, phi2 = sol.stage2_phi(t, y)
        out = np.asarray(scn.retrieving(sigma)) * scn.profile(y - phi2) * sol.b(x)
    return float(out) if np.ndim(out) == 0 else out


def retrieved_time_shape(scn: ScenarioConfig, t: float, y):
    """Probe profile shifted to where the retrieving coupling has carried it,
    ``a(y - Phi_2(t - y/c))``."""
    _, phi2 = _solution(scn).stage2_phi(t, y)
    return scn.profile(np.asarray(y, dtype=float) - phi2)


@dataclass(frozen=True)
class StoredProfile:
    """Transverse profile ``b(x)`` of the retrieved field."""

    scn: ScenarioConfig

    def __call__(self, x):
        out = _solution(self.scn).b(x)
        return float(out) if np.ndim(out) == 0 else out


def interchange_map(scn: ScenarioConfig) -> Tuple[Envelope, StoredProfile]:
    """Time shape ``g`` (of y) and transverse profile ``b`` (of x) of the retrieved field.

    ``g`` is the probe's transverse profile itself; ``b`` is the probe's time
    shape frozen at its stored position.
    """
    return scn.profile, StoredProfile(scn)


def grid_fields(scn: ScenarioConfig, t: float, x, y):
    """Probe field, new field and coherence on the ``(y, x)`` grid, row = fixed y."""
    xx = np.asarray(x, dtype=float)[None, :]
    yy = np.asarray(y, dtype=float)[:, None]
    shape = (yy.shape[0], xx.shape[1])
    return {
        "probe_field": np.broadcast_to(probe_field(scn, t, xx, yy), shape).copy(),
        "new_field": np.broadcast_to(new_field(scn, t, xx, yy), shape).copy(),
        "coherence": np.broadcast_to(coherence(scn, t, xx, yy), shape).copy(),
    }
