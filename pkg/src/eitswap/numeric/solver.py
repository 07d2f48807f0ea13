"""Finite-difference solution of the reduced propagation equation.

The solver marches the ground-state coherence ``rho21`` on an ``(ny, nx)``
grid (row = fixed y). During storage the dark-state amplitude moves along x
with speed ``Omega_c1(t)**2 / q``; at ``tau1`` the grid is handed over
unchanged and is then moved along y with speed ``Omega_c2(t)**2 / q``.

Each step advances the time by ``dt`` and displaces the profile by the exact
(Simpson) integral of the speed over the step, so the only discretisation
error is the spatial one of the upwind or Lax-Wendroff stencil. Lines are
independent, which is what makes the row/column parallelism deterministic.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from ..errors import CFLViolation, NonFiniteError, RegimeError
from ..medium import validate_regime
from ..scenario import ScenarioConfig
from . import kernels

DEFAULT_SNAPSHOTS = (4.0, 8.0, 12.0, 15.5, 16.5)


@dataclass(frozen=True)
class SolverSpec:
    scheme: str = "lax-wendroff"
    cfl: float = 0.8
    dt_cap: float = 0.25
    nx: int = 512
    ny: int = 512
    snapshot_times: Tuple[float, ...] = DEFAULT_SNAPSHOTS
    workers: int = 1
    backend: Optional[str] = None

    def __post_init__(self):
        if not 0 < self.cfl <= 1:
            raise ValueError("CFL number must lie in (0, 1]")
        if not self.dt_cap > 0:
            raise ValueError("dt_cap must be positive")
        if self.nx < 3 or self.ny < 3:
            raise ValueError("grids need at least 3 cells per axis")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")
        kernels.scheme_id(self.scheme)
        object.__setattr__(self, "snapshot_times", tuple(float(t) for t in self.snapshot_times))


@dataclass(frozen=True)
class CoherenceGrid:
    values: np.ndarray
    dx: float
    dy: float
    t: float = 0.0

    @property
    def ny(self) -> int:
        return self.values.shape[0]

    @property
    def nx(self) -> int:
        return self.values.shape[1]


@dataclass
class Snapshot:
    t: float
    stage: int
    coherence: np.ndarray
    probe_field: np.ndarray
    new_field: np.ndarray

    @property
    def field(self) -> np.ndarray:
        """Field of the coupling active in this snapshot's stage."""
        return self.probe_field if self.stage == 1 else self.new_field


@dataclass
class SnapshotSeries:
    x: np.ndarray
    y: np.ndarray
    snapshots: List[Snapshot]
    scheme: str = ""
    steps: int = 0
    wall_time: float = 0.0

    def __post_init__(self):
        times = [s.t for s in self.snapshots]
        if any(b <= a for a, b in zip(times, times[1:])):
            raise ValueError("snapshot times must be strictly increasing")

    @property
    def times(self) -> List[float]:
        return [s.t for s in self.snapshots]

    def at(self, t: float) -> Snapshot:
        for s in self.snapshots:
            if s.t == t:
                return s
        raise KeyError(t)


def advect_step(grid: CoherenceGrid, speed: float, dt: float, axis: str,
                spec: SolverSpec, inflow: Optional[np.ndarray] = None) -> CoherenceGrid:
    """Advance ``grid`` by ``dt`` with uniform positive ``speed`` along ``axis``.

    The inflow edge (x = 0 or y = 0) takes ``inflow``, or keeps its current
    values when ``inflow`` is None.
    """
    ax = {"x": 1, "y": 0}.get(axis, axis)
    if ax not in (0, 1):
        raise ValueError("axis must be 'x' or 'y'")
    cell = grid.dx if ax == 1 else grid.dy
    if speed < 0 or dt < 0:
        raise ValueError("speed and dt must be non-negative")
    courant = speed * dt / cell
    if courant > spec.cfl * (1 + 1e-12):
        raise CFLViolation(f"Courant number {courant:.6g} exceeds CFL limit {spec.cfl}")
    if courant == 0:
        return CoherenceGrid(grid.values.copy(), grid.dx, grid.dy, grid.t + dt)
    if inflow is None:
        inflow = grid.values[:, 0] if ax == 1 else grid.values[0, :]
    values = kernels.advect(grid.values, courant, kernels.scheme_id(spec.scheme), ax,
                            inflow, backend=spec.backend)
    _check_finite(values, grid.t + dt)
    return CoherenceGrid(values, grid.dx, grid.dy, grid.t + dt)


def _check_finite(values: np.ndarray, t: float):
    if not np.isfinite(values).all():
        raise NonFiniteError(f"non-finite coherence at t={t:.6g}")


def _displacement(schedule, q: float, t0: float, t1: float) -> float:
    """Composite Simpson integral of ``schedule**2 / q`` over ``[t0, t1]``."""
    nodes = np.linspace(t0, t1, 5)
    rate = np.asarray(schedule(nodes)) ** 2 / q
    h = (t1 - t0) / 4.0
    return float(h / 3.0 * (rate[0] + 4 * rate[1] + 2 * rate[2] + 4 * rate[3] + rate[4]))


class _Pending:
    """A snapshot being assembled while the march passes its sampling times.

    With finite light speed every cell is sampled at its own retarded time;
    cells whose storage-frame time ``t - x/c`` precedes ``tau1`` come from the
    storage march, the others from the retrieval march at ``t - y/c``.
    """

    def __init__(self, t, x, y, c, tau1):
        self.t = t
        shape = (len(y), len(x))
        tau_a = np.broadcast_to(t - x[None, :] / c, shape)
        self.stage1 = tau_a < tau1
        tau_b = np.broadcast_to(np.maximum(t - y[:, None] / c, tau1), shape)
        self.tau = np.where(self.stage1, tau_a, tau_b)
        self.values = np.zeros(shape)
        self.filled = np.zeros(shape, dtype=bool)

    def fill(self, stage, t0, u0, t1, u1):
        sel = ~self.filled & (self.stage1 if stage == 1 else ~self.stage1) & (self.tau <= t1)
        if not sel.any():
            return
        tau = self.tau[sel]
        if t1 > t0:
            w = np.clip((tau - t0) / (t1 - t0), 0.0, 1.0)
            interp = u0[sel] + w * (u1[sel] - u0[sel])
            self.values[sel] = np.where(tau == t1, u1[sel], interp)
        else:
            self.values[sel] = u1[sel]
        self.filled |= sel

    @property
    def done(self) -> bool:
        return bool(self.filled.all())


def _march(u, t, t_end, schedule, q, cell, axis, inflow_fn, stops, spec, pending,
           stage, pool):
    scheme = kernels.scheme_id(spec.scheme)
    steps = 0
    for p in pending:
        p.fill(stage, t, u, t, u)
    while t < t_end:
        target = min(s for s in stops if s > t)
        rate = schedule(t) ** 2 / q
        dt = spec.dt_cap if rate == 0 else min(spec.dt_cap, spec.cfl * cell / rate)
        land = dt >= target - t
        if land:
            dt = target - t
        shift = _displacement(schedule, q, t, t + dt)
        limit = spec.cfl * cell * (1 + 1e-9)
        while shift > limit:
            # speed grew within the step
            dt *= max(0.1, 0.99 * spec.cfl * cell / shift)
            land = False
            shift = _displacement(schedule, q, t, t + dt)
        t_new = target if land else t + dt
        courant = min(shift / cell, spec.cfl)
        if courant == 0:
            u_new = u
        else:
            u_new = kernels.advect(u, courant, scheme, axis, inflow_fn(t_new), pool=pool,
                                   workers=spec.workers, backend=spec.backend)
            _check_finite(u_new, t_new)
        for p in pending:
            p.fill(stage, t, u, t_new, u_new)
        u, t = u_new, t_new
        steps += 1
    return u, t, steps


def _snapshot(p: _Pending, scn: ScenarioConfig) -> Snapshot:
    rho = p.values
    probe = -rho * np.asarray(scn.storing(p.tau))
    new = -rho * np.asarray(scn.retrieving(p.tau))
    stage = 1 if p.t < scn.tau1 else 2
    return Snapshot(p.t, stage, rho, probe, new)


def run_scenario(scn: ScenarioConfig, spec: SolverSpec = SolverSpec(),
                 allow_regime_violations: bool = False) -> SnapshotSeries:
    """Storage along x until ``tau1``, exact handoff, retrieval along y until ``t_max``."""
    diags = validate_regime(scn)
    if diags and not allow_regime_violations:
        raise RegimeError(diags)
    times = sorted(spec.snapshot_times)
    if any(b == a for a, b in zip(times, times[1:])):
        raise ValueError("duplicate snapshot times")
    if times and (times[0] < 0 or times[-1] > scn.t_max):
        raise ValueError(f"snapshot times must lie in [0, {scn.t_max:g}]")

    x = np.linspace(0.0, scn.x_max, spec.nx)
    y = np.linspace(0.0, scn.y_max, spec.ny)
    dx, dy = x[1] - x[0], y[1] - y[0]
    q, c, tau1 = scn.medium.q_p, scn.medium.c, scn.tau1
    pending = [_Pending(t, x, y, c, tau1) for t in times]
    profile = np.asarray(scn.profile(y))

    def storage_inflow(t):
        coupling = scn.storing(t)
        if coupling == 0:
            return np.zeros(len(y))
        return -profile * (scn.probe(t) / coupling)

    def retrieval_inflow(t):
        return np.zeros(len(x))

    started = time.perf_counter()
    steps = 0
    pool = ThreadPoolExecutor(spec.workers) if spec.workers > 1 else None
    try:
        u = np.zeros((len(y), len(x)))
        stage1_end = min(tau1, scn.t_max)
        stops = sorted({t for t in times if t < stage1_end} | {stage1_end})
        u, t, n = _march(u, 0.0, stage1_end, scn.storing, q, dx, 1, storage_inflow, stops,
                         spec, [p for p in pending if p.stage1.any()], 1, pool)
        steps += n
        if scn.t_max > tau1:
            stops = sorted({s for s in times if s > tau1} | {scn.t_max})
            u, t, n = _march(u, tau1, scn.t_max, scn.retrieving, q, dy, 0, retrieval_inflow,
                             stops, spec, [p for p in pending if not p.stage1.all()], 2, pool)
            steps += n
    finally:
        if pool is not None:
            pool.shutdown()
    if not all(p.done for p in pending):
        raise RuntimeError("internal error: snapshot not fully assembled")
    snaps = [_snapshot(p, scn) for p in pending]
    return SnapshotSeries(x, y, snaps, scheme=spec.scheme, steps=steps,
                          wall_time=time.perf_counter() - started)
