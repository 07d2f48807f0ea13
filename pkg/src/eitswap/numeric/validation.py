"""Numeric-versus-analytic comparison, interchange metrics and convergence study."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from .. import analytic
from ..envelopes import CouplingSchedule, Envelope, TURN_OFF, TURN_ON
from ..medium import Diagnostic
from ..scenario import ScenarioConfig
from .solver import SnapshotSeries, SolverSpec, run_scenario


def normalized_l2(u, ref) -> float:
    u, ref = np.asarray(u, dtype=float), np.asarray(ref, dtype=float)
    scale = np.linalg.norm(ref)
    diff = np.linalg.norm(u - ref)
    if scale == 0:
        return float(diff)
    return float(diff / scale)


def normalized_linf(u, ref) -> float:
    u, ref = np.asarray(u, dtype=float), np.asarray(ref, dtype=float)
    scale = np.max(np.abs(ref)) if ref.size else 0.0
    diff = np.max(np.abs(u - ref)) if ref.size else 0.0
    if scale == 0:
        return float(diff)
    return float(diff / scale)


def shape_l2(u, ref) -> float:
    """Normalized L2 distance after scaling both curves to unit peak."""
    u, ref = np.asarray(u, dtype=float), np.asarray(ref, dtype=float)
    pu = u[np.argmax(np.abs(u))]
    pr = ref[np.argmax(np.abs(ref))]
    if pr == 0:
        return float(np.linalg.norm(u))
    if pu == 0:
        return 1.0
    return normalized_l2(u / pu, ref / pr)


@dataclass
class SnapshotErrors:
    t: float
    stage: int
    field_l2: float
    field_linf: float
    coherence_l2: float
    coherence_linf: float
    interchange_time_shape_l2: Optional[float] = None
    interchange_profile_l2: Optional[float] = None


@dataclass
class ErrorReport:
    rows: List[SnapshotErrors] = field(default_factory=list)

    def worst(self, name: str) -> float:
        vals = [getattr(r, name) for r in self.rows if getattr(r, name) is not None]
        return max(vals) if vals else 0.0

    def as_metrics(self) -> dict:
        """Flat ``key -> value`` mapping for the metrics summary file."""
        out = {}
        for k, r in enumerate(self.rows):
            prefix = f"snapshot{k}"
            out[f"{prefix}.t"] = r.t
            out[f"{prefix}.stage"] = r.stage
            for name in ("field_l2", "field_linf", "coherence_l2", "coherence_linf",
                         "interchange_time_shape_l2", "interchange_profile_l2"):
                value = getattr(r, name)
                if value is not None:
                    out[f"{prefix}.{name}"] = value
        for name in ("field_l2", "coherence_l2", "interchange_time_shape_l2",
                     "interchange_profile_l2"):
            out[f"max.{name}"] = self.worst(name)
        return out


def compare_to_analytic(series: SnapshotSeries, scn: ScenarioConfig) -> ErrorReport:
    """Errors of every snapshot against the closed-form solution.

    For retrieval snapshots the interchange metrics compare the retrieved
    field's y-cut through its maximum with the shifted probe profile and its
    x-cut with the stored probe time shape.
    """
    x, y = np.asarray(series.x), np.asarray(series.y)
    report = ErrorReport()
    _, stored = analytic.interchange_map(scn)
    for snap in series.snapshots:
        if snap.coherence.shape != (len(y), len(x)):
            raise ValueError(f"snapshot at t={snap.t:g} has shape {snap.coherence.shape}, "
                             f"expected {(len(y), len(x))}")
        ref = analytic.grid_fields(scn, snap.t, x, y)
        ref_field = ref["probe_field"] if snap.stage == 1 else ref["new_field"]
        row = SnapshotErrors(
            t=snap.t, stage=snap.stage,
            field_l2=normalized_l2(snap.field, ref_field),
            field_linf=normalized_linf(snap.field, ref_field),
            coherence_l2=normalized_l2(snap.coherence, ref["coherence"]),
            coherence_linf=normalized_linf(snap.coherence, ref["coherence"]),
        )
        if snap.stage == 2 and np.any(snap.field != 0):
            j, i = np.unravel_index(np.argmax(np.abs(snap.field)), snap.field.shape)
            time_shape = analytic.retrieved_time_shape(scn, snap.t, y)
            row.interchange_time_shape_l2 = shape_l2(snap.field[:, i], time_shape)
            row.interchange_profile_l2 = shape_l2(snap.field[j, :], stored(x))
        report.rows.append(row)
    return report


def transport_scenario(x_max: float = 600.0, t_max: float = 5.0) -> ScenarioConfig:
    """Constant coupling carrying one smooth Gaussian probe; no storage stage.

    The probe starts ``5`` widths after ``t = 0`` so the injected profile is
    smooth to round-off, which the convergence study needs.
    """
    flat = Envelope.sampled([1.0, 1.0], start=0.0, step=1.0)
    storing = CouplingSchedule(plateau=10.0, edge_center=1e3, sense=TURN_OFF)
    retrieving = CouplingSchedule(plateau=10.0, edge_center=2e3, sense=TURN_ON,
                                  activation=1.5e3)
    return ScenarioConfig(probe=Envelope.gaussian_sum([(1.0, 3.0, 0.6)]), profile=flat,
                          storing=storing, retrieving=retrieving, tau1=1.5e3,
                          x_max=x_max, y_max=1.0, t_max=t_max)


@dataclass
class ConvergenceResult:
    scheme: str
    resolutions: List[int]
    errors: List[float]

    @property
    def ratios(self) -> List[float]:
        return [a / b for a, b in zip(self.errors, self.errors[1:])]


def convergence_study(scheme: str, resolutions: Sequence[int] = (256, 512),
                      cfl: float = 0.8, scn: Optional[ScenarioConfig] = None,
                      backend: Optional[str] = None) -> ConvergenceResult:
    """Absolute L-infinity coherence error at ``t_max`` for each x resolution."""
    scn = scn or transport_scenario()
    errors = []
    for nx in resolutions:
        spec = SolverSpec(scheme=scheme, cfl=cfl, nx=nx, ny=3, snapshot_times=(scn.t_max,),
                          backend=backend)
        series = run_scenario(scn, spec, allow_regime_violations=True)
        snap = series.snapshots[-1]
        exact = analytic.grid_fields(scn, snap.t, series.x, series.y)["coherence"]
        errors.append(float(np.max(np.abs(snap.coherence - exact))))
    return ConvergenceResult(scheme, list(resolutions), errors)


def domain_diagnostics(scn: ScenarioConfig, rel_tol: float = 1e-6) -> List[Diagnostic]:
    """Warn when the stored spin wave is cut by the outflow edges of the grid."""
    diags = []
    _, stored = analytic.interchange_map(scn)
    x = np.linspace(0.0, scn.x_max, 4001)
    b = np.abs(stored(x))
    if b.max() > 0 and b[-1] > rel_tol * b.max():
        diags.append(Diagnostic("domain-x", f"stored profile reaches x_max={scn.x_max:g} "
                                            f"at {b[-1] / b.max():.2g} of its peak"))
    y = np.linspace(0.0, scn.y_max, 4001)
    a = np.abs(scn.profile(y))
    if a.max() > 0 and max(a[0], a[-1]) > rel_tol * a.max():
        diags.append(Diagnostic("domain-y", "probe profile is truncated by the y extent"))
    return diags
