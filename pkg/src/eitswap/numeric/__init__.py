"""Grid solver for the two-stage storage and perpendicular retrieval."""

from .kernels import BACKEND
from .solver import (CoherenceGrid, Snapshot, SnapshotSeries, SolverSpec, advect_step,
                     run_scenario)
from .validation import (ConvergenceResult, ErrorReport, compare_to_analytic,
                         convergence_study, domain_diagnostics, transport_scenario)

__all__ = [
    "BACKEND", "CoherenceGrid", "ConvergenceResult", "ErrorReport", "Snapshot",
    "SnapshotSeries", "SolverSpec", "advect_step", "compare_to_analytic",
    "convergence_study", "domain_diagnostics", "run_scenario", "transport_scenario",
]
