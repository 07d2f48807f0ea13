"""Command line: ``eitswap simulate | analytic | oracle | verify``.

Exit codes: 0 success, 1 usage or configuration error, 2 regime or
validation failure, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import analytic, bloch
from .config import RunConfig, apply_overrides, dump_config, load_config, parse_config
from .errors import ConfigError, EITError, NumericalError, RegimeError
from .numeric import kernels
from .numeric.solver import Snapshot, SnapshotSeries, run_scenario
from .numeric.validation import compare_to_analytic
from .snapshots import verify_manifest, write_manifest, write_metrics, write_snapshot

log = logging.getLogger("eitswap")

EXIT_OK, EXIT_CONFIG, EXIT_REGIME, EXIT_NUMERIC = 0, 1, 2, 3
QUANTITIES = (("probe_field", "1/T"), ("new_field", "1/T"), ("coherence", "1"))
VERIFY_TOL = 0.05
_SCHEMES = {"upwind": "upwind", "lw": "lax-wendroff", "lax-wendroff": "lax-wendroff"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", type=Path, help="TOML run configuration")
    p.add_argument("--preset", choices=("fig2",), help="start from a built-in scenario")
    p.add_argument("--out", type=Path, help="output directory (overrides output.dir)")
    p.add_argument("--strict", dest="strict", action="store_true", default=True,
                   help="unknown config keys are errors (default)")
    p.add_argument("--no-strict", dest="strict", action="store_false",
                   help="unknown config keys are warnings")
    p.add_argument("--allow-regime-violations", action="store_true",
                   help="report regime diagnostics as warnings and run anyway")


def _grid_flags(p: argparse.ArgumentParser):
    p.add_argument("--nx", type=int)
    p.add_argument("--ny", type=int)
    p.add_argument("--cfl", type=float)
    p.add_argument("--scheme", choices=sorted(_SCHEMES))
    p.add_argument("--workers", type=int)
    p.add_argument("--binary", action="store_true", default=None,
                   help="write little-endian binary grids instead of text")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="eitswap", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="run the grid solver and write snapshots")
    _common(p)
    _grid_flags(p)
    p.add_argument("--verify", action="store_true", default=None,
                   help="also write metrics against the closed-form solution")

    p = sub.add_parser("analytic", help="write the closed-form fields at the snapshot times")
    _common(p)
    _grid_flags(p)

    p = sub.add_parser("oracle", help="check the adiabatic reduction with the Bloch integrator")
    _common(p)
    p.add_argument("--coupling", type=float, help="coupling Rabi frequency times T")
    p.add_argument("--time-scale", type=float, help="probe duration in units of T")

    p = sub.add_parser("verify", help="compare the solver with the closed form, "
                                      "or check a run manifest")
    _common(p)
    _grid_flags(p)
    p.add_argument("--manifest", type=Path, help="check the checksums of a finished run")
    return parser


def _load(args) -> RunConfig:
    check = not args.allow_regime_violations
    if args.config is not None:
        cfg = load_config(args.config, strict=args.strict, check_regime=False)
    else:
        cfg = parse_config('[scenario]\npreset = "fig2"\n', check_regime=False)
    scheme = getattr(args, "scheme", None)
    cfg = apply_overrides(
        cfg, strict=args.strict, check_regime=check,
        **{"solver.nx": getattr(args, "nx", None), "solver.ny": getattr(args, "ny", None),
           "solver.cfl": getattr(args, "cfl", None),
           "solver.scheme": _SCHEMES[scheme] if scheme else None,
           "solver.workers": getattr(args, "workers", None),
           "output.dir": str(args.out) if args.out is not None else None,
           "output.binary": getattr(args, "binary", None),
           "output.verify": getattr(args, "verify", None),
           "oracle.coupling": getattr(args, "coupling", None),
           "oracle.time_scale": getattr(args, "time_scale", None)})
    for d in cfg.diagnostics:
        log.warning("regime: %s", d.message)
    return cfg


def _meta(cfg: RunConfig, snap: Snapshot, quantity: str, units: str, dx: float, dy: float):
    meta = {"quantity": quantity, "units": units, "t": float(snap.t), "stage": snap.stage,
            "dx": float(dx), "dy": float(dy), "length_unit": "x0", "time_unit": "T"}
    if cfg.units.x0_cm is not None:
        meta["x0_cm"] = cfg.units.x0_cm
        meta["T_s"] = cfg.units.t_seconds
    return meta


def write_series(cfg: RunConfig, series: SnapshotSeries, out: Path) -> List[Path]:
    out.mkdir(parents=True, exist_ok=True)
    dx, dy = series.x[1] - series.x[0], series.y[1] - series.y[0]
    ext = ".bin" if cfg.output.binary else ".txt"
    files = []
    for k, snap in enumerate(series.snapshots):
        for quantity, units in QUANTITIES:
            path = out / f"{quantity}_{k:02d}_t{snap.t:g}{ext}"
            write_snapshot(path, getattr(snap, quantity), _meta(cfg, snap, quantity, units, dx, dy),
                           binary=cfg.output.binary)
            files.append(path)
    return files


def _solver_record(cfg: RunConfig, series: Optional[SnapshotSeries] = None) -> dict:
    rec = dict(cfg.resolved["solver"])
    rec["backend"] = kernels.BACKEND
    if series is not None:
        rec["steps"] = series.steps
    return rec


def _simulate(cfg: RunConfig) -> SnapshotSeries:
    return run_scenario(cfg.scenario, cfg.solver, allow_regime_violations=True)


def _verify_metrics(cfg: RunConfig, series: SnapshotSeries) -> dict:
    report = compare_to_analytic(series, cfg.scenario)
    metrics = {"scheme": cfg.solver.scheme, "nx": cfg.solver.nx, "ny": cfg.solver.ny,
               "cfl": cfg.solver.cfl, "backend": kernels.BACKEND, "steps": series.steps,
               "wall_time_s": round(series.wall_time, 3)}
    metrics.update(report.as_metrics())
    worst = max(report.worst(n) for n in ("field_l2", "coherence_l2",
                                          "interchange_time_shape_l2",
                                          "interchange_profile_l2"))
    metrics["tolerance"] = VERIFY_TOL
    metrics["pass"] = worst < VERIFY_TOL
    return metrics


def cmd_simulate(args) -> int:
    cfg = _load(args)
    series = _simulate(cfg)
    out = Path(cfg.output.dir)
    files = write_series(cfg, series, out)
    status = EXIT_OK
    if cfg.output.verify:
        metrics = _verify_metrics(cfg, series)
        files.append(write_metrics(out / "metrics.txt", metrics))
        if not metrics["pass"]:
            log.error("numeric solution deviates from the closed form by more than %g",
                      VERIFY_TOL)
            status = EXIT_REGIME
    write_manifest(out, dump_config(cfg), _solver_record(cfg, series), files)
    print(f"wrote {len(files)} files to {out} ({series.steps} steps, "
          f"{series.wall_time:.2f} s, backend {kernels.BACKEND})")
    return status


def cmd_analytic(args) -> int:
    cfg = _load(args)
    scn, spec = cfg.scenario, cfg.solver
    x = np.linspace(0.0, scn.x_max, spec.nx)
    y = np.linspace(0.0, scn.y_max, spec.ny)
    snaps = []
    for t in sorted(spec.snapshot_times):
        ref = analytic.grid_fields(scn, t, x, y)
        snaps.append(Snapshot(t, 1 if t < scn.tau1 else 2, ref["coherence"],
                              ref["probe_field"], ref["new_field"]))
    series = SnapshotSeries(x, y, snaps, scheme="analytic")
    out = Path(cfg.output.dir)
    files = write_series(cfg, series, out)
    write_manifest(out, dump_config(cfg), {"solver": "analytic"}, files)
    print(f"wrote {len(files)} files to {out}")
    return EXIT_OK


def run_oracle(cfg: RunConfig):
    """Integrate the Bloch equations for the configured drives; return
    ``(metrics, passed)``."""
    o = cfg.oracle
    history = bloch.fig2_drive_history(coupling=o.coupling, time_scale=o.time_scale,
                                       probe_scale=o.probe_scale, delta=o.delta,
                                       gamma3=o.gamma3, gamma21=o.gamma21)
    traj = bloch.integrate_bloch(history, bloch.ground_state(), o.dt)
    metrics = bloch.adiabatic_residual(traj, history)
    passed = (metrics.maxima["rho21"] <= o.max_rho21_residual
              and metrics.raw_max["rho33"] <= o.max_rho33)
    return metrics, passed


def cmd_oracle(args) -> int:
    cfg = _load(args)
    metrics, passed = run_oracle(cfg)
    o = cfg.oracle
    print(f"coupling*T = {o.coupling:g}, time scale = {o.time_scale:g}, "
          f"max |Omega_p/Omega_c| = {metrics.scale:.4g}")
    print(f"{'element':<8} {'max (norm)':>12} {'rms (norm)':>12} {'max (raw)':>12}")
    for name in metrics.maxima:
        print(f"{name:<8} {metrics.maxima[name]:12.4e} {metrics.rms[name]:12.4e} "
              f"{metrics.raw_max[name]:12.4e}")
    print(f"thresholds: rho21 (norm) <= {o.max_rho21_residual:g}, "
          f"|rho33| <= {o.max_rho33:g} -> {'PASS' if passed else 'FAIL'}")
    return EXIT_OK if passed else EXIT_REGIME


def cmd_verify(args) -> int:
    if args.manifest is not None:
        ok = verify_manifest(args.manifest)
        print(f"manifest {args.manifest}: {'ok' if ok else 'checksum mismatch'}")
        return EXIT_OK if ok else EXIT_REGIME
    cfg = _load(args)
    series = _simulate(cfg)
    metrics = _verify_metrics(cfg, series)
    for key, value in metrics.items():
        print(f"{key}={value}")
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        write_metrics(args.out / "metrics.txt", metrics)
    return EXIT_OK if metrics["pass"] else EXIT_REGIME


COMMANDS = {"simulate": cmd_simulate, "analytic": cmd_analytic, "oracle": cmd_oracle,
            "verify": cmd_verify}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help or a usage error
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RegimeError as exc:
        print(f"regime error: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except EITError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REGIME
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
