"""Acceptance gate: eight criteria, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v`` (the lines are repeated in
the terminal summary) or directly with ``python tests/test_acceptance.py``.
"""

import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from eitswap import analytic  # noqa: E402
from eitswap.bloch import (adiabatic_residual, fig2_drive_history, ground_state,  # noqa: E402
                           integrate_bloch)
from eitswap.cli import main  # noqa: E402
from eitswap.medium import characteristic_length, coupling_constant, load_preset  # noqa: E402
from eitswap.numeric import (SolverSpec, compare_to_analytic, convergence_study,  # noqa: E402
                             run_scenario)
from eitswap.scenario import fig2_scenario  # noqa: E402

from acceptance_report import report  # noqa: E402
import oracles  # noqa: E402

TOL_L2 = 0.05


def _fig2_run():
    scn = fig2_scenario()
    start = time.perf_counter()
    series = run_scenario(scn, SolverSpec(scheme="lax-wendroff", cfl=0.8, nx=512, ny=512))
    return scn, series, time.perf_counter() - start


def check_interchange(scn, series, runtime):
    rep = compare_to_analytic(series, scn)
    g = rep.worst("interchange_time_shape_l2")
    b = rep.worst("interchange_profile_l2")
    ok = g < TOL_L2 and b < TOL_L2 and runtime < 60.0
    return report(1, "interchange theorem", ok,
                  f"y-cut L2={g:.2e}, x-cut L2={b:.2e} (< {TOL_L2}), runtime {runtime:.1f} s (< 60)")


def check_agreement(scn, series):
    rep = compare_to_analytic(series, scn)
    f, c = rep.worst("field_l2"), rep.worst("coherence_l2")
    return report(2, "analytic-numeric agreement", f < TOL_L2 and c < TOL_L2,
                  f"worst field L2={f:.2e}, coherence L2={c:.2e} over t={series.times}")


def check_convergence():
    up = convergence_study("upwind", (256, 512)).ratios[0]
    lw = convergence_study("lax-wendroff", (256, 512)).ratios[0]
    ok = 1.6 <= up <= 2.4 and 3.2 <= lw <= 4.8
    return report(3, "convergence orders", ok,
                  f"upwind ratio {up:.3f} in [1.6, 2.4], Lax-Wendroff ratio {lw:.3f} in [3.2, 4.8]")


def check_freeze():
    scn = fig2_scenario()
    lo, hi = oracles.DARK_WINDOW
    times = tuple(np.round(np.linspace(lo + 0.005, hi - 0.005, 6), 6))
    series = run_scenario(scn, SolverSpec(nx=512, ny=512, snapshot_times=times))
    ref = series.snapshots[0].coherence
    change = max(float(np.max(np.abs(s.coherence - ref))) for s in series.snapshots)
    field = max(max(float(np.max(np.abs(s.probe_field))), float(np.max(np.abs(s.new_field))))
                for s in series.snapshots)
    probe_peak = float(np.max(scn.probe(np.linspace(0, 12, 12001)))) * scn.profile.peak
    ok = change < 1e-10 and field < 1e-4 * probe_peak
    return report(4, "storage freeze", ok,
                  f"max coherence change {change:.1e} (< 1e-10), max |field| {field:.1e} "
                  f"(< {1e-4 * probe_peak:.1e}) over t in [{times[0]}, {times[-1]}]")


def check_matching():
    scn = fig2_scenario()
    x = np.linspace(0, scn.x_max, 128)[None, :]
    y = np.linspace(0, scn.y_max, 128)[:, None]
    before = analytic.coherence(scn, scn.tau1 - 1e-9, x, y)
    after = analytic.coherence(scn, scn.tau1, x, y)
    diff = float(np.max(np.abs(before - after)))
    return report(5, "matching condition at tau1", diff < 1e-6,
                  f"max |rho21(tau1-) - rho21(tau1+)| = {diff:.1e} (< 1e-6) on 128x128")


def _oracle(time_scale):
    h = fig2_drive_history(coupling=10.0, time_scale=time_scale)
    m = adiabatic_residual(integrate_bloch(h, ground_state(), 1e-3), h)
    return m.scale, m.maxima["rho21"], m.raw_max["rho33"]


def check_adiabatic():
    s1, r1, p1 = _oracle(1.0)
    _, r2, p2 = _oracle(2.0)
    ok = s1 <= 0.12 * (1 + 1e-12) and r1 <= 0.05 and p1 <= 0.02 and r2 < r1 and p2 < p1
    return report(6, "adiabatic reduction", ok,
                  f"max ratio {s1:.6f}; T: rho21 {r1:.2e}, |rho33| {p1:.2e}; "
                  f"2T: rho21 {r2:.2e}, |rho33| {p2:.2e}")


def check_anchor():
    x0 = characteristic_length(coupling_constant(load_preset("rb85_d1")), 1e-6)
    factor = max(x0 / oracles.PAPER_X0_CM, oracles.PAPER_X0_CM / x0)
    return report(7, "Rb85 x0 anchor", factor <= 3.0,
                  f"x0 = {x0:.3e} cm vs 0.002 cm, off by a factor {factor:.0f} (limit 3)")


def check_determinism(tmp: Path):
    runs = []
    for k, workers in enumerate((1, 1, 4)):
        out = tmp / f"run{k}"
        rc = main(["simulate", "--preset", "fig2", "--out", str(out), "--workers", str(workers)])
        files = sorted(p for p in out.glob("*.txt"))
        runs.append((rc, {p.name: p.read_bytes() for p in files}))
    ok = all(rc == 0 for rc, _ in runs) and len(runs[0][1]) == 15 \
        and runs[0][1] == runs[1][1] == runs[2][1]
    return report(8, "determinism", ok,
                  f"{len(runs[0][1])} snapshot files byte-identical across runs "
                  f"with 1, 1 and 4 workers: {ok}")


@pytest.fixture(scope="module")
def fig2_run():
    return _fig2_run()


def test_criterion_1_interchange(fig2_run):
    assert check_interchange(*fig2_run)


def test_criterion_2_agreement(fig2_run):
    scn, series, _ = fig2_run
    assert check_agreement(scn, series)


def test_criterion_3_convergence():
    assert check_convergence()


def test_criterion_4_storage_freeze():
    assert check_freeze()


def test_criterion_5_matching():
    assert check_matching()


def test_criterion_6_adiabatic_reduction():
    assert check_adiabatic()


def test_criterion_7_physical_anchor():
    assert check_anchor()


def test_criterion_8_determinism(tmp_path):
    assert check_determinism(tmp_path)


if __name__ == "__main__":
    import tempfile

    scn, series, runtime = _fig2_run()
    results = [check_interchange(scn, series, runtime), check_agreement(scn, series),
               check_convergence(), check_freeze(), check_matching(), check_adiabatic(),
               check_anchor()]
    with tempfile.TemporaryDirectory() as d:
        results.append(check_determinism(Path(d)))
    print(f"{sum(results)}/{len(results)} criteria pass")
    sys.exit(0 if all(results) else 1)
