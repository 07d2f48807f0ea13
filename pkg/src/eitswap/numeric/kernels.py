"""Backend selection for the advection kernels.

The compiled Cython kernel is used when it was built; otherwise (or when
``EITSWAP_PURE_PYTHON`` is set) the numpy fallback is used. Both produce
bit-identical results.
"""

from __future__ import annotations

import os
from concurrent.futures import Executor
from typing import Optional

import numpy as np

from . import _advect_py

_compiled = None
if not os.environ.get("EITSWAP_PURE_PYTHON"):
    try:
        from . import _advect as _compiled
    except ImportError:
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"

SCHEME_IDS = {"upwind": 0, "upwind-1": 0, "lax-wendroff": 1, "lax-wendroff-2": 1, "lw": 1}


def scheme_id(name: str) -> int:
    try:
        return SCHEME_IDS[name]
    except KeyError:
        raise ValueError(f"unknown scheme {name!r}; expected upwind or lax-wendroff") from None


def available_backends():
    return ["cython", "python"] if _compiled is not None else ["python"]


def _kernel(backend: Optional[str]):
    backend = backend or BACKEND
    if backend == "cython":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        return _compiled.advect_lines
    if backend == "python":
        return _advect_py.advect_lines
    raise ValueError(f"unknown backend {backend!r}")


def advect(u: np.ndarray, courant: float, scheme: int, axis: int, inflow: np.ndarray,
           pool: Optional[Executor] = None, workers: int = 1,
           backend: Optional[str] = None) -> np.ndarray:
    """One explicit step of every line of ``u`` along ``axis``; returns a new array.

    Lines are independent, so splitting them across ``workers`` threads in
    ``pool`` does not change the result.
    """
    kernel = _kernel(backend)
    u = np.ascontiguousarray(u, dtype=np.float64)
    inflow = np.ascontiguousarray(inflow, dtype=np.float64)
    n_lines = u.shape[1 - axis]
    if inflow.shape != (n_lines,):
        raise ValueError(f"inflow must have shape ({n_lines},), got {inflow.shape}")
    out = np.empty_like(u)
    if pool is None or workers <= 1 or n_lines < 2 * workers:
        kernel(u, float(courant), scheme, axis, inflow, out, 0, n_lines)
        return out
    bounds = np.linspace(0, n_lines, workers + 1).astype(int)
    jobs = [pool.submit(kernel, u, float(courant), scheme, axis, inflow, out, int(a), int(b))
            for a, b in zip(bounds[:-1], bounds[1:])]
    for job in jobs:
        job.result()
    return out
