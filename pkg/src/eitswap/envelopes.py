"""One-dimensional shape functions: probe envelopes, transverse profiles and
coupling-beam switching schedules.

All quantities are dimensionless: time in units of the probe duration ``T``,
length in units of ``x0 = 1/(qT)`` and Rabi frequencies in ``1/T``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

GAUSSIAN_SUM = "gaussian-sum"
PLATEAU_EDGE = "piecewise-constant-gaussian"
SAMPLED = "sampled"

TURN_OFF = "turn-off"
TURN_ON = "turn-on"

DEFAULT_TRUNCATION = 6.0
# Coupling edges are switched hard to zero once they fall below this fraction
# of the plateau, so that storage is an exact freeze.
DEFAULT_SWITCH_CUTOFF = 1e-5

Triple = Tuple[float, float, float]


@dataclass(frozen=True)
class Envelope:
    """A real, non-negative shape of one coordinate.

    ``params`` holds ``(amplitude, center, width)`` triples for the parametric
    kinds; each Gaussian term is ``amplitude * exp(-((u - center)/width)**2)``.
    For ``sampled`` envelopes, ``samples`` are values on the uniform grid
    ``start + k*step`` and evaluation interpolates linearly.

    ``plateau_side`` only matters for the plateau-edge kind: ``"before"`` keeps
    the amplitude constant for ``u <= center`` and decays after it.
    """

    kind: str
    params: Tuple[Triple, ...] = ()
    samples: Tuple[float, ...] = ()
    start: float = 0.0
    step: float = 1.0
    plateau_side: str = "before"
    truncation: float = DEFAULT_TRUNCATION

    def __post_init__(self):
        if self.kind not in (GAUSSIAN_SUM, PLATEAU_EDGE, SAMPLED):
            raise ValueError(f"unknown envelope kind {self.kind!r}")
        for amp, _, width in self.params:
            if amp < 0 or width <= 0:
                raise ValueError("envelope terms need amplitude >= 0 and width > 0")
        if self.kind == PLATEAU_EDGE and len(self.params) != 1:
            raise ValueError("plateau-edge envelope takes exactly one term")
        if self.kind == SAMPLED:
            if self.step <= 0 or len(self.samples) < 2:
                raise ValueError("sampled envelope needs >= 2 samples and step > 0")
            if min(self.samples) < 0:
                raise ValueError("sampled envelope values must be non-negative")
        if self.plateau_side not in ("before", "after"):
            raise ValueError("plateau_side must be 'before' or 'after'")

    @classmethod
    def gaussian_sum(cls, terms: Sequence[Sequence[float]], truncation=DEFAULT_TRUNCATION):
        return cls(GAUSSIAN_SUM, tuple(tuple(float(v) for v in t) for t in terms),
                   truncation=truncation)

    @classmethod
    def plateau_edge(cls, amplitude, center, width, plateau_side="before",
                     truncation=DEFAULT_TRUNCATION):
        return cls(PLATEAU_EDGE, ((float(amplitude), float(center), float(width)),),
                   plateau_side=plateau_side, truncation=truncation)

    @classmethod
    def sampled(cls, values: Sequence[float], start: float, step: float):
        return cls(SAMPLED, samples=tuple(float(v) for v in values),
                   start=float(start), step=float(step))

    @property
    def support(self) -> Tuple[float, float]:
        """Window outside of which the envelope evaluates to exactly zero."""
        if self.kind == SAMPLED:
            return self.start, self.start + self.step * (len(self.samples) - 1)
        if not self.params:
            return 0.0, 0.0
        if self.kind == PLATEAU_EDGE:
            _, c, w = self.params[0]
            if self.plateau_side == "before":
                return -math.inf, c + self.truncation * w
            return c - self.truncation * w, math.inf
        lo = min(c - self.truncation * w for _, c, w in self.params)
        hi = max(c + self.truncation * w for _, c, w in self.params)
        return lo, hi

    @property
    def peak(self) -> float:
        if self.kind == SAMPLED:
            return max(self.samples)
        if self.kind == PLATEAU_EDGE:
            return self.params[0][0]
        if not self.params:
            return 0.0
        centers = np.array([c for _, c, _ in self.params])
        widths = np.array([w for _, _, w in self.params])
        grid = np.linspace(centers.min() - 3 * widths.max(),
                           centers.max() + 3 * widths.max(), 20001)
        values = self(grid)
        k = int(np.argmax(values))
        lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, len(grid) - 1)]
        # polish the grid maximum
        res = minimize_scalar(lambda u: -self(u), bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-12})
        return float(max(values[k], -res.fun))

    def __call__(self, u):
        return eval_envelope(self, u)


def eval_envelope(env: Envelope, u):
    """Evaluate ``env`` at ``u`` (scalar or array); returns the same shape."""
    arr = np.asarray(u, dtype=float)
    if env.kind == SAMPLED:
        grid = env.start + env.step * np.arange(len(env.samples))
        out = np.interp(arr, grid, np.asarray(env.samples), left=0.0, right=0.0)
    elif env.kind == PLATEAU_EDGE:
        amp, c, w = env.params[0]
        z = (arr - c) / w
        if env.plateau_side == "before":
            edge = z > 0
            cut = z > env.truncation
        else:
            edge = z < 0
            cut = z < -env.truncation
        out = np.where(edge, amp * np.exp(-z * z), amp)
        out = np.where(cut, 0.0, out)
    else:
        out = np.zeros_like(arr)
        for amp, c, w in env.params:
            z = (arr - c) / w
            term = amp * np.exp(-z * z)
            out = out + np.where(np.abs(z) > env.truncation, 0.0, term)
    if np.ndim(u) == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class CouplingSchedule:
    """Rabi frequency of a coupling beam that is switched off or on.

    A turn-off schedule holds ``plateau`` until ``edge_center`` and then decays
    as a Gaussian of width ``edge_width``. A turn-on schedule is identically
    zero before ``activation``, rises as a Gaussian edge and saturates at
    ``plateau`` from ``edge_center`` on. Edge values smaller than
    ``cutoff * plateau`` are set to exactly zero.
    """

    plateau: float
    edge_center: float
    edge_width: float = 1.0
    sense: str = TURN_OFF
    activation: float = -math.inf
    cutoff: float = DEFAULT_SWITCH_CUTOFF

    def __post_init__(self):
        if self.sense not in (TURN_OFF, TURN_ON):
            raise ValueError(f"unknown schedule sense {self.sense!r}")
        if self.plateau < 0 or self.edge_width <= 0:
            raise ValueError("schedule needs plateau >= 0 and edge_width > 0")
        if not 0 <= self.cutoff < 1:
            raise ValueError("cutoff must lie in [0, 1)")

    @property
    def edge_radius(self) -> float:
        """Distance from the edge center, in widths, where the edge is cut."""
        if self.cutoff == 0:
            return math.inf
        return math.sqrt(-math.log(self.cutoff))

    @property
    def envelope(self) -> Envelope:
        side = "before" if self.sense == TURN_OFF else "after"
        return Envelope.plateau_edge(self.plateau, self.edge_center, self.edge_width,
                                     plateau_side=side, truncation=self.edge_radius)

    def dark_after(self) -> float:
        """First time from which a turn-off schedule is exactly zero."""
        return self.edge_center + self.edge_radius * self.edge_width

    def dark_before(self) -> float:
        """Last time up to which a turn-on schedule is exactly zero."""
        return max(self.activation, self.edge_center - self.edge_radius * self.edge_width)

    def __call__(self, t):
        return eval_schedule(self, t)


def eval_schedule(sch: CouplingSchedule, t):
    """Rabi frequency of ``sch`` at time(s) ``t``."""
    arr = np.asarray(t, dtype=float)
    out = np.asarray(eval_envelope(sch.envelope, arr), dtype=float)
    if sch.sense == TURN_ON:
        out = np.where(arr < sch.activation, 0.0, out)
    if np.ndim(t) == 0:
        return float(out)
    return out


def fig2_probe() -> Envelope:
    """Entrance probe Rabi frequency ``f(t)*Omega_c1(t)*T`` of the Fig. 2 preset."""
    return Envelope.gaussian_sum([(0.9, 2.5, 1.0), (1.2, 6.0, 1.0)])


def fig2_profile() -> Envelope:
    """Transverse probe profile ``a(y) = exp(-(y/(20 x0) - 5)**2)``."""
    return Envelope.gaussian_sum([(1.0, 100.0, 20.0)])


def fig2_storing() -> CouplingSchedule:
    return CouplingSchedule(plateau=10.0, edge_center=8.0, edge_width=1.0, sense=TURN_OFF)


def fig2_retrieving(tau1: float) -> CouplingSchedule:
    return CouplingSchedule(plateau=10.0, edge_center=15.0, edge_width=1.0,
                            sense=TURN_ON, activation=tau1)
