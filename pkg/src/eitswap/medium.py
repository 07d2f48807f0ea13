"""Medium parameters, the probe coupling constant and regime diagnostics."""

from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import List, Optional, Union

import numpy as np
import tomli
from scipy import constants

from .envelopes import TURN_ON

# CGS values of hbar and c
HBAR_CGS = constants.hbar * 1e7
C_CGS = constants.c * 1e2

PRESET_UNITS = ("gaussian", "si")


@dataclass(frozen=True)
class MediumParams:
    """Coupling constants and light speed in scenario units.

    With the default dimensionless units (time in ``T``, length in ``x0``)
    ``q_p = 1`` and ``x0 = 1``. ``c = inf`` drops every retardation term
    ``x/c``, ``y/c``.
    """

    q_p: float = 1.0
    q_c: Optional[float] = None
    c: float = math.inf
    t_ref: float = 1.0

    def __post_init__(self):
        if not self.q_p > 0:
            raise ValueError("q_p must be positive")
        if self.q_c is not None and not self.q_c > 0:
            raise ValueError("q_c must be positive")
        if not self.c > 0:
            raise ValueError("light speed must be positive")
        if not self.t_ref > 0:
            raise ValueError("t_ref must be positive")

    @property
    def coupling_q(self) -> float:
        return self.q_p if self.q_c is None else self.q_c

    @property
    def x0(self) -> float:
        return characteristic_length(self.q_p, self.t_ref)


@dataclass(frozen=True)
class AtomPreset:
    """Transition angular frequency, dipole moment and number density."""

    omega: float
    mu: float
    density: float
    units: str = "gaussian"
    name: str = ""

    def __post_init__(self):
        if self.units not in PRESET_UNITS:
            raise ValueError(f"preset units must be one of {PRESET_UNITS}, got {self.units!r}")


def coupling_constant(preset: AtomPreset) -> float:
    """``q = 2 pi omega mu^2 N / (hbar c)``, in 1/(cm s) (Gaussian) or 1/(m s) (SI)."""
    for name in ("omega", "mu", "density"):
        if not getattr(preset, name) > 0:
            raise ValueError(f"{name} must be positive")
    if preset.units == "gaussian":
        return 2 * math.pi * preset.omega * preset.mu ** 2 * preset.density / (HBAR_CGS * C_CGS)
    # SI: 2 pi -> 1/(2 epsilon_0)
    return (preset.omega * preset.mu ** 2 * preset.density
            / (2 * constants.epsilon_0 * constants.hbar * constants.c))


def characteristic_length(q: float, T: float) -> float:
    if not (q > 0 and T > 0):
        raise ValueError("q and T must be positive")
    return 1.0 / (q * T)


def load_preset(source: Union[str, Path] = "rb85_d1") -> AtomPreset:
    """Load an atom preset by bundled name or from a TOML file path."""
    path = Path(source)
    if path.suffix == ".toml" and path.exists():
        text = path.read_text(encoding="utf-8")
    else:
        text = resources.files("eitswap.data").joinpath(f"{source}.toml").read_text(encoding="utf-8")
    data = tomli.loads(text)
    missing = {"omega", "mu", "density", "units"} - set(data)
    if missing:
        raise ValueError(f"preset is missing keys: {sorted(missing)}")
    return AtomPreset(omega=float(data["omega"]), mu=float(data["mu"]),
                      density=float(data["density"]), units=data["units"],
                      name=data.get("name", str(source)))


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str


def validate_regime(scn, probe_ratio_max: float = 0.2, min_area: float = 5.0,
                    switch_tol: float = 1e-4, samples: int = 4001) -> List[Diagnostic]:
    """Check a scenario against the weak-probe, adiabatic and switching
    conditions. An empty list means the scenario is valid."""
    diags = []
    storing, retrieving, tau1 = scn.storing, scn.retrieving, scn.tau1

    t = np.linspace(0.0, max(scn.t_max, tau1), samples)
    probe_max = float(np.max(scn.probe(t))) * max(scn.profile.peak, 0.0)
    if storing.plateau > 0:
        ratio = probe_max / storing.plateau
    else:
        ratio = math.inf if probe_max > 0 else 0.0
    if ratio > probe_ratio_max:
        diags.append(Diagnostic(
            "weak-probe",
            f"max probe Rabi / storing plateau = {ratio:.3g} exceeds {probe_ratio_max}"))

    area = min(storing.plateau, retrieving.plateau) * scn.medium.t_ref
    if area < min_area:
        diags.append(Diagnostic(
            "adiabaticity", f"plateau Rabi frequency times T = {area:.3g} is below {min_area}"))

    before = np.linspace(min(0.0, tau1 - 1.0), tau1, samples, endpoint=False)
    early = np.any(np.asarray(retrieving(before)) != 0.0)
    onset = retrieving(tau1) if retrieving.sense == TURN_ON else retrieving.plateau
    if early or onset >= switch_tol * retrieving.plateau:
        diags.append(Diagnostic(
            "retrieval-early",
            f"retrieving coupling is already on at tau1={tau1:g} "
            f"(Omega_c2(tau1) = {onset:.3g}); it must turn on after tau1"))

    after = np.linspace(tau1, max(scn.t_max, tau1 + 1.0), samples)
    late = float(np.max(storing(after)))
    if late >= switch_tol * storing.plateau:
        diags.append(Diagnostic(
            "storage-late",
            f"storing coupling not off by tau1={tau1:g} (max Omega_c1 after tau1 = {late:.3g})"))
    return diags
