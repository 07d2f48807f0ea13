"""Scenario container binding envelopes, schedules and the medium."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from .envelopes import (CouplingSchedule, Envelope, fig2_probe, fig2_profile,
                        fig2_retrieving, fig2_storing)
from .medium import MediumParams

FIG2_TAU1 = 11.5


@dataclass(frozen=True)
class ScenarioConfig:
    """Storage along x, handoff at ``tau1``, retrieval along y.

    ``probe`` is the entrance probe Rabi frequency ``Omega_p(t, x=0)`` per unit
    transverse profile, i.e. the product ``f(t) * Omega_c1(t)``; ``profile`` is
    ``a(y)``.
    """

    probe: Envelope
    profile: Envelope
    storing: CouplingSchedule
    retrieving: CouplingSchedule
    tau1: float
    medium: MediumParams = field(default_factory=MediumParams)
    x_max: float = 1000.0
    y_max: float = 400.0
    t_max: float = 20.0

    def __post_init__(self):
        if not (self.x_max > 0 and self.y_max > 0 and self.t_max > 0):
            raise ValueError("domain extents must be positive")

    def probe_product(self, t):
        return self.probe(t)

    def with_tau1(self, tau1: float) -> "ScenarioConfig":
        """Move the handoff time, keeping the retrieving schedule gated at it."""
        return replace(self, tau1=tau1, retrieving=replace(self.retrieving, activation=tau1))


def fig2_scenario(tau1: float = FIG2_TAU1) -> ScenarioConfig:
    """The two-humped probe, Gaussian profile and switching schedules of Fig. 2."""
    return ScenarioConfig(probe=fig2_probe(), profile=fig2_profile(),
                          storing=fig2_storing(), retrieving=fig2_retrieving(tau1),
                          tau1=tau1)
