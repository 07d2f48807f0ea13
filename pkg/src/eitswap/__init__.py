"""Simulation of EIT light storage with retrieval along a perpendicular axis.

A probe pulse is stored as a ground-state coherence by switching off the
coupling beam along x, and read out by switching on a second coupling beam
along y. The retrieved pulse carries the probe's transverse profile as its
time shape and the probe's time shape as its transverse profile.
"""

from .analytic import (RetardationTable, StoredProfile, coherence, grid_fields,
                       interchange_map, new_field, probe_field, retardation_length,
                       retrieved_time_shape, stored_shape)
from .envelopes import CouplingSchedule, Envelope
from .errors import (CFLViolation, ConfigError, EITError, IntegrationUnstable, NonFiniteError,
                     NumericalError, RegimeError)
from .medium import MediumParams, coupling_constant, characteristic_length, validate_regime
from .scenario import ScenarioConfig, fig2_scenario

__version__ = "0.1.0"

__all__ = [
    "CFLViolation", "ConfigError", "CouplingSchedule", "EITError", "Envelope",
    "IntegrationUnstable", "MediumParams", "NonFiniteError", "NumericalError",
    "RegimeError", "RetardationTable", "ScenarioConfig", "StoredProfile",
    "characteristic_length", "coherence", "coupling_constant", "fig2_scenario",
    "grid_fields", "interchange_map", "new_field", "probe_field", "retardation_length",
    "retrieved_time_shape", "stored_shape", "validate_regime", "__version__",
]
