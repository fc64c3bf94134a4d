"""Steady states of a driven three-level Lambda atom in an optical cavity."""

from ._core import (
    ConfigError,
    SolverError,
    SystemParams,
    TruncationPolicy,
    cooperativity,
    drive_from_input,
    execute,
    g_from_C,
    liouvillian,
    predicted_peak_detunings,
    steady_state,
    sweep,
)

__all__ = [
    "ConfigError",
    "SolverError",
    "SystemParams",
    "TruncationPolicy",
    "cooperativity",
    "drive_from_input",
    "execute",
    "g_from_C",
    "liouvillian",
    "predicted_peak_detunings",
    "steady_state",
    "sweep",
]
