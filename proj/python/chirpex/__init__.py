"""Chirp excitation design, Bloch simulation and phase-dispersion predictions.

Frequencies passed in and returned as ``*_hz`` are in Hz; everything else is SI
(seconds, rad/s, rad/s^2). A run is described by a preset name (``"fig4a"``,
``"fig4b"``, ``"fig5"``) or by a dict in the JSON config schema, optionally with a
``"preset"`` key to start from.
"""

from ._chirpex import (
    ConfigError,
    DegenerateInputError,
    DomainError,
    IoError,
    PreconditionError,
    ResourceError,
    __version__,
    config,
    edge_residual,
    predict,
    preset_names,
    propagate,
    run_acceptance,
    simulate,
    solve_alpha,
    sweep_rate_for,
    theta0_from_cot2,
    three_stage_propagator,
    waveform,
)

__all__ = [
    "ConfigError",
    "DegenerateInputError",
    "DomainError",
    "IoError",
    "PreconditionError",
    "ResourceError",
    "__version__",
    "config",
    "edge_residual",
    "predict",
    "preset_names",
    "propagate",
    "run_acceptance",
    "simulate",
    "solve_alpha",
    "sweep_rate_for",
    "theta0_from_cot2",
    "three_stage_propagator",
    "waveform",
]
