"""Spectral simulator for the dissipative two-component cubic NLS."""

from ._dnls import (
    ConfigError,
    DivergenceError,
    DnlsError,
    FormatError,
    GuardViolation,
    __version__,
    analyze,
    extract_profiles,
    forward_transform,
    free_propagate,
    grid_nodes,
    inverse_transform,
    lemma_certificates,
    lemmas,
    mass_ledger,
    preset_config,
    preset_names,
    read_checkpoint,
    reduced_flow,
    run,
    scatter,
    simulate,
    sweep,
    write_checkpoint,
)

__all__ = [
    "ConfigError",
    "DivergenceError",
    "DnlsError",
    "FormatError",
    "GuardViolation",
    "__version__",
    "analyze",
    "extract_profiles",
    "forward_transform",
    "free_propagate",
    "grid_nodes",
    "inverse_transform",
    "lemma_certificates",
    "lemmas",
    "mass_ledger",
    "preset_config",
    "preset_names",
    "read_checkpoint",
    "reduced_flow",
    "run",
    "scatter",
    "simulate",
    "sweep",
    "write_checkpoint",
]
