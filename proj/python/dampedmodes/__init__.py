"""Bands, interface impedance and localized modes of damped layered media."""

from ._core import (
    DampedMedium,
    Error,
    InterfaceMedium,
    Layer,
    UnitCell,
    cell_matrix,
    discriminant,
    find_root_real,
    interface_impedance,
    load_medium,
    mode_lattice,
    real_gaps,
    reference_medium,
    run_cli,
    track_root,
    validate_cell,
    winding_number,
)

__all__ = [
    "DampedMedium",
    "Error",
    "InterfaceMedium",
    "Layer",
    "UnitCell",
    "cell_matrix",
    "discriminant",
    "find_root_real",
    "interface_impedance",
    "load_medium",
    "mode_lattice",
    "real_gaps",
    "reference_medium",
    "run_cli",
    "track_root",
    "validate_cell",
    "winding_number",
]
