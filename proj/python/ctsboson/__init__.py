"""Bose-Hubbard Gutzwiller and BDMFT solvers with Fock or coherent-tail truncation."""

from ._core import (
    CSV_HEADER,
    BoundaryError,
    ConfigError,
    InvalidInput,
    bdmft,
    from_csv,
    gutzwiller,
    j_grid,
    mott_boundary,
    selftest,
    sweep,
    to_csv,
)

__all__ = [
    "CSV_HEADER",
    "BoundaryError",
    "ConfigError",
    "InvalidInput",
    "bdmft",
    "from_csv",
    "gutzwiller",
    "j_grid",
    "mott_boundary",
    "selftest",
    "sweep",
    "to_csv",
]
__version__ = "0.1.0"
