"""Two-mode Fock-space simulator of a Mach-Zehnder interferometer with parity detection."""

from .errors import (
    ContractViolation,
    DegenerateStateError,
    DivergenceError,
    DomainError,
    UnsupportedMixtureError,
)
from .fock import (
    MixtureState,
    SectorVector,
    TwoModePureState,
    expectation_diagonal,
    mean_total_photons,
    norm_squared,
    second_moment_total_photons,
    truncation_cutoff,
)
from .states import coherent_vacuum, tmsv, twin_fock, vacuum_mixed_twin_fock

__version__ = "0.1.0"

__all__ = [
    "ContractViolation",
    "DegenerateStateError",
    "DivergenceError",
    "DomainError",
    "MixtureState",
    "SectorVector",
    "TwoModePureState",
    "UnsupportedMixtureError",
    "coherent_vacuum",
    "expectation_diagonal",
    "mean_total_photons",
    "norm_squared",
    "second_moment_total_photons",
    "tmsv",
    "truncation_cutoff",
    "twin_fock",
    "vacuum_mixed_twin_fock",
]
