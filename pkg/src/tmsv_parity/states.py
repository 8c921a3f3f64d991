"""Input states: two-mode squeezed vacuum, twin Fock, coherent, and vacuum-mixed twin Fock.

All amplitudes are real and nonnegative.  A nonzero squeezing phase would
only rotate the origin of the phase axis, so it is fixed to zero here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateStateError, DomainError
from .fock import (
    MixtureState,
    SectorVector,
    TwoModePureState,
    geometric_ratio,
    truncation_cutoff,
)


@dataclass(frozen=True)
class TmsvSpec:
    mean_photons: float
    tolerance: float = 1e-12

    def __post_init__(self):
        if not math.isfinite(self.mean_photons):
            raise DomainError("mean photon number must be finite")
        if not (0.0 < self.tolerance < 1.0):
            raise DomainError(f"tolerance must lie in (0, 1), got {self.tolerance}")

    def build(self) -> TwoModePureState:
        return tmsv(self.mean_photons, self.tolerance)


def _fock_ket(n_a: int, n_b: int) -> SectorVector:
    amps = np.zeros(n_a + n_b + 1, dtype=np.complex128)
    amps[n_a] = 1.0
    return SectorVector(n_a + n_b, amps)


def tmsv(mean_photons: float, epsilon: float = 1e-12) -> TwoModePureState:
    """Two-mode squeezed vacuum with ``mean_photons`` in total over both modes.

    Weight ``(1-t) t^n`` on ``|n,n>``, ``t = nbar / (nbar + 2)``, truncated
    once the discarded weight drops below ``epsilon``.
    """
    t = geometric_ratio(mean_photons)
    n_max = truncation_cutoff(mean_photons, epsilon)
    one_minus_t = 2.0 / (mean_photons + 2.0)
    sectors = {}
    for n in range(n_max + 1):
        amps = np.zeros(2 * n + 1, dtype=np.complex128)
        amps[n] = math.sqrt(one_minus_t * t ** n)
        sectors[2 * n] = SectorVector(2 * n, amps)
    return TwoModePureState(sectors, tail_mass=t ** (n_max + 1))


def twin_fock(n: int) -> TwoModePureState:
    if n < 0:
        raise DomainError(f"photon number must be >= 0, got {n}")
    return TwoModePureState({2 * n: _fock_ket(n, n)})


def vacuum() -> TwoModePureState:
    return twin_fock(0)


def coherent_vacuum(mean_photons: float, epsilon: float = 1e-12) -> TwoModePureState:
    """Coherent state ``|alpha>`` in mode A (``alpha = sqrt(nbar)``), vacuum in mode B."""
    if not mean_photons > 0 or not math.isfinite(mean_photons):
        raise DomainError(f"mean photon number must be finite and > 0, got {mean_photons}")
    if not (0.0 < epsilon < 1.0):
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon}")
    alpha = math.sqrt(mean_photons)
    amp = math.exp(-mean_photons / 2.0)
    probs = []
    sectors = {}
    n = 0
    while True:
        amps = np.zeros(n + 1, dtype=np.complex128)
        amps[n] = amp
        sectors[n] = SectorVector(n, amps)
        probs.append(amp * amp)
        tail = 1.0 - math.fsum(probs)
        # amp == 0 means the terms underflowed; nothing further can be added
        if tail <= epsilon or amp == 0.0:
            break
        n += 1
        amp *= alpha / math.sqrt(n)
    return TwoModePureState(sectors, tail_mass=max(tail, 0.0))


def vacuum_mixed_twin_fock(n: int, theta: float) -> MixtureState:
    """``sin^2(theta) |0,0><0,0| + cos^2(theta) |n,n><n,n|`` as a two-member ensemble."""
    if n < 1:
        raise DomainError(f"twin Fock photon number must be >= 1, got {n}")
    c2 = math.cos(theta) ** 2
    s2 = math.sin(theta) ** 2
    if c2 < 1e-15:
        raise DegenerateStateError("cos(theta) = 0 leaves pure vacuum with no phase signal")
    components = []
    if s2 > 0.0:
        components.append((s2, vacuum()))
    components.append((c2, twin_fock(n)))
    if len(components) == 2:
        # keep the weights summing to one in floating point
        components[1] = (1.0 - s2, components[1][1])
    return MixtureState(tuple(components))
