"""Truncated two-mode photon-number states stored sector by sector.

Every element of the interferometer (beam splitter, phase shift, parity,
mode-exchange) conserves the total photon number ``N = n_A + n_B``, so a
state is kept as one amplitude vector per ``N``.  Inside sector ``N`` the
index ``m`` counts photons in mode A; mode B holds ``N - m``.

Probability discarded by truncation is carried in ``tail_mass`` instead of
being renormalized away.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence, Union

import numpy as np

from .errors import ContractViolation, DomainError

NORMALIZATION_TOL = 1e-9

WeightFunction = Callable[[np.ndarray, np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class SectorVector:
    """Amplitudes of the kets ``|m, N-m>`` for ``m = 0..N``."""

    total_photons: int
    amplitudes: np.ndarray

    def __eq__(self, other):
        if not isinstance(other, SectorVector):
            return NotImplemented
        return self.total_photons == other.total_photons and np.array_equal(
            self.amplitudes, other.amplitudes
        )

    __hash__ = None

    def __post_init__(self):
        if self.total_photons < 0:
            raise DomainError(f"total photon number must be >= 0, got {self.total_photons}")
        amps = np.array(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 1 or amps.shape[0] != self.total_photons + 1:
            raise ValueError(
                f"sector {self.total_photons} needs {self.total_photons + 1} amplitudes, "
                f"got shape {amps.shape}"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_a(self) -> np.ndarray:
        return np.arange(self.total_photons + 1)

    @property
    def n_b(self) -> np.ndarray:
        return self.total_photons - np.arange(self.total_photons + 1)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def weight(self) -> float:
        return float(np.sum(self.probabilities()))


@dataclass(frozen=True)
class TwoModePureState:
    """A (possibly truncated) pure two-mode state, keyed by total photon number."""

    sectors: Mapping[int, SectorVector]
    tail_mass: float = 0.0

    def __post_init__(self):
        for key, vec in self.sectors.items():
            if key != vec.total_photons:
                raise ValueError(f"sector key {key} holds a vector for N={vec.total_photons}")
        if not (0.0 <= self.tail_mass <= 1.0):
            raise DomainError(f"tail_mass must lie in [0, 1], got {self.tail_mass}")
        object.__setattr__(self, "sectors", dict(sorted(self.sectors.items())))

    @classmethod
    def from_amplitudes(cls, amplitudes: Mapping[int, Sequence[complex]], tail_mass: float = 0.0):
        """Build a state from ``{N: amplitudes}``."""
        return cls({n: SectorVector(n, a) for n, a in amplitudes.items()}, tail_mass)

    @property
    def max_sector(self) -> int:
        return max(self.sectors, default=0)

    def amplitude(self, n_a: int, n_b: int) -> complex:
        vec = self.sectors.get(n_a + n_b)
        if vec is None:
            return 0j
        return complex(vec.amplitudes[n_a])

    def sector_weights(self) -> dict[int, float]:
        return {n: vec.weight() for n, vec in self.sectors.items()}

    def map_sectors(self, fn: Callable[[int, np.ndarray], np.ndarray]) -> "TwoModePureState":
        """Apply ``fn(N, amplitudes)`` to every sector; tail mass is kept."""
        return TwoModePureState(
            {n: SectorVector(n, fn(n, vec.amplitudes)) for n, vec in self.sectors.items()},
            self.tail_mass,
        )


@dataclass(frozen=True)
class MixtureState:
    """Classical ensemble of pure states given as ``(weight, state)`` pairs."""

    components: tuple = field(default_factory=tuple)

    def __post_init__(self):
        comps = tuple((float(w), s) for w, s in self.components)
        if not comps:
            raise ValueError("a mixture needs at least one component")
        for w, s in comps:
            if not (0.0 < w <= 1.0):
                raise DomainError(f"mixture weight must lie in (0, 1], got {w}")
            if not isinstance(s, TwoModePureState):
                raise TypeError("mixture components must be TwoModePureState")
        total = math.fsum(w for w, _ in comps)
        if abs(total - 1.0) > 1e-12:
            raise DomainError(f"mixture weights sum to {total}, expected 1")
        object.__setattr__(self, "components", comps)

    def map_components(self, fn: Callable[[TwoModePureState], TwoModePureState]) -> "MixtureState":
        return MixtureState(tuple((w, fn(s)) for w, s in self.components))


State = Union[TwoModePureState, MixtureState]


def norm_squared(state: TwoModePureState) -> float:
    """Sum of squared amplitude magnitudes; ``tail_mass`` is not included."""
    return math.fsum(vec.weight() for vec in state.sectors.values())


def check_normalized(state: State, tol: float = NORMALIZATION_TOL) -> None:
    comps = state.components if isinstance(state, MixtureState) else ((1.0, state),)
    for _, s in comps:
        total = norm_squared(s) + s.tail_mass
        if abs(total - 1.0) > tol:
            raise ContractViolation(
                f"state is not normalized: norm^2 + tail_mass = {total!r}"
            )


def expectation_diagonal(state: State, weight: WeightFunction) -> float:
    """Expectation of an observable diagonal in the number basis.

    ``weight`` is called once per sector with integer arrays ``(n_A, n_B)``
    and must broadcast over them.  Mixtures are averaged component-wise.
    """
    check_normalized(state)
    if isinstance(state, MixtureState):
        return math.fsum(w * _diag_pure(s, weight) for w, s in state.components)
    return _diag_pure(state, weight)


def _diag_pure(state: TwoModePureState, weight: WeightFunction) -> float:
    terms = []
    for vec in state.sectors.values():
        w = np.broadcast_to(np.asarray(weight(vec.n_a, vec.n_b), dtype=float), vec.n_a.shape)
        terms.append(float(np.dot(vec.probabilities(), w)))
    return math.fsum(terms)


def mean_total_photons(state: State) -> float:
    return expectation_diagonal(state, lambda a, b: a + b)


def second_moment_total_photons(state: State) -> float:
    return expectation_diagonal(state, lambda a, b: (a + b) ** 2)


def geometric_ratio(mean_photons: float) -> float:
    """Ratio ``t`` of the twin-Fock weights ``(1-t) t^n`` for a given mean."""
    if not mean_photons > 0 or not math.isfinite(mean_photons):
        raise DomainError(f"mean photon number must be finite and > 0, got {mean_photons}")
    return mean_photons / (mean_photons + 2.0)


def truncation_cutoff(mean_photons: float, epsilon: float) -> int:
    """Smallest ``n_max`` whose discarded geometric tail ``t^(n_max+1)`` is <= epsilon."""
    if not (0.0 < epsilon < 1.0):
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon}")
    t = geometric_ratio(mean_photons)
    if t <= epsilon:
        return 0
    n = max(0, math.ceil(math.log(epsilon) / math.log(t)) - 1)
    # log rounding can land one off either way
    while n > 0 and t ** n <= epsilon:
        n -= 1
    while t ** (n + 1) > epsilon:
        n += 1
    return n
