"""Phase-estimation machinery applied to simulated states.

Quantum Fisher information comes from the variance of the phase generator
on the state after the first beam splitter, which is where the phase is
picked up.  Measurement sensitivity comes from error propagation on a
signal curve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .analytic import LimitsReport
from .errors import DegenerateStateError, DivergenceError, DomainError, UnsupportedMixtureError
from .fock import (
    MixtureState,
    State,
    TwoModePureState,
    expectation_diagonal,
    mean_total_photons,
    second_moment_total_photons,
)
from .optics import beam_splitter_apply

DERIVATIVE_FLOOR = 1e-14
# 1 - S^2 below this is treated as an extremum of a +-1 valued observable
EXTREMUM_TOL = 1e-10
LIMIT_NOISE_TARGET = 1e-4
# a truncated state peaks slightly below 1; a flat point this close still counts
FLAT_EXTREMUM_TOL = 1e-6


@dataclass(frozen=True)
class SignalCurve:
    abscissae: np.ndarray
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        x = np.array(self.abscissae, dtype=float)
        y = np.array(self.values, dtype=float)
        if x.shape != y.shape or x.ndim != 1:
            raise ValueError("abscissae and values must be 1-D and of equal length")
        if x.size > 1 and not np.all(np.diff(x) > 0):
            raise ValueError("abscissae must be strictly increasing")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "abscissae", x)
        object.__setattr__(self, "values", y)

    @classmethod
    def sample(cls, signal: Callable[[float], float], phis: Sequence[float], label: str = ""):
        phis = np.asarray(phis, dtype=float)
        return cls(phis, np.array([signal(p) for p in phis]), label)

    def sensitivity(self) -> np.ndarray:
        """Error-propagation sensitivity on the sampled points (second-order differences).

        Points with a vanishing sampled slope come back as ``inf``.
        """
        slope = np.gradient(self.values, self.abscissae, edge_order=2)
        noise = np.sqrt(np.clip(1.0 - self.values ** 2, 0.0, None))
        with np.errstate(divide="ignore"):
            return np.where(np.abs(slope) > DERIVATIVE_FLOOR, noise / np.abs(slope), np.inf)


def default_step(nbar: float) -> float:
    """Finite-difference spacing scaled to the squeezed-vacuum signal width."""
    return 1e-5 * max(1.0, 1.0 / math.sqrt(nbar * (nbar + 2.0)))


def _derivative(signal: Callable[[float], float], phi: float, step: float) -> float:
    d1 = (signal(phi + step) - signal(phi - step)) / (2.0 * step)
    half = step / 2.0
    d2 = (signal(phi + half) - signal(phi - half)) / (2.0 * half)
    return (4.0 * d2 - d1) / 3.0


def _pointwise(signal: Callable[[float], float], phi: float, step: float) -> float:
    value = signal(phi)
    slope = _derivative(signal, phi, step)
    noise2 = max(0.0, 1.0 - value * value)
    if abs(slope) < DERIVATIVE_FLOOR:
        raise DivergenceError(f"signal slope vanishes at phi={phi}; no phase information")
    return math.sqrt(noise2) / abs(slope)


def _limit_offset(signal: Callable[[float], float], phi: float, start: float) -> float:
    """Offset at which ``1 - S^2`` is large enough to resolve yet still quadratic."""
    delta = start
    for _ in range(60):
        noise2 = 1.0 - signal(phi + delta) ** 2
        if noise2 < LIMIT_NOISE_TARGET and delta < 0.05:
            delta *= 2.0
        elif noise2 > 10.0 * LIMIT_NOISE_TARGET:
            delta /= 2.0
        else:
            break
    return delta


def error_propagation(
    signal: Callable[[float], float],
    phi: float,
    step: float = 1e-5,
    limit_offset: float | None = None,
) -> float:
    """Phase uncertainty ``sqrt(1 - S^2) / |dS/dphi|`` of a +-1 valued observable.

    The slope is a central difference of spacing ``step`` with one Richardson
    step.  Where the signal sits at +-1 both numerator and slope vanish; the
    value there is the limit (also used for a flat point just below +-1,
    as left by a truncated state), taken from symmetric samples at
    ``phi +- k*delta`` (k = 1, 2, 4) extrapolated to zero offset.  Unless
    given, ``delta`` is chosen so that ``1 - S^2`` is about 1e-4 at the
    samples, which keeps roundoff in simulated signals out of the result.
    """
    if not step > 0:
        raise DomainError(f"step must be > 0, got {step}")
    value = signal(phi)
    noise2 = 1.0 - value * value
    if noise2 > EXTREMUM_TOL:
        flat = noise2 < FLAT_EXTREMUM_TOL and abs(_derivative(signal, phi, step)) < DERIVATIVE_FLOOR
        if not flat:
            return _pointwise(signal, phi, step)

    delta = _limit_offset(signal, phi, 10.0 * step) if limit_offset is None else limit_offset
    inner_step = delta / 8.0
    samples = []
    for k in (1.0, 2.0, 4.0):
        d = k * delta
        samples.append(
            0.5 * (_pointwise(signal, phi + d, inner_step) + _pointwise(signal, phi - d, inner_step))
        )
    # two Richardson passes in delta^2
    r1 = [(4.0 * samples[0] - samples[1]) / 3.0, (4.0 * samples[1] - samples[2]) / 3.0]
    return (16.0 * r1[0] - r1[1]) / 15.0


def generator_moments(state: State) -> tuple[float, float]:
    """``<G>`` and ``<G^2>`` for ``G = (n_A - n_B)/2``."""
    first = expectation_diagonal(state, lambda a, b: (a - b) / 2.0)
    second = expectation_diagonal(state, lambda a, b: ((a - b) / 2.0) ** 2)
    return first, second


def qfi_pure(input_state: TwoModePureState) -> float:
    """``4 Var(G)`` on the state after the first beam splitter."""
    if isinstance(input_state, MixtureState):
        raise TypeError("qfi_pure takes a pure state; use qfi_sector_mixture for ensembles")
    first, second = generator_moments(beam_splitter_apply(input_state))
    return 4.0 * (second - first * first)


def qfi_sector_mixture(state: MixtureState) -> float:
    """Weighted QFI of an ensemble whose members occupy disjoint photon-number sectors."""
    seen: set[int] = set()
    for _, comp in state.components:
        occupied = {n for n, vec in comp.sectors.items() if vec.weight() > 0.0}
        if occupied & seen:
            raise UnsupportedMixtureError(
                f"components share sectors {sorted(occupied & seen)}; "
                "general mixed-state QFI is not supported"
            )
        seen |= occupied
    return math.fsum(w * qfi_pure(comp) for w, comp in state.components)


def qfi(state: State) -> float:
    if isinstance(state, MixtureState):
        return qfi_sector_mixture(state)
    return qfi_pure(state)


def qcrb(fisher: float) -> float:
    if not fisher > 0:
        raise DegenerateStateError(f"quantum Fisher information must be > 0, got {fisher}")
    return 1.0 / math.sqrt(fisher)


def limits_for_state(state: State, fisher: float) -> LimitsReport:
    mean = mean_total_photons(state)
    if not mean > 0:
        raise DegenerateStateError("state has no photons")
    second = second_moment_total_photons(state)
    return LimitsReport(
        snl=1.0 / math.sqrt(mean),
        hl=1.0 / mean,
        hofmann=1.0 / math.sqrt(second),
        qcrb=qcrb(fisher),
    )
