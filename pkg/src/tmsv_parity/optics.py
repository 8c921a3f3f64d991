"""Mach-Zehnder interferometer acting sector by sector, and its detection observables.

The interferometer is ``U P(phi) U``: a 50-50 beam splitter
``U = exp(i pi/4 (a^dag b + a b^dag))``, the phase shift
``P(phi) = exp(-i phi G)`` with ``G = (n_A - n_B)/2``, and the same beam
splitter again.

Two parity signals are exposed.  ``parity_signal`` is the raw output-port
parity at the phase ``phi``.  ``parity_signal_offset`` reads it at
``phi + pi/2``, which equals the mode-exchange observable ``mu_AB``
evaluated inside the interferometer at ``phi``; this is the form in which
the two-mode squeezed vacuum signal peaks at the phase origin.  Coherent
light already peaks at the origin in the raw form.
"""

from __future__ import annotations

import math
import threading
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .fock import (
    MixtureState,
    State,
    TwoModePureState,
    check_normalized,
    expectation_diagonal,
)

QUARTER_PI = math.pi / 4.0


def generator_offdiagonal(n: int) -> np.ndarray:
    """Off-diagonal of ``a^dag b + a b^dag`` in the basis ``|m, N-m>``, ``m = 0..N``."""
    m = np.arange(n, dtype=float)
    return np.sqrt((m + 1.0) * (n - m))


def beam_splitter_matrix(n: int) -> np.ndarray:
    """``exp(i pi/4 H_N)`` from the eigendecomposition of the tridiagonal ``H_N``."""
    if n == 0:
        return np.ones((1, 1), dtype=np.complex128)
    _, evecs = eigh_tridiagonal(np.zeros(n + 1), generator_offdiagonal(n))
    # spectrum is exactly -N, -N+2, ..., N
    angles = QUARTER_PI * np.arange(-n, n + 1, 2, dtype=float)
    # eigenvectors are real: two real products beat one complex one
    return (evecs * np.cos(angles)) @ evecs.T + 1j * ((evecs * np.sin(angles)) @ evecs.T)


class BeamSplitterBank:
    """Per-sector beam splitter unitaries, built on first request and cached.

    Only the sectors actually looked up are built; ``ensure`` fills a range.
    """

    def __init__(self, n_max: int = -1):
        self._matrices: dict[int, np.ndarray] = {}
        self._lock = threading.Lock()
        if n_max >= 0:
            self.ensure(n_max)

    def ensure(self, n_max: int) -> "BeamSplitterBank":
        for n in range(n_max + 1):
            self[n]
        return self

    def __getitem__(self, n: int) -> np.ndarray:
        mat = self._matrices.get(n)
        if mat is None:
            with self._lock:
                mat = self._matrices.get(n)
                if mat is None:
                    mat = beam_splitter_matrix(n)
                    mat.setflags(write=False)
                    self._matrices[n] = mat
        return mat

    def __contains__(self, n: int) -> bool:
        return n in self._matrices

    @property
    def n_max(self) -> int:
        return max(self._matrices, default=-1)


_DEFAULT_BANK = BeamSplitterBank()


def beam_splitter_bank(n_max: int) -> BeamSplitterBank:
    """The shared bank, extended to cover sectors ``0..n_max``."""
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0, got {n_max}")
    return _DEFAULT_BANK.ensure(n_max)


def _per_component(state: State, fn: Callable[[TwoModePureState], TwoModePureState]) -> State:
    if isinstance(state, MixtureState):
        return state.map_components(fn)
    return fn(state)


def generator_eigenvalues(n: int) -> np.ndarray:
    return (2.0 * np.arange(n + 1) - n) / 2.0


def beam_splitter_apply(state: State, bank: BeamSplitterBank | None = None) -> State:
    bank = bank or _DEFAULT_BANK

    def apply(s: TwoModePureState) -> TwoModePureState:
        return s.map_sectors(lambda n, amps: bank[n] @ amps)

    return _per_component(state, apply)


def phase_shift_apply(state: State, phi: float) -> State:
    """Multiply ``c_{N,m}`` by ``exp(-i phi (2m - N)/2)``."""

    def apply(s: TwoModePureState) -> TwoModePureState:
        return s.map_sectors(lambda n, amps: np.exp(-1j * phi * generator_eigenvalues(n)) * amps)

    return _per_component(state, apply)


def intermediate_state(state: State, phi: float, bank: BeamSplitterBank | None = None) -> State:
    """State between the splitters: ``P(phi) U |psi>``."""
    return phase_shift_apply(beam_splitter_apply(state, bank), phi)


def mzi_apply(state: State, phi: float, bank: BeamSplitterBank | None = None) -> State:
    return beam_splitter_apply(intermediate_state(state, phi, bank), bank)


def parity_expectation(state: State) -> float:
    """``<(-1)^n_A>``."""
    return expectation_diagonal(state, lambda a, b: 1 - 2 * (a % 2))


def intensity_difference_expectation(state: State) -> float:
    return expectation_diagonal(state, lambda a, b: a - b)


def mu_ab_expectation(state: State) -> float:
    """Overlap of each sector with its mode-exchanged copy, summed over sectors."""
    check_normalized(state)
    if isinstance(state, MixtureState):
        return math.fsum(w * _mu_ab_pure(s) for w, s in state.components)
    return _mu_ab_pure(state)


def _mu_ab_pure(state: TwoModePureState) -> float:
    return math.fsum(
        float(np.vdot(vec.amplitudes[::-1], vec.amplitudes).real) for vec in state.sectors.values()
    )


def parity_signal(state: State, phi: float) -> float:
    """Raw parity on output mode A after the interferometer at ``phi``."""
    return parity_expectation(mzi_apply(state, phi))


def parity_signal_offset(state: State, phi: float) -> float:
    """Output parity read at ``phi + pi/2``; equals ``mu_ab_signal(state, phi)``."""
    return parity_expectation(mzi_apply(state, phi + math.pi / 2.0))


def mu_ab_signal(state: State, phi: float) -> float:
    return mu_ab_expectation(intermediate_state(state, phi))


def intensity_signal(state: State, phi: float) -> float:
    return intensity_difference_expectation(mzi_apply(state, phi))


# Vectorized sweeps.  Same physics as the scalar functions above, but each
# sector is pushed through the first splitter once and all phases are
# handled by one matrix product.

def _sector_sweep(state: TwoModePureState, phis: np.ndarray, reduce, bank) -> np.ndarray:
    out = np.zeros(phis.shape[0])
    for n, vec in state.sectors.items():
        after_first = bank[n] @ vec.amplitudes
        phases = np.exp(-1j * np.outer(phis, generator_eigenvalues(n)))
        out += reduce(n, phases * after_first[None, :])
    return out


def _sweep(state: State, phis, reduce, bank) -> np.ndarray:
    check_normalized(state)
    phis = np.asarray(phis, dtype=float)
    bank = bank or _DEFAULT_BANK
    if isinstance(state, MixtureState):
        return sum(w * _sector_sweep(s, phis, reduce, bank) for w, s in state.components)
    return _sector_sweep(state, phis, reduce, bank)


def parity_curve(
    state: State,
    phis: Sequence[float],
    offset: float = 0.0,
    bank: BeamSplitterBank | None = None,
) -> np.ndarray:
    """Output parity at each ``phi + offset``."""
    bank = bank or _DEFAULT_BANK

    def reduce(n, inner):
        out = inner @ bank[n].T
        signs = 1.0 - 2.0 * (np.arange(n + 1) % 2)
        return (np.abs(out) ** 2) @ signs

    return _sweep(state, np.asarray(phis, dtype=float) + offset, reduce, bank)


def mu_ab_curve(state: State, phis: Sequence[float], bank: BeamSplitterBank | None = None) -> np.ndarray:
    def reduce(n, inner):
        return np.einsum("km,km->k", inner[:, ::-1].conj(), inner).real

    return _sweep(state, phis, reduce, bank)


def intensity_curve(state: State, phis: Sequence[float], bank: BeamSplitterBank | None = None) -> np.ndarray:
    bank = bank or _DEFAULT_BANK

    def reduce(n, inner):
        out = inner @ bank[n].T
        diff = 2.0 * np.arange(n + 1) - n
        return (np.abs(out) ** 2) @ diff

    return _sweep(state, phis, reduce, bank)
