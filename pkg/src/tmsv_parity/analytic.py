"""Closed-form signals, sensitivities and limits.

Nothing here touches the Fock-space simulation, so agreement between the
two is an independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateStateError, DivergenceError, DomainError

COS_ZERO_TOL = 1e-12


@dataclass(frozen=True)
class PhaseGrid:
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if self.count < 2:
            raise ValueError(f"a phase grid needs at least 2 points, got {self.count}")
        if not self.start < self.stop:
            raise ValueError(f"grid start {self.start} must be below stop {self.stop}")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class LimitsReport:
    """Phase-uncertainty benchmarks for one input state, in radians."""

    snl: float
    hl: float
    hofmann: float
    qcrb: Optional[float] = None

    def __post_init__(self):
        for name in ("snl", "hl", "hofmann", "qcrb"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise DomainError(f"{name} must be positive, got {value}")


def legendre_P(n: int, x: float) -> float:
    """Legendre polynomial by upward three-term recurrence."""
    if n < 0:
        raise DomainError(f"degree must be >= 0, got {n}")
    if abs(x) > 1.0:
        raise DomainError(f"|x| must be <= 1, got {x}")
    if n == 0:
        return 1.0
    p_prev, p = 1.0, float(x)
    for k in range(1, n):
        p_prev, p = p, ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
    return p


def parity_twin_fock(n: int, phi: float) -> float:
    """Raw output parity for ``|n,n>`` input: ``(-1)^n P_n(cos 2 phi)``."""
    x = min(1.0, max(-1.0, math.cos(2.0 * phi)))
    return (-1) ** n * legendre_P(n, x)


def _check_nbar(nbar: float) -> None:
    if not nbar >= 0 or not math.isfinite(nbar):
        raise DomainError(f"mean photon number must be finite and >= 0, got {nbar}")


def parity_tmsv(nbar: float, phi: float) -> float:
    """``1/sqrt(1 + nbar(nbar+2) sin^2 phi)``; peaks at the phase origin."""
    _check_nbar(nbar)
    return 1.0 / math.sqrt(1.0 + nbar * (nbar + 2.0) * math.sin(phi) ** 2)


def parity_tmsv_series(nbar: float, phi: float, n_max: int) -> float:
    """Twin-Fock sum ``(1-t) sum_n t^n P_n(cos 2 phi)`` cut at ``n_max``.

    Each term is the raw twin-Fock parity read at ``phi + pi/2``.
    """
    _check_nbar(nbar)
    t = nbar / (nbar + 2.0)
    x = min(1.0, max(-1.0, math.cos(2.0 * phi)))
    total = 0.0
    p_prev, p = 0.0, 1.0
    for k in range(n_max + 1):
        total += t ** k * p
        p_prev, p = p, ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
    return (1.0 - t) * total


def parity_coherent(nbar: float, phi: float) -> float:
    """``exp(-2 nbar sin^2(phi/2))``."""
    _check_nbar(nbar)
    return math.exp(-2.0 * nbar * math.sin(phi / 2.0) ** 2)


def intensity_coherent(nbar: float, phi: float) -> float:
    """``<n_A - n_B>`` at the output for coherent light entering port A.

    Two 50-50 splitters at zero phase route all light to port B.
    """
    _check_nbar(nbar)
    return -nbar * math.cos(phi)


def sensitivity_tmsv(nbar: float, phi: float) -> float:
    """Parity sensitivity for squeezed vacuum at phase ``phi``."""
    if not nbar > 0:
        raise DomainError(f"mean photon number must be > 0, got {nbar}")
    c = abs(math.cos(phi))
    if c < COS_ZERO_TOL:
        raise DivergenceError(f"sensitivity diverges where cos(phi) = 0 (phi={phi})")
    a = nbar * (nbar + 2.0)
    return (1.0 + a * math.sin(phi) ** 2) / (c * math.sqrt(a))


def sensitivity_coherent(nbar: float, phi: float) -> float:
    """Parity sensitivity for coherent light, from the exact signal.

    ``sqrt(exp(4 nbar sin^2(phi/2)) - 1) / (nbar |sin phi|)``; the removable
    0/0 at the origin is replaced by its limit ``1/sqrt(nbar)``.
    """
    if not nbar > 0:
        raise DomainError(f"mean photon number must be > 0, got {nbar}")
    s = abs(math.sin(phi))
    x = 4.0 * nbar * math.sin(phi / 2.0) ** 2
    if s < 1e-300 or x == 0.0:
        if math.cos(phi) > 0:
            return 1.0 / math.sqrt(nbar)
        raise DivergenceError(f"coherent parity carries no phase information at phi={phi}")
    return math.sqrt(math.expm1(x)) / (nbar * s)


def sensitivity_tmsv_taylor(nbar: float, phi: float) -> float:
    """Quadratic expansion of the squeezed-vacuum sensitivity about the origin."""
    a = nbar * (nbar + 2.0)
    return (1.0 + (2.0 * a + 1.0) * phi ** 2 / 2.0) / math.sqrt(a)


def sensitivity_coherent_taylor(nbar: float, phi: float) -> float:
    """Quadratic expansion of the coherent-light sensitivity about the origin."""
    return (1.0 + (2.0 * nbar + 1.0) * phi ** 2 / 8.0) / math.sqrt(nbar)


def qfi_tmsv(nbar: float) -> float:
    return nbar * (nbar + 2.0)


def qfi_coherent(nbar: float) -> float:
    return nbar


def qfi_twin_fock(n: int) -> float:
    return 2.0 * n * (n + 1.0)


def second_moment_tmsv(nbar: float) -> float:
    return 2.0 * nbar ** 2 + 2.0 * nbar


def second_moment_coherent(nbar: float) -> float:
    return nbar ** 2 + nbar


def limits(nbar: float, second_moment: float, qfi: Optional[float] = None) -> LimitsReport:
    """Shot-noise, Heisenberg and Hofmann limits from the photon-number moments."""
    if not nbar > 0:
        raise DomainError(f"mean photon number must be > 0, got {nbar}")
    if second_moment < nbar ** 2 * (1.0 - 1e-12):
        raise DomainError(
            f"second moment {second_moment} is below the squared mean {nbar ** 2}"
        )
    return LimitsReport(
        snl=1.0 / math.sqrt(nbar),
        hl=1.0 / nbar,
        hofmann=1.0 / math.sqrt(second_moment),
        qcrb=None if qfi is None else 1.0 / math.sqrt(qfi),
    )


def _rho_cos2(theta: float) -> float:
    c2 = math.cos(theta) ** 2
    if c2 < 1e-15:
        raise DegenerateStateError("cos(theta) = 0 leaves pure vacuum")
    return c2


def sensitivity_rho_parity(n: int, theta: float) -> float:
    """``1/sqrt(2 n (n+1) cos^2 theta)`` for the vacuum-mixed twin Fock state."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    return 1.0 / math.sqrt(2.0 * n * (n + 1.0) * _rho_cos2(theta))


def rho_mean_photons(n: int, theta: float) -> float:
    return 2.0 * n * math.cos(theta) ** 2


def rho_second_moment(n: int, theta: float) -> float:
    return 4.0 * n * n * math.cos(theta) ** 2


def limits_rho(n: int, theta: float) -> LimitsReport:
    c2 = _rho_cos2(theta)
    return limits(rho_mean_photons(n, theta), rho_second_moment(n, theta), qfi_twin_fock(n) * c2)


def max_photon_limit(max_photons: Optional[int]) -> Optional[float]:
    """``1/N`` for states with a largest photon number ``N``; ``None`` when unbounded."""
    if max_photons is None or max_photons <= 0:
        return None
    return 1.0 / max_photons


def half_width(signal, level: float, upper: float, tol: float = 1e-9) -> float:
    """Smallest ``phi > 0`` where a peak normalized to 1 at the origin falls to ``level``.

    Bisection on ``[0, upper]``; the signal must decrease through ``level`` there.
    """
    lo, hi = 0.0, upper
    if not (signal(lo) > level > signal(hi)):
        raise DomainError("level is not bracketed by the signal on [0, upper]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if signal(mid) > level:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def peak_width(signal, level: float = 1.0 / math.sqrt(2.0), upper: float = math.pi / 2, tol: float = 1e-9) -> float:
    """Full width of the peak at the origin for an even signal."""
    return 2.0 * half_width(signal, level, upper, tol)
