"""Brute-force simulation checked against every closed form.

Each check returns the observed maximum deviation and the tolerance it
must stay under.  Tolerances for squeezed-vacuum comparisons grow with the
truncation tolerance ``epsilon``, since the discarded tail bounds the error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, List

import numpy as np

from . import analytic, metrology, optics
from .fock import truncation_cutoff
from .states import coherent_vacuum, tmsv, twin_fock, vacuum_mixed_twin_fock


@dataclass
class CheckResult:
    name: str
    deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.deviation < self.tolerance)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: max_dev={self.deviation:.3e} tol={self.tolerance:.1e}"


def _tmsv_qfi_tail(nbar: float, epsilon: float) -> float:
    """Fisher information discarded by truncating the squeezed vacuum."""
    t = nbar / (nbar + 2.0)
    n = truncation_cutoff(nbar, epsilon) + 1
    total = 0.0
    while True:
        term = (1.0 - t) * t ** n * 2.0 * n * (n + 1.0)
        total += term
        if term < 1e-18 * max(total, 1.0):
            return total
        n += 1


def check_series_vs_closed_form(epsilon: float, phis: np.ndarray) -> CheckResult:
    dev = 0.0
    for nbar in (1.0, 5.0, 10.0):
        n_max = truncation_cutoff(nbar, epsilon)
        for phi in phis:
            dev = max(dev, abs(analytic.parity_tmsv_series(nbar, phi, n_max) - analytic.parity_tmsv(nbar, phi)))
    return CheckResult("twin-Fock series vs central closed form", dev, 1e-10 + 2 * epsilon)


def check_tmsv_parity(epsilon: float, phis: np.ndarray) -> CheckResult:
    dev = 0.0
    for nbar in (1.0, 5.0, 10.0):
        sim = optics.parity_curve(tmsv(nbar, epsilon), phis, offset=math.pi / 2)
        ref = np.array([analytic.parity_tmsv(nbar, p) for p in phis])
        dev = max(dev, float(np.max(np.abs(sim - ref))))
    return CheckResult("simulated squeezed-vacuum parity vs closed form", dev, 1e-7 + 2 * epsilon)


def check_twin_fock_legendre(phis: np.ndarray, n_max: int = 30) -> CheckResult:
    dev = 0.0
    for n in range(n_max + 1):
        sim = optics.parity_curve(twin_fock(n), phis)
        ref = np.array([analytic.parity_twin_fock(n, p) for p in phis])
        dev = max(dev, float(np.max(np.abs(sim - ref))))
    return CheckResult("simulated twin-Fock parity vs Legendre form", dev, 1e-10)


def check_coherent_parity(epsilon: float, phis: np.ndarray) -> CheckResult:
    dev = 0.0
    for nbar in (1.0, 5.0, 10.0):
        sim = optics.parity_curve(coherent_vacuum(nbar, epsilon), phis)
        ref = np.array([analytic.parity_coherent(nbar, p) for p in phis])
        dev = max(dev, float(np.max(np.abs(sim - ref))))
    return CheckResult("simulated coherent parity vs closed form", dev, 1e-6 + 2 * epsilon)


def check_equivalence(epsilon: float, phis: np.ndarray) -> CheckResult:
    states = [tmsv(5.0, epsilon), twin_fock(4), twin_fock(7), coherent_vacuum(5.0, epsilon)]
    dev = 0.0
    for s in states:
        shifted = optics.parity_curve(s, phis, offset=math.pi / 2)
        inside = optics.mu_ab_curve(s, phis)
        dev = max(dev, float(np.max(np.abs(shifted - inside))))
    return CheckResult("output parity at phi+pi/2 vs mu_AB at phi", dev, 1e-10)


def check_intensity(epsilon: float, phis: np.ndarray) -> CheckResult:
    dev = 0.0
    for nbar in (1.0, 5.0, 10.0):
        dev = max(dev, float(np.max(np.abs(optics.intensity_curve(tmsv(nbar, epsilon), phis)))))
    return CheckResult("squeezed-vacuum intensity difference is phase-independent", dev, 1e-10)


def check_qfi(epsilon: float) -> CheckResult:
    dev = 0.0
    for nbar in (1.0, 5.0, 10.0):
        tol_scale = 1e-6 * nbar * (nbar + 2.0) + 2.0 * _tmsv_qfi_tail(nbar, epsilon)
        dev = max(dev, abs(metrology.qfi_pure(tmsv(nbar, epsilon)) - analytic.qfi_tmsv(nbar)) / tol_scale)
        # loose bound on Fisher information carried by the discarded Poisson tail
        coh_scale = 1e-6 + 4.0 * epsilon * (nbar + 10.0) ** 2
        dev = max(dev, abs(metrology.qfi_pure(coherent_vacuum(nbar, epsilon)) - nbar) / coh_scale)
    for n in range(21):
        dev = max(dev, abs(metrology.qfi_pure(twin_fock(n)) - analytic.qfi_twin_fock(n)) / 1e-10)
    # deviations are expressed in units of their own tolerance
    return CheckResult("quantum Fisher information (relative to tolerance)", dev, 1.0)


def check_saturation() -> CheckResult:
    dev = 0.0
    for nbar in range(1, 26):
        dp = metrology.error_propagation(
            lambda p: analytic.parity_tmsv(nbar, p), 0.0, metrology.default_step(nbar)
        )
        dev = max(dev, abs(dp * math.sqrt(nbar * (nbar + 2.0)) - 1.0))
    return CheckResult("parity sensitivity at the origin reaches the QCRB", dev, 1e-6)


def check_rho() -> CheckResult:
    dev = 0.0
    for n in (2, 5):
        for theta in (0.0, math.pi / 6, math.pi / 4, math.pi / 3):
            state = vacuum_mixed_twin_fock(n, theta)
            dp = metrology.error_propagation(lambda p: optics.mu_ab_signal(state, p), 0.0, 1e-5)
            bound = metrology.qcrb(metrology.qfi_sector_mixture(state))
            dev = max(dev, abs(dp - analytic.sensitivity_rho_parity(n, theta)), abs(bound - dp))
    return CheckResult("vacuum-mixed twin Fock sensitivity vs QCRB", dev, 1e-5)


def run_all(epsilon: float = 1e-12, samples: int = 201) -> List[CheckResult]:
    phis = np.linspace(-math.pi, math.pi, samples)
    checks: List[Callable[[], CheckResult]] = [
        lambda: check_series_vs_closed_form(epsilon, phis),
        lambda: check_tmsv_parity(epsilon, phis),
        lambda: check_twin_fock_legendre(phis),
        lambda: check_coherent_parity(epsilon, phis),
        lambda: check_equivalence(epsilon, phis),
        lambda: check_intensity(epsilon, phis),
        lambda: check_qfi(epsilon),
        check_saturation,
        check_rho,
    ]
    return [c() for c in checks]
