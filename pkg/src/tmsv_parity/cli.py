"""Command-line front end: CSV curves for the signal, sensitivity and rho(n, theta) figures,
limit tables, and the simulation-vs-closed-form validation suite.

Every CSV starts with a ``#`` comment recording the resolved configuration.
Exit codes: 0 success, 1 validation failure, 2 usage error.

Examples::

    tmsv-parity signal --nbar 10 --nbar-coherent 100 --out signal.csv
    tmsv-parity signal --phi-range=-0.5:0.5 --samples 11 --engine both
    tmsv-parity sensitivity --nbar-max 100
    tmsv-parity sensitivity --phi-sweep --phi-range=-0.3:0.3
    tmsv-parity rho-sweep --fock-n 2 --theta-range 0:1.45
    tmsv-parity limits --nbar 10 --fock-n 2 --theta 0.5
    tmsv-parity validate --epsilon 1e-4
"""

from __future__ import annotations

import argparse
import csv
import logging
import math
import sys
from dataclasses import asdict, dataclass
from typing import IO, Iterable, Optional, Sequence

import numpy as np

from . import analytic, metrology, optics, validate
from .errors import DivergenceError
from .fock import mean_total_photons, second_moment_total_photons
from .states import coherent_vacuum, tmsv, twin_fock, vacuum_mixed_twin_fock

logger = logging.getLogger(__name__)

COMMANDS = ("signal", "sensitivity", "limits", "rho-sweep", "validate")
ENGINES = ("analytic", "simulation", "both")

# per-command grid defaults: (start, stop, samples)
PHI_DEFAULTS = {
    "signal": (-math.pi, math.pi, 2001),
    "sensitivity": (-0.3, 0.3, 601),
    "validate": (-math.pi, math.pi, 201),
}
THETA_DEFAULT = (0.0, 1.45, 146)
INSET_TMSV = (5.0, 25.0)
INSET_COHERENT = 25.0


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    mean_photons: float = 10.0
    mean_photons_coherent: float = 100.0
    nbar_max: int = 100
    fock_n: Optional[int] = None
    theta: float = 0.0
    theta_start: float = THETA_DEFAULT[0]
    theta_stop: float = THETA_DEFAULT[1]
    phi_start: float = -math.pi
    phi_stop: float = math.pi
    samples: int = 2001
    epsilon: float = 1e-12
    output_path: Optional[str] = None
    engine: str = "analytic"
    phi_sweep: bool = False

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.engine not in ENGINES:
            raise UsageError(f"engine must be one of {ENGINES}")
        if self.samples < 2:
            raise UsageError("--samples must be >= 2")
        if not (0.0 < self.epsilon < 1.0):
            raise UsageError("--epsilon must lie in (0, 1)")
        if not self.phi_start < self.phi_stop:
            raise UsageError("--phi-range needs start < stop")
        if not self.theta_start < self.theta_stop:
            raise UsageError("--theta-range needs start < stop")
        if not (self.mean_photons > 0 and self.mean_photons_coherent > 0):
            raise UsageError("mean photon numbers must be > 0")
        if self.nbar_max < 1:
            raise UsageError("--nbar-max must be >= 1")
        if self.fock_n is not None and self.fock_n < 1:
            raise UsageError("--fock-n must be >= 1")

    def header(self) -> str:
        fields = " ".join(f"{k}={v!r}" for k, v in asdict(self).items() if k != "output_path")
        return f"# tmsv-parity {fields}"


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return repr(float(x))


class CsvOut:
    def __init__(self, stream: IO[str], config: RunConfig):
        self.stream = stream
        self.writer = csv.writer(stream, lineterminator="\n")
        stream.write(config.header() + "\n")

    def comment(self, text: str) -> None:
        self.stream.write(f"# {text}\n")

    def row(self, values: Iterable) -> None:
        self.writer.writerow([v if isinstance(v, str) else _fmt(v) for v in values])


def _phi_grid(config: RunConfig) -> np.ndarray:
    return analytic.PhaseGrid(config.phi_start, config.phi_stop, config.samples).values()


def cmd_signal(config: RunConfig, out: CsvOut) -> int:
    phis = _phi_grid(config)
    nb, nc = config.mean_photons, config.mean_photons_coherent
    names = ["parity_tmsv", "parity_coherent", "intensity_coherent_scaled"]

    columns = {}
    if config.engine in ("analytic", "both"):
        columns["analytic"] = [
            np.array([analytic.parity_tmsv(nb, p) for p in phis]),
            np.array([analytic.parity_coherent(nc, p) for p in phis]),
            np.array([analytic.intensity_coherent(nc, p) / nc for p in phis]),
        ]
    if config.engine in ("simulation", "both"):
        squeezed = tmsv(nb, config.epsilon)
        coherent = coherent_vacuum(nc, config.epsilon)
        columns["simulation"] = [
            optics.parity_curve(squeezed, phis, offset=math.pi / 2),
            optics.parity_curve(coherent, phis),
            optics.intensity_curve(coherent, phis) / nc,
        ]

    header = ["phi"]
    data = [phis]
    if config.engine == "both":
        header += names + [f"sim_{n}" for n in names]
        data += columns["analytic"] + columns["simulation"]
    else:
        header += names
        data += columns[config.engine]
    out.row(header)
    for row in zip(*data):
        out.row(row)
    if config.engine == "both":
        dev = max(float(np.max(np.abs(a - s))) for a, s in zip(columns["analytic"], columns["simulation"]))
        out.comment(f"max_abs_deviation={dev!r}")
    return 0


def _sim_tmsv_sensitivity(nbar: float, epsilon: float) -> tuple[float, float]:
    state = tmsv(nbar, epsilon)
    dp = metrology.error_propagation(lambda p: optics.mu_ab_signal(state, p), 0.0, metrology.default_step(nbar))
    return dp, metrology.qcrb(metrology.qfi_pure(state))


def cmd_sensitivity(config: RunConfig, out: CsvOut) -> int:
    if config.phi_sweep:
        return _sensitivity_inset(config, out)

    header = ["n_bar", "delta_phi_parity", "qcrb", "snl", "hl", "hofmann"]
    if config.engine == "both":
        header += ["sim_delta_phi_parity", "sim_qcrb"]
    out.row(header)
    dev = 0.0
    for n in range(1, config.nbar_max + 1):
        nbar = float(n)
        lim = analytic.limits(nbar, analytic.second_moment_tmsv(nbar), analytic.qfi_tmsv(nbar))
        if config.engine == "analytic":
            row = [n, analytic.sensitivity_tmsv(nbar, 0.0), lim.qcrb, lim.snl, lim.hl, lim.hofmann]
        else:
            dp, bound = _sim_tmsv_sensitivity(nbar, config.epsilon)
            if config.engine == "simulation":
                state = tmsv(nbar, config.epsilon)
                sim = metrology.limits_for_state(state, metrology.qfi_pure(state))
                row = [n, dp, bound, sim.snl, sim.hl, sim.hofmann]
            else:
                exact = analytic.sensitivity_tmsv(nbar, 0.0)
                row = [n, exact, lim.qcrb, lim.snl, lim.hl, lim.hofmann, dp, bound]
                dev = max(dev, abs(dp - exact), abs(bound - lim.qcrb))
        out.row(row)
    if config.engine == "both":
        out.comment(f"max_abs_deviation={dev!r}")
    return 0


def _sensitivity_inset(config: RunConfig, out: CsvOut) -> int:
    if config.engine != "analytic":
        logger.warning("the phase-sweep inset is computed from closed forms only")
    header = ["phi"] + [f"tmsv_{int(n)}" for n in INSET_TMSV] + [f"coherent_{int(INSET_COHERENT)}"]
    out.row(header)
    for phi in map(float, _phi_grid(config)):
        try:
            row = [phi] + [analytic.sensitivity_tmsv(n, phi) for n in INSET_TMSV]
            row.append(analytic.sensitivity_coherent(INSET_COHERENT, phi))
        except DivergenceError:
            logger.warning("skipping singular phi=%r", phi)
            out.comment(f"skipped phi={phi!r}: cos(phi)=0")
            continue
        out.row(row)
    return 0


def cmd_rho_sweep(config: RunConfig, out: CsvOut) -> int:
    thetas = np.linspace(config.theta_start, config.theta_stop, config.samples)
    ns = [config.fock_n] if config.fock_n is not None else [2, 5]
    header = ["n", "theta", "delta_phi_parity", "qcrb", "hl", "hofmann"]
    if config.engine == "both":
        header += ["sim_delta_phi_parity", "sim_qcrb"]
    out.row(header)
    dev = 0.0
    for n in ns:
        out.comment(f"block n={n}")
        for theta in map(float, thetas):
            if math.cos(theta) ** 2 < 1e-15:
                logger.warning("skipping singular theta=%r", theta)
                out.comment(f"skipped theta={theta!r}: cos(theta)=0")
                continue
            lim = analytic.limits_rho(n, theta)
            exact = analytic.sensitivity_rho_parity(n, theta)
            if config.engine == "analytic":
                out.row([n, theta, exact, lim.qcrb, lim.hl, lim.hofmann])
                continue
            state = vacuum_mixed_twin_fock(n, theta)
            dp = metrology.error_propagation(lambda p: optics.mu_ab_signal(state, p), 0.0, 1e-5)
            sim = metrology.limits_for_state(state, metrology.qfi_sector_mixture(state))
            if config.engine == "simulation":
                out.row([n, theta, dp, sim.qcrb, sim.hl, sim.hofmann])
            else:
                out.row([n, theta, exact, lim.qcrb, lim.hl, lim.hofmann, dp, sim.qcrb])
                dev = max(dev, abs(dp - exact), abs(sim.qcrb - lim.qcrb))
    if config.engine == "both":
        out.comment(f"max_abs_deviation={dev!r}")
    return 0


def _limits_rows_analytic(config: RunConfig):
    nb, n, theta = config.mean_photons, config.fock_n or 2, config.theta
    rows = [
        ("tmsv", nb, analytic.second_moment_tmsv(nb), analytic.qfi_tmsv(nb), None),
        ("coherent", nb, analytic.second_moment_coherent(nb), analytic.qfi_coherent(nb), None),
        ("twin_fock", 2.0 * n, 4.0 * n * n, analytic.qfi_twin_fock(n), 2 * n),
        (
            "rho",
            analytic.rho_mean_photons(n, theta),
            analytic.rho_second_moment(n, theta),
            analytic.qfi_twin_fock(n) * math.cos(theta) ** 2,
            2 * n,
        ),
    ]
    return rows


def _limits_rows_simulation(config: RunConfig):
    nb, n, theta = config.mean_photons, config.fock_n or 2, config.theta
    rows = []
    for label, state, max_n in (
        ("tmsv", tmsv(nb, config.epsilon), None),
        ("coherent", coherent_vacuum(nb, config.epsilon), None),
        ("twin_fock", twin_fock(n), 2 * n),
        ("rho", vacuum_mixed_twin_fock(n, theta), 2 * n),
    ):
        rows.append(
            (label, mean_total_photons(state), second_moment_total_photons(state), metrology.qfi(state), max_n)
        )
    return rows


def cmd_limits(config: RunConfig, out: CsvOut) -> int:
    header = ["state", "mean_photons", "second_moment", "snl", "hl", "hofmann", "qcrb", "max_photon_limit"]
    engines = ["analytic", "simulation"] if config.engine == "both" else [config.engine]
    if config.engine == "both":
        header = ["engine"] + header
    out.row(header)
    tables = {}
    for engine in engines:
        rows = _limits_rows_analytic(config) if engine == "analytic" else _limits_rows_simulation(config)
        tables[engine] = []
        for label, mean, second, fisher, max_n in rows:
            lim = analytic.limits(mean, second, fisher)
            values = [mean, second, lim.snl, lim.hl, lim.hofmann, lim.qcrb]
            tables[engine].append(values)
            prefix = [engine] if config.engine == "both" else []
            out.row(prefix + [label] + values + [analytic.max_photon_limit(max_n)])
    if config.engine == "both":
        dev = max(
            abs(a - s) / max(1.0, abs(a))
            for ra, rs in zip(tables["analytic"], tables["simulation"])
            for a, s in zip(ra, rs)
        )
        out.comment(f"max_rel_deviation={dev!r}")
    return 0


def cmd_validate(config: RunConfig, stream: IO[str]) -> int:
    results = validate.run_all(config.epsilon, samples=config.samples)
    for r in results:
        stream.write(r.line() + "\n")
    ok = all(r.passed for r in results)
    stream.write(f"{'ALL PASS' if ok else 'FAILURES'}: {sum(r.passed for r in results)}/{len(results)}\n")
    return 0 if ok else 1


HANDLERS = {
    "signal": cmd_signal,
    "sensitivity": cmd_sensitivity,
    "rho-sweep": cmd_rho_sweep,
    "limits": cmd_limits,
}


def _parse_number(text: str) -> float:
    t = text.strip().lower()
    sign = -1.0 if t.startswith("-") else 1.0
    t = t.lstrip("+-")
    if t == "pi":
        return sign * math.pi
    if t.startswith("pi/"):
        return sign * math.pi / float(t[3:])
    return sign * float(t)


def _parse_range(text: str) -> tuple[float, float]:
    try:
        a, b = text.split(":")
        return _parse_number(a), _parse_number(b)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected A:B, got {text!r}") from exc


def create_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--nbar", type=float, default=10.0, help="mean photon number of the squeezed vacuum (and coherent light for `limits`)")
    common.add_argument("--nbar-coherent", type=float, default=100.0, help="coherent-light mean photon number for `signal`")
    common.add_argument("--nbar-max", type=int, default=100, help="largest integer nbar in the sensitivity sweep")
    common.add_argument("--fock-n", type=int, default=None, help="twin Fock photon number per mode")
    common.add_argument("--theta", type=float, default=0.0, help="vacuum admixture angle for `limits`")
    common.add_argument("--theta-range", type=_parse_range, default=None, metavar="A:B")
    common.add_argument("--phi-range", type=_parse_range, default=None, metavar="A:B",
                        help="phase grid; write negative starts as --phi-range=-pi:pi")
    common.add_argument("--samples", type=int, default=None)
    common.add_argument("--epsilon", type=float, default=1e-12, help="truncation tolerance")
    common.add_argument("--engine", choices=ENGINES, default="analytic")
    common.add_argument("--out", default=None, metavar="PATH", help="output file (default stdout)")
    common.add_argument("--phi-sweep", action="store_true", help="`sensitivity`: emit the phase-sweep inset instead")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="tmsv-parity",
        description="Parity-detection interferometry with two-mode squeezed vacuum",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__.split("Examples::", 1)[1],
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    phi_default = PHI_DEFAULTS.get(args.command, PHI_DEFAULTS["signal"])
    phi_start, phi_stop = args.phi_range or phi_default[:2]
    theta_start, theta_stop = args.theta_range or THETA_DEFAULT[:2]
    if args.samples is not None:
        samples = args.samples
    elif args.command == "rho-sweep":
        samples = THETA_DEFAULT[2]
    else:
        samples = phi_default[2]
    return RunConfig(
        command=args.command,
        mean_photons=args.nbar,
        mean_photons_coherent=args.nbar_coherent,
        nbar_max=args.nbar_max,
        fock_n=args.fock_n,
        theta=args.theta,
        theta_start=theta_start,
        theta_stop=theta_stop,
        phi_start=phi_start,
        phi_stop=phi_stop,
        samples=samples,
        epsilon=args.epsilon,
        output_path=args.out,
        engine=args.engine,
        phi_sweep=args.phi_sweep,
    )


def run(config: RunConfig, stream: IO[str]) -> int:
    config.validate()
    if config.command == "validate":
        return cmd_validate(config, stream)
    return HANDLERS[config.command](config, CsvOut(stream, config))


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = create_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        config = config_from_args(args)
        config.validate()
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2

    if config.output_path:
        with open(config.output_path, "w", encoding="utf-8", newline="") as fh:
            return run(config, fh)
    return run(config, sys.stdout)


if __name__ == "__main__":
    sys.exit(main())
