"""Quick oracle-equivalence and identity checks, run by ``etamu selftest``.

Each check compares two independent evaluation paths on a small battery of
channels and reports the worst discrepancy against a fixed tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .gammasum import GammaSum
from .inversion import DEFAULT_CONFIG, InversionConfig
from .modulation import DBPSK, NBFSK, PRESETS
from .params import FadingFormat, MrcChannel, db_to_linear
from .performance import avg_ber_contour, avg_ber_quadrature
from .stats import cdf_sum, mgf, pdf_single_closed, pdf_sum

MUS = (1.0, 1.5, 2.0, 3.5, 4.5)


@dataclass(frozen=True)
class CheckResult:
    name: str
    worst: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.worst) and self.worst <= self.tol)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name}: worst {self.worst:.3e} (tol {self.tol:.1e})"


def battery() -> list[MrcChannel]:
    """Channels of L = 2..5 branches, format 1, eta = 1.2, unit average SNR."""
    return [MrcChannel.build(FadingFormat.FORMAT1, 1.2, MUS[:n]) for n in range(2, 6)]


def _pdf_vs_series(cfg):
    worst = 0.0
    for ch in battery():
        y = np.linspace(3 * len(ch) / 50, 3 * len(ch), 50)
        ref = GammaSum(*ch.gamma_decomposition()).pdf(y)
        worst = max(worst, float(np.max(np.abs(pdf_sum(ch, y, cfg).value - ref))))
    return worst


def _cdf_vs_series(cfg):
    worst = 0.0
    for ch in battery():
        y = np.linspace(3 * len(ch) / 50, 3 * len(ch), 50)
        ref = GammaSum(*ch.gamma_decomposition()).cdf(y)
        worst = max(worst, float(np.max(np.abs(cdf_sum(ch, y, cfg).value - ref))))
    return worst


def _single_branch(cfg):
    worst = 0.0
    for fmt, eta, mu in [(1, 1.2, 1.0), (1, 0.3, 0.75), (1, 1.0, 2.0),
                         (2, -0.09, 1.0), (2, 0.5, 0.5), (2, -0.7, 2.5)]:
        ch = MrcChannel.build(fmt, eta, [mu], 1.5)
        y = np.linspace(0.05, 6.0, 40)
        closed = pdf_single_closed(ch.branches[0], y)
        contour = pdf_sum(ch, y, cfg, closed_form_single=False).value
        worst = max(worst, float(np.max(np.abs(closed - contour))))
    return worst


def _mgf_identities(cfg):
    worst = 0.0
    for ch in battery():
        for mod, s in ((DBPSK, 1.0), (NBFSK, 0.5)):
            ref = mgf(ch, s).real / 2.0
            worst = max(worst, abs(avg_ber_contour(ch, mod, cfg).value - ref),
                        abs(avg_ber_quadrature(ch, mod, cfg).value - ref))
    return worst


def _ber_routes(cfg):
    worst = 0.0
    ch = battery()[-1]
    for snr_db in (0.0, 10.0, 20.0):
        c = ch.with_mean_snr(db_to_linear(snr_db))
        for mod in PRESETS.values():
            worst = max(worst, abs(avg_ber_contour(c, mod, cfg).value
                                   - avg_ber_quadrature(c, mod, cfg).value))
    return worst


CHECKS: list[tuple[str, Callable[[InversionConfig], float], float]] = [
    ("pdf_sum vs gamma-mixture series", _pdf_vs_series, 1e-8),
    ("cdf_sum vs gamma-mixture series", _cdf_vs_series, 1e-8),
    ("single-branch contour vs Bessel closed form", _single_branch, 1e-10),
    ("DBPSK/NBFSK BER vs MGF identity", _mgf_identities, 1e-10),
    ("BER contour route vs quadrature route", _ber_routes, 1e-8),
]


def run(cfg: InversionConfig = DEFAULT_CONFIG) -> Iterator[CheckResult]:
    for name, fn, tol in CHECKS:
        try:
            worst = fn(cfg)
        except ArithmeticError:
            worst = float("inf")
        yield CheckResult(name, worst, tol)
