"""MRC receiver metrics: outage probability and average BER of binary schemes.

Two independent routes to the average BER are provided.

* :func:`avg_ber_quadrature` averages the conditional BER against the
  contour-evaluated density on geometric panels.
* :func:`avg_ber_contour` uses

      int_0^inf Gamma(p, q y) exp(s y) dy = Gamma(p)/s * ((1 - s/q)**-p - 1),

  valid for ``Re(s) < q``.  Swapping the order of integration, the ``-1``
  term contributes the CDF at ``y = 0`` (zero), leaving a single line
  integral of ``M(s) (1 - s/q)**-p / (2 s)`` over ``Re(s) = c`` with ``0 < c < q``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConvergenceFailure
from .inversion import (
    DEFAULT_CONFIG,
    BpskKernel,
    EvalResult,
    InversionConfig,
    integrate_vertical,
)
from .modulation import (  # noqa: F401  (re-exported)
    CBFSK,
    CBPSK,
    DBPSK,
    NBFSK,
    PRESETS,
    ModulationScheme,
    conditional_ber,
)
from .params import MrcChannel, db_to_linear
from .quadrature import gauss_kronrod, geometric_breakpoints
from .stats import cdf_sum, mgf_transform, moments, pdf_sum


@dataclass(frozen=True)
class BerPoint:
    mean_snr_db: float
    ber: float
    abs_err_est: float

    def __post_init__(self):
        if not 0.0 < self.ber <= 0.5:
            raise ValueError(f"BER {self.ber!r} outside (0, 0.5]")


def outage(channel: MrcChannel, y_th, cfg: InversionConfig = DEFAULT_CONFIG) -> EvalResult:
    """Probability that the combined SNR falls below ``y_th``."""
    return cdf_sum(channel, y_th, cfg)


def _upper_limit(channel: MrcChannel, mod: ModulationScheme, cfg: InversionConfig, scale_tol):
    mean, var = moments(channel)
    y_max = mean + 10.0 * math.sqrt(var)
    while True:
        tail_cdf = 1.0 - float(cdf_sum(channel, y_max, cfg).value)
        bound = conditional_ber(mod, y_max) * min(1.0, max(tail_cdf, 0.0) + cfg.target_abs_tol)
        if bound <= scale_tol or y_max > 1e6 * mean:
            return y_max, bound
        y_max *= 2.0


def avg_ber_quadrature(channel: MrcChannel, mod: ModulationScheme,
                       cfg: InversionConfig = DEFAULT_CONFIG) -> EvalResult:
    """Average BER by direct quadrature over the density of the combined SNR.

    The range ``(0, Y_max)`` is cut into geometric panels, since at high SNR
    the integrand peaks far below the mean.  ``Y_max`` is grown until the
    tail bound ``Pb(Y_max) * (1 - F(Y_max))`` is negligible.
    """
    # a relative scale for the tail: the conditional BER at the mean bounds nothing,
    # but the MGF identity Pb <= M(q)/2 * const gives the right order of magnitude
    scale = float(np.real(mgf_transform(channel)(np.array([mod.q + 0j]))[0]))
    tail_tol = min(cfg.target_abs_tol, cfg.target_rel_tol * scale) * 1e-2
    y_max, tail = _upper_limit(channel, mod, cfg, tail_tol)
    pts = geometric_breakpoints(y_max * 2.0 ** -60, y_max)

    def integrand(y):
        # row 0: integrand; row 1: conditional BER times the density error estimate
        y = np.asarray(y, dtype=float)
        out = np.zeros((2,) + y.shape)
        pos = y > 0
        r = pdf_sum(channel, y[pos], cfg)
        pb = conditional_ber(mod, y[pos])
        out[0, pos] = pb * r.value
        out[1, pos] = pb * r.abs_err_est
        return out

    (val, dens_err), qerr, ok = gauss_kronrod(integrand, pts, abs_tol=tail_tol,
                                              rel_tol=cfg.target_rel_tol)
    err = qerr + tail + dens_err
    if not ok:
        raise ConvergenceFailure(f"BER quadrature did not converge (estimate {val!r} +- {qerr:.3g})",
                                 value=val, abs_err_est=err)
    return EvalResult(float(val), float(err), bool(err <= max(cfg.target_abs_tol, cfg.target_rel_tol * abs(val))))


def avg_ber_contour(channel: MrcChannel, mod: ModulationScheme,
                    cfg: InversionConfig = DEFAULT_CONFIG) -> EvalResult:
    """Average BER as one vertical-line integral of the MGF (closed-form route)."""
    return integrate_vertical(mgf_transform(channel), BpskKernel(mod.p, mod.q), cfg)


def ber_curve(channel_template: MrcChannel, mod: ModulationScheme, snr_db_grid: Sequence[float],
              cfg: InversionConfig = DEFAULT_CONFIG, method: str = "quadrature") -> list[BerPoint]:
    """Average BER versus the common per-branch average SNR (in dB)."""
    evaluate = {"quadrature": avg_ber_quadrature, "contour": avg_ber_contour}[method]
    out = []
    for snr_db in snr_db_grid:
        ch = channel_template.with_mean_snr(db_to_linear(float(snr_db)))
        r = evaluate(ch, mod, cfg)
        out.append(BerPoint(float(snr_db), float(r.value), float(r.abs_err_est)))
    return out
