"""Statistics of single and summed squared eta-mu variates.

The density and distribution of ``Y = sum_l gamma_l`` are obtained by
inverting the product MGF ``prod_l (1 + s*a_l)^-mu_l (1 + s*b_l)^-mu_l`` along
a contour; each factor is evaluated as ``exp(-mu * log(1 + s*a))`` on the
principal branch so no gamma-function ratios are ever formed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceFailure, EvaluationAtBranchPoint
from .inversion import (
    DEFAULT_CONFIG,
    EvalResult,
    InversionConfig,
    TransformFn,
    invert_at,
    invert_scaled_at,
)
from .params import FadingBranch, MrcChannel, derive_constants
from .specfun import bessel_i, log_gamma

#: ``|H|/h`` below which a branch is treated as exactly Nakagami-m (m = 2 mu)
NAKAGAMI_THRESHOLD = 1e-8


@dataclass(frozen=True)
class SnrGrid:
    start: float
    stop: float
    step: float

    def __post_init__(self):
        if not (self.start >= 0 and self.stop > self.start and self.step > 0):
            raise ValueError(f"invalid grid {self.start}:{self.stop}:{self.step}")

    @classmethod
    def parse(cls, text: str) -> "SnrGrid":
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid must be start:stop:step, got {text!r}")
        return cls(*(float(p) for p in parts))

    def points(self) -> np.ndarray:
        # integer index arithmetic keeps 0.05:12:0.05 at exactly 240 points
        n = int(math.floor((self.stop - self.start) / self.step + 1e-9))
        return self.start + self.step * np.arange(n + 1)


def _scales(channel: MrcChannel):
    consts = channel.constants
    a = np.array([c.a for c in consts])
    b = np.array([c.b for c in consts])
    mu = np.array(channel.mus)
    return a, b, mu


def _log_mgf(a, b, mu, s):
    out = np.zeros(np.shape(s), dtype=complex)
    for al, bl, ml in zip(a, b, mu):
        out -= ml * (np.log1p(s * al) + np.log1p(s * bl))
    return out


def mgf(channel: MrcChannel, s):
    """``E[exp(-s Y)]`` for complex ``s`` (scalar or array)."""
    a, b, mu = _scales(channel)
    s_arr = np.asarray(s, dtype=complex)
    for scale in np.concatenate([a, b]):
        if np.any(1.0 + s_arr * scale == 0):
            raise EvaluationAtBranchPoint(f"1 + s*{scale:g} vanishes")
    out = np.exp(_log_mgf(a, b, mu, s_arr))
    return complex(out) if out.ndim == 0 else out


def mgf_transform(channel: MrcChannel) -> TransformFn:
    """The channel MGF packaged for the inversion engine."""
    a, b, mu = _scales(channel)
    return TransformFn(
        fn=lambda s: np.exp(_log_mgf(a, b, mu, s)),
        sigma_max=-1.0 / max(a.max(), b.max()),
        decay=2.0 * float(mu.sum()),
        mean=float(np.sum(mu * (a + b))),
    )


def moments(channel: MrcChannel) -> tuple[float, float]:
    """Mean and variance of the combiner output SNR."""
    a, b, mu = _scales(channel)
    return float(np.sum(mu * (a + b))), float(np.sum(mu * (a * a + b * b)))


def pdf_single_closed(branch: FadingBranch, gamma):
    """Bessel-form density of one squared eta-mu variate.

    Uses ``exp(-x) I_nu(x)`` so large arguments do not overflow.  When
    ``|H|/h`` is below :data:`NAKAGAMI_THRESHOLD` the removable singularity
    is bypassed with the Gamma(2 mu, mean_snr / (2 mu)) density.
    """
    c = derive_constants(branch)
    mu, snr = branch.mu, branch.mean_snr
    g = np.asarray(gamma, dtype=float)
    if np.any(g < 0):
        raise ValueError("gamma must be non-negative")
    out = np.zeros_like(g)
    pos = g > 0
    absH = abs(c.bigH)
    nu = mu - 0.5
    if absH / c.h < NAKAGAMI_THRESHOLD:
        k, theta = 2.0 * mu, snr / (2.0 * mu)
        lg = log_gamma(k).real
        gp = g[pos]
        out[pos] = np.exp((k - 1.0) * np.log(gp) - gp / theta - lg - k * math.log(theta))
        at_zero = 1.0 / theta if k == 1.0 else (0.0 if k > 1.0 else math.inf)
    else:
        log_c = (0.5 * math.log(math.pi) + math.log(2.0) + (mu + 0.5) * math.log(mu)
                 + mu * math.log(c.h) - log_gamma(mu).real - nu * math.log(absH)
                 - (mu + 0.5) * math.log(snr))
        gp = g[pos]
        x = 2.0 * mu * absH * gp / snr
        decay = 2.0 * mu * (c.h - absH) * gp / snr
        out[pos] = np.exp(log_c + nu * np.log(gp) - decay) * bessel_i(nu, x, scaled=True)
        if nu > 0:
            at_zero = 0.0
        elif nu == 0:
            at_zero = math.exp(log_c)
        else:
            at_zero = math.inf
    out[~pos] = at_zero
    return float(out) if out.ndim == 0 else out


def pdf_sum(channel: MrcChannel, y, cfg: InversionConfig = DEFAULT_CONFIG,
            closed_form_single: bool = True) -> EvalResult:
    """Density of the MRC output SNR at ``y > 0``.

    For a single branch the closed form is used unless
    ``closed_form_single=False``, which forces the contour path.
    """
    if len(channel) == 1 and closed_form_single:
        y_arr = np.asarray(y, dtype=float)
        if np.any(y_arr <= 0):
            raise ValueError("y must be positive")
        val = np.asarray(pdf_single_closed(channel.branches[0], y_arr))
        err = 16.0 * np.finfo(float).eps * np.abs(val)
        if val.ndim == 0:
            return EvalResult(float(val), float(err), True)
        return EvalResult(val, err, np.ones(val.shape, dtype=bool))
    return invert_at(mgf_transform(channel), y, cfg)


# slack for clamping values that round-off pushes just outside [0, 1]
_CLAMP_SLACK = 1e-14


def cdf_sum(channel: MrcChannel, y, cfg: InversionConfig = DEFAULT_CONFIG) -> EvalResult:
    """Distribution function of the MRC output SNR at ``y >= 0``."""
    res = invert_scaled_at(mgf_transform(channel), y, cfg)
    val = np.atleast_1d(np.asarray(res.value, dtype=float)).copy()
    err = np.atleast_1d(np.asarray(res.abs_err_est, dtype=float))
    over = np.maximum(-val, val - 1.0)
    if np.any(over > err + _CLAMP_SLACK):
        i = int(np.argmax(over - err))
        raise ConvergenceFailure(
            f"CDF value {val[i]!r} leaves [0, 1] by more than its error estimate {err[i]:.3g}",
            value=val[i], abs_err_est=err[i],
        )
    np.clip(val, 0.0, 1.0, out=val)
    if np.ndim(res.value) == 0:
        return EvalResult(float(val[0]), res.abs_err_est, res.converged)
    return EvalResult(val.reshape(np.shape(res.value)), res.abs_err_est, res.converged)
