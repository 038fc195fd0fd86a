"""Numerical Bromwich inversion of Laplace transforms.

Two contours are available:

``talbot``
    A cotangent (Talbot-type) contour ``s = (n/y) * (c0 + c1*t*cot(c2*t) + i*c3*t)``
    with parameters optimised for double precision, sampled by the midpoint
    rule on ``t in (-pi, pi)``.  It wraps the non-positive real axis, where all
    branch points of products of ``(1 + s*A)**(-mu)`` lie, so ``exp(s*y)``
    decays along both tails.  Conjugate symmetry halves the work.

``vertical``
    The straight line ``Re(s) = c``.  For the Bromwich integral the
    oscillatory factor ``exp(i*w*y)`` is handled by QUADPACK's Fourier
    integrator; for undamped integrals (no ``exp(s*y)``) a double-exponential
    map of the half line is used instead.

Every routine returns an :class:`EvalResult` whose error estimate comes from
repeating the sum with twice the number of nodes.
"""

from __future__ import annotations

import enum
import math
import os
import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np
from scipy import integrate

from .errors import ContourCrossesSingularity, ConvergenceFailure, InvalidAbscissa

ArrayLike = Union[float, np.ndarray]

# optimised Talbot contour (error ~ exp(-1.36 n) before roundoff takes over)
_C0, _C1, _C2, _C3 = -0.6122, 0.5017, 0.6407, 0.2645
# real-axis crossing of the contour, in units of n / y
TALBOT_CROSSING = _C0 + _C1 / _C2

_CHUNK = 8192

ENV_NODES = "ETAMU_NODES"
ENV_TOL = "ETAMU_TOL"
ENV_METHOD = "ETAMU_METHOD"


class Method(str, enum.Enum):
    TALBOT = "talbot"
    VERTICAL = "vertical"


@dataclass(frozen=True)
class TransformFn:
    """A Laplace transform ``F(s)`` with the metadata the contours need.

    ``fn`` must accept complex ndarrays and be conjugate symmetric,
    ``F(conj(s)) == conj(F(s))``.  ``mean`` is an optional natural scale of the
    time variable, used only to detect degenerate tiny arguments.
    """

    fn: Callable[[np.ndarray], np.ndarray]
    sigma_max: float = 0.0
    decay: float = 1.0
    branch_point: Optional[float] = None
    mean: Optional[float] = None

    def __call__(self, s):
        return self.fn(s)


@dataclass(frozen=True)
class InversionConfig:
    method: Method = Method.TALBOT
    nodes: int = 32
    abscissa: Optional[float] = None
    target_abs_tol: float = 1e-9
    max_nodes: int = 512
    target_rel_tol: float = 1e-10

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        if self.nodes < 8 or self.nodes % 2:
            raise ValueError(f"nodes must be an even integer >= 8, got {self.nodes!r}")
        if not self.target_abs_tol > 0:
            raise ValueError(f"target_abs_tol must be positive, got {self.target_abs_tol!r}")
        if self.max_nodes < self.nodes:
            raise ValueError("max_nodes must be >= nodes")

    @classmethod
    def from_env(cls, **overrides) -> "InversionConfig":
        """Defaults, then ``ETAMU_*`` environment variables, then ``overrides``."""
        kw = {}
        if os.environ.get(ENV_NODES):
            kw["nodes"] = int(os.environ[ENV_NODES])
        if os.environ.get(ENV_TOL):
            kw["target_abs_tol"] = float(os.environ[ENV_TOL])
        if os.environ.get(ENV_METHOD):
            kw["method"] = os.environ[ENV_METHOD]
        kw.update({k: v for k, v in overrides.items() if v is not None})
        if "nodes" in kw and "max_nodes" not in kw:
            kw["max_nodes"] = max(cls.max_nodes, kw["nodes"])
        return cls(**kw)


@dataclass(frozen=True)
class EvalResult:
    """A computed value with an a-posteriori absolute error estimate.

    For array inputs all three fields are arrays of the input's shape.
    """

    value: ArrayLike
    abs_err_est: ArrayLike
    converged: Union[bool, np.ndarray]

    def __float__(self):
        return float(self.value)


DEFAULT_CONFIG = InversionConfig()


def _as_positive_array(y, name="y", allow_zero=False):
    arr = np.asarray(y, dtype=float)
    bad = (arr < 0) if allow_zero else (arr <= 0)
    if np.any(bad) or not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be {'non-negative' if allow_zero else 'positive'} and finite")
    return arr


def _pack(value, err, conv, shape) -> EvalResult:
    if shape == ():
        return EvalResult(float(value[0]), float(err[0]), bool(conv[0]))
    return EvalResult(value.reshape(shape), err.reshape(shape), conv.reshape(shape))


def _check_symmetry(F: Callable, s: complex):
    pair = F(np.array([s, s.conjugate()]))
    ref = abs(pair[0])
    if abs(pair[1] - pair[0].conjugate()) > 1e-13 * max(ref, 1e-300):
        raise ValueError("transform is not conjugate symmetric; the halved sum would be wrong")


# ---------------------------------------------------------------------------
# Talbot contour


def _talbot_contour(n: int):
    t = (2.0 * np.arange(n // 2) + 1.0) * np.pi / n
    cot = 1.0 / np.tan(_C2 * t)
    z = _C0 + _C1 * t * cot + 1j * _C3 * t
    dz = _C1 * (cot - _C2 * t * (1.0 + cot * cot)) + 1j * _C3
    return z, dz


def _talbot_sum(F: Callable, y: np.ndarray, n: int) -> np.ndarray:
    z, dz = _talbot_contour(n)
    weight = np.exp(n * z) * dz  # exp(s*y) == exp(n*z) along the scaled contour
    out = np.empty_like(y)
    for lo in range(0, y.size, _CHUNK):
        yc = y[lo:lo + _CHUNK, None]
        scale = n / yc
        g = F(scale * z) * (scale * weight)
        out[lo:lo + _CHUNK] = np.imag(g.sum(axis=1))
    return (2.0 / n) * out


def _talbot_invert(F: TransformFn, y: np.ndarray, cfg: InversionConfig):
    if F.branch_point is not None:
        top = TALBOT_CROSSING * cfg.max_nodes / y.min()
        if top >= F.branch_point:
            raise ContourCrossesSingularity(
                f"Talbot crossing {top:.3g} reaches the branch point {F.branch_point:.3g}"
            )
    _check_symmetry(F, complex(TALBOT_CROSSING * cfg.nodes / y.flat[0], 1.0 / y.flat[0]))
    n = cfg.nodes
    coarse = _talbot_sum(F, y, n)
    value = _talbot_sum(F, y, 2 * n)
    err = np.abs(value - coarse)
    todo = err > cfg.target_abs_tol
    while np.any(todo) and 4 * n <= cfg.max_nodes:
        n *= 2
        idx = np.flatnonzero(todo)
        finer = _talbot_sum(F, y[idx], 2 * n)
        new_err = np.abs(finer - value[idx])
        # roundoff grows with n: once doubling stops helping, keep the better pair
        better = new_err < err[idx]
        upd = idx[better]
        err[upd] = new_err[better]
        value[upd] = finer[better]
        todo[idx] = better & (new_err > cfg.target_abs_tol)
    return value, err


# ---------------------------------------------------------------------------
# vertical line, Bromwich (oscillatory) version


def _vertical_bromwich(F: TransformFn, y: np.ndarray, cfg: InversionConfig, scaled: bool):
    value = np.empty_like(y)
    err = np.empty_like(y)
    for i, yi in enumerate(y):
        c = cfg.abscissa if cfg.abscissa is not None else 1.0 / yi
        if c <= F.sigma_max or (scaled and c <= 0):
            raise InvalidAbscissa(f"abscissa {c!r} must lie right of every singularity")
        if F.branch_point is not None and c >= F.branch_point:
            raise InvalidAbscissa(f"abscissa {c!r} must lie left of the branch point")

        def G(w, c=c):
            s = np.asarray(c + 1j * np.atleast_1d(w))
            v = F(s)
            return v / s if scaled else v

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", integrate.IntegrationWarning)
            re, e1 = integrate.quad(lambda w: G(w)[0].real, 0.0, np.inf, weight="cos", wvar=yi,
                                    epsabs=cfg.target_abs_tol * 1e-2, limlst=200)
            im, e2 = integrate.quad(lambda w: G(w)[0].imag, 0.0, np.inf, weight="sin", wvar=yi,
                                    epsabs=cfg.target_abs_tol * 1e-2, limlst=200)
        amp = math.exp(c * yi) / math.pi
        value[i] = amp * (re - im)
        err[i] = amp * (e1 + e2)
    return value, err


# ---------------------------------------------------------------------------
# public API


def _finish(value, err, cfg: InversionConfig, shape, strict: bool, what: str) -> EvalResult:
    conv = err <= cfg.target_abs_tol
    if strict and not np.all(conv):
        worst = int(np.argmax(err))
        raise ConvergenceFailure(
            f"{what}: error estimate {err[worst]:.3g} exceeds tolerance "
            f"{cfg.target_abs_tol:.3g} at the node budget",
            value=value[worst], abs_err_est=err[worst],
        )
    return _pack(value, err, conv, shape)


def invert_at(F: TransformFn, y, cfg: InversionConfig = DEFAULT_CONFIG, strict: bool = True) -> EvalResult:
    """Inverse Laplace transform ``(1/2 pi i) int F(s) exp(s y) ds`` at ``y > 0``.

    ``y`` may be a scalar or an array.  Raises :class:`ConvergenceFailure`
    when ``strict`` and any point misses ``cfg.target_abs_tol``.
    """
    y = _as_positive_array(y)
    shape = y.shape
    flat = y.ravel().copy()
    if F.sigma_max > 0:
        raise ContourCrossesSingularity("transform has a singularity in the right half-plane")
    if cfg.method is Method.TALBOT:
        value, err = _talbot_invert(F, flat, cfg)
    else:
        value, err = _vertical_bromwich(F, flat, cfg, scaled=False)
    return _finish(value, err, cfg, shape, strict, "invert_at")


def _over_s(F: TransformFn) -> TransformFn:
    fn = F.fn
    return TransformFn(lambda s: fn(s) / s, 0.0, F.decay + 1.0, F.branch_point, F.mean)


#: arguments below this fraction of the transform's mean are treated as zero
SMALL_ARGUMENT = 1e-8


def invert_scaled_at(F: TransformFn, y, cfg: InversionConfig = DEFAULT_CONFIG, strict: bool = True) -> EvalResult:
    """Inverse transform of ``F(s)/s``, i.e. the running integral of ``invert_at``.

    ``y == 0`` gives exactly 0.  When ``F.mean`` is known, arguments below
    ``SMALL_ARGUMENT * F.mean`` also return 0, with the error estimate set to
    the (monotone) value at that threshold.
    """
    y = _as_positive_array(y, allow_zero=True)
    shape = y.shape
    flat = y.ravel().copy()
    if F.sigma_max > 0:
        raise ContourCrossesSingularity("transform has a singularity in the right half-plane")
    cut = SMALL_ARGUMENT * F.mean if F.mean else 0.0
    live = flat > cut
    value = np.zeros_like(flat)
    err = np.zeros_like(flat)
    G = _over_s(F)
    if np.any(live):
        if cfg.method is Method.TALBOT:
            v, e = _talbot_invert(G, flat[live], cfg)
        else:
            v, e = _vertical_bromwich(F, flat[live], cfg, scaled=True)
        value[live], err[live] = v, e
    tiny = (~live) & (flat > 0)
    if np.any(tiny):
        bound = invert_scaled_at(F, cut, cfg, strict=strict)
        err[tiny] = max(bound.value, 0.0) + bound.abs_err_est
    return _finish(value, err, cfg, shape, strict, "invert_scaled_at")


@dataclass(frozen=True)
class BpskKernel:
    """Weight ``(1 - s/q)**(-p) / (2 s)`` of the binary-modulation error integral.

    Integrated against an MGF it yields the average BER directly; for
    ``p = 1`` the result is ``F(q) / 2``.
    """

    p: float
    q: float

    def __post_init__(self):
        if not (self.p > 0 and self.q > 0):
            raise ValueError("BpskKernel requires p > 0 and q > 0")

    def __call__(self, s):
        return np.exp(-self.p * np.log1p(-s / self.q)) / (2.0 * s)


Weight = Union[None, str, BpskKernel]


def _weight_fn(weight: Weight):
    if weight is None or weight == "none":
        return (lambda s: 1.0), 0.0
    if weight == "one_over_s":
        return (lambda s: 1.0 / s), 1.0
    if isinstance(weight, BpskKernel):
        return weight, 1.0 + weight.p
    raise ValueError(f"unknown weight {weight!r}")


def _de_nodes(t_lo: float, t_hi: float, n: int):
    h = (t_hi - t_lo) / n
    t = t_lo + h * (np.arange(n) + 0.5)
    w = np.exp(0.5 * np.pi * np.sinh(t))
    dw = w * 0.5 * np.pi * np.cosh(t) * h
    return w, dw


def integrate_vertical(F: TransformFn, weight: Weight = None, cfg: InversionConfig = DEFAULT_CONFIG,
                       strict: bool = True) -> EvalResult:
    """``(1/2 pi i) int_{c-i inf}^{c+i inf} F(s) w(s) ds`` along ``Re(s) = c``.

    The half line ``w = Im(s) > 0`` is mapped by ``w = exp(pi/2 sinh t)``; the
    ``t`` range is truncated where the algebraic tail, bounded with the total
    decay exponent, falls below a small fraction of the integrand's scale.
    """
    wfn, extra_decay = _weight_fn(weight)
    decay = F.decay + extra_decay
    if decay <= 1.0:
        raise ValueError(f"integrand decays like |s|^-{decay:g}; need an exponent above 1")
    if isinstance(weight, BpskKernel):
        c = cfg.abscissa if cfg.abscissa is not None else weight.q / 2.0
        if not 0.0 < c < weight.q:
            raise InvalidAbscissa(f"abscissa {c!r} must lie strictly inside (0, q={weight.q!r})")
    else:
        default = 1.0 / F.mean if F.mean else 1.0
        c = cfg.abscissa if cfg.abscissa is not None else default
        if weight == "one_over_s" and c <= 0:
            raise InvalidAbscissa(f"abscissa {c!r} must be positive for the 1/s weight")
    if c <= F.sigma_max:
        raise InvalidAbscissa(f"abscissa {c!r} must lie right of sigma_max={F.sigma_max!r}")
    if F.branch_point is not None and c >= F.branch_point:
        raise InvalidAbscissa(f"abscissa {c!r} must lie left of the branch point")
    _check_symmetry(F, complex(c, 1.0))

    def G(w):
        s = c + 1j * w
        return F(s) * wfn(s)

    # scale of the result; truncation is relative to it so tiny values keep their digits
    head = abs(complex(G(np.array([0.0]))[0]))
    thr = min(cfg.target_abs_tol, 1e-13 * head * max(c, 1e-300)) * 1e-2
    t_hi = 0.5
    while t_hi < 6.0:
        w = math.exp(0.5 * math.pi * math.sinh(t_hi))
        if abs(G(np.array([w]))[0]) * w / (decay - 1.0) <= thr:
            break
        t_hi += 0.25
    t_lo = -0.5
    while t_lo > -6.0:
        w = math.exp(0.5 * math.pi * math.sinh(t_lo))
        if head * w <= thr:
            break
        t_lo -= 0.25

    def trap(n):
        w, dw = _de_nodes(t_lo, t_hi, n)
        return float(np.sum(np.real(G(w)) * dw)) / math.pi

    n = cfg.nodes
    coarse = trap(n)
    value = trap(2 * n)
    err = abs(value - coarse)
    while err > min(cfg.target_abs_tol, cfg.target_rel_tol * abs(value)) and 4 * n <= cfg.max_nodes:
        n *= 2
        finer = trap(2 * n)
        err = abs(finer - value)
        value = finer
    # the discarded tails are below thr by construction
    err += 2.0 * thr
    return _finish(np.array([value]), np.array([err]), cfg, (), strict, "integrate_vertical")
