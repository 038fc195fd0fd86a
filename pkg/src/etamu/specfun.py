"""Special functions on the real line and the complex plane.

``log_gamma`` is a Lanczos approximation (g = 7, nine coefficients) with the
reflection formula for ``Re(z) < 0.5``; the imaginary part follows the
principal branch, analytic off the negative real axis.  The incomplete gamma
and Bessel functions delegate to :mod:`scipy.special` behind the contracts
used in this package.
"""

from __future__ import annotations

import cmath
import math

import numpy as np
from scipy import special as sc

from .errors import InvalidOrder, NonPositiveShape, PoleAtNonPositiveInteger, ZeroBase

_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
_LOG_PI = math.log(math.pi)


def _lanczos_log_gamma(z: complex) -> complex:
    z = z - 1.0
    x = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        x += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _LOG_SQRT_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(x)


def _log_sinpi(z: complex) -> complex:
    """Principal ``log(sin(pi z))`` without overflow for large ``|Im z|``."""
    n = round(z.real)
    r, y = z.real - n, z.imag
    if abs(y) < 20.0:
        val = cmath.log(cmath.sin(math.pi * complex(r, y)))
    else:
        ay = abs(y)
        # sin(pi w) = (i/2) exp(-i pi w) (1 - exp(2 i pi w)) for Im w > 0
        w = complex(r, ay)
        val = -1j * math.pi * w + complex(-math.log(2.0), 0.5 * math.pi)
        # log(1 - u) = -u to double precision since |u| < exp(-40 pi)
        val -= cmath.exp(2j * math.pi * w)
        if y < 0:
            val = val.conjugate()
    if n % 2:
        # multiply by -1 while staying on the principal branch; on the real
        # axis the sign of the zero imaginary part decides the side of the cut
        upper = val.imag > 0 or (val.imag == 0 and math.cos(math.pi * r) * math.copysign(1.0, y) > 0)
        val += complex(0.0, -math.pi if upper else math.pi)
    return val


def log_gamma(z) -> complex:
    """Principal branch of ``log Gamma(z)``.

    Raises:
        PoleAtNonPositiveInteger: if ``z`` is ``0, -1, -2, ...``.
    """
    z = complex(z)
    if z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real):
        raise PoleAtNonPositiveInteger(f"Gamma has a pole at z={z.real!r}")
    if z.real >= 0.5:
        return _lanczos_log_gamma(z)
    # reflection; the 2*pi*k shift keeps the imaginary part on the principal branch
    shift = math.copysign(2.0 * math.pi, z.imag) * math.floor(0.5 * z.real + 0.25)
    return complex(_LOG_PI, shift) - _log_sinpi(z) - _lanczos_log_gamma(1.0 - z)


def principal_power(z, w: float) -> complex:
    """``z ** w`` on the principal branch (cut along the negative real axis)."""
    z = complex(z)
    if z == 0:
        raise ZeroBase("principal_power is undefined at z = 0")
    return cmath.exp(w * cmath.log(z))


def upper_incomplete_gamma(p: float, x, regularized: bool = False):
    """Upper incomplete gamma ``Gamma(p, x)``; divided by ``Gamma(p)`` if ``regularized``.

    Accepts scalar or array ``x``.
    """
    if not p > 0:
        raise NonPositiveShape(f"shape p={p!r} must be positive")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("x must be non-negative")
    q = sc.gammaincc(p, x)
    out = q if regularized else q * sc.gamma(p)
    return out[()] if out.ndim == 0 else out


def bessel_i(nu: float, x, scaled: bool = False):
    """Modified Bessel function of the first kind, ``I_nu(x)`` for ``x >= 0``.

    With ``scaled=True`` returns ``exp(-x) I_nu(x)``, which stays finite for
    large arguments.
    """
    if nu < -0.5:
        raise InvalidOrder(f"order nu={nu!r} must be >= -0.5")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("x must be non-negative")
    out = sc.ive(nu, x) if scaled else sc.iv(nu, x)
    return out[()] if out.ndim == 0 else out
