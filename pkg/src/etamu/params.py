"""Eta-mu branch parameters, format conversion and derived constants.

Two parameterisations of eta are in common use:

* ``FORMAT1``: eta is the in-phase / quadrature power ratio, ``0 < eta < inf``.
* ``FORMAT2``: eta is the in-phase / quadrature correlation, ``-1 < eta < 1``.

They describe the same family and are related by the bilinear map
``eta1 = (1 - eta2) / (1 + eta2)``.  Everything downstream only needs the
pair of gamma scales ``(a, b)`` returned by :func:`derive_constants`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .errors import DegenerateParameters, ParameterOutOfRange


class FadingFormat(enum.Enum):
    FORMAT1 = 1
    FORMAT2 = 2

    @classmethod
    def parse(cls, value) -> "FadingFormat":
        if isinstance(value, cls):
            return value
        try:
            return cls(int(value))
        except (TypeError, ValueError):
            raise ParameterOutOfRange("format", value, "{1, 2}") from None


@dataclass(frozen=True)
class FadingBranch:
    """One eta-mu diversity branch.

    Attributes:
        format: Parameterisation of ``eta``.
        eta: Power ratio (format 1) or correlation (format 2).
        mu: Fading figure; ``2 * mu`` is the number of multipath clusters.
        mean_snr: Linear average SNR of the branch.
    """

    format: FadingFormat
    eta: float
    mu: float
    mean_snr: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "format", FadingFormat.parse(self.format))
        for name in ("eta", "mu", "mean_snr"):
            object.__setattr__(self, name, float(getattr(self, name)))

    def with_mean_snr(self, mean_snr: float) -> "FadingBranch":
        return replace(self, mean_snr=mean_snr)


@dataclass(frozen=True)
class DerivedConstants:
    h: float
    bigH: float
    a: float
    b: float


@dataclass(frozen=True)
class MrcChannel:
    """Ordered collection of independent branches combined by MRC."""

    branches: tuple[FadingBranch, ...]

    def __post_init__(self):
        branches = tuple(self.branches)
        if len(branches) < 1:
            raise ParameterOutOfRange("branches", len(branches), "L >= 1")
        for br in branches:
            validate_branch(br)
        object.__setattr__(self, "branches", branches)

    def __len__(self):
        return len(self.branches)

    def __iter__(self):
        return iter(self.branches)

    @property
    def constants(self) -> tuple[DerivedConstants, ...]:
        return tuple(derive_constants(br) for br in self.branches)

    @property
    def mus(self) -> tuple[float, ...]:
        return tuple(br.mu for br in self.branches)

    def gamma_decomposition(self) -> tuple[list[float], list[float]]:
        """Shapes and scales of the 2L independent gamma variates summing to Y."""
        shapes, scales = [], []
        for br, c in zip(self.branches, self.constants):
            shapes += [br.mu, br.mu]
            scales += [c.a, c.b]
        return shapes, scales

    def with_mean_snr(self, mean_snr: float) -> "MrcChannel":
        """Same branches, every average SNR set to ``mean_snr``."""
        return MrcChannel(tuple(br.with_mean_snr(mean_snr) for br in self.branches))

    @classmethod
    def build(cls, fmt, etas, mus: Sequence[float], mean_snrs=1.0) -> "MrcChannel":
        """Convenience constructor broadcasting scalar ``etas``/``mean_snrs``."""
        n = len(mus)
        etas = _broadcast(etas, n, "eta")
        snrs = _broadcast(mean_snrs, n, "mean_snr")
        return cls(tuple(FadingBranch(fmt, e, m, g) for e, m, g in zip(etas, mus, snrs)))


def _broadcast(value, n: int, name: str) -> list[float]:
    if isinstance(value, Iterable) and not isinstance(value, (str, bytes)):
        value = list(value)
        if len(value) != n:
            raise ParameterOutOfRange(name, value, f"{n} values")
        return value
    return [value] * n


_ETA_RANGE = {
    FadingFormat.FORMAT1: "(0, inf)",
    FadingFormat.FORMAT2: "(-1, 1)",
}


def validate_branch(candidate: FadingBranch) -> FadingBranch:
    """Return ``candidate`` unchanged, or raise :class:`ParameterOutOfRange`."""
    eta, mu, snr = candidate.eta, candidate.mu, candidate.mean_snr
    if not (math.isfinite(mu) and mu > 0):
        raise ParameterOutOfRange("mu", mu, "(0, inf)")
    if not (math.isfinite(snr) and snr > 0):
        raise ParameterOutOfRange("mean_snr", snr, "(0, inf)")
    if candidate.format is FadingFormat.FORMAT1:
        ok = math.isfinite(eta) and eta > 0
    else:
        ok = -1 < eta < 1
    if not ok:
        raise ParameterOutOfRange("eta", eta, _ETA_RANGE[candidate.format])
    return candidate


def convert_format(branch: FadingBranch) -> FadingBranch:
    """Express the same physical branch in the other format."""
    validate_branch(branch)
    eta = (1.0 - branch.eta) / (1.0 + branch.eta)
    if branch.format is FadingFormat.FORMAT1:
        target = FadingFormat.FORMAT2
    else:
        target = FadingFormat.FORMAT1
    return validate_branch(replace(branch, format=target, eta=eta))


def derive_constants(branch: FadingBranch) -> DerivedConstants:
    validate_branch(branch)
    eta = branch.eta
    if branch.format is FadingFormat.FORMAT1:
        h = (2.0 + 1.0 / eta + eta) / 4.0
        bigH = (1.0 / eta - eta) / 4.0
        # closed forms of h - H and h + H avoid cancellation for extreme eta
        h_minus = (1.0 + eta) / 2.0
        h_plus = (1.0 + eta) / (2.0 * eta)
    else:
        d = 1.0 - eta * eta
        h = 1.0 / d
        bigH = eta / d
        h_minus = 1.0 / (1.0 + eta)
        h_plus = 1.0 / (1.0 - eta)
    if not (h_minus > 0 and h_plus > 0 and math.isfinite(h_minus) and math.isfinite(h_plus)):
        raise DegenerateParameters(f"h -/+ H degenerate for eta={eta!r}")
    a = branch.mean_snr / (2.0 * branch.mu * h_minus)
    b = branch.mean_snr / (2.0 * branch.mu * h_plus)
    if not (a > 0 and b > 0 and math.isfinite(a) and math.isfinite(b)):
        raise DegenerateParameters(f"scales a={a!r}, b={b!r} not finite and positive")
    return DerivedConstants(h=h, bigH=bigH, a=a, b=b)


def db_to_linear(db):
    return 10.0 ** (db / 10.0)


def linear_to_db(x):
    return 10.0 * math.log10(x)
