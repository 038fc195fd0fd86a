"""Monte Carlo validation: branch samplers, the MRC simulator, empirical BER.

Random streams are derived from ``numpy.random.SeedSequence`` with a
``spawn_key`` of ``(stream_index, chunk)``, so a simulation is split into
fixed-size chunks whose draws do not depend on how many workers run them.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Union

import numpy as np

from .errors import NonIntegerClusterCount, ParameterOutOfRange
from .params import FadingBranch, FadingFormat, MrcChannel, derive_constants
from .modulation import ModulationScheme, conditional_ber

CHUNK_SIZE = 1 << 17


@dataclass(frozen=True)
class RngStream:
    seed: int
    stream_index: int = 0

    def __post_init__(self):
        if self.stream_index < 0:
            raise ValueError("stream_index must be >= 0")

    def generator(self, chunk: int = 0) -> np.random.Generator:
        ss = np.random.SeedSequence(self.seed, spawn_key=(self.stream_index, chunk))
        return np.random.Generator(np.random.PCG64(ss))


RngLike = Union[RngStream, np.random.Generator]


def _gen(rng: RngLike) -> np.random.Generator:
    return rng.generator() if isinstance(rng, RngStream) else rng


def sample_branch(branch: FadingBranch, rng: RngLike, size=None):
    """Draw squared eta-mu variates as ``Gamma(mu, a) + Gamma(mu, b)``."""
    c = derive_constants(branch)
    g = _gen(rng)
    out = g.gamma(branch.mu, c.a, size) + g.gamma(branch.mu, c.b, size)
    return out


def sample_branch_clusters(branch: FadingBranch, rng: RngLike, size=None):
    """Physical cluster model: sum over ``2 mu`` clusters of ``X_i**2 + Y_i**2``.

    ``X_i`` and ``Y_i`` are zero-mean Gaussians with variances
    ``mean_snr*eta / (2 mu (1+eta))`` and ``mean_snr / (2 mu (1+eta))``.
    Only defined for format 1 branches with an integer cluster count.
    """
    if branch.format is not FadingFormat.FORMAT1:
        raise ParameterOutOfRange("format", branch.format.value, "{1} for the cluster model")
    clusters = 2.0 * branch.mu
    n_clusters = int(round(clusters))
    if n_clusters < 1 or abs(clusters - n_clusters) > 1e-12:
        raise NonIntegerClusterCount(f"2*mu = {clusters!r} is not a positive integer")
    eta, snr = branch.eta, branch.mean_snr
    sx = math.sqrt(snr * eta / (clusters * (1.0 + eta)))
    sy = math.sqrt(snr / (clusters * (1.0 + eta)))
    g = _gen(rng)
    shape = (n_clusters,) if size is None else (n_clusters,) + tuple(np.atleast_1d(size))
    x = g.normal(0.0, sx, shape)
    y = g.normal(0.0, sy, shape)
    return np.sum(x * x + y * y, axis=0)


@dataclass
class EmpiricalSummary:
    n: int
    mean: float
    variance: float
    samples: np.ndarray = field(repr=False)

    @property
    def std_err(self) -> float:
        return math.sqrt(self.variance / self.n)

    def ecdf(self, x):
        return np.searchsorted(self.samples, np.asarray(x, dtype=float), side="right") / self.n

    def ks_distance(self, cdf: Callable, grid_points: Optional[int] = 20001) -> float:
        """Sup distance between the empirical CDF and ``cdf``.

        With ``grid_points=None`` ``cdf`` is evaluated at every sample and the
        exact statistic is returned.  Otherwise ``cdf`` is evaluated on a grid
        of sample quantiles and, by monotonicity of both functions, a rigorous
        upper bound on the statistic is returned.
        """
        x = self.samples
        n = self.n
        if grid_points is None or grid_points >= n:
            f = np.asarray(cdf(x), dtype=float)
            i = np.arange(1, n + 1)
            return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))
        idx = np.unique(np.linspace(0, n - 1, grid_points).round().astype(int))
        g = x[idx]
        f = np.asarray(cdf(g), dtype=float)
        e_hi = np.searchsorted(x, g, side="right") / n
        e_lo = np.searchsorted(x, g, side="left") / n
        # on [g_j, g_{j+1}): ecdf in [e_hi[j], e_lo[j+1]], cdf in [f[j], f[j+1]]
        inner = max(np.max(e_lo[1:] - f[:-1]), np.max(f[1:] - e_hi[:-1]))
        edges = max(f[0], 1.0 - f[-1], np.max(np.abs(e_hi - f)))
        return float(max(inner, edges))


def _chunk_draw(channel: MrcChannel, rng: RngStream, chunk: int, size: int) -> np.ndarray:
    g = rng.generator(chunk)
    total = np.zeros(size)
    for br in channel.branches:
        total += sample_branch(br, g, size)
    return total


def simulate_mrc(channel: MrcChannel, n: int, rng: RngStream, workers: int = 1,
                 chunk_size: int = CHUNK_SIZE) -> EmpiricalSummary:
    """``n`` independent draws of the combiner output SNR.

    Output is identical for any ``workers``; only ``(seed, stream_index)``
    and ``chunk_size`` determine the samples.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not isinstance(rng, RngStream):
        raise TypeError("simulate_mrc needs an RngStream so chunks can be partitioned")
    sizes = [min(chunk_size, n - lo) for lo in range(0, n, chunk_size)]
    jobs = list(enumerate(sizes))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda job: _chunk_draw(channel, rng, *job), jobs))
    else:
        parts = [_chunk_draw(channel, rng, *job) for job in jobs]
    y = np.concatenate(parts)
    mean = float(np.mean(y))
    var = float(np.var(y, ddof=1)) if n > 1 else 0.0
    y.sort()
    return EmpiricalSummary(n=n, mean=mean, variance=var, samples=y)


def empirical_ber(channel: MrcChannel, mod: ModulationScheme, n: int, rng: RngStream,
                  workers: int = 1) -> tuple[float, float]:
    """Rao-Blackwellised BER estimate: mean of the conditional BER over draws.

    Returns:
        ``(estimate, standard_error)``.
    """
    sim = simulate_mrc(channel, n, rng, workers=workers)
    v = conditional_ber(mod, sim.samples)
    est = float(np.mean(v))
    se = float(np.std(v, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return est, se
