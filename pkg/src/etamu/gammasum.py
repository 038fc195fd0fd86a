"""Density and distribution of a sum of independent gamma variates.

Brute-force reference used to check the contour evaluator.  The sum of
``Gamma(k_i, theta_i)`` is written as a mixture of ``Gamma(rho + j, theta_1)``
laws with ``theta_1 = min(theta_i)`` and ``rho = sum(k_i)``; the mixture
weights ``C * delta_j`` follow the recursion

    gamma_j = sum_i k_i (1 - theta_1/theta_i)**j / j
    delta_{j+1} = 1/(j+1) * sum_{i=1}^{j+1} i * gamma_i * delta_{j+1-i}

and sum to one, so the neglected mass after ``J`` terms is known exactly and
bounds the truncation error.  Only real arithmetic and :mod:`scipy.special`
are used here.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np
from scipy import special as sc

from .errors import TruncationBoundNotMet

TRUNCATION_BOUND = 1e-12
MAX_TERMS = 100_000


class GammaSum:
    """Mixture representation of ``sum_i Gamma(shapes[i], scales[i])``."""

    def __init__(self, shapes: Sequence[float], scales: Sequence[float]):
        k = np.asarray(shapes, dtype=float)
        th = np.asarray(scales, dtype=float)
        if k.shape != th.shape or k.ndim != 1 or k.size < 1:
            raise ValueError("shapes and scales must be equal-length non-empty lists")
        if np.any(k <= 0) or np.any(th <= 0):
            raise ValueError("shapes and scales must be positive")
        self.shapes, self.scales = k, th
        self.theta1 = float(th.min())
        self.rho = float(k.sum())
        self.ratios = 1.0 - self.theta1 / th
        self.log_c = float(np.sum(k * np.log(self.theta1 / th)))
        self._weights = [math.exp(self.log_c)]
        self._gammas = [0.0]
        if self._weights[0] == 0.0:
            raise TruncationBoundNotMet("leading mixture weight underflows; scales too disparate")

    def _extend(self):
        # one more mixture weight, w_j = C * delta_j
        j = len(self._weights)
        self._gammas.append(float(np.sum(self.shapes * self.ratios ** j)) / j)
        w = self._weights
        g = self._gammas
        acc = math.fsum(i * g[i] * w[j - i] for i in range(1, j + 1))
        w.append(acc / j)

    def _terms_for(self, need) -> int:
        """Extend until ``need(remaining_mass, n_terms)`` holds; return term count."""
        while True:
            remaining = max(1.0 - math.fsum(self._weights), 0.0)
            if need(remaining, len(self._weights)):
                return len(self._weights)
            if len(self._weights) >= MAX_TERMS:
                raise TruncationBoundNotMet(
                    f"residual mass {remaining:.3g} after {MAX_TERMS} terms")
            if np.all(self.ratios == 0.0):
                return len(self._weights)
            for _ in range(16):
                self._extend()

    def _pdf_tail_sup(self, y: np.ndarray, a0: float) -> np.ndarray:
        # sup over shapes a >= a0 of the Gamma(a, theta1) density at y
        x = y / self.theta1
        log_g = (a0 - 1.0) * np.log(x) - x - sc.gammaln(a0) - math.log(self.theta1)
        decreasing = sc.digamma(a0) >= np.log(x)
        # for a >= 1 the gamma density never exceeds 1/theta
        cap = 1.0 / self.theta1 if a0 >= 1.0 else np.inf
        return np.where(decreasing, np.exp(log_g), cap)

    def pdf(self, y):
        y_arr = np.asarray(y, dtype=float)
        if np.any(y_arr <= 0):
            raise ValueError("y must be positive")
        flat = y_arr.ravel()

        def ok(remaining, n):
            if remaining == 0.0:
                return True
            return bool(np.all(remaining * self._pdf_tail_sup(flat, self.rho + n) <= TRUNCATION_BOUND))

        n = self._terms_for(ok)
        j = np.arange(n)
        w = np.array(self._weights[:n])
        a = self.rho + j
        x = flat[:, None] / self.theta1
        with np.errstate(divide="ignore"):
            log_terms = ((a - 1.0) * np.log(x) - x - sc.gammaln(a) - math.log(self.theta1)
                         + np.log(w))
        out = np.exp(log_terms).sum(axis=1)
        return float(out[0]) if y_arr.ndim == 0 else out.reshape(y_arr.shape)

    def cdf(self, y):
        y_arr = np.asarray(y, dtype=float)
        if np.any(y_arr < 0):
            raise ValueError("y must be non-negative")
        flat = y_arr.ravel()
        n = self._terms_for(lambda remaining, n: remaining <= TRUNCATION_BOUND)
        w = np.array(self._weights[:n])
        a = self.rho + np.arange(n)
        out = sc.gammainc(a[None, :], flat[:, None] / self.theta1) @ w
        out = np.minimum(out, 1.0)
        return float(out[0]) if y_arr.ndim == 0 else out.reshape(y_arr.shape)


def gamma_sum_pdf(shapes, scales, y):
    return GammaSum(shapes, scales).pdf(y)


def gamma_sum_cdf(shapes, scales, y):
    return GammaSum(shapes, scales).cdf(y)
