"""Render CLI data series to image files.

Uses the object-oriented matplotlib API with the Agg canvas, so no display
or global pyplot state is involved and the module is safe to call from
headless batch jobs.
"""

from __future__ import annotations

import math
from typing import Mapping, Sequence

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_MARKERS = ("o", "s", "^", "v", "D", "x")


def _figure(width: float = 6.4):
    fig = Figure(figsize=(width, width * GOLDEN))
    FigureCanvasAgg(fig)
    ax = fig.add_subplot(1, 1, 1)
    ax.grid(True, which="both", linewidth=0.4, alpha=0.5)
    return fig, ax


def plot_series(path: str, x: Sequence[float], series: Mapping[str, Sequence[float]], *,
                xlabel: str, ylabel: str, title: str = "", logy: bool = False,
                markers: bool = False, dpi: int = 150) -> None:
    """Draw one line per entry of ``series`` against ``x`` and save to ``path``.

    The file type follows the extension of ``path`` (png, pdf, svg, ...).
    Non-positive values are masked on a log axis instead of raising.
    """
    fig, ax = _figure()
    x = np.asarray(x, dtype=float)
    for i, (label, y) in enumerate(series.items()):
        y = np.asarray(y, dtype=float)
        if logy:
            y = np.where(y > 0, y, np.nan)
        kw = {"marker": _MARKERS[i % len(_MARKERS)], "markersize": 3} if markers else {}
        ax.plot(x, y, label=label, linewidth=1.2, **kw)
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    if len(series) > 1:
        ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)


def plot_simulation(path: str, y: Sequence[float], analytic_cdf: Sequence[float],
                    ecdf: Sequence[float], analytic_pdf: Sequence[float],
                    hist: Sequence[float], title: str = "", dpi: int = 150) -> None:
    """Two panels: densities (analytic line, histogram markers) and CDFs."""
    fig = Figure(figsize=(10.0, 10.0 * GOLDEN / 2.0))
    FigureCanvasAgg(fig)
    ax_pdf, ax_cdf = fig.subplots(1, 2)
    ax_pdf.plot(y, analytic_pdf, linewidth=1.2, label="analytic")
    ax_pdf.plot(y, hist, "o", markersize=2.5, label="simulated")
    ax_pdf.set_xlabel("y")
    ax_pdf.set_ylabel("pdf")
    ax_cdf.plot(y, analytic_cdf, linewidth=1.2, label="analytic")
    ax_cdf.plot(y, ecdf, "o", markersize=2.5, label="empirical")
    ax_cdf.set_xlabel("y")
    ax_cdf.set_ylabel("cdf")
    for ax in (ax_pdf, ax_cdf):
        ax.grid(True, linewidth=0.4, alpha=0.5)
        ax.legend(frameon=False)
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=dpi)
