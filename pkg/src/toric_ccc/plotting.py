"""SVG figures of sampled T-dual Lagrangians.

Output bytes depend only on the inputs: the SVG hash salt is fixed and the
date metadata is dropped.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence

import matplotlib
from matplotlib.figure import Figure

from .linebundle import LatticePolytope
from .tduality import LagrangianSample

matplotlib.rcParams["svg.hashsalt"] = "toric-ccc"
matplotlib.rcParams["svg.fonttype"] = "path"

COLORS = ("#1b6ca8", "#c0392b", "#2e8b57", "#8e44ad", "#d35400")


class PlotDimensionError(ValueError):
    pass


def _support(sample: LagrangianSample) -> LatticePolytope | None:
    if sample.divisor is None:
        return None
    from .ccc import UnsupportedDivisorError, dictionary

    try:
        return dictionary(sample.divisor).sheaf.support
    except UnsupportedDivisorError:
        return None


def _label(sample: LagrangianSample) -> str:
    if sample.divisor is None:
        return "sample"
    return "c = (" + ", ".join(str(c) for c in sample.divisor.coeffs) + ")"


def _plot_line(ax, samples, bands):
    lo, hi = -1.0, 1.0
    for k, s in enumerate(samples):
        color = COLORS[k % len(COLORS)]
        if len(s):
            ax.plot(s.x[:, 0], s.y[:, 0], color=color, lw=1.6, label=_label(s))
            lo, hi = min(lo, float(s.x.min())), max(hi, float(s.x.max()))
        band = bands[k]
        if band is not None and not band.is_empty:
            a, b = (float(v) for v in band.interval())
            ax.axvspan(a, b, color=color, alpha=0.12, lw=0)
            lo, hi = min(lo, a), max(hi, b)
    for g in range(math.floor(lo) - 1, math.ceil(hi) + 2):
        ax.axvline(g, color="0.85", lw=0.6, zorder=0)
    ax.set_xlim(math.floor(lo) - 0.5, math.ceil(hi) + 0.5)
    ax.set_xlabel("x  (M_R)")
    ax.set_ylabel("y  (N_R)")


def _plot_plane(ax, samples, bands):
    for k, s in enumerate(samples):
        color = COLORS[k % len(COLORS)]
        band = bands[k]
        if band is not None and not band.is_empty and band.dim == 2:
            vs = [tuple(float(x) for x in v) for v in band.vertices]
            cx = sum(v[0] for v in vs) / len(vs)
            cy = sum(v[1] for v in vs) / len(vs)
            vs.sort(key=lambda v: math.atan2(v[1] - cy, v[0] - cx))
            ax.fill([v[0] for v in vs], [v[1] for v in vs], color=color, alpha=0.12, lw=1.0)
        if len(s):
            ax.plot(s.x[:, 0], s.x[:, 1], ".", color=color, ms=2.0, label=_label(s))
    ax.set_aspect("equal")
    ax.grid(True, color="0.85", lw=0.6)
    ax.set_xlabel("x1")
    ax.set_ylabel("x2")


def render_svg(samples: LagrangianSample | Sequence[LagrangianSample], path: str | Path,
               title: str | None = None, supports: Sequence[LatticePolytope | None] | None = None) -> Path:
    """Draw samples and write an SVG.

    Dimension 1 draws the curves x = f'(y) in the (x, y)-plane over the lattice
    gridlines with each polytope shaded as a band; dimension 2 draws the
    moment image in M_R over the polytope.
    """
    if isinstance(samples, LagrangianSample):
        samples = [samples]
    samples = list(samples)
    dims = {s.x.shape[1] for s in samples if s.x.ndim == 2} or {1}
    if len(dims) != 1:
        raise PlotDimensionError("samples of different dimensions")
    (n,) = dims
    if n not in (1, 2):
        raise PlotDimensionError(f"cannot draw dimension {n}; only 1 and 2 are supported")
    bands = list(supports) if supports is not None else [_support(s) for s in samples]

    fig = Figure(figsize=(5.0, 4.0))
    ax = fig.add_subplot()
    (_plot_line if n == 1 else _plot_plane)(ax, samples, bands)
    if any(len(s) for s in samples):
        ax.legend(loc="best", fontsize=8, frameon=False)
    if title:
        ax.set_title(title, fontsize=10)
    path = Path(path)
    fig.savefig(path, format="svg", metadata={"Date": None, "Creator": None})
    return path
