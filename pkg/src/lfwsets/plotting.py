"""Matplotlib figures for reports.

A point of ``P**J D`` is drawn on ``[0, 1)`` through its digits:
``x = sum a_{J+n} P**(J+n)  ->  sum code(a_{J+n}) q**-(n+1)``.  Balls of
scale ``s >= J`` become intervals of length ``q**-(s-J)``.
"""

from __future__ import annotations

import os
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Rectangle  # noqa: E402

from .sets import Ball, ClopenSet, StepFunction, normalize_ball, unit_sphere  # noqa: E402

__all__ = ["ball_interval", "plot_family", "plot_tiling", "plot_step", "plot_ratios"]


def ball_interval(b: Ball, J: int) -> tuple[float, float]:
    """``(left, width)`` of the ball inside ``P**J D`` drawn on ``[0, 1)``."""
    if b.scale < J:
        raise ValueError(f"ball of scale {b.scale} is not inside P^{J} D")
    q = b.params.q
    left = sum(a * float(q) ** -(n - J + 1) for n, a in b.center.terms)
    return left, float(q) ** -(b.scale - J)


def _window(balls: Sequence[Ball]) -> int:
    return min(min(b.scale, b.valuation if b.valuation is not None else b.scale) for b in balls)


def _save(fig, path: str) -> str:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    return path


def plot_family(sets: Sequence[ClopenSet], names: Sequence[str], path: str, title: str = "") -> str:
    """One row per set, drawn inside the smallest ``P**J D`` holding the family."""
    balls = [b for S in sets for b in S.balls]
    fig, ax = plt.subplots(figsize=(8, 0.6 + 0.5 * max(len(sets), 1)))
    if balls:
        J = _window(balls)
        for row, S in enumerate(sets):
            for b in S.balls:
                x, w = ball_interval(b, J)
                ax.add_patch(Rectangle((x, row + 0.1), w, 0.8, color=f"C{row % 10}"))
        ax.set_xlabel(f"digits of P^{J} D mapped to [0, 1)")
    ax.set_xlim(0, 1)
    ax.set_ylim(0, max(len(sets), 1))
    ax.set_yticks([r + 0.5 for r in range(len(sets))], list(names))
    ax.set_title(title or "family")
    return _save(fig, path)


def plot_tiling(sets: Sequence[ClopenSet], names: Sequence[str], path: str) -> str:
    """Every ball rescaled onto the unit sphere ``|xi| = 1``; gaps and overlaps are visible."""
    params = sets[0].params
    fig, ax = plt.subplots(figsize=(8, 1.8))
    for sb in unit_sphere(params).balls:
        x, w = ball_interval(sb, 0)
        ax.add_patch(Rectangle((x, 0), w, 1, fill=False, hatch="//", edgecolor="0.7"))
    depth = {}
    for m, S in enumerate(sets):
        for b in S.balls:
            if b.valuation is None:
                continue
            nb = normalize_ball(b)
            x, w = ball_interval(nb, 0)
            level = depth.get(x, 0)
            depth[x] = level + 1
            ax.add_patch(Rectangle((x, level * 0.15), w, 0.9, color=f"C{m % 10}", alpha=0.7,
                                   label=names[m]))
    handles, labels = ax.get_legend_handles_labels()
    uniq = dict(zip(labels, handles))
    if uniq:
        ax.legend(uniq.values(), uniq.keys(), loc="upper right", fontsize="small")
    ax.set_xlim(0, 1)
    ax.set_ylim(0, 1.6)
    ax.set_yticks([])
    ax.set_xlabel("unit sphere |xi| = 1 (digits mapped to [0, 1))")
    ax.set_title("dilation tiling")
    return _save(fig, path)


def plot_step(f: StepFunction, path: str, title: str = "", J: int | None = None) -> str:
    """Real-valued step function on ``P**J D`` (default: the ring of integers)."""
    fig, ax = plt.subplots(figsize=(8, 2.5))
    J = 0 if J is None else J
    for b, v in f.pieces:
        if b.scale < J or (b.valuation is not None and b.valuation < J):
            continue
        x, w = ball_interval(b, J)
        ax.hlines(float(v.real if isinstance(v, complex) else v), x, x + w, linewidth=2)
    ax.set_xlim(0, 1)
    ax.set_xlabel(f"P^{J} D (digits mapped to [0, 1))")
    ax.set_title(title)
    return _save(fig, path)


def plot_ratios(values: Sequence[float], path: str, title: str, ylabel: str) -> str:
    fig, ax = plt.subplots(figsize=(6, 2.5))
    ax.plot(range(1, len(values) + 1), list(values), "o", markersize=3)
    ax.set_xlabel("trial")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    return _save(fig, path)
