"""Matplotlib renderings for the CLI report paths.

Two pictures: portraits as labeled trees, and Rover-Nekrashevych elements
as rectangle diagrams (domain and range antichains drawn as partitions of
the unit interval into d-adic subintervals, cones joined by chords,
nontrivial decorations flagged).
"""

from fractions import Fraction

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .rovernek import VElement  # noqa: E402
from .ssgroup import Portrait  # noqa: E402


def _perm_label(perm) -> str:
    if list(perm) == sorted(perm):
        return "id"
    return "(" + " ".join(str(x) for x in perm) + ")"


def draw_portrait(p: Portrait, path: str) -> None:
    fig, ax = plt.subplots(figsize=(8, 5))
    ax.axis("off")

    def width(node: Portrait) -> int:
        return max(1, sum(width(c) for c in node.children))

    def walk(node: Portrait, x0: float, x1: float, y: float, parent=None):
        x = (x0 + x1) / 2
        if parent is not None:
            ax.plot([parent[0], x], [parent[1], y], color="0.6", lw=1, zorder=1)
        ax.scatter([x], [y], s=220, color="white", edgecolor="black", zorder=2)
        ax.text(x, y, _perm_label(node.perm), ha="center", va="center",
                fontsize=7, zorder=3)
        if node.children:
            total = sum(width(c) for c in node.children)
            cur = x0
            for c in node.children:
                w = (x1 - x0) * width(c) / total
                walk(c, cur, cur + w, y - 1, (x, y))
                cur += w

    walk(p, 0.0, 1.0, 0.0)
    fig.savefig(path, bbox_inches="tight", dpi=150)
    plt.close(fig)


def _interval(d: int, v) -> tuple[Fraction, Fraction]:
    lo = Fraction(0)
    size = Fraction(1)
    for letter in v:
        size /= d
        lo += (letter - 1) * size
    return lo, lo + size


def draw_velement(e: VElement, path: str) -> None:
    d = e.group.degree
    fig, ax = plt.subplots(figsize=(8, 3))
    ax.set_xlim(0, 1)
    ax.set_ylim(-0.15, 1.15)
    ax.axis("off")
    ax.text(-0.02, 1.0, "domain", ha="right", va="center", fontsize=8)
    ax.text(-0.02, 0.0, "range", ha="right", va="center", fontsize=8)
    for w, r, g in zip(e.domain, e.range_, e.decorations):
        (a0, a1) = _interval(d, w)
        (b0, b1) = _interval(d, r)
        color = "tab:red" if not g.is_identity() else "tab:blue"
        ax.plot([a0, a1], [1, 1], lw=4, color=color, solid_capstyle="butt")
        ax.plot([b0, b1], [0, 0], lw=4, color=color, solid_capstyle="butt")
        ax.plot([float(a0 + a1) / 2, float(b0 + b1) / 2], [0.97, 0.03],
                lw=0.8, color="0.4")
        for x, y in ((a0, 1), (a1, 1), (b0, 0), (b1, 0)):
            ax.plot([x, x], [y - 0.05, y + 0.05], lw=1, color="black")
    fig.savefig(path, bbox_inches="tight", dpi=150)
    plt.close(fig)


def draw_pipeline(images: dict, path: str) -> None:
    """One rectangle diagram per generator image, stacked vertically."""
    n = max(len(images), 1)
    fig, axes = plt.subplots(n, 1, figsize=(8, 2.2 * n), squeeze=False)
    for ax, (name, e) in zip((a for row in axes for a in row), sorted(images.items())):
        d = e.group.degree
        ax.set_xlim(0, 1)
        ax.set_ylim(-0.15, 1.15)
        ax.axis("off")
        ax.set_title(name, fontsize=9)
        for w, r, g in zip(e.domain, e.range_, e.decorations):
            a0, a1 = _interval(d, w)
            b0, b1 = _interval(d, r)
            color = "tab:red" if not g.is_identity() else "tab:blue"
            ax.plot([a0, a1], [1, 1], lw=4, color=color, solid_capstyle="butt")
            ax.plot([b0, b1], [0, 0], lw=4, color=color, solid_capstyle="butt")
            ax.plot([float(a0 + a1) / 2, float(b0 + b1) / 2], [0.97, 0.03],
                    lw=0.8, color="0.4")
    fig.savefig(path, bbox_inches="tight", dpi=150)
    plt.close(fig)
