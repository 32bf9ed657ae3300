"""Figure rendering for the CLI report paths.

All renderers write image files and return the path; nothing is shown
interactively.  Layouts stay readable up to a few dozen elements, which
covers every desk-scale instance this package targets.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def cayley_figure(S, path, title=None):
    """Multiplication table as an index heatmap."""
    table = np.array(S.product)
    n = S.size
    fig, ax = plt.subplots(figsize=(max(4, n * 0.3), max(3.5, n * 0.3)))
    im = ax.imshow(table, cmap="viridis")
    ax.set_title(title or f"multiplication table ({n} elements)")
    ax.set_xlabel("right factor")
    ax.set_ylabel("left factor")
    if n <= 24:
        ax.set_xticks(range(n))
        ax.set_yticks(range(n))
        labels = [S.label(i) for i in range(n)]
        ax.set_xticklabels(labels, rotation=90, fontsize=6)
        ax.set_yticklabels(labels, fontsize=6)
    fig.colorbar(im, ax=ax, label="product index")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def _order_covers(S):
    pairs = [
        (a, b)
        for a in S.elements()
        for b in S.elements()
        if a != b and S.leq(a, b)
    ]
    strict = set(pairs)
    covers = [
        (a, b)
        for (a, b) in pairs
        if not any((a, m) in strict and (m, b) in strict for m in S.elements())
    ]
    return strict, covers


def order_figure(S, path, title=None):
    """Hasse diagram of the natural partial order, layered by height."""
    strict, covers = _order_covers(S)
    height = {}

    def h(x):
        if x not in height:
            below = [a for (a, b) in covers if b == x]
            height[x] = 1 + max((h(a) for a in below), default=0)
        return height[x]

    for x in S.elements():
        h(x)
    layers = {}
    for x in S.elements():
        layers.setdefault(height[x], []).append(x)
    pos = {}
    for level, xs in sorted(layers.items()):
        for k, x in enumerate(sorted(xs)):
            pos[x] = (k - (len(xs) - 1) / 2.0, level)
    fig, ax = plt.subplots(figsize=(max(4, S.size * 0.45), max(3, len(layers) * 1.2)))
    for a, b in covers:
        xa, ya = pos[a]
        xb, yb = pos[b]
        ax.plot([xa, xb], [ya, yb], color="gray", lw=0.8, zorder=1)
    xs = [pos[x][0] for x in S.elements()]
    ys = [pos[x][1] for x in S.elements()]
    ax.scatter(xs, ys, s=120, color="steelblue", zorder=2)
    if S.size <= 30:
        for x in S.elements():
            ax.annotate(
                S.label(x),
                pos[x],
                textcoords="offset points",
                xytext=(0, 9),
                ha="center",
                fontsize=6,
            )
    ax.set_title(title or "natural partial order")
    ax.set_axis_off()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def spectrum_figure(eigenvalues, tol, path, title=None):
    """Trace-form eigenvalues with the zero tolerance band."""
    eigs = sorted(float(e) for e in eigenvalues)
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.axhspan(-tol, tol, color="orange", alpha=0.3, label=f"zero band (±{tol:g})")
    ax.plot(range(len(eigs)), eigs, "o", color="steelblue")
    ax.axhline(0.0, color="black", lw=0.6)
    ax.set_xlabel("eigenvalue index")
    ax.set_ylabel("eigenvalue")
    ax.set_title(title or "trace form spectrum")
    ax.legend(loc="best", fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def dims_figure(pairs, path, title=None):
    """Bar chart comparing labeled dimensions (direct vs iterated, etc.)."""
    names = [p[0] for p in pairs]
    values = [p[1] for p in pairs]
    fig, ax = plt.subplots(figsize=(max(4, len(pairs) * 1.1), 3.2))
    bars = ax.bar(range(len(values)), values, color="steelblue")
    ax.bar_label(bars)
    ax.set_xticks(range(len(names)))
    ax.set_xticklabels(names, rotation=20, ha="right", fontsize=7)
    ax.set_ylabel("dimension")
    ax.set_title(title or "algebra dimensions")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
