"""Matplotlib renderings of the CSV reports, written next to the delimited
output (same stem, .png).  Figures are a convenience view; the CSV files
remain the authoritative record."""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)


def _save(fig, path: str | Path) -> Path:
    path = Path(path).with_suffix(".png")
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def figure_boxcount(tables, path, formula_value: float | None = None) -> Path:
    """Log-log box counts with their fitted slopes, one series per budget."""
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for Q, table in tables:
        x = [math.log(1.0 / delta) for _, delta, count in table.rows if count > 0]
        y = [math.log(count) for _, _, count in table.rows if count > 0]
        ax.plot(x, y, "o-", ms=3, label=f"q <= {Q} (slope {table.slope:.3f})")
    if formula_value is not None:
        ax.axline((0, 0), slope=formula_value, color="k", ls="--", lw=1,
                  label=f"formula {formula_value:.4f}")
    ax.set_xlabel("log(1/delta)")
    ax.set_ylabel("log N(delta)")
    ax.legend(fontsize=8)
    ax.set_title("dyadic box counts")
    return _save(fig, path)


def figure_coverage(reports, path) -> Path:
    fig, ax = plt.subplots(figsize=(6, 4))
    xs = [r.window[1] for r in reports]
    ys = [r.fraction for r in reports]
    ax.semilogx(xs, ys, "o-")
    ax.axhline(1.0, color="k", lw=0.8, ls=":")
    ax.set_xlabel("denominator window q <= W")
    ax.set_ylabel("covered grid fraction")
    ax.set_ylim(0, 1.05)
    ax.set_title("coverage of the truncated ball family")
    return _save(fig, path)


def figure_family_counts(counts_by_q: dict, path) -> Path:
    fig, ax = plt.subplots(figsize=(6, 4))
    qs = sorted(q for q, c in counts_by_q.items() if c > 0)
    if qs:
        ax.loglog(qs, [counts_by_q[q] for q in qs], ".", ms=2)
    ax.set_xlabel("denominator q")
    ax.set_ylabel("members")
    ax.set_title("family members per denominator")
    return _save(fig, path)


def figure_sweep(solutions, path) -> Path:
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.loglog([s.Q for s in solutions], [s.point.q for s in solutions], "o-")
    ax.set_xlabel("budget Q")
    ax.set_ylabel("accepted denominator q")
    ax.set_title("accepted denominators along the budget ladder")
    return _save(fig, path)


def figure_order(estimate, path) -> Path:
    fig, ax = plt.subplots(figsize=(6, 4))
    axes = len(estimate.v)
    qs = [q for q, _ in estimate.samples]
    for i in range(axes):
        ax.semilogx(qs, [vals[i] for _, vals in estimate.samples], ".-",
                    ms=3, label=f"axis {i + 1} (v = {estimate.v[i]:.4f})")
        ax.axhline(estimate.v[i], color="k", lw=0.6, ls=":")
    ax.set_xlabel("q")
    ax.set_ylabel("-log psi(q) / log q")
    ax.legend(fontsize=8)
    ax.set_title("upper-order tail samples")
    return _save(fig, path)
