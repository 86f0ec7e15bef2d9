"""Enumeration of the rational point family attached to a chart and
dependent exponents, and the ball/rectangle families built on it.

A member is a pair (p, q) whose independent part p_1/q..p_d/q lies in the
chart domain and whose dependent integers approximate the chart values,

    |f_j(p_1/q, ..., p_d/q) - p_{d+j}/q|  <  q^(-tau_{d+j} - 1),  j <= m,

strictly.  Members are not reduced: each (p, q) is its own record.  The
membership predicate is decided exactly: writing q*f_j(p/q) = G/M with
integers G and M (the chart components have rational coefficients), the
condition is |G - p_{d+j} M| < b*M for the float bound b = q^(-tau), an
integer-versus-rational comparison.  The integer window (G - bM, G + bM) is
open of width < 2M, so each dependent axis admits at most two candidate
integers, and exactly one once b drops below 1/2 (q above 2^(1/tau)).

Enumeration iterates q through the window and sweeps the integer lattice
inside the domain (about q^d points per q), vectorized with numpy where the
integer magnitudes provably fit machine words and in exact big-integer
arithmetic otherwise.  Workers partition the q-window into blocks; merging
is a stable concatenation of the per-block results, so output order (q
ascending, then lexicographic p) does not depend on the worker count.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .core import Hyperrectangle, MongeManifold, RationalPoint, WeightVector
from .errors import CapExceededError, HypothesisError
from .formulas import check_manifold_hypotheses, proof_weight_vector_manifold

DEFAULT_CANDIDATE_CAP = 10 ** 9

_INT64_SAFE = 2 ** 62


@dataclass(eq=False)
class PointFamily:
    """Members of the rational point family over a denominator window.

    ``member_array`` is an (N, n+1) int64 array with columns (q, p_1..p_n),
    rows sorted by q then lexicographically by p; ``members`` materializes
    it lazily as :class:`RationalPoint` records.  Treated as immutable.
    """

    d: int
    Q_min: int
    Q_max: int
    tau_dep: WeightVector
    member_array: np.ndarray
    counts_by_q: dict[int, int] = field(repr=False)

    @property
    def m(self) -> int:
        return self.tau_dep.n

    @property
    def n(self) -> int:
        return self.d + self.m

    def __len__(self) -> int:
        return self.member_array.shape[0]

    @cached_property
    def members(self) -> list[RationalPoint]:
        return [
            RationalPoint(tuple(int(v) for v in row[1:]), int(row[0]))
            for row in self.member_array
        ]

    @classmethod
    def merge(cls, first: "PointFamily", second: "PointFamily") -> "PointFamily":
        """Concatenate two families over adjacent windows (first.Q_max + 1 ==
        second.Q_min); counting tables merge by addition."""
        if first.d != second.d or first.tau_dep != second.tau_dep:
            raise ValueError("families use different charts or weights")
        if first.Q_max + 1 != second.Q_min:
            raise ValueError("windows must be adjacent and ordered")
        counts = dict(first.counts_by_q)
        for q, c in second.counts_by_q.items():
            counts[q] = counts.get(q, 0) + c
        return cls(
            d=first.d,
            Q_min=first.Q_min,
            Q_max=second.Q_max,
            tau_dep=first.tau_dep,
            member_array=np.concatenate([first.member_array, second.member_array]),
            counts_by_q=counts,
        )


def _dependent_vector(tau_dep) -> WeightVector:
    if isinstance(tau_dep, WeightVector):
        if tau_dep.split != 0:
            return WeightVector.dependent(tau_dep.dependent_block)
        return tau_dep
    return WeightVector.dependent(tuple(tau_dep))


def estimate_candidates(M: MongeManifold, Q_min: int, Q_max: int) -> int:
    """Exact count of independent lattice points the window would visit."""
    total = 0
    for q in range(Q_min, Q_max + 1):
        per_q = 1
        for lo, hi in zip(M.domain.lower, M.domain.upper):
            per_q *= max(0, math.floor(q * hi) - math.ceil(q * lo) + 1)
        total += per_q
    return total


def _integer_forms(M: MongeManifold):
    forms = []
    for comp in M.components:
        L, terms = comp.integer_form()
        deg = max(comp.total_degree, 1)
        forms.append((L, deg, terms))
    return forms


def _dependent_limit(b: float, Mden: int) -> int:
    # strict integer threshold: |G - p*Mden| < b*Mden  <=>  err <= limit
    T = Fraction(b) * Mden
    return (T.numerator - 1) // T.denominator


def _axis_ranges(M: MongeManifold, q: int) -> list[tuple[int, int]] | None:
    ranges = []
    for lo, hi in zip(M.domain.lower, M.domain.upper):
        a, b = math.ceil(q * lo), math.floor(q * hi)
        if a > b:
            return None
        ranges.append((a, b))
    return ranges


def _enumerate_q_python(M, forms, taus, q) -> list[tuple[int, ...]]:
    """Exact big-integer path; handles the small-q double-candidate cases."""
    ranges = _axis_ranges(M, q)
    if ranges is None:
        return []
    rows = []
    for p in itertools.product(*(range(a, b + 1) for a, b in ranges)):
        options = []
        ok = True
        for (L, deg, terms), tj in zip(forms, taus):
            Mden = L * q ** (deg - 1)
            G = sum(
                c * math.prod(pi ** e for pi, e in zip(p, exps)) * q ** (deg - sum(exps))
                for c, exps in terms
            )
            limit = _dependent_limit(float(q) ** (-tj), Mden)
            r = G % Mden
            base = (G - r) // Mden
            cands = []
            if r <= limit:
                cands.append(base)
            if Mden - r <= limit:
                cands.append(base + 1)
            if not cands:
                ok = False
                break
            options.append(sorted(cands))
        if ok:
            for dep in itertools.product(*options):
                rows.append((q,) + p + dep)
    return rows


def _enumerate_q_numpy(M, forms, taus, q) -> np.ndarray | None:
    """Vectorized path; only valid when every dependent bound is < 1/2 and
    all intermediate integers fit int64.  Returns None to request fallback."""
    ranges = _axis_ranges(M, q)
    if ranges is None:
        return np.empty((0, M.n + 1), dtype=np.int64)
    max_abs_p = max(max(abs(a), abs(b)) for a, b in ranges)
    for (L, deg, terms), tj in zip(forms, taus):
        if float(q) ** (-tj) >= 0.5:
            return None
        worst = sum(
            abs(c) * max_abs_p ** sum(exps) * q ** (deg - sum(exps))
            for c, exps in terms
        )
        if worst >= _INT64_SAFE or L * q ** (deg - 1) >= _INT64_SAFE:
            return None

    axes = [np.arange(a, b + 1, dtype=np.int64) for a, b in ranges]
    if len(axes) == 1:
        P = [axes[0]]
    else:
        grids = np.meshgrid(*axes, indexing="ij")
        P = [g.ravel() for g in grids]
    N = P[0].shape[0]

    sel = np.ones(N, dtype=bool)
    dep_cols = []
    for (L, deg, terms), tj in zip(forms, taus):
        Mden = L * q ** (deg - 1)
        G = np.zeros(N, dtype=np.int64)
        for c, exps in terms:
            t = np.full(N, c * q ** (deg - sum(exps)), dtype=np.int64)
            for Pi, e in zip(P, exps):
                if e:
                    t *= Pi ** e
            G += t
        limit = _dependent_limit(float(q) ** (-tj), Mden)
        r = G % Mden
        base = (G - r) // Mden
        low = r <= limit
        high = (Mden - r) <= limit  # exclusive with low since bound < 1/2
        sel &= low | high
        dep_cols.append(np.where(low, base, base + 1))

    if not sel.any():
        return np.empty((0, M.n + 1), dtype=np.int64)
    cols = [np.full(int(sel.sum()), q, dtype=np.int64)]
    cols += [Pi[sel] for Pi in P]
    cols += [c[sel] for c in dep_cols]
    return np.stack(cols, axis=1)


def _enumerate_block(M, forms, taus, q_lo, q_hi) -> tuple[list[np.ndarray], dict[int, int]]:
    blocks = []
    counts = {}
    for q in range(q_lo, q_hi + 1):
        rows = _enumerate_q_numpy(M, forms, taus, q)
        if rows is None:
            listed = _enumerate_q_python(M, forms, taus, q)
            rows = (
                np.array(listed, dtype=np.int64)
                if listed
                else np.empty((0, M.n + 1), dtype=np.int64)
            )
        counts[q] = rows.shape[0]
        if rows.shape[0]:
            blocks.append(rows)
    return blocks, counts


def enumerate_points(M: MongeManifold, tau_dep, Q_min: int, Q_max: int,
                     cap: int = DEFAULT_CANDIDATE_CAP,
                     workers: int = 1) -> PointFamily:
    """All family members with denominator in [Q_min, Q_max].

    Aborts with :class:`CapExceededError` (carrying the exact candidate
    count) when the window would visit more than ``cap`` lattice points.
    """
    tv = _dependent_vector(tau_dep)
    if tv.m != M.m:
        raise ValueError("dependent weight count must equal the codimension")
    if tv.dependent_sum >= 1.0:
        raise HypothesisError(["dependent-sum"], "dependent weights must sum below 1")
    if not 1 <= Q_min <= Q_max:
        raise ValueError("need 1 <= Q_min <= Q_max")
    estimate = estimate_candidates(M, Q_min, Q_max)
    if estimate > cap:
        raise CapExceededError(estimate, cap)

    forms = _integer_forms(M)
    taus = tv.entries

    if workers <= 1 or Q_max - Q_min < 2 * workers:
        blocks, counts = _enumerate_block(M, forms, taus, Q_min, Q_max)
    else:
        edges = np.linspace(Q_min, Q_max + 1, workers + 1).astype(int)
        spans = [(int(edges[i]), int(edges[i + 1]) - 1) for i in range(workers)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(
                lambda span: _enumerate_block(M, forms, taus, span[0], span[1]),
                spans,
            ))
        blocks = [b for part in parts for b in part[0]]
        counts = {}
        for part in parts:
            counts.update(part[1])

    member_array = (
        np.concatenate(blocks)
        if blocks
        else np.empty((0, M.n + 1), dtype=np.int64)
    )
    return PointFamily(
        d=M.d,
        Q_min=Q_min,
        Q_max=Q_max,
        tau_dep=tv,
        member_array=member_array,
        counts_by_q=counts,
    )


def containment_constant(D: float, d: int, a_last: float) -> float:
    """Largest dilation constant certified by the slope bound: the chain
    D*d*k^a_d * q^(-1-tau_d) + (dependent bound)/2 < (dependent bound) holds
    for all q >= 1 once D*d*k^a_d <= 1/2, giving k = (1/(2Dd))^(1/a_d),
    capped at 1.  Flat charts (D = 0) impose no constraint."""
    if D <= 0.0:
        return 1.0
    return min(1.0, (1.0 / (2.0 * D * d)) ** (1.0 / a_last))


def ball_arrays(family: PointFamily, k: float) -> tuple[np.ndarray, np.ndarray]:
    """Centers (N, d) and per-row half-widths (N,) of the cube family
    |x_i - p_i/q| < k * q^(-1-(1-s)/d) on the independent axes."""
    if k <= 0.0:
        raise ValueError("k must be positive")
    d = family.d
    s = family.tau_dep.dependent_sum
    arr = family.member_array
    q = arr[:, 0].astype(np.float64)
    centers = arr[:, 1:1 + d].astype(np.float64) / q[:, None]
    radii = k * q ** (-1.0 - (1.0 - s) / d)
    return centers, radii


def rectangle_arrays(family: PointFamily, tau_full, k: float) -> tuple[np.ndarray, np.ndarray]:
    """Centers (N, d) and half-widths (N, d) of the rectangle family
    |x_i - p_i/q| < k^(a_i) * q^(-1-tau_i), with a the manifold transfer
    weights of tau_full."""
    tv = tau_full if isinstance(tau_full, WeightVector) else WeightVector(tuple(tau_full), family.d)
    check_manifold_hypotheses(tv, family.d, family.m)
    if not 0.0 < k <= 1.0:
        raise ValueError("k must lie in (0, 1]")
    a = proof_weight_vector_manifold(tv, family.d, family.m)
    arr = family.member_array
    q = arr[:, 0].astype(np.float64)
    centers = arr[:, 1:1 + family.d].astype(np.float64) / q[:, None]
    hw = np.empty((arr.shape[0], family.d), dtype=np.float64)
    for i, (ai, ti) in enumerate(zip(a.entries, tv.independent_block)):
        hw[:, i] = k ** ai * q ** (-1.0 - ti)
    return centers, hw


def build_balls(family: PointFamily, k: float) -> list[Hyperrectangle]:
    """The cube family as rectangle objects (one per member)."""
    centers, radii = ball_arrays(family, k)
    d = family.d
    return [
        Hyperrectangle(tuple(centers[i]), (float(radii[i]),) * d)
        for i in range(centers.shape[0])
    ]


def build_rectangles(family: PointFamily, tau_full, k: float) -> list[Hyperrectangle]:
    """The anisotropically shrunk family as rectangle objects."""
    centers, hw = rectangle_arrays(family, tau_full, k)
    return [
        Hyperrectangle(tuple(centers[i]), tuple(hw[i]))
        for i in range(centers.shape[0])
    ]
