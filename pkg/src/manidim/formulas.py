"""Closed-form Hausdorff-dimension bounds for weighted simultaneous rational
approximation, their hypothesis validators, the weight vectors used to
transfer ball families to rectangle families, and a tail estimator for the
upper order of a general approximation function.

Conventions shared by every formula here:

* weight vectors are positive, with the independent block sorted
  non-increasing; unsorted input is rejected rather than silently sorted,
  because the split between independent and dependent axes is positional;
* minimizations break ties toward the smallest index, and the reported
  ``argmin_j`` is 1-based;
* validators collect and report every violated hypothesis by name, not just
  the first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence, Union

from .core import WeightVector
from .errors import HypothesisError

JARNIK_BESICOVITCH = "jarnik-besicovitch"
RYNNE = "rynne"
PLANAR_CURVE = "planar-curve"
BLVV_SIMULTANEOUS = "blvv-simultaneous"
MANIFOLD_LOWER_BOUND = "manifold-lower-bound"
WWX_RECTANGLE = "wwx-rectangle"
MANIFOLD_VIA_RECTANGLES = "manifold-lower-bound-via-rectangles"


@dataclass(frozen=True)
class DimensionResult:
    """A dimension bound, the (1-based) index achieving the minimum and the
    formula that produced it.  Formulas without a minimization report
    argmin_j = 1."""

    value: float
    argmin_j: int
    formula_id: str


@dataclass(frozen=True)
class UpperOrderEstimate:
    """Per-axis upper orders with the samples that produced them.

    ``v[i]`` is the maximum of ``-log psi_i(q) / log q`` over the sampled
    tail ladder; ``samples`` holds every (q, per-axis value) pair and
    ``window`` the scanned q-range.
    """

    v: tuple[float, ...]
    samples: tuple[tuple[int, tuple[float, ...]], ...]
    window: tuple[int, int]


def _min_with_argmin(values: Sequence[float]) -> tuple[float, int]:
    """Minimum and its smallest 1-based index."""
    best = values[0]
    best_j = 1
    for j, v in enumerate(values[1:], start=2):
        if v < best:
            best = v
            best_j = j
    return best, best_j


def _coerce_split(tau, split: int) -> WeightVector:
    if isinstance(tau, WeightVector):
        if tau.split != split:
            raise ValueError(f"weight vector split {tau.split} != expected {split}")
        return tau
    return WeightVector(tuple(tau), split)


def diagnose_weights(entries: Sequence[float], d: int, m: int) -> list[str]:
    """Every violated manifold hypothesis for a raw weight list, by name.

    Unlike the typed constructors this never raises, so it can report
    ordering violations alongside the rest.
    """
    entries = tuple(float(e) for e in entries)
    names = []
    if len(entries) != d + m:
        names.append("length-mismatch")
        return names
    if any(not math.isfinite(e) or e <= 0.0 for e in entries):
        names.append("entries-positive")
    ind, dep = entries[:d], entries[d:]
    ordered = all(ind[i] >= ind[i + 1] for i in range(len(ind) - 1))
    if ordered and dep and ind and ind[-1] < max(dep):
        ordered = False
    if not ordered:
        names.append("ordering")
    dep_sum = sum(dep)
    if dep and dep_sum >= 1.0:
        names.append("dependent-sum")
    if ind and dep and ind[-1] < (1.0 - dep_sum) / d:
        names.append("floor-condition")
    return names


def check_manifold_hypotheses(tau: WeightVector, d: int, m: int,
                              require_dependent_max: bool = True) -> None:
    """Validate the weighted-manifold hypotheses, raising with all violated
    names.  ``require_dependent_max=False`` drops the condition that the last
    independent exponent dominates the dependent block (only the floor
    condition is needed for the transfer weights to stay >= 1)."""
    if tau.n != d + m or tau.split != d:
        raise ValueError(
            f"weight vector has n={tau.n}, split={tau.split}; expected n={d + m}, split={d}"
        )
    if d < 1 or m < 1:
        raise ValueError("need d >= 1 and m >= 1")
    names = []
    dep_sum = tau.dependent_sum
    if require_dependent_max and tau.entries[d - 1] < max(tau.dependent_block):
        names.append("ordering")
    if dep_sum >= 1.0:
        names.append("dependent-sum")
    if tau.entries[d - 1] < (1.0 - dep_sum) / d:
        names.append("floor-condition")
    if names:
        raise HypothesisError(names)


def jarnik_besicovitch(n: int, tau: float) -> DimensionResult:
    """Dimension of the simultaneously tau-approximable points in n-space:
    (n+1)/(tau+1), valid for tau >= 1/n (below that the set is everything)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    tau = float(tau)
    if tau < 1.0 / n:
        raise HypothesisError(["tau-range"], f"tau={tau} < 1/n; the set is all of R^n")
    return DimensionResult((n + 1) / (tau + 1), 1, JARNIK_BESICOVITCH)


def _weighted_branches(entries: Sequence[float], count: int) -> list[float]:
    # branch j (0-based): (n + 1 + sum_{i=j}^{n-1} (tau_j - tau_i)) / (1 + tau_j)
    n = len(entries)
    suffix = [0.0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + entries[i]
    return [
        (n + 1 + entries[j] * (n - j) - suffix[j]) / (1.0 + entries[j])
        for j in range(count)
    ]


def rynne_dimension(tau: Union[WeightVector, Sequence[float]]) -> DimensionResult:
    """Weighted simultaneous approximation dimension (Rynne): the minimum
    over j of (n+1+sum_{i>=j}(tau_j - tau_i))/(1+tau_j), for sorted
    non-increasing weights with sum >= 1."""
    tv = tau if isinstance(tau, WeightVector) else WeightVector.independent(tuple(tau))
    if tv.split != tv.n:
        raise ValueError("rynne_dimension expects a fully independent weight vector")
    if sum(tv.entries) < 1.0:
        raise HypothesisError(["weight-sum"], "sum of weights must be >= 1")
    value, j = _min_with_argmin(_weighted_branches(tv.entries, tv.n))
    return DimensionResult(value, j, RYNNE)


def planar_curve_dimension(tau1: float, tau2: float) -> DimensionResult:
    """Dimension on sufficiently curved planar curves:
    (2 - min{tau1,tau2}) / (1 + max{tau1,tau2})."""
    tau1, tau2 = float(tau1), float(tau2)
    names = []
    smaller, larger = min(tau1, tau2), max(tau1, tau2)
    if not 0.0 < smaller < 1.0:
        names.append("min-bound")
    if tau1 + tau2 < 1.0:
        names.append("weight-sum")
    if names:
        raise HypothesisError(names)
    return DimensionResult((2.0 - smaller) / (1.0 + larger), 1, PLANAR_CURVE)


def blvv_simultaneous(n: int, m: int, tau: float) -> DimensionResult:
    """Simultaneous approximation lower bound on a codimension-m manifold:
    (n+1)/(tau+1) - m, valid for 1/n <= tau < 1/m."""
    if not 1 <= m < n:
        raise ValueError("need 1 <= m < n")
    tau = float(tau)
    if not 1.0 / n <= tau < 1.0 / m:
        raise HypothesisError(["tau-range"], f"tau={tau} outside [1/{n}, 1/{m})")
    return DimensionResult((n + 1) / (tau + 1) - m, 1, BLVV_SIMULTANEOUS)


def manifold_lower_bound(tau: Union[WeightVector, Sequence[float]],
                         d: int, m: int) -> DimensionResult:
    """Weighted lower bound on a codimension-m graph manifold:
    min over the independent indices j <= d of
    (n+1+sum_{i=j}^{n}(tau_j - tau_i))/(tau_j+1) - m.

    The minimum ranges over the independent block only; no extrapolation to
    the dependent indices is attempted.
    """
    tv = _coerce_split(tau, d)
    check_manifold_hypotheses(tv, d, m)
    branches = _weighted_branches(tv.entries, d)
    value, j = _min_with_argmin([b - m for b in branches])
    return DimensionResult(value, j, MANIFOLD_LOWER_BOUND)


def wwx_rectangle_bound(a: Union[WeightVector, Sequence[float]]) -> DimensionResult:
    """Rectangle-transference dimension bound (Wang-Wu-Xu): for dilation
    exponents a_1 >= ... >= a_n >= 1, the minimum over k of
    (n + sum_{i=k}^{n}(a_k - a_i)) / a_k."""
    av = a if isinstance(a, WeightVector) else WeightVector.independent(tuple(a))
    if av.split != av.n:
        raise ValueError("wwx_rectangle_bound expects a fully independent weight vector")
    if any(e < 1.0 for e in av.entries):
        raise HypothesisError(["unit-lower-bound"], "all exponents must be >= 1")
    n = av.n
    suffix = [0.0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + av.entries[i]
    branches = [
        (n + av.entries[k] * (n - k) - suffix[k]) / av.entries[k]
        for k in range(n)
    ]
    value, j = _min_with_argmin(branches)
    return DimensionResult(value, j, WWX_RECTANGLE)


def proof_weight_vector_rynne(tau: Union[WeightVector, Sequence[float]],
                              n: int | None = None) -> WeightVector:
    """Dilation exponents a_i = n(1+tau_i)/(1+n) turning the Dirichlet ball
    family into the weighted rectangle family; feeding the result to
    wwx_rectangle_bound reproduces rynne_dimension on valid inputs."""
    tv = tau if isinstance(tau, WeightVector) else WeightVector.independent(tuple(tau))
    if n is None:
        n = tv.n
    if tv.n != n:
        raise ValueError(f"weight vector length {tv.n} != n={n}")
    return WeightVector.independent(
        tuple(n * (1.0 + t) / (1.0 + n) for t in tv.entries)
    )


def proof_weight_vector_manifold(tau: Union[WeightVector, Sequence[float]],
                                 d: int, m: int) -> WeightVector:
    """Dilation exponents a_i = d(1+tau_i)/(d+1-s) over the independent
    block, where s is the dependent weight sum.  The floor condition
    tau_i >= (1-s)/d makes every a_i >= 1."""
    tv = _coerce_split(tau, d)
    check_manifold_hypotheses(tv, d, m, require_dependent_max=False)
    s = tv.dependent_sum
    denom = d + 1.0 - s
    return WeightVector.independent(
        tuple(d * (1.0 + t) / denom for t in tv.independent_block)
    )


def manifold_lower_bound_via_rectangles(tau: Union[WeightVector, Sequence[float]],
                                        d: int, m: int) -> DimensionResult:
    """The same manifold lower bound computed the other way around: project
    to the d independent axes and apply the rectangle-transference bound
    with the manifold transfer weights.  The codimension shift is already
    absorbed by the weights' denominator, so the d-dimensional reduction
    value equals the n-dimensional formula as it stands."""
    tv = _coerce_split(tau, d)
    check_manifold_hypotheses(tv, d, m)
    a = proof_weight_vector_manifold(tv, d, m)
    reduced = wwx_rectangle_bound(a)
    return DimensionResult(reduced.value, reduced.argmin_j, MANIFOLD_VIA_RECTANGLES)


PsiLike = Union[
    Callable[[int], float],
    Sequence[Callable[[int], float]],
    Mapping[int, Sequence[float]],
]


def _geometric_ladder(q_lo: int, q_hi: int, rungs: int) -> list[int]:
    if q_lo >= q_hi:
        return [q_hi]
    ratio = q_hi / q_lo
    qs = {
        int(round(q_lo * ratio ** (i / (rungs - 1))))
        for i in range(rungs)
    }
    qs.add(q_hi)
    return sorted(q for q in qs if q_lo <= q <= q_hi)


def estimate_upper_order(psi: PsiLike, q_max: int,
                         rungs: int = 64) -> UpperOrderEstimate:
    """Tail-maximum approximation of the upper order
    limsup_q -log psi_i(q) / log q.

    No finite procedure computes a limsup; instead the maximum of the
    sampled exponent is taken over a geometric ladder of q in
    [sqrt(q_max), q_max], which discards transient small-q behaviour.
    """
    if q_max < 16:
        raise ValueError("q_max must be >= 16")
    q_lo = max(2, math.isqrt(q_max))

    if isinstance(psi, Mapping):
        qs = sorted(q for q in psi if q_lo <= q <= q_max)
        if not qs:
            raise ValueError("table holds no q inside the scanned window")
        rows = [(q, tuple(float(v) for v in psi[q])) for q in qs]
    else:
        funcs = list(psi) if isinstance(psi, (list, tuple)) else [psi]
        qs = _geometric_ladder(q_lo, q_max, rungs)
        rows = [(q, tuple(float(f(q)) for f in funcs)) for q in qs]

    axes = len(rows[0][1])
    if any(len(vals) != axes for _, vals in rows):
        raise ValueError("inconsistent per-axis value count")
    samples = []
    for q, vals in rows:
        if any(v <= 0.0 for v in vals):
            raise ValueError(f"nonpositive psi value at q={q}")
        logq = math.log(q)
        samples.append((q, tuple(-math.log(v) / logq for v in vals)))
    v = tuple(max(s[1][i] for s in samples) for i in range(axes))
    return UpperOrderEstimate(v, tuple(samples), (q_lo, q_max))
