"""Shared domain types: weight vectors, polynomial Monge charts, rational
points, hyperrectangles and the axis-aligned domain box.

Everything here is immutable after construction and safe to share across
concurrent workers.  Exact arithmetic is carried by ``fractions.Fraction``:
domain bounds, polynomial coefficients and rational points are stored
exactly, so membership predicates of the form

    exact rational left side  <  float right side

are decidable without rounding ambiguity.  Real-valued targets (the points
being approximated) are snapped to 113-bit binary rationals at ingestion via
:func:`snap_to_binary`; every guarantee downstream is stated for the snapped
value.
"""

from __future__ import annotations

import decimal
from dataclasses import dataclass
from fractions import Fraction
from math import isfinite
from typing import Sequence, Union

from .errors import HypothesisError

Scalar = Union[int, float, str, Fraction, decimal.Decimal]

SNAP_BITS = 113


def as_fraction(value: Scalar) -> Fraction:
    """Convert to an exact Fraction.  Floats convert exactly (no decimal
    reinterpretation); strings accept ``p/q``, decimal and exponent forms."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, float, decimal.Decimal)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except ValueError:
            return Fraction(decimal.Decimal(value))
    raise TypeError(f"cannot interpret {value!r} as a rational number")


def snap_to_binary(value: Scalar, bits: int = SNAP_BITS) -> Fraction:
    """Round to the nearest binary rational with a ``bits``-bit significand
    (ties to even).  Python floats pass through unchanged for bits >= 53."""
    v = as_fraction(value)
    if v == 0:
        return Fraction(0)
    av = abs(v)
    e = av.numerator.bit_length() - av.denominator.bit_length()
    if av >= Fraction(2) ** (e + 1):
        e += 1
    elif av < Fraction(2) ** e:
        e -= 1
    shift = bits - 1 - e
    scaled = v * Fraction(2) ** shift
    return Fraction(_round_half_even(scaled)) / Fraction(2) ** shift


def _round_half_even(v: Fraction) -> int:
    n, r = divmod(v.numerator, v.denominator)
    twice = 2 * r
    if twice < v.denominator:
        return n
    if twice > v.denominator:
        return n + 1
    return n if n % 2 == 0 else n + 1


def nearest_int(v: Fraction) -> int:
    """Nearest integer, rounding exact halves toward zero."""
    n, r = divmod(v.numerator, v.denominator)
    twice = 2 * r
    if twice < v.denominator:
        return n
    if twice > v.denominator:
        return n + 1
    return n if v > 0 else n + 1


@dataclass(frozen=True)
class WeightVector:
    """Ordered positive exponents with an independent/dependent split.

    ``entries[:split]`` are the independent exponents (must be sorted
    non-increasing); ``entries[split:]`` are the dependent ones.  ``split``
    may equal ``n`` (no dependent block, the manifold-free case) or ``0``
    (a pure dependent block).
    """

    entries: tuple[float, ...]
    split: int

    def __post_init__(self):
        entries = tuple(float(e) for e in self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries:
            raise ValueError("weight vector must be nonempty")
        if not 0 <= self.split <= len(entries):
            raise ValueError(f"split {self.split} outside 0..{len(entries)}")
        violations = []
        if any(not isfinite(e) or e <= 0.0 for e in entries):
            violations.append("entries-positive")
        ind = entries[: self.split]
        if any(ind[i] < ind[i + 1] for i in range(len(ind) - 1)):
            violations.append("ordering")
        if violations:
            raise HypothesisError(violations)

    @classmethod
    def independent(cls, entries: Sequence[float]) -> "WeightVector":
        entries = tuple(entries)
        return cls(entries, len(entries))

    @classmethod
    def dependent(cls, entries: Sequence[float]) -> "WeightVector":
        return cls(tuple(entries), 0)

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def d(self) -> int:
        return self.split

    @property
    def m(self) -> int:
        return len(self.entries) - self.split

    @property
    def independent_block(self) -> tuple[float, ...]:
        return self.entries[: self.split]

    @property
    def dependent_block(self) -> tuple[float, ...]:
        return self.entries[self.split:]

    @property
    def dependent_sum(self) -> float:
        """Sum of the dependent block (equals tau_tilde * m)."""
        return sum(self.dependent_block)

    @property
    def tau_tilde(self) -> float:
        if self.m == 0:
            raise ValueError("no dependent block")
        return self.dependent_sum / self.m


@dataclass(frozen=True)
class DomainBox:
    """Closed axis-aligned box with exact rational corners.

    Stands in for the open chart domain; openness is recovered downstream by
    working with the positive boundary distance of interior points.
    """

    lower: tuple[Fraction, ...]
    upper: tuple[Fraction, ...]

    def __post_init__(self):
        lower = tuple(as_fraction(v) for v in self.lower)
        upper = tuple(as_fraction(v) for v in self.upper)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)
        if len(lower) != len(upper):
            raise ValueError("lower/upper dimension mismatch")
        if not lower:
            raise ValueError("box must have at least one axis")
        if any(lo >= hi for lo, hi in zip(lower, upper)):
            raise ValueError("box must have nonempty interior (lower_i < upper_i)")

    @property
    def dim(self) -> int:
        return len(self.lower)

    @property
    def widths(self) -> tuple[Fraction, ...]:
        return tuple(hi - lo for lo, hi in zip(self.lower, self.upper))

    def contains(self, point: Sequence) -> bool:
        """Closed-box membership; accepts exact or float coordinates."""
        if len(point) != self.dim:
            raise ValueError("point dimension mismatch")
        return all(lo <= x <= hi for x, lo, hi in zip(point, self.lower, self.upper))

    def boundary_distance(self, point: Sequence[Fraction]) -> Fraction:
        """Exact distance to the boundary; negative outside the box."""
        if len(point) != self.dim:
            raise ValueError("point dimension mismatch")
        return min(
            min(x - lo, hi - x)
            for x, lo, hi in zip(point, self.lower, self.upper)
        )


def _interval_mul(a: tuple, b: tuple) -> tuple:
    products = (a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1])
    return (min(products), max(products))


def _interval_pow(lo: Fraction, hi: Fraction, e: int) -> tuple:
    if e == 0:
        return (Fraction(1), Fraction(1))
    plo, phi = lo ** e, hi ** e
    if e % 2 == 0 and lo < 0 < hi:
        return (Fraction(0), max(plo, phi))
    return (min(plo, phi), max(plo, phi))


@dataclass(frozen=True)
class Polynomial:
    """Multivariate polynomial with exact rational coefficients.

    Terms are stored as (coefficient, exponent tuple) pairs in canonical
    order.  Evaluation at rational arguments is exact; formal partial
    derivatives and certified interval bounds over a box are available.
    """

    arity: int
    terms: tuple[tuple[Fraction, tuple[int, ...]], ...]

    def __post_init__(self):
        merged: dict[tuple[int, ...], Fraction] = {}
        for coeff, exps in self.terms:
            exps = tuple(int(e) for e in exps)
            if len(exps) != self.arity:
                raise ValueError("exponent tuple arity mismatch")
            if any(e < 0 for e in exps):
                raise ValueError("negative exponent")
            c = as_fraction(coeff)
            merged[exps] = merged.get(exps, Fraction(0)) + c
        canon = tuple(
            (c, e) for e, c in sorted(merged.items()) if c != 0
        )
        object.__setattr__(self, "terms", canon)

    @classmethod
    def from_terms(cls, arity: int, terms) -> "Polynomial":
        return cls(arity, tuple((as_fraction(c), tuple(e)) for c, e in terms))

    @property
    def total_degree(self) -> int:
        return max((sum(e) for _, e in self.terms), default=0)

    def evaluate_exact(self, point: Sequence[Fraction]) -> Fraction:
        if len(point) != self.arity:
            raise ValueError("point arity mismatch")
        pt = [as_fraction(x) for x in point]
        # accumulate over a common denominator; one normalization at the end
        num_total, den_total = 0, 1
        for coeff, exps in self.terms:
            tn, td = coeff.numerator, coeff.denominator
            for x, e in zip(pt, exps):
                if e:
                    tn *= x.numerator ** e
                    td *= x.denominator ** e
            num_total = num_total * td + tn * den_total
            den_total *= td
        return Fraction(num_total, den_total)

    def evaluate_float(self, point: Sequence[float]) -> float:
        if len(point) != self.arity:
            raise ValueError("point arity mismatch")
        total = 0.0
        for coeff, exps in self.terms:
            term = float(coeff)
            for x, e in zip(point, exps):
                if e:
                    term *= float(x) ** e
            total += term
        return total

    def partial(self, axis: int) -> "Polynomial":
        """Formal derivative along ``axis``."""
        if not 0 <= axis < self.arity:
            raise ValueError("axis out of range")
        out = []
        for coeff, exps in self.terms:
            e = exps[axis]
            if e:
                nexps = exps[:axis] + (e - 1,) + exps[axis + 1:]
                out.append((coeff * e, nexps))
        return Polynomial(self.arity, tuple(out))

    def interval_bound(self, box: DomainBox) -> tuple[Fraction, Fraction]:
        """Certified enclosure of the range over the box (may overestimate)."""
        if box.dim != self.arity:
            raise ValueError("box dimension mismatch")
        lo_total, hi_total = Fraction(0), Fraction(0)
        for coeff, exps in self.terms:
            iv = (Fraction(1), Fraction(1))
            for blo, bhi, e in zip(box.lower, box.upper, exps):
                if e:
                    iv = _interval_mul(iv, _interval_pow(blo, bhi, e))
            iv = _interval_mul(iv, (coeff, coeff))
            lo_total += iv[0]
            hi_total += iv[1]
        return (lo_total, hi_total)

    def max_abs_bound(self, box: DomainBox) -> Fraction:
        lo, hi = self.interval_bound(box)
        return max(abs(lo), abs(hi))

    def integer_form(self) -> tuple[int, tuple[tuple[int, tuple[int, ...]], ...]]:
        """Common denominator L and integer coefficients so that
        L * poly has integer coefficients.  Used by the fast enumeration."""
        from math import lcm

        L = 1
        for coeff, _ in self.terms:
            L = lcm(L, coeff.denominator)
        scaled = tuple(
            (int(coeff * L), exps) for coeff, exps in self.terms
        )
        return L, scaled


@dataclass(frozen=True)
class MongeManifold:
    """Graph chart (x, f(x)) of a polynomial map f over a rational box.

    A single chart is fixed; multi-chart manifolds are unsupported.  All
    components evaluate exactly at rational arguments and differentiate
    formally, which is what certifies the curvature/slope constants used by
    the solver modules.
    """

    domain: DomainBox
    components: tuple[Polynomial, ...]

    def __post_init__(self):
        components = tuple(self.components)
        object.__setattr__(self, "components", components)
        if not components:
            raise ValueError("manifold needs at least one component")
        if any(c.arity != self.domain.dim for c in components):
            raise ValueError("component arity must match domain dimension")

    @property
    def d(self) -> int:
        return self.domain.dim

    @property
    def m(self) -> int:
        return len(self.components)

    @property
    def n(self) -> int:
        return self.d + self.m

    def evaluate_exact(self, point: Sequence[Fraction]) -> tuple[Fraction, ...]:
        return tuple(c.evaluate_exact(point) for c in self.components)

    def evaluate_float(self, point: Sequence[float]) -> tuple[float, ...]:
        return tuple(c.evaluate_float(point) for c in self.components)


@dataclass(frozen=True)
class RationalPoint:
    """Integer vector p with denominator q >= 1.

    Not reduced to lowest terms: (2,4,2) and (1,2,1) are distinct records,
    because distinct denominators with the same ratio give distinct
    approximation quality.
    """

    p: tuple[int, ...]
    q: int

    def __post_init__(self):
        p = tuple(int(v) for v in self.p)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", int(self.q))
        if self.q < 1:
            raise ValueError("denominator must be >= 1")

    @property
    def n(self) -> int:
        return len(self.p)

    def fractions(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(v, self.q) for v in self.p)


@dataclass(frozen=True)
class Hyperrectangle:
    """Open axis-aligned rectangle given by center and positive half-widths.

    Membership is strict on every axis.
    """

    center: tuple[float, ...]
    half_widths: tuple[float, ...]

    def __post_init__(self):
        center = tuple(float(c) for c in self.center)
        half_widths = tuple(float(h) for h in self.half_widths)
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "half_widths", half_widths)
        if len(center) != len(half_widths):
            raise ValueError("center/half_widths dimension mismatch")
        if any(not isfinite(h) or h <= 0.0 for h in half_widths):
            raise ValueError("all half-widths must be positive and finite")

    @property
    def dim(self) -> int:
        return len(self.center)

    def contains(self, point: Sequence[float]) -> bool:
        if len(point) != self.dim:
            raise ValueError("point dimension mismatch")
        return all(
            abs(float(x) - c) < h
            for x, c, h in zip(point, self.center, self.half_widths)
        )


def dilate(center: Sequence[float], radius: float, a) -> Hyperrectangle:
    """Anisotropic dilation of a ball: the rectangle with half-width
    radius**a_i on axis i.  Requires radius in (0,1) and every a_i >= 1, so
    each half-width shrinks (or stays, at a_i = 1) relative to the ball.
    """
    exponents = a.entries if isinstance(a, WeightVector) else tuple(float(v) for v in a)
    center = tuple(float(c) for c in center)
    if len(exponents) != len(center):
        raise ValueError("weight vector length must match center dimension")
    radius = float(radius)
    if not 0.0 < radius < 1.0:
        raise ValueError("radius must lie in (0, 1); larger radii would grow under dilation")
    if any(e < 1.0 for e in exponents):
        raise ValueError("all dilation exponents must be >= 1")
    return Hyperrectangle(center, tuple(radius ** e for e in exponents))


def rect_intersects_box(rect: Hyperrectangle, box: DomainBox) -> bool:
    """True iff the open rectangle meets the closed box."""
    if rect.dim != box.dim:
        raise ValueError("rectangle/box dimension mismatch")
    for c, h, lo, hi in zip(rect.center, rect.half_widths, box.lower, box.upper):
        if not (c - h < float(hi) and c + h > float(lo)):
            return False
    return True
