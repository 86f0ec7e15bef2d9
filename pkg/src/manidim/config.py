"""Manifold configuration files and the named benchmark charts.

File format: UTF-8 text, ``#`` comments, flat ``key = value`` lines.
Keys ``d``, ``m``, ``domain.lower`` and ``domain.upper`` (comma-separated
exact rationals: ``1/2``, ``0.25``, ``-3``), then per component a
``component = <name>`` line followed by its ``monomial = coeff,e1,...,ed``
lines (one monomial per line, rational coefficient, one exponent per
independent axis).
"""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .core import DomainBox, MongeManifold, Polynomial, as_fraction
from .errors import ConfigError

BENCHMARKS = (
    "parabola",
    "circle-chart",
    "affine",
    "paraboloid",
    "twisted-cubic-chart",
)


def _parse_rational_list(value: str, line: int, field: str):
    out = []
    for part in value.split(","):
        part = part.strip()
        try:
            out.append(as_fraction(part))
        except Exception:
            raise ConfigError(f"not a rational number: {part!r}", line, field) from None
    return out


def parse_manifold(text: str, source: str = "<string>") -> MongeManifold:
    """Parse a manifold definition; raises ConfigError with the offending
    line number and field on malformed input."""
    d = m = None
    lower = upper = None
    components: list[list[tuple]] = []
    current: list[tuple] | None = None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected key = value", lineno)
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key == "d":
            d = _parse_int(value, lineno, key)
        elif key == "m":
            m = _parse_int(value, lineno, key)
        elif key == "domain.lower":
            lower = _parse_rational_list(value, lineno, key)
        elif key == "domain.upper":
            upper = _parse_rational_list(value, lineno, key)
        elif key == "component":
            current = []
            components.append(current)
        elif key == "monomial":
            if current is None:
                raise ConfigError("monomial before any component line", lineno, key)
            if d is None:
                raise ConfigError("monomial before d is declared", lineno, key)
            parts = _parse_rational_list(value, lineno, key)
            if len(parts) != 1 + d:
                raise ConfigError(
                    f"monomial needs coeff plus {d} exponents, got {len(parts)} values",
                    lineno, key,
                )
            exps = []
            for p in parts[1:]:
                if p.denominator != 1 or p < 0:
                    raise ConfigError("exponents must be nonnegative integers", lineno, key)
                exps.append(int(p))
            current.append((parts[0], tuple(exps)))
        else:
            raise ConfigError(f"unknown key {key!r}", lineno, key)

    missing = [name for name, v in
               (("d", d), ("m", m), ("domain.lower", lower), ("domain.upper", upper))
               if v is None]
    if missing:
        raise ConfigError(f"missing fields in {source}: {', '.join(missing)}")
    if len(lower) != d or len(upper) != d:
        raise ConfigError(f"domain bounds must have {d} coordinates")
    if len(components) != m:
        raise ConfigError(f"declared m={m} but found {len(components)} components")
    try:
        box = DomainBox(tuple(lower), tuple(upper))
        comps = tuple(Polynomial.from_terms(d, terms) for terms in components)
        return MongeManifold(box, comps)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _parse_int(value: str, line: int, field: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"not an integer: {value!r}", line, field) from None


def load_manifold(path: str | Path) -> MongeManifold:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read manifold file {path}: {exc}") from exc
    return parse_manifold(text, source=str(path))


def benchmark_manifold(name: str) -> MongeManifold:
    """Load one of the named benchmark charts shipped with the package."""
    if name not in BENCHMARKS:
        raise ConfigError(
            f"unknown benchmark {name!r}; known: {', '.join(BENCHMARKS)}"
        )
    text = (resources.files("manidim") / "benchmarks" / f"{name}.cfg").read_text("utf-8")
    return parse_manifold(text, source=f"benchmark:{name}")


def resolve_manifold(spec: str) -> MongeManifold:
    """A benchmark name or a path to a manifold config file."""
    if spec in BENCHMARKS:
        return benchmark_manifold(spec)
    return load_manifold(spec)
