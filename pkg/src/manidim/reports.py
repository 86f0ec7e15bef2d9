"""Deterministic CSV/JSON report writers.

Every report carries a provenance header (tool version and a hash of the
effective configuration) so results are diffable; no timestamps, so
identical configurations produce byte-identical files.  Floats print with
12 significant digits (round-half-even).
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from . import __version__


def fmt(value) -> str:
    """12 significant digits for floats; integers and strings print as-is."""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, (int, str)):
        return str(value)
    return format(float(value), ".12g")


def config_hash(config: Mapping) -> str:
    canonical = "\n".join(f"{k}={config[k]}" for k in sorted(config))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()[:12]


def provenance_lines(config: Mapping, extra: Sequence[str] = ()) -> list[str]:
    lines = [
        f"# generator: manidim {__version__}",
        f"# config-hash: {config_hash(config)}",
    ]
    for key in sorted(config):
        lines.append(f"# config: {key} = {config[key]}")
    lines.extend(f"# {line}" for line in extra)
    return lines


def write_csv(path: str | Path, header: Sequence[str],
              rows: Iterable[Sequence], config: Mapping,
              extra_comments: Sequence[str] = ()) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in provenance_lines(config, extra_comments):
            fh.write(line + "\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")
    return path


def _round_floats(obj):
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, float):
        return float(format(obj, ".12g"))
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def write_json(path: str | Path, payload: Mapping, config: Mapping) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    doc = {
        "generator": f"manidim {__version__}",
        "config_hash": config_hash(config),
        "config": {k: str(v) for k, v in sorted(config.items())},
        **_round_floats(dict(payload)),
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
