"""JSON wire formats for towers, maps, group towers, and box factors.

Distances travel as exact rationals: an int, or a "p/q" string.  Dumps
are deterministic (sorted keys, fixed separators) so identical objects
serialize byte-identically.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .constructions import GroupTower, PointedSpace
from .core import Entourage, Pseudometric, Tower
from .errors import ValidationError


def rational_to_json(v: Fraction) -> Any:
    v = Fraction(v)
    return int(v) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def rational_from_json(v: Any) -> Fraction:
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise ValidationError(f"not a rational: {v!r}")
    try:
        return Fraction(v)
    except (ValueError, ZeroDivisionError) as e:
        raise ValidationError(f"not a rational: {v!r}") from e


def metric_to_json(d: Pseudometric) -> list[list[Any]]:
    """Lower-triangular rows, row i listing d(i,0) .. d(i,i-1)."""
    return [
        [rational_to_json(d.dist[i][j]) for j in range(i)] for i in range(d.size)
    ]


def metric_from_json(rows: list[list[Any]]) -> Pseudometric:
    return Pseudometric.from_lower_triangular(
        [[rational_from_json(v) for v in row] for row in rows]
    )


def tower_to_json(t: Tower, entourages: dict[str, Entourage] | None = None) -> dict:
    doc: dict[str, Any] = {
        "labels": list(t.labels),
        "level_sizes": list(t.level_sizes),
        "metrics": [metric_to_json(d) for d in t.level_metrics],
    }
    if t.strict:
        doc["strict"] = True
    if entourages:
        doc["entourages"] = {
            name: {"level": e.level, "pairs": [list(p) for p in e.sorted_pairs()]}
            for name, e in entourages.items()
        }
    return doc


def tower_from_json(doc: dict) -> Tower:
    for key in ("labels", "level_sizes", "metrics"):
        if key not in doc:
            raise ValidationError(f"tower document missing {key!r}")
    return Tower(
        [str(s) for s in doc["labels"]],
        [int(m) for m in doc["level_sizes"]],
        [metric_from_json(rows) for rows in doc["metrics"]],
        strict=bool(doc.get("strict", False)),
    )


def named_entourages_from_json(doc: dict, tower: Tower) -> dict[str, Entourage]:
    out = {}
    for name, spec in doc.get("entourages", {}).items():
        level = int(spec["level"])
        size = tower.level_sizes[level]
        pairs = {(int(i), int(j)) for i, j in spec["pairs"]}
        out[name] = Entourage(level, size, pairs)
    return out


def map_to_json(values) -> list[int]:
    return [int(v) for v in values]


def map_from_json(doc) -> tuple[int, ...]:
    if not isinstance(doc, list):
        raise ValidationError("map document must be a JSON array of target indices")
    return tuple(int(v) for v in doc)


def group_to_json(g: GroupTower) -> dict:
    doc = tower_to_json(g.tower)
    doc["op"] = [list(row) for row in g.op]
    doc["neg"] = list(g.neg)
    return doc


def group_from_json(doc: dict) -> GroupTower:
    for key in ("op", "neg"):
        if key not in doc:
            raise ValidationError(f"group document missing {key!r}")
    return GroupTower(
        tower_from_json(doc),
        tuple(tuple(int(v) for v in row) for row in doc["op"]),
        tuple(int(v) for v in doc["neg"]),
    )


def factor_to_json(f: PointedSpace) -> dict:
    return {"basepoint": f.basepoint, "metric": metric_to_json(f.metric)}


def factor_from_json(doc: dict) -> PointedSpace:
    if "metric" not in doc:
        raise ValidationError("factor document missing 'metric'")
    return PointedSpace(metric_from_json(doc["metric"]), int(doc.get("basepoint", 0)))


def factors_from_json(doc) -> list[PointedSpace]:
    if not isinstance(doc, list):
        raise ValidationError("factor file must be a JSON array of pointed spaces")
    return [factor_from_json(d) for d in doc]


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def dump(obj: Any, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(obj))
        fh.write("\n")


def load(path: str) -> Any:
    with open(path) as fh:
        return json.load(fh)
