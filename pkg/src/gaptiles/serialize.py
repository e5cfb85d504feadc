"""Canonical JSON formats for tilings and reports.

Interval tilings:
  {"kind":"interval","length":N,"gap_set":[[d,k],...],"tiles":[[p0,p1,...],...],"annotations":{...}}
Rectangle tilings:
  {"kind":"rectangle","width":W,"height":H,"step_type":[[[dx,dy],k],...],"paths":[[[x,y],...],...]}
  (plus an optional "window" key for windowed-mode tilings)

Dumps are canonical (sorted keys, fixed separators, trailing newline), so
identical inputs always produce byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .errors import PreconditionError
from .types import (
    GapSet,
    IntervalTiling,
    LatticePath,
    RectangleTiling,
    Tile,
    TilingAnnotations,
    VerificationReport,
    normalize_steps,
)


def dumps_canonical(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"


def write_json(path: str | Path, obj: Any) -> None:
    Path(path).write_text(dumps_canonical(obj), encoding="utf-8")


def read_json(path: str | Path) -> Any:
    return json.loads(Path(path).read_text(encoding="utf-8"))


def gap_set_to_obj(gs: GapSet) -> list[list[int]]:
    return [[d, k] for d, k in gs.entries]


def gap_set_from_obj(obj: Any) -> GapSet:
    return GapSet.from_pairs((int(d), int(k)) for d, k in obj)


def interval_to_obj(t: IntervalTiling, gap_set: GapSet) -> dict:
    ann: dict[str, Any] = {}
    if t.annotations.boundary_prefix_count is not None:
        ann["boundary_prefix_count"] = t.annotations.boundary_prefix_count
    if t.annotations.homogeneous_for is not None:
        ann["homogeneous_for"] = gap_set_to_obj(t.annotations.homogeneous_for)
    return {
        "kind": "interval",
        "length": t.length,
        "gap_set": gap_set_to_obj(gap_set),
        "tiles": [list(tile.points) for tile in t.tiles],
        "annotations": ann,
    }


def rectangle_to_obj(r: RectangleTiling) -> dict:
    obj = {
        "kind": "rectangle",
        "width": r.width,
        "height": r.height,
        "step_type": [[[dx, dy], k] for (dx, dy), k in r.step_type],
        "paths": [[[x, y] for x, y in p.points] for p in r.paths],
    }
    if r.window is not None:
        obj["window"] = r.window
    return obj


def tiling_from_obj(obj: Any) -> tuple[str, Any, GapSet | None]:
    """Parse a tiling file object. Returns (kind, tiling, gap_set or None)."""
    if not isinstance(obj, dict) or "kind" not in obj:
        raise PreconditionError("not a tiling file: missing 'kind'")
    kind = obj["kind"]
    if kind == "interval":
        gs = gap_set_from_obj(obj["gap_set"])
        ann_obj = obj.get("annotations") or {}
        ann = TilingAnnotations(
            boundary_prefix_count=ann_obj.get("boundary_prefix_count"),
            homogeneous_for=(
                gap_set_from_obj(ann_obj["homogeneous_for"])
                if ann_obj.get("homogeneous_for") is not None
                else None
            ),
        )
        tiles = tuple(Tile(tuple(int(p) for p in pts)) for pts in obj["tiles"])
        return kind, IntervalTiling(int(obj["length"]), tiles, ann), gs
    if kind == "rectangle":
        step_type = normalize_steps(
            [((int(vec[0]), int(vec[1])), int(k)) for vec, k in obj["step_type"]]
        )
        paths = tuple(
            LatticePath(tuple((int(x), int(y)) for x, y in pts)) for pts in obj["paths"]
        )
        rect = RectangleTiling(
            width=int(obj["width"]),
            height=int(obj["height"]),
            paths=paths,
            step_type=step_type,
            window=int(obj["window"]) if obj.get("window") is not None else None,
        )
        return kind, rect, None
    raise PreconditionError(f"unknown tiling kind {kind!r}")


def report_to_obj(rep: VerificationReport) -> dict:
    return {
        "ok": rep.ok,
        "violations": [
            {"kind": v.kind, "location": list(v.location), "detail": v.detail}
            for v in rep.violations
        ],
        "truncated": rep.truncated,
    }
