"""Rectangle-tiling constructions and the geometric transforms the pipeline composes.

A "ragged" tiling is a rectangle tiling whose x-coordinates live on an explicit
strictly increasing support instead of 0..W-1; the pipeline's lifts produce
ragged intermediates whose supports are later merged back into true rectangles.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass, replace
from math import gcd
from pathlib import Path
from typing import Sequence

from .errors import ConstructionError, PreconditionError, SearchExhausted
from .oracle import SearchConfig, SearchStatus, solve_rectangle
from .serialize import dumps_canonical, read_json, rectangle_to_obj, tiling_from_obj, write_json
from .types import (
    IntervalTiling,
    LatticePath,
    RectangleTiling,
    ReportBuilder,
    StepType,
    Tile,
    normalize_steps,
)
from .verify import check_path_types, stream_cover, verify_rectangle_tiling


@dataclass(frozen=True)
class RaggedTiling:
    """Paths over support x [0, height-1] for an explicit x-support."""

    support: tuple[int, ...]
    height: int
    paths: tuple[LatticePath, ...]
    step_type: StepType | None = None
    window: int | None = None

    def __post_init__(self):
        if self.height < 1:
            raise PreconditionError("height must be positive")
        if not self.support:
            raise PreconditionError("support must be non-empty")
        for a, b in zip(self.support, self.support[1:]):
            if b <= a:
                raise PreconditionError("support must be strictly increasing")

    @property
    def width(self) -> int:
        return len(self.support)


@dataclass(frozen=True)
class ColumnTiling:
    """A rectangle block meant to repeat vertically with period = its height."""

    base: RectangleTiling
    period: int

    def __post_init__(self):
        if self.period != self.base.height:
            raise PreconditionError("period must equal the base height")


def as_ragged(r: RectangleTiling | RaggedTiling) -> RaggedTiling:
    if isinstance(r, RaggedTiling):
        return r
    return RaggedTiling(tuple(range(r.width)), r.height, r.paths, r.step_type, r.window)


def as_rectangle(r: RaggedTiling | RectangleTiling) -> RectangleTiling:
    if isinstance(r, RectangleTiling):
        return r
    if r.support != tuple(range(len(r.support))):
        raise PreconditionError("support is not contiguous from 0; not a rectangle")
    if r.step_type is None:
        raise PreconditionError("rectangle tilings need a declared step type")
    return RectangleTiling(len(r.support), r.height, r.paths, r.step_type, r.window)


def verify_ragged_tiling(r: RaggedTiling, max_violations: int = 32):
    """Partition + type check over the ragged point set support x [0,height-1]."""
    rep = ReportBuilder(max_violations)
    rank = {x: i for i, x in enumerate(r.support)}
    w = len(r.support)
    blocks = []
    for path in r.paths:
        flat = []
        for x, y in path.points:
            i = rank.get(x)
            if i is None or not (0 <= y < r.height):
                rep.add("OutOfRange", (x, y), "path point outside the ragged block")
            else:
                flat.append(i + y * w)
        if flat:
            blocks.append(flat)
    stream_cover(blocks, w * r.height, rep)
    if r.step_type is not None:
        check_path_types(r.paths, r.step_type, r.window, rep)
    return rep.build()


# ---------------------------------------------------------------------------
# Constructions


def stair_tiling(k: int, l: int) -> RectangleTiling:
    """The explicit staircase tiling of [0,k+l] x [0,l] by l+1 paths with k
    unit-right and l unit-up steps each.

    Path i runs (i,0) -> (i,l-i) -> (k+i,l-i) -> (k+i,l); the path ending in the
    top-right corner (k+l,l) takes its first k steps to the right.
    """
    if k < 1 or l < 1:
        raise PreconditionError("k and l must be >= 1")
    paths = []
    for i in range(l + 1):
        pts = [(i, y) for y in range(l - i + 1)]
        pts += [(x, l - i) for x in range(i + 1, k + i + 1)]
        pts += [(k + i, y) for y in range(l - i + 1, l + 1)]
        paths.append(LatticePath(tuple(pts)))
    return RectangleTiling(
        width=k + l + 1,
        height=l + 1,
        paths=tuple(paths),
        step_type=normalize_steps({(1, 0): k, (0, 1): l}),
    )


class HeightTable:
    """Memoized map (k, l, m) -> (f, witness), optionally persisted to disk.

    The on-disk layout is an ``index.json`` mapping "k,l,m" to {"f", "witness_path"}
    plus one rectangle-tiling JSON file per witness. Writes go through a
    temp-file rename, so readers never observe a partial index.
    """

    def __init__(self, cache_dir: str | Path | None = None):
        self._mem: dict[tuple[int, int, int], tuple[int, RectangleTiling]] = {}
        self._lock = threading.Lock()
        self._dir = Path(cache_dir) if cache_dir else None
        if self._dir:
            self._dir.mkdir(parents=True, exist_ok=True)
            self._load()

    def _index_path(self) -> Path:
        return self._dir / "index.json"

    def _load(self) -> None:
        if not self._index_path().exists():
            return
        try:
            index = read_json(self._index_path())
        except Exception:
            return
        for key, entry in index.items():
            try:
                k, l, m = (int(x) for x in key.split(","))
                _, rect, _ = tiling_from_obj(read_json(self._dir / entry["witness_path"]))
                if verify_rectangle_tiling(rect).ok:
                    self._mem[(k, l, m)] = (int(entry["f"]), rect)
            except Exception:
                continue  # corrupt entries are recomputed on demand

    def get(self, k: int, l: int, m: int) -> tuple[int, RectangleTiling] | None:
        with self._lock:
            return self._mem.get((k, l, m))

    def put(self, k: int, l: int, m: int, f: int, witness: RectangleTiling) -> None:
        with self._lock:
            self._mem[(k, l, m)] = (f, witness)
            if self._dir:
                name = f"f_{k}_{l}_{m}.json"
                write_json(self._dir / name, rectangle_to_obj(witness))
                index = {
                    ",".join(str(x) for x in key): {
                        "f": fv,
                        "witness_path": f"f_{key[0]}_{key[1]}_{key[2]}.json",
                    }
                    for key, (fv, _) in sorted(self._mem.items())
                }
                tmp = self._dir / "index.json.tmp"
                tmp.write_text(dumps_canonical(index), encoding="utf-8")
                os.replace(tmp, self._index_path())


_default_table: HeightTable | None = None
_default_table_lock = threading.Lock()


def default_height_table() -> HeightTable:
    """Process-wide table; persists under $GAPTILES_CACHE when set."""
    global _default_table
    with _default_table_lock:
        if _default_table is None:
            _default_table = HeightTable(os.environ.get("GAPTILES_CACHE") or None)
        return _default_table


def min_height_rect(
    k: int,
    l: int,
    m: int,
    table: HeightTable | None = None,
    max_height: int | None = None,
    cfg: SearchConfig | None = None,
) -> tuple[int, RectangleTiling]:
    """Least height f such that [0,m-1] x [0,f-1] is tiled by paths with k
    unit-right and l unit-up steps, plus a witness.

    Heights are searched in increasing order over the admissible values
    (m*f divisible by k+l+1, and f >= l+1 since each path rises by l). For
    m = k+l+1 the staircase gives f = l+1 directly, with no search.
    """
    if k < 1 or l < 1:
        raise PreconditionError("k and l must be >= 1")
    if not (k + 1 <= m <= k + l + 1):
        raise PreconditionError(f"width {m} outside [{k + 1}, {k + l + 1}]")
    if m == k + l + 1:
        stair = stair_tiling(k, l)
        return l + 1, stair
    table = table or default_height_table()
    hit = table.get(k, l, m)
    if hit is not None:
        return hit
    ppp = k + l + 1
    step = ppp // gcd(m, ppp)
    f = ((l + 1 + step - 1) // step) * step
    bound = max_height if max_height is not None else max(64, 8 * ppp * ppp)
    while f <= bound:
        outcome = solve_rectangle({(1, 0): k, (0, 1): l}, m, f, cfg)
        if outcome.status is SearchStatus.FOUND:
            witness = outcome.witnesses[0]
            table.put(k, l, m, f, witness)
            return f, witness
        if outcome.status is SearchStatus.BUDGET_EXCEEDED:
            raise SearchExhausted(f"height search budget exceeded at f={f} for ({k},{l},{m})")
        f += step
    raise SearchExhausted(f"no admissible height <= {bound} for ({k},{l},{m})")


def diagonal_stripe_tiling(n: int, kv: int, m: int) -> RectangleTiling:
    """Tile [0,m] x [0,m+kv] by paths alternating runs of n unit-right and kv
    unit-up steps, cut by the diagonal line families x+y = m (mod n+kv) and
    x+y = m+kv (mod n+kv). Requires n < m < 2n.

    Every window of n+kv consecutive steps has exactly kv vertical steps. All
    paths except (m-n,0)->(m,0)->(m,kv) and (0,m)->(0,m+kv)->(n,m+kv) have
    strictly more than n+kv steps, and no path exceeds m+2kv steps.
    """
    if n < 1 or kv < 1:
        raise PreconditionError("n and kv must be >= 1")
    if not (n < m < 2 * n):
        raise PreconditionError(f"m={m} violates n < m < 2n for n={n}")
    period = n + kv
    width, height = m + 1, m + kv + 1

    def goes_up(c: int) -> bool:
        return (c - m) % period < kv

    def succ(x: int, y: int) -> tuple[int, int]:
        return (x, y + 1) if goes_up(x + y) else (x + 1, y)

    def pred(x: int, y: int) -> tuple[int, int]:
        return (x, y - 1) if goes_up(x + y - 1) else (x - 1, y)

    def inside(x: int, y: int) -> bool:
        return 0 <= x < width and 0 <= y < height

    paths = []
    for y in range(height):
        for x in range(width):
            if inside(*pred(x, y)):
                continue
            pts = [(x, y)]
            while inside(*succ(*pts[-1])):
                pts.append(succ(*pts[-1]))
            paths.append(LatticePath(tuple(pts)))
    paths.sort(key=lambda p: (p.points[0][1], p.points[0][0]))
    return RectangleTiling(
        width=width,
        height=height,
        paths=tuple(paths),
        step_type=normalize_steps({(1, 0): n, (0, 1): kv}),
        window=period,
    )


# ---------------------------------------------------------------------------
# Transforms


def lift_over_points(
    r: RectangleTiling | RaggedTiling,
    xs: Sequence[int],
    step_type: StepType | None = None,
    window: int | None = None,
) -> RaggedTiling:
    """Apply (x, y) -> (xs[rank(x)], y) to every path point.

    xs must be strictly increasing with one entry per source column. The output
    records xs as its support; the caller declares the lifted step type (it is
    not derivable from the geometry for a general support).
    """
    src = as_ragged(r)
    if len(xs) != len(src.support):
        raise PreconditionError(f"support has {len(src.support)} columns, xs has {len(xs)}")
    xs = tuple(int(x) for x in xs)
    rank = {x: i for i, x in enumerate(src.support)}
    paths = tuple(
        LatticePath(tuple((xs[rank[x]], y) for x, y in p.points)) for p in src.paths
    )
    return RaggedTiling(xs, src.height, paths, step_type, window)


def dilate_x(
    r: RectangleTiling | RaggedTiling, d: int, offset: int = 0
) -> RaggedTiling:
    """Stretch the x-axis by d with a residue offset: column i -> offset + d*i.

    Horizontal steps scale uniformly, so the declared step type carries over
    with (dx, dy) -> (d*dx, dy).
    """
    if d < 1:
        raise PreconditionError("dilation ratio must be >= 1")
    if not (0 <= offset < d):
        raise PreconditionError("offset must satisfy 0 <= offset < d")
    src = as_ragged(r)
    xs = tuple(offset + d * i for i in range(len(src.support)))
    st = None
    if src.step_type is not None:
        st = normalize_steps({(dx * d, dy): mult for (dx, dy), mult in src.step_type})
    return lift_over_points(src, xs, st, src.window)


def translate_x(r: RaggedTiling, delta: int) -> RaggedTiling:
    xs = tuple(x + delta for x in r.support)
    return lift_over_points(r, xs, r.step_type, r.window)


def stack_to_height(
    r: RectangleTiling | RaggedTiling | ColumnTiling, height: int
):
    """Repeat a block vertically to the requested height (a multiple of the period)."""
    if isinstance(r, ColumnTiling):
        r = r.base
    period = r.height
    if height % period != 0:
        raise PreconditionError(f"height {height} is not a multiple of the period {period}")
    copies = height // period
    paths = []
    for j in range(copies):
        dy = period * j
        for p in r.paths:
            paths.append(LatticePath(tuple((x, y + dy) for x, y in p.points)))
    if isinstance(r, RaggedTiling):
        return RaggedTiling(r.support, height, tuple(paths), r.step_type, r.window)
    return replace(r, height=height, paths=tuple(paths))


def concat_columns(blocks: Sequence[RectangleTiling]) -> RectangleTiling:
    """Concatenate rectangle blocks left to right with cumulative x-offsets."""
    if not blocks:
        raise PreconditionError("need at least one block")
    h = blocks[0].height
    st, win = blocks[0].step_type, blocks[0].window
    for b in blocks[1:]:
        if b.height != h:
            raise PreconditionError("blocks must share a height")
        if b.step_type != st or b.window != win:
            raise PreconditionError("blocks must share a declared step type")
    paths = []
    offset = 0
    for b in blocks:
        if offset == 0:
            paths.extend(b.paths)
        else:
            for p in b.paths:
                paths.append(LatticePath(tuple((x + offset, y) for x, y in p.points)))
        offset += b.width
    return RectangleTiling(offset, h, tuple(paths), st, win)


def merge_ragged(pieces: Sequence[RaggedTiling]) -> RaggedTiling:
    """Union of ragged tilings with pairwise disjoint supports and equal heights."""
    if not pieces:
        raise PreconditionError("need at least one piece")
    h = pieces[0].height
    st, win = pieces[0].step_type, pieces[0].window
    support: list[int] = []
    paths: list[LatticePath] = []
    for piece in pieces:
        if piece.height != h:
            raise PreconditionError("pieces must share a height")
        if piece.step_type != st or piece.window != win:
            raise PreconditionError("pieces must share a declared step type")
        support.extend(piece.support)
        paths.extend(piece.paths)
    merged = sorted(support)
    for a, b in zip(merged, merged[1:]):
        if a == b:
            raise ConstructionError(f"supports collide at x={a}")
    return RaggedTiling(tuple(merged), h, tuple(paths), st, win)


def residue_interleave(
    col_a: RaggedTiling, col_b: RaggedTiling, d1: int, t: int
) -> RectangleTiling:
    """Overlay t offset-copies of col_a (offsets 0..t-1) and d1-t offset-copies
    of col_b (offsets t..d1-1) into one true rectangle of width a*d1 + t.

    col_a and col_b must be x-dilations by d1 (supports 0, d1, 2*d1, ...) with
    col_a one column wider; distinct residues keep the copies disjoint.
    """
    if not (0 <= t < d1):
        raise PreconditionError("need 0 <= t < d1")
    a = len(col_b.support)
    if len(col_a.support) != a + 1:
        raise PreconditionError("col_a must be exactly one column wider than col_b")
    if col_a.height != col_b.height:
        raise PreconditionError("columns must share a height")
    for col in (col_a, col_b):
        if col.support != tuple(range(0, d1 * len(col.support), d1)):
            raise PreconditionError("columns must be dilations by d1 starting at 0")
    pieces = [translate_x(col_a, i) for i in range(t)]
    pieces += [translate_x(col_b, i) for i in range(t, d1)]
    merged = merge_ragged(pieces)
    width = a * d1 + t
    if merged.support != tuple(range(width)):
        raise ConstructionError("interleaved supports do not fill the rectangle")
    return as_rectangle(merged)


def flatten(r: RectangleTiling, width: int) -> IntervalTiling:
    """Map (x, y) -> x + y*width, turning each path into a tile.

    Monotone steps flatten to strictly increasing points, so each path's point
    order is preserved. Tiles are emitted sorted by their first point.
    """
    if width != r.width:
        raise PreconditionError(f"width {width} does not match the rectangle width {r.width}")
    tiles = [Tile(tuple(x + y * width for x, y in p.points)) for p in r.paths]
    tiles.sort(key=lambda t: t.points[0])
    return IntervalTiling(width * r.height, tuple(tiles))


def unflatten(t: IntervalTiling, width: int) -> list[list[tuple[int, int]]]:
    """Inverse of flatten on point lists: p -> (p mod width, p div width)."""
    return [[(p % width, p // width) for p in tile.points] for tile in t.tiles]
