"""Streaming verifiers for interval tilings, homogeneous tilings, and rectangle tilings.

Verifiers are pure functions of their inputs and trust nothing about how a
tiling was built: coverage is re-derived from the point lists alone. The
coverage pass streams blocks sorted by their minimum point and finalizes
coordinates in batches, so memory is bounded by the largest window of
overlapping blocks rather than the interval length.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .types import (
    DEFAULT_VIOLATION_CAP,
    GapSet,
    IntervalTiling,
    LatticePath,
    RectangleTiling,
    ReportBuilder,
    StepType,
    Tile,
    VerificationReport,
    expand_steps,
)

_FLUSH_BATCH = 1 << 16


def _flush_range(pending: list[np.ndarray], lo: int, hi: int, rep: ReportBuilder) -> np.ndarray:
    """Finalize all pending points < hi against the expected range [lo, hi).

    Returns the leftover array of points >= hi. Safe only when every block not
    yet seen has its minimum >= hi.
    """
    if not pending:
        for p in range(lo, hi):
            rep.add("Hole", (p,), "point not covered by any block")
        return np.empty(0, dtype=np.int64)
    pts = np.concatenate(pending)
    take = pts < hi
    fin = pts[take]
    neg = fin[fin < 0]
    if neg.size:
        for p in np.unique(neg):
            rep.add("OutOfRange", (int(p),), "point below 0")
        fin = fin[fin >= 0]
    fin.sort(kind="stable")
    n_expected = hi - lo
    # Fast path: duplicate-free with the right count and endpoints => exact cover.
    if (
        fin.size == n_expected
        and n_expected > 0
        and fin[0] == lo
        and fin[-1] == hi - 1
        and not np.any(fin[1:] == fin[:-1])
    ):
        return pts[~take]
    uniq, counts = np.unique(fin, return_counts=True)
    for p, c in zip(uniq[counts > 1], counts[counts > 1]):
        rep.add("Overlap", (int(p),), f"point covered {int(c)} times")
    expected = np.arange(lo, hi, dtype=np.int64)
    for p in np.setdiff1d(expected, uniq, assume_unique=True):
        rep.add("Hole", (int(p),), "point not covered by any block")
    return pts[~take]


def stream_cover(blocks: Sequence[Sequence[int]], n_points: int, rep: ReportBuilder) -> None:
    """Check that the given blocks of sorted points partition {0..n_points-1}."""
    if not blocks:
        for p in range(min(n_points, rep.cap + 1)):
            rep.add("Hole", (p,), "point not covered by any block")
        return
    order = sorted(range(len(blocks)), key=lambda i: blocks[i][0])
    frontier = 0
    pending: list[np.ndarray] = []
    # Count only points added since the last flush: the carried-over leftover
    # (points beyond the cutoff) may stay large for blocks with long spans, and
    # re-flushing per block on its account would be quadratic.
    fresh = 0
    for bi in order:
        block = blocks[bi]
        start = block[0]
        if fresh >= _FLUSH_BATCH and start > frontier:
            cutoff = min(int(start), n_points)
            leftover = _flush_range(pending, frontier, cutoff, rep)
            pending = [leftover] if leftover.size else []
            fresh = 0
            frontier = cutoff
        pending.append(np.asarray(block, dtype=np.int64))
        fresh += len(block)
    leftover = _flush_range(pending, frontier, n_points, rep)
    if leftover.size:
        for p in np.unique(leftover):
            rep.add("OutOfRange", (int(p),), f"point outside [0, {n_points - 1}]")


def check_path_types(
    paths: Sequence[LatticePath],
    step_type: StepType,
    window: int | None,
    rep: ReportBuilder,
) -> None:
    expected = sorted(expand_steps(step_type))
    if window is None:
        for i, path in enumerate(paths):
            if sorted(path.steps()) != expected:
                rep.add("TypeMismatch", (i,), "path step multiset differs from declared type")
    else:
        for i, path in enumerate(paths):
            steps = path.steps()
            if len(steps) < window:
                rep.add("WindowMismatch", (i, 0), f"path has fewer than {window} steps")
                continue
            for off in range(len(steps) - window + 1):
                if sorted(steps[off : off + window]) != expected:
                    rep.add(
                        "WindowMismatch",
                        (i, off),
                        f"window of {window} steps at offset {off} differs from declared type",
                    )


def verify_interval_tiling(
    tiling: IntervalTiling,
    gap_set: GapSet,
    max_violations: int = DEFAULT_VIOLATION_CAP,
) -> VerificationReport:
    """ok iff the tiles partition {0..length-1} and every tile's gaps equal gap_set."""
    rep = ReportBuilder(max_violations)
    stream_cover([t.points for t in tiling.tiles], tiling.length, rep)
    expected = gap_set.expand()
    for idx, tile in enumerate(tiling.tiles):
        pts = tile.points
        diffs = sorted(b - a for a, b in zip(pts, pts[1:]))
        if tuple(diffs) != expected:
            rep.add("GapMismatch", (idx,), "tile gap multiset differs from the target gap set")
    return rep.build()


def verify_boundary_prefix(
    tiling: IntervalTiling,
    d1: int,
    count: int,
    max_violations: int = DEFAULT_VIOLATION_CAP,
) -> VerificationReport:
    """ok iff every tile ending in the last d1 points starts with `count` gaps equal to d1.

    Assumes the tiling itself is valid (run verify_interval_tiling separately).
    """
    if d1 < 1 or count < 0:
        raise ValueError("d1 must be >= 1 and count >= 0")
    rep = ReportBuilder(max_violations)
    cutoff = tiling.length - d1
    for idx, tile in enumerate(tiling.tiles):
        if tile.points[-1] < cutoff:
            continue
        gaps = tile.gaps()
        if count > len(gaps):
            rep.add("BoundaryPrefixViolation", (idx, len(gaps)), f"tile has fewer than {count} gaps")
            continue
        for gi in range(count):
            if gaps[gi] != d1:
                rep.add("BoundaryPrefixViolation", (idx, gi), f"gap {gi} is {gaps[gi]}, expected {d1}")
    return rep.build()


def verify_homogeneous(
    seqs: Sequence[Tile],
    n_points: int,
    gap_set: GapSet,
    max_violations: int = DEFAULT_VIOLATION_CAP,
) -> VerificationReport:
    """ok iff seqs partition {0..n_points-1} and every window of size()+1
    consecutive points of every sequence has gap multiset equal to gap_set.

    Sequences shorter than one window are vacuously homogeneous.
    """
    rep = ReportBuilder(max_violations)
    stream_cover([s.points for s in seqs], n_points, rep)
    expected = gap_set.expand()
    w = gap_set.size()
    for idx, seq in enumerate(seqs):
        gaps = seq.gaps()
        for off in range(len(gaps) - w + 1):
            if sorted(gaps[off : off + w]) != list(expected):
                rep.add("WindowMismatch", (idx, off), f"window at point offset {off} has wrong gap multiset")
    return rep.build()


def verify_rectangle_tiling(
    rect: RectangleTiling,
    max_violations: int = DEFAULT_VIOLATION_CAP,
) -> VerificationReport:
    """ok iff the paths partition the rectangle's points and match the declared type.

    Uniform mode (window None) compares each path's full step multiset; windowed
    mode compares every window of `window` consecutive steps.
    """
    rep = ReportBuilder(max_violations)
    w, h = rect.width, rect.height
    blocks: list[list[int]] = []
    for path in rect.paths:
        flat: list[int] = []
        for x, y in path.points:
            if 0 <= x < w and 0 <= y < h:
                flat.append(x + y * w)
            else:
                rep.add("OutOfRange", (x, y), "path point outside the rectangle")
        if flat:
            blocks.append(flat)
    stream_cover(blocks, w * h, rep)
    check_path_types(rect.paths, rect.step_type, rect.window, rep)
    return rep.build()
