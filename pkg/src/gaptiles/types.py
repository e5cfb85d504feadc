"""Core domain types: gap multisets, tiles, tilings, and verification reports.

All types are immutable after construction and safe to share across threads.
Constructors enforce cheap local invariants (sortedness, positivity); global
properties such as "tiles partition the interval" are the verifiers' job, so
verification never trusts construction metadata.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

from .errors import PreconditionError

DEFAULT_VIOLATION_CAP = 32

StepType = tuple[tuple[tuple[int, int], int], ...]


def normalize_steps(steps: Mapping[tuple[int, int], int] | Iterable[tuple[tuple[int, int], int]]) -> StepType:
    """Normalize a step multiset to a sorted ((dx, dy), multiplicity) tuple."""
    if isinstance(steps, Mapping):
        items = steps.items()
    else:
        items = steps
    merged: dict[tuple[int, int], int] = {}
    for vec, mult in items:
        vec = (int(vec[0]), int(vec[1]))
        if vec[0] < 0 or vec[1] < 0 or vec == (0, 0):
            raise PreconditionError(f"step {vec} must be nonzero with nonnegative coordinates")
        if mult < 1:
            raise PreconditionError("step multiplicities must be >= 1")
        merged[vec] = merged.get(vec, 0) + int(mult)
    return tuple(sorted(merged.items()))


def expand_steps(step_type: StepType) -> tuple[tuple[int, int], ...]:
    return tuple(vec for vec, mult in step_type for _ in range(mult))


@dataclass(frozen=True)
class GapSet:
    """Multiset of gap lengths, stored as sorted (distance, multiplicity) pairs."""

    entries: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not self.entries:
            raise PreconditionError("gap set must be non-empty")
        prev = 0
        for d, k in self.entries:
            if not isinstance(d, int) or not isinstance(k, int):
                raise PreconditionError("gap set entries must be integers")
            if d <= prev:
                raise PreconditionError("distances must be strictly increasing and >= 1")
            if k < 1:
                raise PreconditionError("multiplicities must be >= 1")
            prev = d

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "GapSet":
        """Build from (distance, multiplicity) pairs, merging equal distances."""
        merged: dict[int, int] = {}
        for d, k in pairs:
            merged[int(d)] = merged.get(int(d), 0) + int(k)
        return cls(tuple(sorted(merged.items())))

    @classmethod
    def from_gaps(cls, gaps: Iterable[int]) -> "GapSet":
        return cls.from_pairs((g, 1) for g in gaps)

    def size(self) -> int:
        """Total number of gaps (sum of multiplicities)."""
        return sum(k for _, k in self.entries)

    def points_per_tile(self) -> int:
        return self.size() + 1

    def distances(self) -> tuple[int, ...]:
        return tuple(d for d, _ in self.entries)

    def multiplicities(self) -> tuple[int, ...]:
        return tuple(k for _, k in self.entries)

    def expand(self) -> tuple[int, ...]:
        """All gaps with repetition, ascending."""
        return tuple(d for d, k in self.entries for _ in range(k))

    def with_entry(self, distance: int, multiplicity: int) -> "GapSet":
        if distance in dict(self.entries):
            raise PreconditionError(f"distance {distance} already present")
        return GapSet(tuple(sorted(self.entries + ((distance, multiplicity),))))

    def __str__(self) -> str:
        return ",".join(f"{d}:{k}" for d, k in self.entries)


@dataclass(frozen=True)
class SplitSpec:
    """Split of a gap set's distinct distances into a head of s and a tail of p."""

    s: int
    p: int

    def __post_init__(self):
        if self.s < 2:
            raise PreconditionError("split requires s >= 2")
        if self.p < 0:
            raise PreconditionError("split requires p >= 0")


@dataclass(frozen=True)
class Tile:
    """A strictly increasing integer sequence; one placed copy of a tile."""

    points: tuple[int, ...]

    def __post_init__(self):
        pts = self.points
        if len(pts) < 2:
            raise PreconditionError("a tile needs at least 2 points")
        for a, b in zip(pts, pts[1:]):
            if b <= a:
                raise PreconditionError("tile points must be strictly increasing")

    def gaps(self) -> tuple[int, ...]:
        pts = self.points
        return tuple(b - a for a, b in zip(pts, pts[1:]))


def gap_multiset(tile: Tile) -> GapSet:
    """The multiset of consecutive differences of a tile, normalized."""
    return GapSet.from_gaps(tile.gaps())


@dataclass(frozen=True)
class TilingAnnotations:
    boundary_prefix_count: int | None = None
    homogeneous_for: GapSet | None = None


@dataclass(frozen=True)
class IntervalTiling:
    """A set of tiles intended to partition {0..length-1}.

    The partition property itself is checked by ``verify_interval_tiling``,
    not enforced here.
    """

    length: int
    tiles: tuple[Tile, ...]
    annotations: TilingAnnotations = field(default_factory=TilingAnnotations)

    def __post_init__(self):
        if self.length < 1:
            raise PreconditionError("length must be positive")

    def with_annotations(self, **kwargs) -> "IntervalTiling":
        return replace(self, annotations=replace(self.annotations, **kwargs))


@dataclass(frozen=True)
class LatticePath:
    """A sequence of 2D integer points with coordinatewise nondecreasing steps."""

    points: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if not self.points:
            raise PreconditionError("a path needs at least one point")
        for (x0, y0), (x1, y1) in zip(self.points, self.points[1:]):
            if x1 < x0 or y1 < y0 or (x1 == x0 and y1 == y0):
                raise PreconditionError("path steps must be nonzero and nondecreasing in both coordinates")

    def steps(self) -> tuple[tuple[int, int], ...]:
        pts = self.points
        return tuple((x1 - x0, y1 - y0) for (x0, y0), (x1, y1) in zip(pts, pts[1:]))


@dataclass(frozen=True)
class RectangleTiling:
    """Paths intended to partition the points of [0,width-1] x [0,height-1].

    ``window`` selects the verification mode: ``None`` means every path's full
    step multiset must equal ``step_type`` (uniform mode); an integer w means
    every window of w consecutive steps of every path must equal ``step_type``
    (windowed mode, in which paths may be longer than one window).
    """

    width: int
    height: int
    paths: tuple[LatticePath, ...]
    step_type: StepType
    window: int | None = None

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise PreconditionError("width and height must be positive")
        if not self.step_type:
            raise PreconditionError("step_type must be non-empty")
        if self.window is not None:
            total = sum(k for _, k in self.step_type)
            if self.window != total:
                raise PreconditionError("window must equal the declared steps per window")


@dataclass(frozen=True)
class Violation:
    kind: str
    location: tuple[int, ...]
    detail: str


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of a verifier run. ok is exact even when violations are capped."""

    ok: bool
    violations: tuple[Violation, ...]
    truncated: bool = False


class ReportBuilder:
    """Collects violations up to a cap while keeping the exact ok flag."""

    def __init__(self, cap: int = DEFAULT_VIOLATION_CAP):
        self.cap = cap
        self._stored: list[Violation] = []
        self._count = 0

    def add(self, kind: str, location: tuple[int, ...], detail: str) -> None:
        self._count += 1
        if len(self._stored) < self.cap:
            self._stored.append(Violation(kind, tuple(int(x) for x in location), detail))

    @property
    def count(self) -> int:
        return self._count

    def build(self) -> VerificationReport:
        return VerificationReport(
            ok=self._count == 0,
            violations=tuple(self._stored),
            truncated=self._count > len(self._stored),
        )
