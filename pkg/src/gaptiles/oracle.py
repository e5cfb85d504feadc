"""Brute-force exact-cover search over intervals and lattice rectangles.

The branching rule is leftmost-point placement: the least uncovered point (in
ascending order for intervals, row-major order for rectangles) must be the
first point of the next placed tile or path. Monotonicity makes this sound,
so a fully exhausted search is a proof that no tiling of that size exists.
"""

from __future__ import annotations

import multiprocessing
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import ConstructionError
from .types import (
    GapSet,
    IntervalTiling,
    LatticePath,
    RectangleTiling,
    StepType,
    Tile,
    expand_steps,
    normalize_steps,
)
from .verify import verify_interval_tiling, verify_rectangle_tiling


class SearchStatus(Enum):
    FOUND = "found"
    EXHAUSTED_NO_SOLUTION = "exhausted-no-solution"
    BUDGET_EXCEEDED = "budget-exceeded"


@dataclass(frozen=True)
class SearchConfig:
    max_nodes: int = 10_000_000
    max_solutions: int = 1
    canonicalize: bool = True
    parallel_width: int = 0

    def __post_init__(self):
        if self.max_nodes < 1 or self.max_solutions < 1 or self.parallel_width < 0:
            raise ValueError("budgets must be positive and parallel_width >= 0")


@dataclass(frozen=True)
class SearchOutcome:
    status: SearchStatus
    witnesses: tuple
    nodes_explored: int


def multiset_permutations(items: Sequence) -> list[tuple]:
    """All distinct permutations of a multiset, in lexicographic order."""
    items = sorted(items)
    n = len(items)
    out: list[tuple] = []
    counts: dict = {}
    for it in items:
        counts[it] = counts.get(it, 0) + 1
    keys = sorted(counts)
    prefix: list = []

    def rec():
        if len(prefix) == n:
            out.append(tuple(prefix))
            return
        for k in keys:
            if counts[k]:
                counts[k] -= 1
                prefix.append(k)
                rec()
                prefix.pop()
                counts[k] += 1

    rec()
    return out


@lru_cache(maxsize=256)
def _gap_orders(gaps: tuple[int, ...], canonicalize: bool) -> tuple[tuple[tuple[int, ...], int, int], ...]:
    """(offsets, mask, span) per gap ordering. Offsets are prefix sums from 0."""
    if canonicalize:
        perms: Iterable[tuple[int, ...]] = multiset_permutations(gaps)
    else:
        import itertools

        perms = itertools.permutations(sorted(gaps))
    rows = []
    for perm in perms:
        offs = [0]
        for g in perm:
            offs.append(offs[-1] + g)
        mask = 0
        for o in offs:
            mask |= 1 << o
        rows.append((tuple(offs), mask, offs[-1]))
    return tuple(rows)


def _interval_dfs(
    length: int,
    orders,
    occupied: int,
    placements: list[tuple[int, int]],
    budget: list[int],
    solutions: list[tuple[tuple[int, int], ...]],
    max_solutions: int,
    forced_first: int | None = None,
    stop=None,
) -> bool:
    """Returns True when the search should stop (budget hit, enough solutions,
    or another worker signalled the shared stop flag)."""
    full = (1 << length) - 1
    if occupied == full:
        solutions.append(tuple(placements))
        return len(solutions) >= max_solutions
    free = ~occupied & full
    c = (free & -free).bit_length() - 1
    first = forced_first is not None
    for oi, (offs, mask, span) in enumerate(orders):
        if first and oi != forced_first:
            continue
        budget[0] += 1
        if budget[0] > budget[1]:
            budget[2] = 1
            return True
        if stop is not None and (budget[0] & 1023) == 0 and stop.is_set():
            return True
        if c + span >= length:
            continue
        m = mask << c
        if occupied & m:
            continue
        placements.append((c, oi))
        if _interval_dfs(
            length, orders, occupied | m, placements, budget, solutions, max_solutions, stop=stop
        ):
            return True
        placements.pop()
    return False


def _build_interval_witness(length: int, orders, placements) -> IntervalTiling:
    tiles = []
    for start, oi in placements:
        offs = orders[oi][0]
        tiles.append(Tile(tuple(start + o for o in offs)))
    tiles.sort(key=lambda t: t.points[0])
    return IntervalTiling(length, tuple(tiles))


_WORKER_STOP = None


def _worker_init(event):
    global _WORKER_STOP
    _WORKER_STOP = event


def _solve_interval_worker(args):
    gaps, length, roots, max_nodes, max_solutions, signal_on_found, canonicalize = args
    orders = _gap_orders(gaps, canonicalize)
    solutions: list = []
    budget = [0, max_nodes, 0]
    stop = _WORKER_STOP
    for root in roots:
        if len(solutions) >= max_solutions or budget[2]:
            break
        if stop is not None and stop.is_set():
            break
        _interval_dfs(
            length, orders, 0, [], budget, solutions, max_solutions,
            forced_first=root, stop=stop,
        )
    if solutions and signal_on_found and stop is not None:
        stop.set()
    return solutions, budget[0], bool(budget[2])


def solve_interval(gap_set: GapSet, length: int, cfg: SearchConfig | None = None) -> SearchOutcome:
    """Exact-cover search for tilings of {0..length-1} by tiles with the given gap set.

    EXHAUSTED_NO_SOLUTION is a proof of untilability at this length; budget
    exhaustion is reported as a status, never an exception.
    """
    cfg = cfg or SearchConfig()
    ppt = gap_set.points_per_tile()
    if length < 1 or length % ppt != 0:
        return SearchOutcome(SearchStatus.EXHAUSTED_NO_SOLUTION, (), 0)
    gaps = gap_set.expand()
    orders = _gap_orders(gaps, cfg.canonicalize)

    if cfg.parallel_width > 0 and len(orders) > 1:
        # Root branches split round-robin across workers. A shared stop flag
        # lets the first witness end the race when one solution suffices; for
        # exhaustive collection every worker runs its subset to completion and
        # the merge is deterministic. A worker aborts only after the flag is
        # set, so "no solution" still means every subtree was exhausted.
        width = min(cfg.parallel_width, len(orders))
        buckets: list[list[int]] = [[] for _ in range(width)]
        for i in range(len(orders)):
            buckets[i % width].append(i)
        per_worker = max(1, cfg.max_nodes // width)
        signal = cfg.max_solutions == 1
        ctx = multiprocessing.get_context("fork")
        event = ctx.Event()
        with ctx.Pool(width, initializer=_worker_init, initargs=(event,)) as pool:
            results = pool.map(
                _solve_interval_worker,
                [
                    (gaps, length, b, per_worker, cfg.max_solutions, signal, cfg.canonicalize)
                    for b in buckets
                ],
            )
        nodes = sum(r[1] for r in results)
        budget_hit = any(r[2] for r in results)
        all_placements = [p for r in results for p in r[0]]
        all_placements.sort()
        witnesses = tuple(
            _build_interval_witness(length, orders, p) for p in all_placements[: cfg.max_solutions]
        )
    else:
        solutions: list = []
        budget = [0, cfg.max_nodes, 0]
        _interval_dfs(length, orders, 0, [], budget, solutions, cfg.max_solutions)
        nodes = budget[0]
        budget_hit = bool(budget[2])
        witnesses = tuple(_build_interval_witness(length, orders, p) for p in solutions)

    if witnesses:
        for wit in witnesses:
            if not verify_interval_tiling(wit, gap_set).ok:
                raise ConstructionError("search produced a witness that fails verification")
        return SearchOutcome(SearchStatus.FOUND, witnesses, nodes)
    if budget_hit:
        return SearchOutcome(SearchStatus.BUDGET_EXCEEDED, (), nodes)
    return SearchOutcome(SearchStatus.EXHAUSTED_NO_SOLUTION, (), nodes)


def min_interval(
    gap_set: GapSet, n_max: int, cfg: SearchConfig | None = None
) -> tuple[int, IntervalTiling] | None:
    """Least length <= n_max that the gap set tiles, with a witness; None if absent."""
    ppt = gap_set.points_per_tile()
    for n in range(ppt, n_max + 1, ppt):
        outcome = solve_interval(gap_set, n, cfg)
        if outcome.status is SearchStatus.FOUND:
            return n, outcome.witnesses[0]
    return None


@lru_cache(maxsize=256)
def _step_orders(steps: tuple[tuple[int, int], ...], width: int, canonicalize: bool):
    """(walk, mask, kmax, lmax) per step ordering, masks flattened at row width."""
    if canonicalize:
        perms: Iterable = multiset_permutations(steps)
    else:
        import itertools

        perms = itertools.permutations(sorted(steps))
    rows = []
    for perm in perms:
        walk = [(0, 0)]
        for dx, dy in perm:
            px, py = walk[-1]
            walk.append((px + dx, py + dy))
        mask = 0
        for x, y in walk:
            mask |= 1 << (x + y * width)
        kmax = max(x for x, _ in walk)
        lmax = max(y for _, y in walk)
        rows.append((tuple(walk), mask, kmax, lmax))
    return tuple(rows)


def _rect_dfs(width, height, orders, occupied, placements, budget, solutions, max_solutions):
    total = width * height
    full = (1 << total) - 1
    if occupied == full:
        solutions.append(tuple(placements))
        return len(solutions) >= max_solutions
    free = ~occupied & full
    c = (free & -free).bit_length() - 1
    cx, cy = c % width, c // width
    for oi, (walk, mask, kmax, lmax) in enumerate(orders):
        budget[0] += 1
        if budget[0] > budget[1]:
            budget[2] = 1
            return True
        if cx + kmax >= width or cy + lmax >= height:
            continue
        m = mask << c
        if occupied & m:
            continue
        placements.append((c, oi))
        if _rect_dfs(width, height, orders, occupied | m, placements, budget, solutions, max_solutions):
            return True
        placements.pop()
    return False


def solve_rectangle(
    step_type: StepType | dict,
    width: int,
    height: int,
    cfg: SearchConfig | None = None,
) -> SearchOutcome:
    """Exact-cover search for tilings of [0,width-1] x [0,height-1] by monotone
    lattice paths with the given step multiset."""
    cfg = cfg or SearchConfig()
    st = normalize_steps(step_type)
    steps = expand_steps(st)
    ppp = len(steps) + 1
    if width < 1 or height < 1 or (width * height) % ppp != 0:
        return SearchOutcome(SearchStatus.EXHAUSTED_NO_SOLUTION, (), 0)
    orders = _step_orders(steps, width, cfg.canonicalize)
    solutions: list = []
    budget = [0, cfg.max_nodes, 0]
    _rect_dfs(width, height, orders, 0, [], budget, solutions, cfg.max_solutions)
    witnesses = []
    for placements in solutions:
        paths = []
        for c, oi in placements:
            cx, cy = c % width, c // width
            walk = orders[oi][0]
            paths.append(LatticePath(tuple((cx + x, cy + y) for x, y in walk)))
        witnesses.append(RectangleTiling(width, height, tuple(paths), st))
    if witnesses:
        for wit in witnesses:
            if not verify_rectangle_tiling(wit).ok:
                raise ConstructionError("search produced a witness that fails verification")
        return SearchOutcome(SearchStatus.FOUND, tuple(witnesses), budget[0])
    if budget[2]:
        return SearchOutcome(SearchStatus.BUDGET_EXCEEDED, (), budget[0])
    return SearchOutcome(SearchStatus.EXHAUSTED_NO_SOLUTION, (), budget[0])
