import pytest

from gaptiles import GapSet, LatticePath, SplitSpec, Tile, gap_multiset
from gaptiles.errors import PreconditionError


def test_gap_multiset_direct_differences():
    assert gap_multiset(Tile((0, 1, 3))).entries == ((1, 1), (2, 1))
    assert gap_multiset(Tile((0, 2, 3, 5))).entries == ((1, 1), (2, 2))


def test_gap_multiset_three_distinct():
    # x-projection tile of a homogeneous sequence with gaps 1, 2, 4
    assert gap_multiset(Tile((0, 1, 3, 7))).entries == ((1, 1), (2, 1), (4, 1))


def test_gap_multiset_total_multiplicity_is_points_minus_one():
    for pts in [(0, 1), (0, 5, 6, 11), (3, 4, 8, 9, 17)]:
        t = Tile(pts)
        assert gap_multiset(t).size() == len(pts) - 1


def test_gap_set_normalization_merges_duplicates():
    gs = GapSet.from_pairs([(2, 1), (1, 1), (2, 1)])
    assert gs.entries == ((1, 1), (2, 2))
    assert gs.expand() == (1, 2, 2)
    assert gs.size() == 3
    assert gs.points_per_tile() == 4
    assert str(gs) == "1:1,2:2"


def test_gap_set_rejects_bad_entries():
    with pytest.raises(PreconditionError):
        GapSet(())
    with pytest.raises(PreconditionError):
        GapSet(((0, 1),))
    with pytest.raises(PreconditionError):
        GapSet(((2, 1), (1, 1)))  # unsorted
    with pytest.raises(PreconditionError):
        GapSet(((1, 0),))


def test_gap_set_with_entry_rejects_duplicate_distance():
    gs = GapSet.from_pairs([(1, 1), (9, 1)])
    with pytest.raises(PreconditionError):
        gs.with_entry(9, 2)
    assert gs.with_entry(50, 3).entries == ((1, 1), (9, 1), (50, 3))


def test_tile_invariants():
    with pytest.raises(PreconditionError):
        Tile((5,))
    with pytest.raises(PreconditionError):
        Tile((1, 1))
    with pytest.raises(PreconditionError):
        Tile((3, 2))
    assert Tile((0, 4, 5)).gaps() == (4, 1)


def test_lattice_path_invariants():
    with pytest.raises(PreconditionError):
        LatticePath(((0, 0), (0, 0)))
    with pytest.raises(PreconditionError):
        LatticePath(((1, 1), (0, 2)))
    p = LatticePath(((0, 0), (2, 0), (2, 3)))
    assert p.steps() == ((2, 0), (0, 3))


def test_split_spec_bounds():
    with pytest.raises(PreconditionError):
        SplitSpec(1, 0)
    with pytest.raises(PreconditionError):
        SplitSpec(2, -1)
    assert SplitSpec(2, 0).s == 2
