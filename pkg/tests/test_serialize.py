from gaptiles import (
    GapSet,
    boundary_base,
    diagonal_stripe_tiling,
    stair_tiling,
    verify_interval_tiling,
    verify_rectangle_tiling,
)
from gaptiles.serialize import (
    dumps_canonical,
    interval_to_obj,
    rectangle_to_obj,
    tiling_from_obj,
)


def test_interval_round_trip_with_annotations():
    st = boundary_base(1, 9, 1, 1)
    obj = interval_to_obj(st.tiling, st.gap_prefix)
    kind, tiling, gaps = tiling_from_obj(obj)
    assert kind == "interval"
    assert tiling == st.tiling
    assert gaps == st.gap_prefix
    assert tiling.annotations.boundary_prefix_count == 1
    assert verify_interval_tiling(tiling, gaps).ok


def test_rectangle_round_trip_uniform():
    rect = stair_tiling(3, 2)
    kind, back, _ = tiling_from_obj(rectangle_to_obj(rect))
    assert kind == "rectangle"
    assert back == rect
    assert verify_rectangle_tiling(back).ok


def test_rectangle_round_trip_windowed():
    rect = diagonal_stripe_tiling(3, 2, 4)
    obj = rectangle_to_obj(rect)
    assert obj["window"] == 5
    _, back, _ = tiling_from_obj(obj)
    assert back == rect
    assert verify_rectangle_tiling(back).ok


def test_canonical_dump_is_stable():
    rect = stair_tiling(2, 2)
    assert dumps_canonical(rectangle_to_obj(rect)) == dumps_canonical(rectangle_to_obj(rect))


def test_homogeneous_annotation_round_trip():
    from gaptiles import homogeneous_base

    st = homogeneous_base(boundary_base(1, 9, 1, 1))
    obj = interval_to_obj(st.tiling, st.gap_prefix)
    _, tiling, _ = tiling_from_obj(obj)
    assert tiling.annotations.homogeneous_for == GapSet.from_pairs([(1, 1), (9, 1)])
