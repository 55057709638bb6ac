import pytest

from bratteli import fixtures
from bratteli.diagram import build_diagram
from bratteli.ordering import order_from_words
from bratteli.skeleton import (
    Correspondence,
    Skeleton,
    SkeletonError,
    correspondence_from_order,
    skeleton_from_order,
    skeleton_from_sources,
    validate_correspondence,
)


def test_staircase_skeleton_is_valid():
    b = fixtures.load("staircase")
    assert b.skeleton.validate() == []
    rep = validate_correspondence(b.diagram, b.skeleton, b.sigma)
    assert rep.ok and rep.threads_unique
    assert rep.point_map_from == 1


def test_forked_staircase_threads_not_unique():
    b = fixtures.load("forked_staircase")
    rep = validate_correspondence(b.diagram, b.skeleton, b.sigma)
    assert not rep.threads_unique
    assert rep.thread_counts[0] == 2
    assert rep.point_map_from is None


def test_odometer_correspondence():
    b = fixtures.load("binary_odometer")
    assert b.skeleton.validate() == []
    assert validate_correspondence(b.diagram, b.skeleton, b.sigma).ok


def test_cells_of_two_path_skeleton():
    b = fixtures.load("two_path_aligned")
    sk = b.skeleton
    assert [sk.cell_key(2, w) for w in range(4)] == [(0, 0), (1, 1), (0, 1), (1, 0)]
    assert sk.W(2, 0) == {0, 3} and sk.Wp(2, 1) == {1, 3}


def test_json_roundtrip_keeps_sigma():
    b = fixtures.load("forked_staircase")
    data = b.skeleton.to_json(b.sigma)
    sk, sigma = Skeleton.from_json(b.diagram, data)
    assert sk == b.skeleton
    assert sigma == b.sigma


def test_missing_edge_rejected():
    d = build_diagram(matrices=[[[1], [1]], [[1, 0], [1, 1]]])
    with pytest.raises(SkeletonError):
        skeleton_from_sources(d, {2: [1, 0]}, {2: [0, 0]}, {1: {0, 1}, 2: {0, 1}}, {1: {0, 1}, 2: {0, 1}})


def test_coinciding_extremal_edges_flagged():
    d = build_diagram(matrices=[[[1], [1]], [[1, 0], [1, 1]]])
    sk = skeleton_from_sources(d, {2: [0, 1]}, {2: [0, 0]}, {1: {0, 1}, 2: {0, 1}}, {1: {0}, 2: {0, 1}})
    assert any("coincide" in m for m in sk.validate())


def test_correspondence_shape_failures():
    b = fixtures.load("staircase")
    bad = Correspondence({n: {i: set() for i in range(n)} for n in range(1, 7)})
    rep = validate_correspondence(b.diagram, b.skeleton, bad)
    assert not rep.ok and rep.shape_failures


def test_extraction_from_rotating_triple():
    b = fixtures.load("rotating_triple")
    ext = skeleton_from_order(b.order, 5)
    sk = ext.skeleton
    assert ext.levels == [0, 1, 2, 3, 4, 5]
    for n in range(2, 5):
        assert sk.max_vertices[n] == {0, 1, 2} and sk.min_vertices[n] == {0, 1, 2}
        assert [sk.max_source(n, v) for v in range(4)] == [0, 1, 2, 0]
        assert [sk.min_source(n, v) for v in range(4)] == [0, 1, 2, 1]
    sigma = correspondence_from_order(ext.order, sk, 5)
    assert sigma.maps[2] == {0: {1}, 1: {2}, 2: {0}}


def test_extraction_telescopes_transient_extremal_vertex():
    d = build_diagram(matrices=[[[1]] * 2, [[1, 2], [2, 1]]], stationary=True)
    # max letter of 0 is 1, of 1 is 0: the max maps swap; min sources both 0
    o = order_from_words(d, [None, [[0, 1, 1], [0, 1, 0]]], stationary=True)
    ext = skeleton_from_order(o, 6)
    assert ext.skeleton.validate() == []
