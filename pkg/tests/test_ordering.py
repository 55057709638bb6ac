import pytest
from hypothesis import given
from hypothesis import strategies as st
from test_diagram import finite_diagrams

from bratteli.diagram import build_diagram
from bratteli.ordering import (
    OrderError,
    assign_order,
    default_order,
    language_pairs,
    level_language,
    order_from_words,
    sorted_paths,
    telescope_order,
    vershik_successor,
    word,
)


@st.composite
def ordered(draw, max_levels=4):
    d = draw(finite_diagrams(max_levels=max_levels))
    levels = []
    for n in range(1, d.depth + 1):
        levels.append([draw(st.permutations(d.in_edges(n, v))) for v in d.vertices(n)])
    return assign_order(d, [[[[e.source, e.copy] for e in lst] for lst in lvl] for lvl in levels])


def test_assign_rejects_non_permutation():
    d = build_diagram(matrices=[[[2]]])
    with pytest.raises(OrderError):
        assign_order(d, [[[[0, 0], [0, 0]]]])
    with pytest.raises(OrderError):
        assign_order(d, [[[[0, 0]]]])


def test_words_number_copies_by_occurrence():
    d = build_diagram(matrices=[[[1], [1]], [[2, 1], [1, 1]]], stationary=True)
    o = order_from_words(d, [None, [[0, 1, 0], [1, 0]]], stationary=True)
    assert o.letters(2, 0) == (0, 1, 0)
    assert [e.copy for e in o.at(2, 0)] == [0, 0, 1]
    assert word(o, 0, 3, 1).letters == (0, 1, 0, 1, 0, 0, 1, 0)


def test_json_roundtrip():
    d = build_diagram(matrices=[[[1], [1]], [[2, 1], [1, 1]]], stationary=True)
    o = order_from_words(d, [None, [[1, 0, 0], [0, 1]]], stationary=True)
    assert assign_order(d, o.to_json()) == o


@given(ordered())
def test_vershik_successor_matches_sorted_paths(order):
    d = order.diagram
    for v in d.vertices(d.depth):
        paths = sorted_paths(order, 0, d.depth, v)
        for a, b in zip(paths, paths[1:]):
            assert vershik_successor(order, a) == b
        assert vershik_successor(order, paths[-1]) is None


@given(ordered())
def test_language_pairs_match_expanded_words(order):
    d = order.diagram
    if d.depth < 2:
        return
    brute = set()
    for top in range(2, d.depth + 1):
        for v in d.vertices(top):
            s = word(order, v, top, 1).letters
            brute |= set(zip(s, s[1:]))
    assert language_pairs(order, 1, d.depth) == brute
    assert level_language(order, 1, d.depth).pairs == brute


@given(ordered(max_levels=3))
def test_telescoped_order_sorts_paths(order):
    d = order.diagram
    if d.depth < 2:
        return
    t = telescope_order(order, [0, d.depth])
    for v in d.vertices(d.depth):
        assert [t.diagram.paths[e] for e in t.at(1, v)] == sorted_paths(order, 0, d.depth, v)


def test_default_order_is_enumeration():
    d = build_diagram(matrices=[[[2]]])
    assert default_order(d).letters(1, 0) == (0, 0)


def test_language_needs_horizon_above_level():
    d = build_diagram(matrices=[[[2]]])
    with pytest.raises(OrderError):
        level_language(default_order(d), 1, 1)
