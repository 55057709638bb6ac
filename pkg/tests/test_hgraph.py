from hypothesis import given
from hypothesis import strategies as st

from bratteli import fixtures
from bratteli.hgraph import build_graph, connectivity, crossing_numbers, export_dot


def _unsquared():
    b = fixtures.load("rotating_triple_unsquared")
    return b, build_graph(b.diagram, b.skeleton, b.sigma, 2)


def test_cells_and_edges():
    b, g = _unsquared()
    assert [g.label(c.key) for c in g.cells] == ["[a,a]", "[b,a]", "[b,b]", "[c,c]"]
    edges = {(g.label(a), g.label(c)) for a, c in g.edges}
    # sigma rotates a->b->c->a, so [x, vt] points to every cell whose vbar is sigma(vt)
    assert edges == {("[a,a]", "[b,a]"), ("[a,a]", "[b,b]"), ("[b,a]", "[b,a]"), ("[b,a]", "[b,b]"),
                     ("[b,b]", "[c,c]"), ("[c,c]", "[a,a]")}


def test_crossing_numbers_for_d():
    b, g = _unsquared()
    cr = crossing_numbers(b.diagram, b.skeleton, g, 3)
    assert {g.label(k): v for k, v in cr.counts.items()} == {"[a,a]": 0, "[b,a]": 2, "[b,b]": 1, "[c,c]": 1}
    assert g.label(cr.terminal) == "[a,a]"


def test_not_positively_strong_for_d():
    b, g = _unsquared()
    con = connectivity(g, crossing_numbers(b.diagram, b.skeleton, g, 3))
    assert con.strong and not con.positively_strong
    assert con.witness == "no path from [c,c] to [b,a]"


@given(st.sampled_from(["rotating_triple", "rotating_triple_unsquared", "two_path_aligned",
                        "two_path_crossed", "staircase", "forked_staircase"]), st.data())
def test_crossings_sum_to_in_degree_minus_one(name, data):
    b = fixtures.load(name)
    n = data.draw(st.integers(2, b.skeleton.depth - 1))
    g = build_graph(b.diagram, b.skeleton, b.sigma, n)
    u = data.draw(st.sampled_from(list(b.diagram.vertices(n + 1))))
    cr = crossing_numbers(b.diagram, b.skeleton, g, u)
    assert sum(cr.counts.values()) == b.diagram.in_degree(n + 1, u) - 1


def test_staircase_graph_has_loop():
    b = fixtures.load("staircase")
    g = build_graph(b.diagram, b.skeleton, b.sigma, 3)
    loops = [g.label(c.key) for c in g.cells if g.has_loop(c.key)]
    assert loops == ["[v1,v2]"]
    con = connectivity(g, crossing_numbers(b.diagram, b.skeleton, g, 1))
    assert con.positively_strong


def test_dot_export():
    b, g = _unsquared()
    text = export_dot(g, crossing_numbers(b.diagram, b.skeleton, g, 3), "H")
    assert text.startswith("digraph")
    assert '"[b,a]" -> "[b,a]"' in text
    assert "peripheries=2" in text
    assert "P=2" in text
