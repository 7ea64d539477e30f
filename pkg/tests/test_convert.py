from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from cfdensity import catalog
from cfdensity import convert as cv
from cfdensity.cfgraph import GraphError, eye, validate_cone_partition


def test_brun_conversion():
    b = catalog.get("brun3")
    conv = cv.to_matrices_graph(b)
    g = conv.graph
    assert len(g.states) == 6 and len(g.edges) == 18
    # identity seeds are unreachable and dropped
    assert conv.seeds == [] and all(s[1] != eye(3) for s in g.states)
    assert validate_cone_partition(g)
    assert cv.semiconjugacy_check(b, conv, n=20, samples=50)


def test_keep_seeds():
    conv = cv.to_matrices_graph(catalog.get("brun3"), keep_seeds=True)
    assert conv.seeds == [(0, eye(3))] and len(conv.graph.states) == 7


def test_semiconjugacy_detects_mismatch():
    b = catalog.get("brun3")
    conv = cv.to_matrices_graph(b)
    e = b.edges[0]
    wrong = cv.GeneralCFGraph(3, [0], [(0, 0, cv._elem(3, [(0, 2)]), e.cone)] + [(x.src, x.dst, x.matrix, x.cone) for x in b.edges[1:]])
    rep = cv.semiconjugacy_check(wrong, conv, n=20, samples=100)
    assert not rep and "mismatch" in rep.messages[0]


def test_matrices_graph_round_trip():
    c = catalog.get("cassaigne")
    conv = cv.to_matrices_graph(cv.from_matrices_graph(c))
    assert conv.graph.states == [(0, eye(3))]
    assert sorted(e.matrix for e in conv.graph.edges) == sorted(e.matrix for e in c.edges)


def test_jacobi_perron_state_count():
    assert len(cv.to_matrices_graph(catalog.get("jacobi-perron3")).graph.states) == 6


def test_max_states_guard():
    with pytest.raises(GraphError):
        cv.to_matrices_graph(catalog.get("brun3"), max_states=3)


def test_general_step():
    b = catalog.get("brun3")
    y, s = b.step([F(5), F(3), F(1)], 0)
    assert (y, s) == ([F(2), F(3), F(1)], 0)


def test_cone_contains_and_key():
    gens = [[1, 0, 0], [1, 1, 0], [1, 1, 1]]
    assert cv.cone_contains(gens, [3, 2, 1])
    assert cv.cone_contains(gens, [1, 1, 1])
    assert not cv.cone_contains(gens, [1, 2, 3])
    assert cv.cone_key([[2, 2, 2], [1, 0, 0], [1, 1, 0]]) == cv.cone_key(gens)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 10**6), min_size=3, max_size=3))
def test_brun_pieces_cover(x):
    # every positive point lies in at least one Brun piece
    b = catalog.get("brun3")
    assert any(cv.cone_contains(b.cone_generators(e), x) for e in b.edges)
