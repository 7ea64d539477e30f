from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from cfdensity import automata as fa
from cfdensity import catalog
from cfdensity import cfgraph as cg
from cfdensity.exact import sqrt_rat


def fs2():
    return catalog.get("fully-subtractive2").to_matrices()


def test_winlose_to_matrices_examples():
    g = catalog.get("cassaigne-winlose")
    mg = cg.winlose_to_matrices(g)
    assert len(mg.edges) == 6
    # state 0 plays letters 1 and 2; winning with 1 subtracts x1 from x2
    e = mg.out_edges(0)[0]
    assert (e.dst, e.matrix) == (1, ((1, 0, 0), (0, 1, 0), (0, 1, 1)))
    assert {e.matrix for e in fs2().edges} == {cg.ZERO_BAR, cg.ONE_BAR}


def test_winlose_step_subtracts_the_winner():
    g = catalog.get("golden")
    y, t, j = g.step([F(3), F(2)], 0)
    assert (y, t, j) == ([F(1), F(2)], 1, 1)


@pytest.mark.parametrize("name", ["cassaigne", "cassaigne-extension", "poincare3", "reverse", "dim1"])
def test_catalog_partitions(name):
    assert cg.validate_cone_partition(catalog.get(name))


def test_partition_reports_gap():
    rep = cg.validate_cone_partition(cg.MatricesGraph(2, [0], [(0, 0, cg.ZERO_BAR)]))
    assert not rep and rep.state == 0 and not rep.probabilistic
    # the witness really is outside the only cone
    assert not cg.in_cone(cg.ZERO_BAR, rep.witness)
    both = cg.MatricesGraph(2, [0], [(0, 0, cg.ZERO_BAR), (0, 0, cg.ONE_BAR)])
    assert cg.validate_cone_partition(both)
    assert not cg.validate_cone_partition(catalog.euclid_truncated(3))


def test_partition_reports_overlap():
    g = cg.MatricesGraph(2, [0], [(0, 0, cg.ZERO_BAR), (0, 0, cg.ONE_BAR), (0, 0, ((2, 1), (1, 1)))])
    rep = cg.validate_cone_partition(g)
    assert not rep and "overlap" in rep.messages[0]


def test_partition_randomized_in_dimension_four():
    rep = cg.validate_cone_partition(cg.fully_subtractive(4).to_matrices())
    assert rep and rep.probabilistic


def test_expand_sqrt2_is_periodic():
    g = fs2()
    e = cg.expand_point(g, [sqrt_rat(2), 1], 0, nmax=50)
    word = lambda ks: cg.bar_word([g.edges[k].matrix for k in ks])
    assert word(e.preperiod) == ""
    assert word(e.period) == "0110"


def test_expand_rational_points():
    g = fs2()
    e = cg.expand_point(g, [0, 1], 0)
    assert e.preperiod == [] and len(e.period) == 1
    assert e.matrices == [cg.ONE_BAR]
    with pytest.raises(cg.BoundaryHit) as info:
        cg.expand_point(g, [3, 1], 0)
    assert len(info.value.prefix) == 2 and sorted(info.value.edges) == [0, 1]


def test_expand_stops_at_nmax():
    e = cg.expand_point(fs2(), [sqrt_rat(3), 1], 0, nmax=3)
    assert e.period is None and len(e.edges) == 3
    assert cg.expand_point(fs2(), [sqrt_rat(3), 1], 0).period == [1, 0, 1]


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 10**6), st.integers(1, 10**6))
def test_expansion_product_recovers_point(a, b):
    # the cone of the product of the letters read so far contains x; irrational so no boundary hit
    g = fs2()
    x = [a + sqrt_rat(2), F(b)]
    e = cg.expand_point(g, x, 0, nmax=8)
    m = cg.eye(2)
    for k in e.edges:
        m = cg.matmul(m, g.edges[k].matrix)
    assert cg.in_cone(m, x)


def test_domain_language_examples():
    l = cg.domain_language(catalog.get("cassaigne"), 0)
    assert fa.equivalent(l, fa.universal(l.alphabet))
    ext = catalog.get("cassaigne-extension")
    d1 = cg.domain_language(ext, 1)
    m0, m1 = cg.tr(catalog.M0), cg.tr(catalog.M1)
    # a path into state 1 ends with M1, so its domain word starts with tM1
    assert d1.accepts((m1,)) and not d1.accepts((m0,))
    assert d1.accepts((m1, m0, m0))


def test_graph_errors():
    with pytest.raises(cg.GraphError):
        cg.MatricesGraph(2, [0], [(0, 1, cg.ZERO_BAR)])
    with pytest.raises(cg.GraphError):
        cg.MatricesGraph(2, [0], [(0, 0, ((1, 1), (1, 1)))])
    with pytest.raises(cg.GraphError):
        cg.MatricesGraph(2, [0], [(0, 0, ((1, -1), (0, 1)))])
    with pytest.raises(cg.GraphError):
        cg.MatricesGraph(2, [0], [(0, 0, ((1, 0, 0), (0, 1, 0), (0, 0, 1)))])
    with pytest.raises(cg.GraphError):
        cg.MatricesGraph(1, [0], [])
    with pytest.raises(cg.GraphError):
        cg.WinLoseGraph(2, [0], [(0, 0, 0), (0, 0, 0)])
    with pytest.raises(cg.GraphError):
        cg.WinLoseGraph(2, [0], [(0, 0, 2)])


def test_dot_and_repr():
    g = catalog.get("cassaigne")
    assert g.to_dot().startswith("digraph") and repr(g) == "MatricesGraph(dim=3, states=1, edges=2)"
