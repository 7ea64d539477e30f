import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st
from scipy.spatial import ConvexHull

from cfdensity import catalog
from cfdensity import convert as cv
from cfdensity import density as dn
from cfdensity import winlose2 as wl
from cfdensity.cfgraph import MatricesGraph
from cfdensity.exact.linalg import det

CASSAIGNE = "1/((x0+x1+x2)(x0+x1)(x1+x2))"


def test_veech_term_examples():
    assert dn.veech_term([[1, 0], [0, 1]]).terms == [(F(1, 4), ((1, 0), (0, 1)))]
    assert dn.veech_term([[1, 0], [0, 1]])([1, 1]) == F(1, 4)
    assert dn.veech_term([[2, 1], [1, 1]]).render(["x", "y"]) == dn.parse_density("1/((2x+y)(x+y))", 2, ["x", "y"]).render(["x", "y"])
    m = [[0, 1, 1], [1, 1, 1], [1, 0, 1]]
    assert dn.veech_term(m) == dn.parse_density(CASSAIGNE, 3)
    with pytest.raises(dn.SingularMatrix):
        dn.veech_term([[1, 1], [1, 1]])


mat3 = st.lists(st.lists(st.integers(0, 4), min_size=3, max_size=3), min_size=3, max_size=3)
pos3 = st.lists(st.integers(1, 9), min_size=3, max_size=3)


@settings(max_examples=40, deadline=None)
@given(mat3, pos3)
def test_veech_matches_simplex_volume(m, x):
    # oracle: volume of {y in m R_+^3 : (y|x) <= 1} as a convex hull of its vertices
    assume(det(m) != 0)
    cols = np.array(m, dtype=float).T
    verts = [np.zeros(3)] + [c / float(c @ np.array(x, dtype=float)) for c in cols]
    vol = ConvexHull(np.array(verts)).volume
    # the stored constant carries an extra factor 1/d (see volume_constant)
    assert math.isclose(3 * float(dn.veech_term(m)(x)), vol, rel_tol=1e-9)


def test_functional_equation_examples():
    c = catalog.get("cassaigne")
    assert dn.check_functional_equation(c, {0: dn.parse_density(CASSAIGNE, 3)})
    bad = dn.check_functional_equation(c, {0: dn.parse_density("1/(x0x1x2)", 3)})
    assert not bad and bad.state == 0
    assert bad.lhs != bad.rhs
    assert bad.lhs == dn.parse_density("1/(x0x1x2)", 3)(bad.point)
    assert dn.check_functional_equation(catalog.get("poincare3"), {0: dn.parse_density("1/(x0x1x2)", 3)})


def test_functional_equation_stable_under_relabeling():
    ext = catalog.get("cassaigne-extension")
    f = {0: dn.parse_density("1/((x+y)(x+y+z)(x+2y+z))", 3, ["x", "y", "z"]),
         1: dn.parse_density("1/((y+z)(x+y+z)(x+2y+z))", 3, ["x", "y", "z"])}
    assert dn.check_functional_equation(ext, f)
    ren = {0: "b", 1: "a"}
    g = MatricesGraph(3, ["a", "b"], [(ren[e.src], ren[e.dst], e.matrix) for e in ext.edges])
    assert dn.check_functional_equation(g, {ren[k]: v for k, v in f.items()})
    # swapping the densities breaks it
    assert not dn.check_functional_equation(ext, {0: f[1], 1: f[0]})


def test_parse_render_round_trip():
    for text in [CASSAIGNE, "1/(x0*x1)", "2/((x0+2x1)x1) + 1/(x0(x0+x1))"]:
        dim = 3 if "x2" in text else 2
        f = dn.parse_density(text, dim)
        assert dn.parse_density(f.render(), dim) == f
    with pytest.raises(ValueError):
        dn.parse_density("1/(x0^2)", 2)


def test_simplify_merges_terms():
    f = dn.parse_density("1/(x(x+y)) + 1/(y(x+y))", 2, ["x", "y"])
    assert len(f.terms) == 2
    assert f.simplify().render(["x", "y"]) == "1/(x*y)"


@settings(max_examples=60, deadline=None)
@given(pos3, st.fractions(min_value=F(1, 50), max_value=50))
def test_scaling_homogeneity(x, a):
    f = dn.parse_density(CASSAIGNE, 3) + dn.parse_density("1/(x0x1x2)", 3)
    assert f([a * v for v in x]) == a ** -3 * f(x)


def test_pushforward_identity_conversion():
    c = catalog.get("cassaigne")
    conv = cv.to_matrices_graph(cv.from_matrices_graph(c))
    (state,) = conv.graph.states
    f = {state: dn.parse_density(CASSAIGNE, 3)}
    pf = dn.pushforward_density(cv.from_matrices_graph(c), conv, f)
    ((cell, expr),) = pf[0]
    assert sorted(cell) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    assert expr == f[state]


def _nonrational_series(state):
    v = wl.decide_rational(catalog.get("nonrational"))[state]
    (s,) = v.series
    return s


def test_eval_series_zero_terms():
    s = _nonrational_series(2)
    val, tail = dn.eval_series(s, [1, 1], 0)
    assert val == 0 and tail > 0
    with pytest.raises(ValueError):
        dn.eval_series(s, [0, 1], 3)


@pytest.mark.parametrize("n", [1, 10, 100])
def test_eval_series_tail_bound_brackets_longer_sums(n):
    s = _nonrational_series(3)
    val, tail = dn.eval_series(s, [1, 1], n)
    more, _ = dn.eval_series(s, [1, 1], n + 200)
    assert val <= more <= val + tail
