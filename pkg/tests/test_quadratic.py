from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from cfdensity import automata as fa
from cfdensity import quadratic as qd
from cfdensity import winlose2 as wl
from cfdensity.exact import sqrt_rat

Q = qd.QuadNum


def test_expansion_examples():
    assert qd.fs_expansion("sqrt(2)") == ((), (0, 1, 1, 0))
    assert qd.fs_expansion(0) == ((), (1,))
    u, v = qd.fs_expansion("(1+sqrt(5))/2")
    assert wl.endpoint(u, v) == wl.ProjPoint2((1 + sqrt_rat(5)) / 2, 1)
    with pytest.raises(qd.RationalNonzeroInput):
        qd.fs_expansion(3)
    with pytest.raises(ValueError):
        qd.fs_expansion("-1+sqrt(2)-1")


def test_lexleq_extremes():
    assert fa.equivalent(qd.lexleq_language((), (1,)), fa.universal((0, 1)))
    assert fa.is_empty(qd.lexleq_language((), (0,)))
    with pytest.raises(ValueError):
        qd.lexleq_language((0,), ())


def test_parity_fix():
    vals, note = qd.parity_fix(["sqrt(2)"])
    assert vals == [Q.make(0), Q.make(0, 1, 1, 2)] and note == "none"
    vals, _ = qd.parity_fix(["0", "sqrt(2)", "sqrt(3)"])
    assert vals == [Q.make(0, 1, 1, 2), Q.make(0, 1, 1, 3)]
    vals, note = qd.parity_fix(["-sqrt(2)", "-sqrt(3)"])
    assert note == "negated all inputs" and vals[0] == Q.make(0, 1, 1, 2)
    with pytest.raises(qd.EmptyAfterParityFix):
        qd.parity_fix([])
    with pytest.raises(qd.EmptyAfterParityFix):
        qd.parity_fix(["0"])
    with pytest.raises(qd.MixedSignsUnresolvable):
        qd.parity_fix(["sqrt(2)", "-sqrt(3)"])


def test_parse_and_str():
    assert Q.parse("-3+2*sqrt(5)") == Q.make(-3, 2, 1, 5)
    assert Q.parse("(2+2*sqrt(8))/4") == Q.make(1, 2, 2, 2)
    assert Q.parse("sqrt(4)") == Q.make(2)
    assert str(Q.make(1, 1, 2, 5)) == "(1+1*sqrt(5))/2"
    assert Q.parse(str(Q.make(-7, 3, 5, 6))) == Q.make(-7, 3, 5, 6)
    with pytest.raises(ValueError):
        Q.parse("sqrt(2)+sqrt(3)")
    with pytest.raises(ValueError):
        Q.parse("pi")


def test_build_sqrt2():
    g, rep = qd.build_winlose(["sqrt(2)"])
    assert rep.ok and rep.mirror_identity and not rep.missing
    assert wl.ProjPoint2(sqrt_rat(2), 1) in rep.endpoints
    assert qd.all_endpoints(g) == rep.endpoints


quads = st.builds(
    lambda a, b, c, D: Q.make(a, b, c, D),
    st.integers(0, 4), st.integers(1, 4), st.integers(1, 4), st.sampled_from([2, 3, 5, 6, 7]),
)


def _below(w, u, v):
    # oracle: w is a prefix of u v^omega or is smaller at the first difference
    n = len(w)
    ref = (u + v * (n // len(v) + 2))[:n]
    for a, b in zip(w, ref):
        if a != b:
            return a < b
    return True


@settings(max_examples=40, deadline=None)
@given(quads)
def test_expansion_endpoint_recovers_x(x):
    u, v = qd.fs_expansion(x)
    assert wl.endpoint(u, v) == wl.ProjPoint2(x.value(), 1)


@settings(max_examples=30, deadline=None)
@given(quads)
def test_lexleq_language_matches_word_order(x):
    u, v = qd.fs_expansion(x)
    lang = qd.lexleq_language(u, v)
    for k in range(8):
        for w in product((0, 1), repeat=k):
            assert lang.accepts(w) == _below(w, u, v), w
