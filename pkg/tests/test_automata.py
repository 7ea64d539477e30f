from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from cfdensity import automata as fa
from cfdensity import catalog
from cfdensity.cfgraph import domain_language, tr

SIGMA = (0, 1)


def words(max_len):
    out = [()]
    for k in range(1, max_len + 1):
        out += list(product(SIGMA, repeat=k))
    return out


W8 = words(8)


@st.composite
def nfas(draw, max_states=4):
    n = draw(st.integers(1, max_states))
    delta = {}
    for s in range(n):
        for a in SIGMA:
            ts = draw(st.sets(st.integers(0, n - 1), max_size=2))
            if ts:
                delta[(s, a)] = ts
    finals = draw(st.sets(st.integers(0, n - 1)))
    return fa.Fsa(SIGMA, n, delta, {0}, finals)


def lang(a, ws=W8):
    return {w for w in ws if a.accepts(w)}


# brute-force comparisons -------------------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(nfas(), nfas())
def test_boolean_ops_match_enumeration(a, b):
    A, B = lang(a), lang(b)
    assert lang(fa.union(a, b)) == A | B
    assert lang(fa.intersection(a, b)) == A & B
    assert lang(fa.difference(a, b)) == A - B
    assert lang(fa.complement(a)) == set(W8) - A


@settings(max_examples=60, deadline=None)
@given(nfas(), nfas())
def test_concat_matches_enumeration(a, b):
    A, B = lang(a), lang(b)
    got = lang(fa.concat(a, b))
    assert got == {w for w in W8 if any(w[:i] in A and w[i:] in B for i in range(len(w) + 1))}


@settings(max_examples=60, deadline=None)
@given(nfas())
def test_mirror_and_prefix_closure(a):
    A = lang(a)
    assert lang(fa.mirror(a)) == {w[::-1] for w in A}
    assert fa.equivalent(fa.mirror(fa.mirror(a)), a)
    ext = words(a.n)
    assert lang(fa.prefix_closure(a)) == {w for w in W8 if any(a.accepts(w + v) for v in ext)}
    p = fa.prefix_closure(a)
    assert fa.equivalent(fa.prefix_closure(p), p)
    assert fa.is_prefix_stable(p)


@settings(max_examples=60, deadline=None)
@given(nfas())
def test_minimize_is_canonical(a):
    m = fa.minimize(a)
    assert m.deterministic and m.is_complete()
    assert lang(m) == lang(a)
    assert fa.minimize(m) == m
    assert fa.minimize(fa.determinize(a)) == m
    assert m.n <= fa.determinize(a).n


@settings(max_examples=40, deadline=None)
@given(nfas())
def test_prune_inf_definition(a):
    # w survives iff it is a prefix of arbitrarily long words: an extension of length in [n, 2n] exists
    n = a.n
    got = lang(fa.prune_inf(a), words(6))
    ext = [v for v in words(2 * n) if len(v) >= n]
    assert got == {w for w in words(6) if any(a.accepts(w + v) for v in ext)}


# examples ----------------------------------------------------------------------------------

def test_minimize_examples():
    nfa = fa.Fsa(SIGMA, 2, {(0, 0): {0, 1}, (0, 1): {0}}, {0}, {1})  # (0|1)*0
    m = fa.minimize(nfa)
    assert m.n == 2 and len(fa.live_states(m)) == 2
    assert lang(m) == {w for w in W8 if w and w[-1] == 0}
    already = fa.minimize(fa.from_regex("(01)*"))
    assert fa.minimize(already) == already


def test_extension_graph_minimizes_to_one_state():
    mg = catalog.get("cassaigne-extension")
    # every word labels a path, so the minimal automaton is the single state of Sigma^*
    assert fa.minimize(mg.as_fsa()).n == 1


def test_combine_examples():
    sigma_star = fa.universal(SIGMA)
    l = fa.from_regex("0(10)*1")
    assert fa.equivalent(fa.intersection(sigma_star, l), l)
    assert fa.equivalent(fa.complement(fa.empty(SIGMA)), sigma_star)
    with pytest.raises(ValueError):
        fa.union(l, fa.universal((0, 1, 2)))


def test_mirror_and_prefix_examples():
    assert lang(fa.mirror(fa.from_words([(0, 1)], SIGMA))) == {(1, 0)}
    assert lang(fa.prefix_closure(fa.from_words([(0, 1)], SIGMA))) == {(), (0,), (0, 1)}
    assert fa.equivalent(fa.prefix_closure(fa.universal(SIGMA)), fa.universal(SIGMA))


def test_prune_inf_examples():
    got = fa.prune_inf(fa.prefix_closure(fa.from_regex("(01)*001")))
    assert fa.equivalent(got, fa.prefix_closure(fa.from_regex("(01)*")))
    assert fa.is_empty(fa.prune_inf(fa.from_words([(0, 1), (1,)], SIGMA)))
    assert fa.equivalent(fa.prune_inf(fa.from_regex("0*1")), fa.from_regex("0*"))


def test_lex_extremal_examples():
    sigma_star = fa.universal(SIGMA)
    assert fa.equivalent(fa.lex_extremal(sigma_star, "min"), fa.from_regex("0*"))
    assert fa.equivalent(fa.lex_extremal(sigma_star, "max"), fa.from_regex("1*"))
    l = fa.prefix_closure(fa.from_regex("1(00)*"))
    expected = fa.prefix_closure(fa.from_regex("10*"))
    assert fa.equivalent(fa.lex_extremal(l, "min"), expected)
    assert fa.equivalent(fa.lex_extremal(l, "max"), expected)
    assert fa.lasso_word(l, "min") == ((1,), (0,))
    with pytest.raises(fa.EmptyLanguage):
        fa.lex_extremal(fa.from_words([(0,)], SIGMA))


def _cylinder(w):
    # projective interval [lo, hi] of x0 / (x0 + x1) over the cone of the word's matrix product
    from fractions import Fraction

    lo, hi = Fraction(0), Fraction(1)
    for c in w:
        # 0 keeps the upper half (x0 >= x1), 1 the lower one, in the Stern-Brocot refinement
        mid = _mediant(lo, hi)
        lo, hi = (mid, hi) if c == 0 else (lo, mid)
    return lo, hi


def _mediant(a, b):
    from fractions import Fraction

    # t = x0 / (x0 + x1); mediant of the rays (t, 1 - t)
    pa = (a.numerator, a.denominator - a.numerator)
    pb = (b.numerator, b.denominator - b.numerator)
    s = (pa[0] + pb[0], pa[1] + pb[1])
    return Fraction(s[0], s[0] + s[1])


def test_relations_automaton_matches_cylinders():
    rel = fa.relations_automaton()
    for k in range(0, 7):
        for u in product(SIGMA, repeat=k):
            for v in product(SIGMA, repeat=k):
                (a, b), (c, d) = _cylinder(u), _cylinder(v)
                touching = max(a, c) <= min(b, d)
                assert rel.accepts(tuple(zip(u, v))) == touching, (u, v)


def test_relations_product_examples():
    rel = fa.relations_automaton()
    for n in range(6):
        assert rel.accepts(((0, 0), (0, 1)) + ((1, 0),) * n)
    p = fa.relations_product(fa.empty(SIGMA), fa.universal(SIGMA))
    assert fa.is_empty(p)
    g = catalog.get("golden")
    from cfdensity import winlose2 as wl

    _, l = wl.decompose(g, 0)
    proj = fa.project_first(fa.relations_product(l, fa.prefix_closure(fa.complement(l))))
    assert fa.equivalent(proj, fa.prefix_closure(fa.from_regex("(01)*001")))


def test_decompose_ab_examples():
    a, b = fa.decompose_ab(fa.universal(SIGMA))
    assert lang(a) == {()} and fa.is_empty(b)
    fin = fa.from_words([(0, 1), (1,)], SIGMA)
    a, b = fa.decompose_ab(fin)
    assert fa.is_empty(a) and fa.equivalent(b, fin)
    from cfdensity import winlose2 as wl

    d0 = wl.binary_domain_language(catalog.get("golden"), 0)
    a, _ = fa.decompose_ab(d0)
    rebuilt = fa.prefix_closure(fa.concat(a, fa.universal(SIGMA)))
    assert fa.equivalent(rebuilt, d0)


def test_residual_decomposition_extension():
    ext = catalog.get("cassaigne-extension")
    q = catalog.get("cassaigne")
    target = domain_language(q, 0)
    m0, m1 = (tr(e.matrix) for e in q.edges)
    for state, letter in ((0, m0), (1, m1)):
        d = domain_language(ext, state)
        w = fa.residual_decomposition(d, {"D0'": fa.Fsa(target.alphabet, target.n, target.delta, target.initial, target.finals)})
        got = fa.minimize(w["D0'"])
        assert got.words(4) == {(letter,)}
    w = fa.residual_decomposition(target, {"same": target})
    assert w["same"].words(5) == {()}


def test_regex_and_sccs():
    a = fa.from_regex("0*1(01)*")
    assert lang(a, words(5)) == {w for w in words(5) if _matches(w)}
    sccs = fa.nontrivial_sccs(fa.trim(a))
    assert len(sccs) == 2
    assert fa.is_finite(fa.from_words([(0, 1)], SIGMA))
    assert not fa.is_finite(a)


def _matches(w):
    import re

    return re.fullmatch(r"0*1(01)*", "".join(map(str, w))) is not None


def test_dot_export():
    text = fa.from_regex("01").to_dot()
    assert text.startswith("digraph") and "->" in text
