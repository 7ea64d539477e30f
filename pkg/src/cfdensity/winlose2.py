"""Two-letter win-lose graphs: boundaries of domains and the rationality decision.

Words are over {0, 1} with 0 = [[1,1],[0,1]] and 1 = [[1,0],[1,1]]; a word
w = w_1 ... w_n denotes the cone m_{w_1} ... m_{w_n} R_+^2. Projective points
(a:b) are ordered by (x:y) <= (a:b) iff y a <= x b, which runs from (1:0) to
(0:1) and matches the lexicographic order of words.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx

from . import automata as fa
from .cfgraph import ONE_BAR, ZERO_BAR, GraphError, WinLoseGraph, eye, tr
from .density import DensityExpr, SeriesDensity, veech_term
from .domains import lasso_families, word_product
from .exact.algnum import AlgNum, sign, sqrt_rat

BIN = (0, 1)
LETTER = {0: ZERO_BAR, 1: ONE_BAR}


class DegenerateState(ValueError):
    """The domain of a state has zero Lebesgue measure."""


class NotFinitelyManyBranches(ValueError):
    pass


class OddEndpointCount(ValueError):
    pass


# projective points ---------------------------------------------------------------------

@functools.total_ordering
class ProjPoint2:
    """Normalized point (a:b) of the projective line: b = 1, or a = 1 when b = 0."""

    __slots__ = ("a", "b")

    def __init__(self, a, b):
        if a == 0 and b == 0:
            raise ValueError("(0:0) is not a projective point")
        if b != 0:
            a, b = a / b if isinstance(a, AlgNum) or isinstance(b, AlgNum) else Fraction(a) / Fraction(b), Fraction(1)
        else:
            a, b = Fraction(1), Fraction(0)
        self.a = _tidy(a)
        self.b = b

    def vector(self) -> tuple:
        return (self.a, self.b)

    def __eq__(self, other):
        if not isinstance(other, ProjPoint2):
            return NotImplemented
        return sign(self.a - other.a) == 0 and self.b == other.b

    def __lt__(self, other):
        # (x:y) < (a:b) iff y a < x b
        return sign(self.b * other.a - self.a * other.b) < 0

    def __hash__(self):
        return hash((float(self.a), float(self.b)))

    def __repr__(self):
        return f"({self.a}:{self.b})"


def _tidy(a):
    if isinstance(a, Fraction) and a.denominator == 1:
        return Fraction(a.numerator)
    return a


# alphabets -----------------------------------------------------------------------------

def to_binary(a: fa.Fsa) -> fa.Fsa:
    """Rewrite an automaton over the 2x2 letters 0, 1 and I into one over {0, 1}.

    The identity letter comes from states with a single outgoing letter; it
    moves nothing and is read as an empty transition.
    """
    names = {ZERO_BAR: 0, ONE_BAR: 1, eye(2): None}
    eps: dict = {}
    delta: dict = {}
    for (s, sym), ts in a.delta.items():
        if sym not in names:
            raise GraphError(f"letter {sym} is not a two-letter win-lose matrix")
        if names[sym] is None:
            eps.setdefault(s, set()).update(ts)
        else:
            delta.setdefault((s, names[sym]), set()).update(ts)

    def closure(states):
        out = set(states)
        stack = list(states)
        while stack:
            s = stack.pop()
            for t in eps.get(s, ()):
                if t not in out:
                    out.add(t)
                    stack.append(t)
        return out

    new_delta = {}
    for s in range(a.n):
        for c in BIN:
            ts = set()
            for p in closure({s}):
                for t in delta.get((p, c), ()):
                    ts |= closure({t})
            if ts:
                new_delta[(s, c)] = ts
    finals = {s for s in range(a.n) if closure({s}) & a.finals}
    return fa.minimize(fa.Fsa(BIN, a.n, new_delta, closure(a.initial), finals))


def binary_domain_language(g: WinLoseGraph, state) -> fa.Fsa:
    return to_binary(g.to_matrices().domain_language(state))


def word_matrix(word):
    return word_product([LETTER[c] for c in word], 2)


# boundary -------------------------------------------------------------------------------

def boundary_language(l: fa.Fsa) -> fa.Fsa:
    """Language whose limit set is the boundary of the limit set of the prefix-stable l."""
    l = fa.minimize(l)
    if fa.is_empty(l):
        return fa.empty(BIN)
    comp = fa.complement(l)
    out = fa.union(fa.lex_extremal(l, "min"), fa.lex_extremal(l, "max"))
    if not fa.is_empty(comp):
        p = fa.project_first(fa.relations_product(l, fa.prefix_closure(comp)), BIN)
        if not fa.is_empty(p) and not fa.is_finite(p):
            out = fa.union(out, fa.prune_inf(p))
    return fa.minimize(out)


@dataclass
class SccInfo:
    states: frozenset
    loop: bool
    terminal: bool
    word: tuple = ()  # cycle label read from the smallest state when loop


def scc_report(d: fa.Fsa) -> tuple[fa.Fsa, list]:
    """Nontrivial strongly connected components of the trimmed automaton."""
    t = fa.trim(fa.minimize(d))
    out = []
    for comp in fa.nontrivial_sccs(t):
        inner = [(s, c) for s in comp for c in BIN if t.step(s, c) in comp]
        outer = [(s, c) for s in comp for c in BIN if t.step(s, c) is not None and t.step(s, c) not in comp]
        loop = len(inner) == len(comp)
        word = _cycle_word(t, min(comp), comp) if loop else ()
        out.append(SccInfo(frozenset(comp), loop, not outer, word))
    return t, out


def _cycle_word(t, s, comp):
    word = []
    cur = s
    while True:
        c = next(c for c in BIN if t.step(cur, c) in comp)
        word.append(c)
        cur = t.step(cur, c)
        if cur == s:
            return tuple(word)


def branches(boundary: fa.Fsa) -> list:
    """Pairs (u, v) with the boundary equal to pref of the union of the u v^*."""
    t, sccs = scc_report(boundary)
    if any(not (c.loop and c.terminal) for c in sccs):
        raise NotFinitelyManyBranches("a strongly connected component is not a terminal loop")
    if not t.initial:
        return []
    on = {s: c.states for c in sccs for s in c.states}
    out = []
    (start,) = t.initial

    def walk(s, u):
        if s in on:
            out.append((u, _cycle_word(t, s, on[s])))
            return
        for c in BIN:
            nxt = t.step(s, c)
            if nxt is not None:
                walk(nxt, u + (c,))

    walk(start, ())
    return out


def perron_vector(m) -> tuple:
    """Dominant eigenvector of a nonnegative 2x2 matrix, exact in Q or Q(sqrt(disc))."""
    (a, b), (c, d) = m
    disc = (a - d) ** 2 + 4 * b * c
    lam = (Fraction(a + d) + sqrt_rat(disc)) / 2
    if b != 0:
        v = (Fraction(b), lam - a)
    elif c != 0:
        v = (lam - d, Fraction(c))
    elif a != d:
        v = (Fraction(1), Fraction(0)) if a > d else (Fraction(0), Fraction(1))
    else:
        raise ValueError("scalar loop matrix has no dominant direction")
    return v


def endpoint(u, v) -> ProjPoint2:
    """The limit direction of m_u m_v^n R_+^2."""
    w = perron_vector(word_matrix(v))
    mu = word_matrix(u)
    return ProjPoint2(mu[0][0] * w[0] + mu[0][1] * w[1], mu[1][0] * w[0] + mu[1][1] * w[1])


def quadratic_endpoints(boundary: fa.Fsa, allow_odd: bool = False) -> list:
    pts: list = []
    for u, v in branches(boundary):
        p = endpoint(u, v)
        if p not in pts:
            pts.append(p)
    pts.sort()
    if len(pts) % 2 and not allow_odd:
        raise OddEndpointCount(f"{len(pts)} endpoints: {pts}")
    return pts


def interval_density(points) -> DensityExpr:
    out = DensityExpr(2, [])
    for p, q in zip(points[0::2], points[1::2]):
        out = out + veech_term(((p.a, q.a), (p.b, q.b)))
    return out


# classification -------------------------------------------------------------------------

@dataclass
class Finite:
    n: int

    @property
    def finite(self) -> bool:
        return True


@dataclass
class Infinite:
    isolated_witness: tuple | None
    perfect_certified: bool

    @property
    def finite(self) -> bool:
        return False


def classify_boundary(boundary: fa.Fsa):
    t, sccs = scc_report(boundary)
    if all(c.loop and c.terminal for c in sccs):
        return Finite(len(quadratic_endpoints(boundary, allow_odd=True)))
    certified = True
    witness = None
    for comp in sccs:
        if not (comp.loop and comp.terminal):
            continue
        ok, w = _terminal_loop_two_sided(t, comp)
        if not ok:
            certified = False
            if w is not None and witness is None:
                witness = w
    return Infinite(witness, certified)


def _paths_to(t, target) -> dict:
    """A shortest word reaching each state (breadth first)."""
    (start,) = t.initial
    seen = {start: ()}
    queue = [start]
    for s in queue:
        for c in BIN:
            n = t.step(s, c)
            if n is not None and n not in seen:
                seen[n] = seen[s] + (c,)
                queue.append(n)
    return seen


def _terminal_loop_two_sided(t, comp: SccInfo):
    """Check that every point w c' c^omega of a terminal c-loop is also reached as w c c'^omega."""
    if len(set(comp.word)) != 1:
        # a quadratic point inside its own cylinder with no other boundary word around it
        reach = _paths_to(t, comp.states)
        s = min(comp.states, key=lambda q: (len(reach.get(q, ())), q))
        return False, reach.get(s, ()) + _cycle_word(t, s, comp.states)
    c = comp.word[0]
    other = 1 - c
    # states that follow c-transitions into the loop
    feeders = set(comp.states)
    changed = True
    while changed:
        changed = False
        for s in range(t.n):
            if s not in feeders and t.step(s, c) in feeders:
                feeders.add(s)
                changed = True
    reach = _paths_to(t, feeders)
    for x in sorted(range(t.n)):
        y = t.step(x, other)
        if y is None or y not in feeders or x not in reach:
            continue
        # the point w other c^omega for w leading to x; its mirror is w c other^omega
        z = t.step(x, c)
        seen = set()
        while z is not None and z not in seen:
            seen.add(z)
            z = t.step(z, other)
        if z is None:
            return False, reach[x] + (other,)
    return True, None


# the decision algorithm -----------------------------------------------------------------

@dataclass
class Rational:
    intervals: list
    density: DensityExpr
    boundary: fa.Fsa = field(repr=False, default=None)

    rational = True


@dataclass
class NonRational:
    witness: frozenset
    series: list | None
    finite_part: DensityExpr | None = None
    boundary: fa.Fsa = field(repr=False, default=None)

    rational = False


@dataclass
class Degenerate:
    reason: str

    rational = None


def decompose(g: WinLoseGraph, state):
    """(A, L) with the domain language of ``state`` equal to A{0,1}^* up to measure zero, L = pref(A{0,1}^*)."""
    dl = binary_domain_language(g, state)
    a, _ = fa.decompose_ab(dl)
    if fa.is_empty(a):
        raise DegenerateState(f"state {state}: the domain language has no full-residual state")
    l = fa.prefix_closure(fa.concat(a, fa.universal(BIN)))
    return a, l


def verdict_for(g: WinLoseGraph, state):
    if g.dim != 2:
        raise GraphError("the rationality decision is for two-letter graphs")
    try:
        a, l = decompose(g, state)
    except DegenerateState as e:
        return Degenerate(str(e))
    bd = boundary_language(l)
    t, sccs = scc_report(bd)
    bad = [c for c in sccs if not (c.loop and c.terminal)]
    if not bad:
        pts = quadratic_endpoints(bd)
        ivs = list(zip(pts[0::2], pts[1::2]))
        return Rational(ivs, interval_density(pts), bd)
    series, finite = series_of(a)
    return NonRational(bad[0].states, series, finite, bd)


def decide_rational(g: WinLoseGraph) -> dict:
    return {s: verdict_for(g, s) for s in g.states}


def series_of(a: fa.Fsa):
    """Series families u v^n w of the cones of A, with the finite words summed apart."""
    try:
        fams = lasso_families(a)
    except ValueError:
        return None, None
    series = []
    finite = DensityExpr(2, [])
    ident = ((1, 0), (0, 1))
    for u, v, w in fams:
        if not v:
            finite = finite + veech_term(word_matrix(u))
            continue
        n0 = 0
        while len(u) >= len(v) and tuple(u[len(u) - len(v):]) == tuple(v):
            u = u[: len(u) - len(v)]
            n0 += 1
        series.append(
            SeriesDensity(
                tuple(LETTER[c] for c in u), tuple(LETTER[c] for c in v), tuple(LETTER[c] for c in w), ident, n0
            )
        )
    return series, finite


def all_rational_densities(g: WinLoseGraph) -> dict | None:
    vs = decide_rational(g)
    if all(isinstance(v, Rational) for v in vs.values()):
        return {s: v.density for s, v in vs.items()}
    return None
