"""From a finite set of quadratic numbers to a two-letter win-lose graph.

The graph is read off a deterministic automaton of the mirror of a language L
whose limit set is the union of the intervals [(x_0:1), (x_1:1)],
[(x_2:1), (x_3:1)], ...; every input x then lies on a domain boundary.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from . import automata as fa
from .cfgraph import WinLoseGraph
from .exact.algnum import AlgNum, sign, sqrt_rat, squarefree_decompose
from . import winlose2 as wl

BIN = (0, 1)


class RationalNonzeroInput(ValueError):
    pass


class MixedSignsUnresolvable(ValueError):
    pass


class EmptyAfterParityFix(ValueError):
    pass


@dataclass(frozen=True)
class QuadNum:
    """(a + b sqrt(D)) / c with c > 0, D squarefree, gcd(a, b, c) = 1; b = 0 when rational."""

    a: int
    b: int
    c: int
    D: int

    @classmethod
    def make(cls, a: int, b: int = 0, c: int = 1, D: int = 0) -> "QuadNum":
        if c == 0:
            raise ZeroDivisionError("denominator is zero")
        if D < 0:
            raise ValueError("only real quadratic numbers are supported")
        s, D = squarefree_decompose(D) if D else (0, 0)
        b = b * s
        if D == 1:
            a, b, D = a + b, 0, 0
        if b == 0:
            D = 0
        if c < 0:
            a, b, c = -a, -b, -c
        g = gcd(gcd(a, b), c) or 1
        return cls(a // g, b // g, c // g, D)

    @classmethod
    def parse(cls, text: str) -> "QuadNum":
        """Read "(a+b*sqrt(D))/c" and the shorter forms "sqrt(D)", "a/c", "-3+2*sqrt(5)"."""
        t = text.replace(" ", "")
        m = re.fullmatch(r"\((.*)\)/(\d+)", t)
        den = 1
        if m:
            t, den = m.group(1), int(m.group(2))
        a, b, D = Fraction(0), Fraction(0), 0
        for sgn, body in re.findall(r"([+-]?)([^+-]+)", t):
            k = -1 if sgn == "-" else 1
            r = re.fullmatch(r"(?:(\d+(?:/\d+)?)\*?)?sqrt\((\d+)\)", body)
            if r:
                if D and int(r.group(2)) != D:
                    raise ValueError(f"{text!r} mixes two square roots")
                D = int(r.group(2))
                b += k * Fraction(r.group(1) or 1)
            elif re.fullmatch(r"\d+(?:/\d+)?", body):
                a += k * Fraction(body)
            else:
                raise ValueError(f"cannot parse {text!r}")
        l = a.denominator * b.denominator // gcd(a.denominator, b.denominator)
        return cls.make(int(a * l), int(b * l), den * l, D)

    def value(self):
        return (Fraction(self.a) + Fraction(self.b) * sqrt_rat(self.D)) / self.c if self.b else Fraction(self.a, self.c)

    @property
    def rational(self) -> bool:
        return self.b == 0

    def sign(self) -> int:
        return sign(self.value())

    def __neg__(self):
        return QuadNum.make(-self.a, -self.b, self.c, self.D)

    def __str__(self):
        if self.b == 0:
            return str(Fraction(self.a, self.c))
        return f"({self.a}+{self.b}*sqrt({self.D}))/{self.c}"


def as_quad(x) -> QuadNum:
    if isinstance(x, QuadNum):
        return x
    if isinstance(x, str):
        return QuadNum.parse(x)
    if isinstance(x, (int, Fraction)):
        x = Fraction(x)
        return QuadNum.make(x.numerator, 0, x.denominator)
    raise TypeError(f"not a quadratic number: {x!r}")


# expansions --------------------------------------------------------------------------------

def fs_expansion(x) -> tuple[tuple, tuple]:
    """(u, v) with the fully subtractive expansion of (x, 1) equal to u v^omega."""
    x = as_quad(x)
    if x.sign() < 0:
        raise ValueError("expansion needs x >= 0")
    if x.rational and x.a != 0:
        raise RationalNonzeroInput(f"{x} is rational and nonzero; its expansion hits a tie")
    p, q = x.value(), Fraction(1)
    seen: dict = {}
    letters: list = []
    while True:
        r = p / q
        key = _key(r)
        for k, val in seen.get(key, ()):
            if val == r:
                return tuple(letters[:k]), tuple(letters[k:])
        seen.setdefault(key, []).append((len(letters), r))
        s = sign(p - q)
        if s == 0:
            raise RationalNonzeroInput("tie in the expansion")
        if s > 0:
            letters.append(0)
            p = p - q
        else:
            letters.append(1)
            q = q - p


def _key(r):
    return round(float(r), 9)


def lexleq_language(u, v) -> fa.Fsa:
    """Finite words lexicographically below u v^omega, together with the prefixes of u v^omega."""
    u, v = tuple(u), tuple(v)
    if not v:
        raise ValueError("the period must be nonempty")
    if 1 not in u + v:
        # nothing lies below 0^omega
        return fa.empty(BIN)
    word = u + v
    n = len(word)
    sink = n
    delta = {}
    for i, c in enumerate(word):
        nxt = i + 1 if i + 1 < n else len(u)
        delta[(i, c)] = {nxt}
        if c == 1:
            delta[(i, 0)] = {sink}
    delta[(sink, 0)] = {sink}
    delta[(sink, 1)] = {sink}
    return fa.minimize(fa.Fsa(BIN, n + 1, delta, {0}, range(n + 1)))


def quad_language(x) -> fa.Fsa:
    return lexleq_language(*fs_expansion(x))


# the construction ---------------------------------------------------------------------------

@dataclass
class BuildReport:
    inputs: list
    translation: str
    expansions: dict
    language: fa.Fsa = field(repr=False)
    endpoints: list = field(default_factory=list)
    missing: list = field(default_factory=list)
    mirror_identity: bool = False

    @property
    def ok(self) -> bool:
        return not self.missing and self.mirror_identity


def parity_fix(xs) -> tuple[list, str]:
    vals = []
    for x in xs:
        q = as_quad(x)
        if q not in vals:
            vals.append(q)
    note = "none"
    signs = {q.sign() for q in vals} - {0}
    if signs == {-1}:
        vals = [-q for q in vals]
        note = "negated all inputs"
    elif signs == {-1, 1}:
        raise MixedSignsUnresolvable("inputs of both signs; refusing to guess a translation")
    zero = QuadNum.make(0)
    if len(vals) % 2:
        if zero in vals:
            vals.remove(zero)
        else:
            vals.append(zero)
    if not vals:
        raise EmptyAfterParityFix("no numbers left after the parity fix")
    vals.sort(key=lambda q: _SortKey(q.value()))
    return vals, note


class _SortKey:
    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    def __lt__(self, other):
        return sign(self.v - other.v) < 0


def target_language(xs) -> fa.Fsa:
    """Union over i of L_{x_2i} minus L_{x_2i+1} for sorted xs."""
    out = fa.empty(BIN)
    for lo, hi in zip(xs[0::2], xs[1::2]):
        out = fa.union(out, fa.difference(quad_language(lo), quad_language(hi)))
    return out


def automaton_to_winlose(d: fa.Fsa) -> tuple[WinLoseGraph, list]:
    """A trimmed DFA over {0, 1} read as a win-lose graph; returns the graph and its final states."""
    t = fa.trim(d)
    edges = [(s, dst, c) for s, c, dst in t.edges()]
    return WinLoseGraph(2, list(range(t.n)), edges), sorted(t.finals)


def build_winlose(xs) -> tuple[WinLoseGraph, BuildReport]:
    vals, note = parity_fix(xs)
    lang = target_language(vals)
    mir = fa.minimize(fa.mirror(lang))
    g, finals = automaton_to_winlose(mir)
    rep = BuildReport([str(q) for q in vals], note, {str(q): fs_expansion(q) for q in vals}, lang)
    rep.mirror_identity = mirror_identity(g, finals, lang)
    pts: list = []
    for s in g.states:
        v = wl.verdict_for(g, s)
        if isinstance(v, wl.Rational):
            for a, b in v.intervals:
                for p in (a, b):
                    if p not in pts:
                        pts.append(p)
    pts.sort()
    rep.endpoints = pts
    rep.missing = [str(q) for q in vals if wl.ProjPoint2(q.value(), 1) not in pts]
    return g, rep


def mirror_identity(g: WinLoseGraph, finals, lang: fa.Fsa) -> bool:
    """The union over final states of the domain languages equals pref(L)."""
    out = fa.empty(BIN)
    for s in finals:
        out = fa.union(out, wl.binary_domain_language(g, s))
    return fa.equivalent(out, fa.prefix_closure(lang))


def all_endpoints(g: WinLoseGraph) -> list:
    """Boundary points pooled over every state with a finite boundary."""
    pts: list = []
    for s in g.states:
        try:
            a, l = wl.decompose(g, s)
        except wl.DegenerateState:
            continue
        try:
            for p in wl.quadratic_endpoints(wl.boundary_language(l), allow_odd=True):
                if p not in pts:
                    pts.append(p)
        except wl.NotFinitelyManyBranches:
            continue
    pts.sort()
    return pts
