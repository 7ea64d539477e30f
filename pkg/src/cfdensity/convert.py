"""General piecewise-linear continued fraction algorithms and their conversion to matrices graphs.

A general graph has edges (i, j, m, D): on the cone D R_+^c at state i the map
sends x to m^{-1} x and moves to state j. The conversion tracks, for each
reached state, a simplicial cone J of points and refines the edge cones so
that every new edge is labelled by a nonnegative integer matrix.
"""

from __future__ import annotations

import functools
import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Hashable, Sequence

from .cfgraph import BoundaryHit, GraphError, MatricesGraph, Report, eye, matmul
from .exact.algnum import sign
from .exact.linalg import det, inverse, mat_mul, mat_vec
from .geometry import (
    chart,
    clip_convex,
    cone_section,
    extremal_rays,
    fan_triangulation,
    normalize_generator,
    polygon_area,
)


@dataclass(frozen=True)
class GeneralEdge:
    src: Hashable
    dst: Hashable
    matrix: tuple  # d x d, x = m x'
    cone: tuple  # d x c, columns generate the piece


class GeneralCFGraph:
    def __init__(self, dim: int, states: Sequence, edges: Sequence, name: str = ""):
        self.dim = dim
        self.states = list(states)
        self.name = name
        self.edges = []
        for e in edges:
            if not isinstance(e, GeneralEdge):
                e = GeneralEdge(e[0], e[1], _tt(e[2]), _tt(e[3]))
            if det(e.matrix) == 0:
                raise GraphError(f"edge {e.src}->{e.dst}: singular matrix")
            self.edges.append(e)

    def out_edges(self, s):
        return [e for e in self.edges if e.src == s]

    def cone_generators(self, e: GeneralEdge) -> list:
        return [list(c) for c in zip(*e.cone)]

    def step(self, x, s):
        """Exact step (x, s) -> (m^{-1} x, j); raises BoundaryHit when several pieces contain x."""
        hits = [e for e in self.out_edges(s) if cone_contains(self.cone_generators(e), x)]
        if len(hits) != 1:
            if not hits:
                raise GraphError(f"point {x} not covered at state {s}")
            raise BoundaryHit([], x, s, [self.edges.index(e) for e in hits])
        e = hits[0]
        return mat_vec(inverse(e.matrix), list(x)), e.dst


def _tt(m):
    return tuple(tuple(r) for r in m)


def cone_contains(gens, x) -> bool:
    """Closed membership of x in the cone spanned by gens (exact, d <= 3)."""
    d = len(x)
    if len(gens) == d:
        m = [[g[i] for g in gens] for i in range(d)]
        if det(m) != 0:
            return all(sign(a) >= 0 for a in mat_vec(inverse(m), list(x)))
    sec = cone_section(gens)
    if d == 2:
        t = Fraction(x[0]) / (x[0] + x[1])
        return sec[0] <= t <= sec[1]
    from .geometry import point_in_convex

    return point_in_convex(chart(x), sec)


# conversion ----------------------------------------------------------------------------

def _sort_desc(vectors) -> list:
    def cmp(u, w):
        for a, b in zip(u, w):
            s = sign(a - b)
            if s:
                return -s
        return 0

    return sorted(vectors, key=functools.cmp_to_key(cmp))


def cone_key(gens) -> tuple:
    """Canonical d x d matrix of a simplicial cone: primitive columns, decreasing order."""
    cols = _sort_desc([normalize_generator(g) for g in gens])
    d = len(cols)
    return tuple(tuple(cols[j][i] for j in range(d)) for i in range(d))


def _rays_of_section(poly, d):
    if d == 2:
        lo, hi = poly
        return [(lo, 1 - lo), (hi, 1 - hi)]
    return [(a, b, 1 - a - b) for a, b in poly]


def _intersect(gens_a, gens_b, d):
    """Generators of the intersection of two cones when it is full dimensional, else None."""
    sa, sb = cone_section(gens_a), cone_section(gens_b)
    if d == 2:
        lo = max(sa[0], sb[0])
        hi = min(sa[1], sb[1])
        return [(lo, 1 - lo), (hi, 1 - hi)] if lo < hi else None
    if d != 3:
        raise ValueError("conversion is implemented for d <= 3")
    poly = clip_convex(sa, sb)
    if polygon_area(poly) == 0:
        return None
    return _rays_of_section(poly, d)


@dataclass
class Conversion:
    graph: MatricesGraph
    cones: dict  # state (i, J) -> J
    seeds: list


def to_matrices_graph(g: GeneralCFGraph, max_states: int = 10_000, keep_seeds: bool = False) -> Conversion:
    d = g.dim
    ident = eye(d)
    seeds = [(i, ident) for i in g.states]
    known = {s: None for s in seeds}
    queue = deque(seeds)
    edges = []
    while queue:
        state = queue.popleft()
        i, I = state
        I_gens = [list(c) for c in zip(*I)]
        I_inv = inverse(I)
        for e in g.out_edges(i):
            inter = _intersect(g.cone_generators(e), I_gens, d)
            if inter is None:
                continue
            m_inv = inverse(e.matrix)
            pre = [mat_vec(m_inv, list(v)) for v in inter]
            for simplex in fan_triangulation(extremal_rays(pre)):
                J = cone_key(simplex)
                label = mat_mul(mat_mul(I_inv, e.matrix), [list(r) for r in J])
                if any(Fraction(a).denominator != 1 or a < 0 for r in label for a in r):
                    raise GraphError(f"edge label {label} is not a nonnegative integer matrix")
                target = (e.dst, J)
                if target not in known:
                    if len(known) >= max_states:
                        raise GraphError(f"conversion exceeded {max_states} states")
                    known[target] = None
                    queue.append(target)
                edges.append((state, target, tuple(tuple(int(a) for a in r) for r in label)))
    states = list(known)
    if not keep_seeds:
        reached = {t for _, t, _ in edges}
        dropped = {s for s in seeds if s not in reached}
        states = [s for s in states if s not in dropped]
        edges = [e for e in edges if e[0] not in dropped]
    mg = MatricesGraph(d, states, edges)
    return Conversion(mg, {s: s[1] for s in states}, [s for s in seeds if s in states])


# semiconjugacy ---------------------------------------------------------------------------

def semiconjugacy_check(g: GeneralCFGraph, conv: Conversion, n: int = 50, samples: int = 200, seed: int = 0) -> Report:
    """Check phi o G^k = F^k o phi with phi(x, (i, I)) = (I x, i) on random integer points."""
    rng = random.Random(seed)
    mg = conv.graph
    d = g.dim
    inv = [inverse(e.matrix) for e in mg.edges]
    skipped = 0
    for _ in range(samples):
        st = rng.choice(mg.states)
        x = [Fraction(rng.randint(1, 2 ** 64)) for _ in range(d)]
        y = mat_vec([list(r) for r in st[1]], x)
        i = st[0]
        try:
            for k in range(n):
                hits = [(j, mat_vec(inv[j], x)) for j in mg.out_indices(st)]
                hits = [(j, z) for j, z in hits if all(a >= 0 for a in z)]
                if len(hits) != 1:
                    raise BoundaryHit([], x, st, [j for j, _ in hits])
                j, x = hits[0]
                st = mg.edges[j].dst
                y, i = g.step(y, i)
                if mat_vec([list(r) for r in st[1]], x) != y or st[0] != i:
                    return Report(False, [f"mismatch after {k + 1} steps"], st, (x, y))
        except BoundaryHit:
            skipped += 1
    return Report(True, [f"{samples} orbits of {n} steps, {skipped} stopped on a boundary"], probabilistic=True)


# classical algorithms --------------------------------------------------------------------

def _e(d, k):
    return tuple(int(i == k) for i in range(d))


def _add(*vs):
    return tuple(sum(c) for c in zip(*vs))


def _cols(vectors):
    d = len(vectors[0])
    return tuple(tuple(v[i] for v in vectors) for i in range(d))


def _elem(d, pairs):
    m = [list(r) for r in eye(d)]
    for r, c in pairs:
        m[r][c] += 1
    return _tt(m)


def brun(d: int = 3) -> GeneralCFGraph:
    """Subtract the second largest coordinate from the largest."""
    if d != 3:
        raise ValueError("built-in Brun is for d = 3")
    edges = []
    for a, b, c in permutations(range(3)):
        # x_a >= x_b >= x_c
        cone = _cols([_e(3, a), _add(_e(3, a), _e(3, b)), _add(_e(3, a), _e(3, b), _e(3, c))])
        edges.append((0, 0, _elem(3, [(a, b)]), cone))
    return GeneralCFGraph(3, [0], edges, "brun")


def arnoux_rauzy_poincare() -> GeneralCFGraph:
    """Arnoux-Rauzy step when a coordinate exceeds the sum of the others, else Poincare."""
    edges = []
    e = lambda k: _e(3, k)
    for a, b, c in permutations(range(3)):
        # x_a >= x_b + x_c and x_b >= x_c
        ar = _cols([e(a), _add(e(a), e(b)), _add(e(a), e(a), e(b), e(c))])
        edges.append((0, 0, _elem(3, [(a, b), (a, c)]), ar))
        # x_a >= x_b >= x_c and x_a <= x_b + x_c
        po = _cols([_add(e(a), e(b)), _add(e(a), e(b), e(c)), _add(e(a), e(a), e(b), e(c))])
        edges.append((0, 0, _elem(3, [(a, b), (a, c), (b, c)]), po))
    return GeneralCFGraph(3, [0], edges, "arp")


def _region(constraints):
    """Extreme rays of {x >= 0 : x_p >= x_q for (p, q) in constraints} (d = 3)."""
    cands = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (1, 0, 1), (0, 1, 1), (1, 1, 1)]
    inside = [v for v in cands if all(v[p] >= v[q] for p, q in constraints)]
    return _cols(extremal_rays([list(v) for v in inside]))


def jacobi_perron() -> GeneralCFGraph:
    """Additive slowdown of (x, y, z) -> (y mod x, z mod x, x).

    Each step subtracts x from every coordinate that is at least x; when both
    are smaller the coordinates rotate.
    """
    rot = ((0, 0, 1), (1, 0, 0), (0, 1, 0))  # x = rot x' with x' = (y, z, x)
    edges = [
        (0, 0, _elem(3, [(1, 0), (2, 0)]), _region([(1, 0), (2, 0)])),
        (0, 0, _elem(3, [(1, 0)]), _region([(1, 0), (0, 2)])),
        (0, 0, _elem(3, [(2, 0)]), _region([(2, 0), (0, 1)])),
        (0, 0, rot, _region([(0, 1), (0, 2)])),
    ]
    return GeneralCFGraph(3, [0], edges, "jacobi-perron")


def symmetric_jacobi_perron() -> GeneralCFGraph:
    """Additive slowdown of subtracting the smallest coordinate as many times as possible.

    State a holds the current divisor x_a, which is subtracted from every other
    coordinate that is at least x_a. When none is left, the new smallest
    coordinate b is subtracted from the two others and becomes the divisor.
    """
    edges = []
    for a in range(3):
        b, c = [k for k in range(3) if k != a]
        edges.append((a, a, _elem(3, [(b, a), (c, a)]), _region([(b, a), (c, a)])))
        edges.append((a, a, _elem(3, [(b, a)]), _region([(b, a), (a, c)])))
        edges.append((a, a, _elem(3, [(c, a)]), _region([(c, a), (a, b)])))
        for p, q in ((b, c), (c, b)):
            # x_p <= x_q <= x_a: subtract x_p from x_q and x_a, divisor p
            edges.append((a, p, _elem(3, [(q, p), (a, p)]), _region([(a, q), (q, p)])))
    return GeneralCFGraph(3, [0, 1, 2], edges, "symmetric-jacobi-perron")


def from_matrices_graph(mg: MatricesGraph) -> GeneralCFGraph:
    """A matrices graph read as a general graph (D = m)."""
    return GeneralCFGraph(mg.dim, mg.states, [(e.src, e.dst, e.matrix, e.matrix) for e in mg.edges])
