"""Domains of matrices graphs: minimization, convex polyhedral domains and extensions.

A domain assignment maps every state to a list of cones (pieces), each a
tuple of generator vectors. Domains satisfy D_j = union of tm D_i over the
edges i -m-> j, the union being disjoint up to measure zero.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable

from . import automata as fa
from .cfgraph import MatricesGraph, Report, matmul, tr, eye
from .exact.algnum import Unsupported, sign
from .exact.linalg import inverse, mat_vec, rank
from .exact.spectral import dominant_limit_cone
from .geometry import (
    canonical_sort,
    clip_convex,
    cone_section,
    extremal_rays,
    normalize_generator,
    section_intersection_measure,
    section_measure,
)

Cone = tuple  # tuple of generator tuples


class InfiniteDecomposition(ValueError):
    """Some W_{i,J} language is infinite; ``families`` describes it symbolically."""

    def __init__(self, state, families):
        super().__init__(f"state {state}: infinite residual decomposition")
        self.state = state
        self.families = families


@dataclass
class Failure:
    reason: str
    details: list = field(default_factory=list)

    def __bool__(self):
        return False


@dataclass
class DomainAssignment:
    dim: int
    pieces: dict  # state -> list of cones
    provenance: dict = field(default_factory=dict)  # state -> list of (word, target)

    def __bool__(self):
        return True

    def cone(self, state) -> Cone | None:
        p = self.pieces[state]
        return p[0] if len(p) == 1 else None


def make_cone(gens) -> Cone:
    """Canonical cone: normalized extremal generators in increasing lexicographic order."""
    return tuple(extremal_rays([list(g) for g in gens]))


def cone_matrix(cone: Cone) -> list:
    """Generators as the columns of a d x k matrix."""
    return [list(r) for r in zip(*cone)]


def apply(m, cone: Cone) -> Cone:
    """Image m C of a cone under a nonnegative matrix."""
    return make_cone(mat_vec(m, list(g)) for g in cone)


def is_full_dimensional(cone: Cone, d: int) -> bool:
    return len(cone) >= d and rank([list(g) for g in cone]) == d


# minimization --------------------------------------------------------------------

def minimize_graph(g: MatricesGraph):
    """Quotient by equality of the languages read from each state (all states final).

    Returns the quotient graph (states 0..k-1) and the map original state -> class.
    """
    n = len(g.states)
    idx = {s: i for i, s in enumerate(g.states)}
    alphabet = g.alphabet()
    delta = {}
    for s in range(n + 1):
        for a in alphabet:
            delta[(s, a)] = {n}
    for e in g.edges:
        delta[(idx[e.src], e.matrix)] = {idx[e.dst]}
    d = fa.Fsa(alphabet, n + 1, delta, {0}, range(n))
    block = fa._hopcroft(d)
    order: dict = {}
    for s in g.states:
        b = block[idx[s]]
        if b not in order:
            order[b] = len(order)
    cls = {s: order[block[idx[s]]] for s in g.states}
    edges = set()
    for e in g.edges:
        edges.add((cls[e.src], cls[e.dst], e.matrix))
    q = MatricesGraph(g.dim, list(range(len(order))), sorted(edges))
    return q, cls


# polyhedral domains ----------------------------------------------------------------

def simple_loops(g: MatricesGraph, state, limit: int = 20000) -> list:
    """Edge sequences of simple loops starting and ending at ``state``."""
    out = []
    stack = [(state, [], {state})]
    while stack:
        s, path, seen = stack.pop()
        for k in g.out_indices(s):
            e = g.edges[k]
            if e.dst == state:
                out.append(path + [k])
                if len(out) >= limit:
                    return out
            elif e.dst not in seen:
                stack.append((e.dst, path + [k], seen | {e.dst}))
    return out


def loop_limit_points(g: MatricesGraph, loop) -> list:
    """Limit points of t(a_1 ... a_k)^n for a loop with edge matrices a_1, ..., a_k."""
    prod = eye(g.dim)
    for k in loop:
        prod = matmul(prod, g.edges[k].matrix)
    return dominant_limit_cone(tr(prod))


def polyhedral_domains(g: MatricesGraph, max_rounds: int = 50, max_points: int = 64, max_loops: int = 20000):
    """Search one convex polyhedral domain per state; returns DomainAssignment or Failure."""
    d = g.dim
    points = {s: [] for s in g.states}
    skipped = []
    for s in g.states:
        for loop in simple_loops(g, s, max_loops):
            try:
                pts = loop_limit_points(g, loop)
            except Unsupported as exc:
                skipped.append((s, loop, str(exc)))
                continue
            points[s].extend(pts)
    try:
        cur = {s: list(extremal_rays(v)) if v else [] for s, v in points.items()}
        for rnd in range(max_rounds):
            new = {}
            for j in g.states:
                cand = list(cur[j])
                for e in g.in_edges(j):
                    tm = tr(e.matrix)
                    cand.extend(mat_vec(tm, list(v)) for v in cur[e.src])
                new[j] = list(extremal_rays(cand)) if cand else []
                if len(new[j]) > max_points:
                    return Failure(f"state {j}: more than {max_points} extremal points", [f"round {rnd}"] + _skips(skipped))
            if new == cur:
                break
            cur = new
        else:
            return Failure(f"stabilization did not converge within {max_rounds} rounds", _skips(skipped))
    except Unsupported as exc:
        return Failure(f"mixed number fields while stabilizing: {exc}", _skips(skipped))
    if all(not v for v in cur.values()):
        return Failure("no loop produced a limit point", _skips(skipped))
    for s, v in cur.items():
        if v and not is_full_dimensional(tuple(map(tuple, v)), d):
            return Failure(f"state {s}: cone is not full dimensional", _skips(skipped))
    assign = DomainAssignment(d, {s: [make_cone(v)] if v else [] for s, v in cur.items()})
    rep = verify_domains(g, assign)
    if not rep.ok:
        return Failure("partition check failed: " + "; ".join(rep.messages), _skips(skipped))
    return assign


def _skips(skipped):
    return [f"skipped loop at {s}: {why}" for s, _, why in skipped[:5]]


# verification ------------------------------------------------------------------------

def verify_domains(g: MatricesGraph, assign: DomainAssignment, samples: int = 4000, seed: int = 0) -> Report:
    """Check D_j = disjoint union of tm D_i over in-edges (exact for d <= 3)."""
    d = g.dim
    if d > 3:
        return _verify_random(g, assign, samples, seed)
    for j in g.states:
        target = [cone_section(list(c)) for c in assign.pieces[j]]
        images = []
        for e in g.in_edges(j):
            tm = tr(e.matrix)
            for c in assign.pieces[e.src]:
                images.append(((e.src, c), cone_section([mat_vec(tm, list(v)) for v in c])))
        bad = _pairwise_overlap(target, d)
        if bad:
            return Report(False, [f"state {j}: domain pieces {bad} overlap"], j, bad)
        bad = _pairwise_overlap([s for _, s in images], d)
        if bad:
            return Report(False, [f"state {j}: images of {images[bad[0]][0][0]} and {images[bad[1]][0][0]} overlap"], j, bad)
        for src, sec in images:
            inside = sum((section_intersection_measure(sec, t, d) for t in target), Fraction(0))
            if inside != section_measure(sec, d):
                return Report(False, [f"state {j}: image of a piece of {src[0]} leaves the domain"], j, src)
        total_t = sum((section_measure(t, d) for t in target), Fraction(0))
        total_i = sum((section_measure(s, d) for _, s in images), Fraction(0))
        if total_t != total_i:
            return Report(False, [f"state {j}: images cover {total_i} of {total_t}"], j, None)
    return Report(True)


def _pairwise_overlap(secs, d):
    for a in range(len(secs)):
        for b in range(a + 1, len(secs)):
            if section_intersection_measure(secs[a], secs[b], d) != 0:
                return (a, b)
    return None


def _count_in(cones_inv, x) -> int:
    return sum(1 for mi in cones_inv if all(sign(v) >= 0 for v in mat_vec(mi, x)))


def _verify_random(g, assign, samples, seed) -> Report:
    rng = random.Random(seed)
    d = g.dim
    for j in g.states:
        tgt = []
        for c in assign.pieces[j]:
            if len(c) != d:
                return Report(False, ["randomized check needs simplicial pieces"], j, c, probabilistic=True)
            tgt.append(inverse(cone_matrix(c)))
        imgs = []
        for e in g.in_edges(j):
            for c in assign.pieces[e.src]:
                imgs.append(inverse(matmul(tr(e.matrix), tuple(zip(*c)))))
        for _ in range(samples):
            x = [Fraction(rng.randint(1, 10**6)) for _ in range(d)]
            a, b = _count_in(tgt, x), _count_in(imgs, x)
            if a > 1 or b > 1 or a != b:
                return Report(False, [f"state {j}: point counted {a} times in the domain, {b} in the images"], j, x, True)
    return Report(True, [f"randomized check, {samples} points per state"], probabilistic=True)


# extension domains ---------------------------------------------------------------------

def word_product(word, d: int):
    out = eye(d)
    for m in word:
        out = matmul(out, m)
    return out


def extension_domains(g: MatricesGraph, minimized: MatricesGraph, state_map: dict, minimized_domains: DomainAssignment):
    """Lift domains of the minimized graph to the original graph (unions of simplices).

    Raises InfiniteDecomposition when some W_{i,J} is infinite; the exception
    carries (u, v, w, J) families meaning the union over n of u v^n w D'_J.
    """
    d = g.dim
    targets = {J: minimized.domain_language(J) for J in minimized.states}
    pieces = {}
    prov = {}
    for i in g.states:
        di = g.domain_language(i)
        if fa.is_empty(fa.difference(di, fa.from_words([()], di.alphabet))):
            # only the empty word: no in-edges, empty domain
            pieces[i] = []
            prov[i] = []
            continue
        tg = {J: _realphabet(t, di.alphabet) for J, t in targets.items()}
        W = fa.residual_decomposition(di, tg)
        infinite = {J: w for J, w in W.items() if not fa.is_finite(w)}
        if infinite:
            fams = []
            for J, w in W.items():
                for fam in lasso_families(w):
                    fams.append(fam + (J,))
            raise InfiniteDecomposition(i, fams)
        out = []
        pv = []
        for J, w in W.items():
            words = sorted(w.words(_max_len(w)), key=lambda x: (len(x), x))
            for word in words:
                m = word_product(word, d)
                for c in minimized_domains.pieces[J]:
                    for simplex in _simplices(c, d):
                        out.append(apply(m, simplex))
                        pv.append((word, J))
        pieces[i] = out
        prov[i] = pv
    assign = DomainAssignment(d, pieces, prov)
    return assign


def _realphabet(a: fa.Fsa, alphabet) -> fa.Fsa:
    """Same language over a (super)set alphabet."""
    if tuple(alphabet) == a.alphabet:
        return a
    delta = {k: v for k, v in a.delta.items()}
    return fa.minimize(fa.Fsa(alphabet, a.n, delta, a.initial, a.finals))


def _max_len(w: fa.Fsa) -> int:
    return w.n + 1


def _simplices(c: Cone, d: int) -> list:
    from .geometry import fan_triangulation

    if len(c) == d:
        return [c]
    return [tuple(map(tuple, s)) for s in fan_triangulation([list(g) for g in c])]


def lasso_families(w: fa.Fsa) -> list:
    """Describe the language of a DFA as finitely many families u v^* w (at most one loop per path)."""
    t = fa.trim(w)
    if not t.initial:
        return []
    g = t.graph()
    cyc = fa.nontrivial_sccs(t)
    on_cycle = {}
    for comp in cyc:
        # only simple cycles are supported
        if sum(1 for s in comp for sym in t.alphabet if t.step(s, sym) in comp) != len(comp):
            raise ValueError("decomposition language has a non-simple strongly connected component")
        for s in comp:
            on_cycle[s] = comp
    out = []
    (start,) = t.initial

    def cycle_word(s):
        word = []
        cur = s
        comp = on_cycle[s]
        while True:
            sym = next(a for a in t.alphabet if t.step(cur, a) in comp)
            word.append(sym)
            cur = t.step(cur, sym)
            if cur == s:
                return tuple(word)

    def walk(s, prefix, loop, used):
        if s in t.finals:
            out.append((prefix, (), ()) if loop is None else (loop[0], loop[1], prefix[len(loop[0]):]))
        for sym in t.alphabet:
            nxt = t.step(s, sym)
            if nxt is None:
                continue
            comp = on_cycle.get(s)
            if comp is not None and nxt in comp:
                continue  # the loop itself is accounted for by v
            if nxt in on_cycle:
                if loop is not None:
                    raise ValueError("decomposition language has two loops on one path")
                u = prefix + (sym,)
                walk_cycle(nxt, u, cycle_word(nxt))
            else:
                walk(nxt, prefix + (sym,), loop, used)

    def walk_cycle(s, u, v):
        # leave the cycle from each of its states
        cur = s
        offset = ()
        for sym in v:
            for a in t.alphabet:
                nxt = t.step(cur, a)
                if nxt is None or nxt in on_cycle[s]:
                    continue
                if nxt in on_cycle:
                    raise ValueError("decomposition language has two loops on one path")
                walk(nxt, u + offset + (a,), (u, v), None)
            if cur in t.finals:
                out.append((u, v, offset))
            offset = offset + (sym,)
            cur = t.step(cur, sym)

    if start in on_cycle:
        walk_cycle(start, (), cycle_word(start))
    else:
        walk(start, (), None, None)
    return out
