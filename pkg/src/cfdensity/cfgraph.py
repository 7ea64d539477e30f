"""Matrices graphs and win-lose graphs.

A matrices graph has, at each state, out-edges labelled by nonnegative
invertible integer matrices whose cones m R_+^d tile R_+^d. A win-lose graph
labels edges by coordinates; the edge on letter j is taken when x_j is the
smallest coordinate among the letters leaving the state, and x_j is then
subtracted from those other coordinates.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Sequence

from . import automata as fa
from .exact.algnum import AlgNum, sign
from .exact.linalg import det, identity, int_matrix, inverse, mat_mul, mat_vec, transpose
from .geometry import cone_section, normalize_sum, section_intersection_measure, section_measure

IntMatrix = tuple  # tuple of row tuples


class GraphError(ValueError):
    pass


class BoundaryHit(ArithmeticError):
    """The point lies on a face shared by several cones."""

    def __init__(self, prefix, point, state, edges):
        super().__init__(f"point on a shared boundary after {len(prefix)} steps (edges {edges})")
        self.prefix = prefix
        self.point = point
        self.state = state
        self.edges = edges


def as_int_matrix(m) -> IntMatrix:
    try:
        out = int_matrix(m)
    except (TypeError, ValueError) as exc:
        raise GraphError(f"matrix entries must be integers: {exc}") from None
    return out


def tr(m: IntMatrix) -> IntMatrix:
    return tuple(zip(*m))


def matmul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))) for i in range(len(a)))


def eye(d: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(d)) for i in range(d))


def word_matrix(word, d: int) -> IntMatrix:
    out = eye(d)
    for m in word:
        out = matmul(out, m)
    return out


def in_cone(m, x) -> bool:
    """Closed membership x in m R_+^d (exact)."""
    y = mat_vec(inverse(m), list(x))
    return all(sign(a) >= 0 for a in y)


@dataclass(frozen=True)
class Edge:
    src: Hashable
    dst: Hashable
    matrix: IntMatrix


@dataclass
class Report:
    ok: bool
    messages: list = field(default_factory=list)
    state: Hashable = None
    witness: object = None
    probabilistic: bool = False

    def __bool__(self):
        return self.ok


class MatricesGraph:
    def __init__(self, dim: int, states: Sequence, edges: Sequence, check: bool = True):
        self.dim = dim
        self.states = list(states)
        self.edges = [Edge(e[0], e[1], as_int_matrix(e[2])) if not isinstance(e, Edge) else e for e in edges]
        if check:
            self._check()
        self._out = {s: [] for s in self.states}
        self._in = {s: [] for s in self.states}
        for k, e in enumerate(self.edges):
            self._out[e.src].append(k)
            self._in[e.dst].append(k)

    def _check(self):
        if self.dim < 2:
            raise GraphError("dimension must be at least 2")
        known = set(self.states)
        if len(known) != len(self.states):
            raise GraphError("duplicate state names")
        for e in self.edges:
            if e.src not in known or e.dst not in known:
                raise GraphError(f"edge {e.src}->{e.dst} uses an unknown state")
            m = e.matrix
            if len(m) != self.dim or any(len(r) != self.dim for r in m):
                raise GraphError(f"edge {e.src}->{e.dst}: matrix is not {self.dim}x{self.dim}")
            if any(a < 0 for r in m for a in r):
                raise GraphError(f"edge {e.src}->{e.dst}: negative entry")
            if det(m) == 0:
                raise GraphError(f"edge {e.src}->{e.dst}: singular matrix")

    def out_edges(self, s) -> list[Edge]:
        return [self.edges[k] for k in self._out[s]]

    def in_edges(self, s) -> list[Edge]:
        return [self.edges[k] for k in self._in[s]]

    def out_indices(self, s) -> list[int]:
        return list(self._out[s])

    def alphabet(self) -> list:
        return sorted({e.matrix for e in self.edges})

    def __repr__(self):
        return f"MatricesGraph(dim={self.dim}, states={len(self.states)}, edges={len(self.edges)})"

    # automaton views ------------------------------------------------------
    def as_fsa(self, initial=None, finals=None) -> fa.Fsa:
        """The graph read as an automaton over its matrix letters."""
        idx = {s: i for i, s in enumerate(self.states)}
        delta: dict = {}
        for e in self.edges:
            delta.setdefault((idx[e.src], e.matrix), set()).add(idx[e.dst])
        init = [idx[initial]] if initial is not None else [0]
        fin = range(len(self.states)) if finals is None else [idx[s] for s in finals]
        return fa.Fsa(self.alphabet(), len(self.states), delta, init, fin)

    def domain_alphabet(self) -> list:
        return sorted({tr(e.matrix) for e in self.edges})

    def domain_language(self, state) -> fa.Fsa:
        """Words tm_1 ... tm_n such that m_n ... m_1 labels a path ending at ``state``."""
        return domain_language(self, state)

    def to_dot(self) -> str:
        lines = ["digraph matrices {"]
        for s in self.states:
            lines.append(f'  "{s}";')
        for e in self.edges:
            lab = "\\n".join(" ".join(str(a) for a in row) for row in e.matrix)
            lines.append(f'  "{e.src}" -> "{e.dst}" [label="{lab}"];')
        lines.append("}")
        return "\n".join(lines)


class WinLoseGraph:
    def __init__(self, dim: int, states: Sequence, edges: Sequence):
        self.dim = dim
        self.states = list(states)
        self.edges = [(e[0], e[1], int(e[2])) for e in edges]
        known = set(self.states)
        seen = set()
        for s, t, j in self.edges:
            if s not in known or t not in known:
                raise GraphError(f"edge {s}->{t} uses an unknown state")
            if not 0 <= j < dim:
                raise GraphError(f"letter {j} outside 0..{dim - 1}")
            if (s, j) in seen:
                raise GraphError(f"state {s} has two edges labelled {j}")
            seen.add((s, j))

    def letters(self, s) -> list[int]:
        return sorted(j for a, _, j in self.edges if a == s)

    def edge_matrix(self, s, j) -> IntMatrix:
        """I + sum of E_{l,j} over the other letters l leaving s (row l, column j)."""
        m = [list(r) for r in eye(self.dim)]
        for l in self.letters(s):
            if l != j:
                m[l][j] = 1
        return tuple(tuple(r) for r in m)

    def to_matrices(self) -> MatricesGraph:
        edges = [(s, t, self.edge_matrix(s, j)) for s, t, j in self.edges]
        return MatricesGraph(self.dim, self.states, edges)

    def step(self, x, s):
        """One step of the win-lose map on floats or exact scalars; ties go to the smallest letter."""
        letters = self.letters(s)
        j = min(letters, key=lambda l: (x[l], l))
        t = next(t for a, t, l in self.edges if a == s and l == j)
        y = list(x)
        for l in letters:
            if l != j:
                y[l] = y[l] - x[j]
        return y, t, j


def winlose_to_matrices(g: WinLoseGraph) -> MatricesGraph:
    return g.to_matrices()


# validation -------------------------------------------------------------------

def validate_cone_partition(g: MatricesGraph, samples: int = 2000, seed: int = 0) -> Report:
    """Check that the out-edge cones of every state tile R_+^d up to measure zero."""
    d = g.dim
    if d <= 3:
        full = cone_section([list(r) for r in eye(d)])
        total = section_measure(full, d)
        for s in g.states:
            outs = g.out_edges(s)
            secs = [cone_section(transpose(e.matrix)) for e in outs]
            for a in range(len(secs)):
                for b in range(a + 1, len(secs)):
                    if section_intersection_measure(secs[a], secs[b], d) != 0:
                        return Report(False, [f"state {s}: cones {a} and {b} overlap"], s, (outs[a].matrix, outs[b].matrix))
            area = sum((section_measure(x, d) for x in secs), Fraction(0))
            if area != total:
                return Report(False, [f"state {s}: cones cover {area} of {total}"], s, _uncovered_witness(outs, d))
        return Report(True)
    rng = random.Random(seed)
    for s in g.states:
        invs = [inverse(e.matrix) for e in g.out_edges(s)]
        for _ in range(samples):
            x = [Fraction(rng.randint(1, 10**6)) for _ in range(d)]
            hits = sum(1 for mi in invs if all(a >= 0 for a in mat_vec(mi, x)))
            if hits != 1:
                return Report(False, [f"state {s}: point covered {hits} times"], s, x, probabilistic=True)
    return Report(True, [f"randomized check with {samples} points per state"], probabilistic=True)


def _uncovered_witness(outs, d):
    rng = random.Random(1)
    invs = [inverse(e.matrix) for e in outs]
    for _ in range(5000):
        x = [Fraction(rng.randint(1, 1000)) for _ in range(d)]
        if not any(all(a >= 0 for a in mat_vec(mi, x)) for mi in invs):
            return x
    return None


# expansion -----------------------------------------------------------------------

@dataclass
class Expansion:
    edges: list  # indices into g.edges
    matrices: list
    preperiod: list | None = None
    period: list | None = None
    final_state: Hashable = None


def _projective_key(x):
    return tuple(normalize_sum(x))


def expand_point(g: MatricesGraph, x, s, nmax: int = 1000) -> Expansion:
    """Iterate the map from (x, s), detecting an exact periodic orbit."""
    x = [Fraction(a) if isinstance(a, int) else a for a in x]
    inv = [inverse(e.matrix) for e in g.edges]
    seen = {}
    taken: list[int] = []
    for step in range(nmax):
        key = (_projective_key(x), s)
        if key in seen:
            i = seen[key]
            mats = [g.edges[k].matrix for k in taken]
            return Expansion(taken, mats, taken[:i], taken[i:], s)
        seen[key] = step
        hits = []
        for k in g.out_indices(s):
            y = mat_vec(inv[k], x)
            if all(sign(a) >= 0 for a in y):
                hits.append((k, y))
        if len(hits) != 1:
            if not hits:
                raise GraphError(f"point {x} is not covered at state {s}")
            raise BoundaryHit([g.edges[k].matrix for k in taken], x, s, [k for k, _ in hits])
        k, y = hits[0]
        taken.append(k)
        x = y
        s = g.edges[k].dst
    return Expansion(taken, [g.edges[k].matrix for k in taken], None, None, s)


ZERO_BAR = ((1, 1), (0, 1))
ONE_BAR = ((1, 0), (1, 1))


def bar_word(mats) -> str:
    """Name 2x2 letter matrices by 0 ([[1,1],[0,1]]) and 1 ([[1,0],[1,1]])."""
    names = {ZERO_BAR: "0", ONE_BAR: "1"}
    return "".join(names[m] for m in mats)


# domain languages ------------------------------------------------------------------

def domain_language(g: MatricesGraph, state) -> fa.Fsa:
    idx = {s: i for i, s in enumerate(g.states)}
    delta: dict = {}
    for e in g.edges:
        delta.setdefault((idx[e.dst], tr(e.matrix)), set()).add(idx[e.src])
    n = len(g.states)
    return fa.minimize(fa.Fsa(g.domain_alphabet(), n, delta, {idx[state]}, range(n)))


def fully_subtractive(d: int) -> WinLoseGraph:
    return WinLoseGraph(d, [0], [(0, 0, j) for j in range(d)])
