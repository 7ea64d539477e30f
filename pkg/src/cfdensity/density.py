"""Invariant densities as sums of inverse products of linear forms.

A term (c, (V_1, ..., V_d)) denotes c / prod (V_k | x). Veech's formula gives,
for a simplicial domain m R_+^d, the term |det m| / (d d!) over the columns of m.
"""

from __future__ import annotations

import functools
import itertools
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .cfgraph import MatricesGraph, Report, tr
from .domains import DomainAssignment, _simplices, word_product
from .exact.algnum import AlgNum, sign
from .exact.linalg import det, dot, inverse, mat_mul, mat_vec, primitive_int_vector
from .geometry import cone_section, is_rational_vector, polygon_area, section_contains, section_intersection_measure


class SingularMatrix(ZeroDivisionError):
    pass


def _cmp_vec(u, w) -> int:
    for a, b in zip(u, w):
        s = sign(a - b)
        if s:
            return s
    return 0


def _exactify(a):
    if isinstance(a, AlgNum):
        return a
    a = Fraction(a)
    return int(a) if a.denominator == 1 else a


def canon_form(v) -> tuple:
    """(s, w) with v = s w, s > 0; w primitive integer if rational, else last nonzero entry +-1."""
    if is_rational_vector(v):
        w = primitive_int_vector(v)
        k = next(i for i, a in enumerate(w) if a)
        s = Fraction(v[k]) / w[k]
        return s, tuple(w)
    last = next(a for a in reversed(v) if a != 0)
    s = last if sign(last) > 0 else -last
    return s, tuple(_exactify(a / s) for a in v)


def volume_constant(d: int) -> int:
    return d * math.factorial(d)


@dataclass
class DensityExpr:
    """Sum of terms c / prod (V|x); coefficients are exact (Veech normalization)."""

    dim: int
    terms: list = field(default_factory=list)  # (coef, forms)

    def __post_init__(self):
        self.terms = _normalize_terms(self.terms)

    # evaluation -----------------------------------------------------------------
    def __call__(self, x):
        x = [Fraction(a) if isinstance(a, int) else a for a in x]
        acc = Fraction(0)
        for c, forms in self.terms:
            den = 1
            for v in forms:
                den = den * dot(v, x)
            acc = acc + c / den
        return acc

    def __add__(self, other):
        return DensityExpr(self.dim, self.terms + other.terms)

    def scaled(self, c):
        return DensityExpr(self.dim, [(c * a, f) for a, f in self.terms])

    def pullback(self, m, factor=1):
        """x -> factor * f(m x), again a sum of inverse products of linear forms."""
        mt = tr(m)
        out = []
        for c, forms in self.terms:
            out.append((factor * c, tuple(tuple(mat_vec(mt, list(v))) for v in forms)))
        return DensityExpr(self.dim, out)

    # canonical form ------------------------------------------------------------
    def canonical_terms(self) -> list:
        k = volume_constant(self.dim)
        return [(_exactify(c * k), f) for c, f in self.terms]

    def __eq__(self, other):
        if not isinstance(other, DensityExpr):
            return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    def render(self, names=None, canonical: bool = True) -> str:
        names = names or [f"x{i}" for i in range(self.dim)]
        terms = self.canonical_terms() if canonical else [(_exactify(c), f) for c, f in self.terms]
        if not terms:
            return "0"
        return " + ".join(_render_term(c, f, names) for c, f in terms)

    def __str__(self):
        return self.render()

    def simplify(self) -> "DensityExpr":
        """Merge the terms into one when the sum is c / prod of forms."""
        if len(self.terms) <= 1:
            return self
        res = combine_to_single(self)
        return res if res is not None else self

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "canonical": self.render(),
            "terms": [
                {"coefficient": scalar_json(c), "forms": [[scalar_json(a) for a in v] for v in f]}
                for c, f in self.canonical_terms()
            ],
        }


def scalar_json(a):
    if isinstance(a, AlgNum):
        return {"algebraic": str(a), "approx": float(a)}
    a = Fraction(a)
    return int(a) if a.denominator == 1 else str(a)


def _normalize_terms(terms) -> list:
    merged: list = []
    for c, forms in terms:
        c = _exactify(c)
        fs = []
        for v in forms:
            s, w = canon_form(list(v))
            c = c / s
            fs.append(w)
        fs = tuple(sorted(fs, key=functools.cmp_to_key(lambda u, w: -_cmp_vec(u, w))))
        for i, (c0, f0) in enumerate(merged):
            if f0 == fs:
                merged[i] = (c0 + c, f0)
                break
        else:
            merged.append((c, fs))
    merged = [(_exactify(c), f) for c, f in merged if c != 0]
    merged.sort(key=functools.cmp_to_key(lambda a, b: -_cmp_flat(a[1], b[1])))
    return merged


def _cmp_flat(fa, fb) -> int:
    for u, w in zip(fa, fb):
        s = _cmp_vec(u, w)
        if s:
            return s
    return (len(fa) > len(fb)) - (len(fa) < len(fb))


def _coef_str(a) -> str:
    if isinstance(a, AlgNum) or (isinstance(a, Fraction) and a.denominator != 1):
        return f"({a})"
    return str(a)


def _form_str(v, names) -> str:
    parts = []
    for a, n in zip(v, names):
        if a == 0:
            continue
        if isinstance(a, AlgNum):
            neg = sign(a) < 0
            body = f"{_coef_str(-a if neg else a)}{n}"
        else:
            neg = a < 0
            aa = -a if neg else a
            body = n if aa == 1 else f"{aa}{n}"
        parts.append(("-" if neg else "+", body))
    s = "".join(f"{op}{b}" for op, b in parts)
    return s[1:] if s.startswith("+") else s


def _render_term(c, forms, names) -> str:
    factors = []
    for v in forms:
        body = _form_str(v, names)
        bare = sum(1 for a in v if a != 0) == 1 and next(a for a in v if a != 0) == 1
        factors.append(body if bare else f"({body})")
    out = []
    for i, f in enumerate(factors):
        if i and not (f.startswith("(") or out[-1].endswith(")")):
            out.append("*")
        out.append(f)
    return f"{_coef_str(c)}/({''.join(out)})"


# parsing ----------------------------------------------------------------------------

def parse_density(text: str, dim: int, names=None, canonical: bool = True) -> DensityExpr:
    """Parse sums of ``c/((form)(form)...)`` with integer coefficients."""
    names = list(names or [f"x{i}" for i in range(dim)])
    terms = []
    for chunk in _split_top(text.replace(" ", ""), "+"):
        num, _, den = chunk.partition("/")
        c = Fraction(num)
        den = den.strip()
        if den.startswith("(") and _matching(den, 0) == len(den) - 1:
            den = den[1:-1]
        forms = []
        i = 0
        while i < len(den):
            if den[i] == "*":
                i += 1
                continue
            if den[i] == "(":
                j = _matching(den, i)
                forms.append(_parse_form(den[i + 1:j], names))
                i = j + 1
            else:
                m = _match_name(den, i, names)
                if m is None:
                    raise ValueError(f"cannot parse factor at {den[i:]!r}")
                v = [0] * dim
                v[names.index(m)] = 1
                forms.append(tuple(v))
                i += len(m)
        terms.append((c, forms))
    if canonical:
        k = volume_constant(dim)
        terms = [(c / k, f) for c, f in terms]
    return DensityExpr(dim, terms)


def _match_name(s, i, names):
    best = None
    for n in names:
        if s.startswith(n, i) and (best is None or len(n) > len(best)):
            best = n
    return best


def _matching(s, i) -> int:
    depth = 0
    for j in range(i, len(s)):
        if s[j] == "(":
            depth += 1
        elif s[j] == ")":
            depth -= 1
            if depth == 0:
                return j
    raise ValueError("unbalanced parentheses")


def _split_top(s, op):
    out, depth, cur = [], 0, ""
    for ch in s:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == op and depth == 0 and cur:
            out.append(cur)
            cur = ""
        else:
            cur += ch
    out.append(cur)
    return out


def _parse_form(s, names):
    v = [0] * len(names)
    for part in re.findall(r"[+-]?[^+-]+", s):
        sgn = -1 if part.startswith("-") else 1
        part = part.lstrip("+-").replace("*", "")
        m = re.fullmatch(r"(\d*)(.+)", part)
        coef = int(m.group(1)) if m.group(1) else 1
        v[names.index(m.group(2))] += sgn * coef
    return tuple(v)


# Veech's formula --------------------------------------------------------------------

def veech_term(m) -> DensityExpr:
    """Density of the simplicial domain m R_+^d: |det m| / (d d! prod (tm x))."""
    d = len(m)
    dm = det(m)
    if dm == 0:
        raise SingularMatrix("domain matrix is singular")
    cols = [tuple(m[i][j] for i in range(d)) for j in range(d)]
    return DensityExpr(d, [(abs(dm) / volume_constant(d), cols)])


def cone_density(cone, d: int) -> DensityExpr:
    out = DensityExpr(d, [])
    for simplex in _simplices(tuple(cone), d):
        m = [[g[i] for g in simplex] for i in range(d)]
        out = out + veech_term(m)
    return out


def domains_to_density(assign: DomainAssignment) -> dict:
    out = {}
    for s, pieces in assign.pieces.items():
        f = DensityExpr(assign.dim, [])
        for c in pieces:
            f = f + cone_density(c, assign.dim)
        out[s] = f
    return out


# pushforward to the original algorithm ------------------------------------------------

def _pushforward_terms(conv, f, state, inside) -> DensityExpr:
    d = conv.graph.dim
    out = DensityExpr(d, [])
    for st in conv.graph.states:
        if st[0] != state or not inside(st[1]):
            continue
        inv = inverse([list(r) for r in st[1]])
        out = out + f[st].pullback(inv, abs(det(inv)))
    return out.simplify()


def pushforward_on_cone(conv, f, state, gens) -> DensityExpr:
    """Density of the original algorithm at ``state`` on the cone spanned by ``gens``.

    The cone must lie inside or outside each cone I of the converted states (i, I).
    """
    d = conv.graph.dim
    gens = [list(g) for g in gens]

    def inside(cone):
        cg = [[cone[i][j] for i in range(d)] for j in range(d)]
        outer, inner = cone_section(cg), cone_section(gens)
        if section_contains(outer, inner, d):
            return True
        if section_intersection_measure(outer, inner, d) == 0:
            return False
        raise ValueError(f"region {gens} straddles the cone {cone}")

    return _pushforward_terms(conv, f, state, inside)


def _split(poly, h):
    """Parts of a convex polygon where the affine function h is >= 0 and <= 0."""
    pos, neg = [], []
    n = len(poly)
    for k in range(n):
        p, q = poly[k], poly[(k + 1) % n]
        hp, hq = h(p), h(q)
        if hp >= 0:
            pos.append(p)
        if hp <= 0:
            neg.append(p)
        if hp * hq < 0:
            t = hp / (hp - hq)
            z = (p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1]))
            pos.append(z)
            neg.append(z)
    return [part for part in (pos, neg) if len(part) >= 3 and polygon_area(part) > 0]


def _refinement(cones, d):
    """Cells (as generator lists) of the arrangement cut out by the facets of the cones."""
    if d == 2:
        cuts = sorted({Fraction(c[0][j]) / (c[0][j] + c[1][j]) for c in cones for j in range(2)} | {Fraction(0), Fraction(1)})
        return [[(a, 1 - a), (b, 1 - b)] for a, b in zip(cuts, cuts[1:])]
    if d != 3:
        raise ValueError("pushforward refinement implemented for d <= 3")
    normals = set()
    for c in cones:
        g = [[c[i][j] for i in range(3)] for j in range(3)]
        for a, b in itertools.combinations(range(3), 2):
            u, v = g[a], g[b]
            nrm = (u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0])
            nrm = primitive_int_vector(nrm)
            if nrm < tuple(-a for a in nrm):
                nrm = tuple(-a for a in nrm)
            normals.add(nrm)
    cells = [[(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)), (Fraction(0), Fraction(0))]]
    for nrm in sorted(normals):
        h = lambda p, n=nrm: n[0] * p[0] + n[1] * p[1] + n[2] * (1 - p[0] - p[1])
        cells = [part for cell in cells for part in _split(cell, h)]
    return [[primitive_int_vector((a, b, 1 - a - b)) for a, b in cell] for cell in cells]


def pushforward_density(general, conv, f: dict) -> dict:
    """Piecewise densities of the original algorithm: state -> [(cell generators, DensityExpr)].

    f_i(x) is the sum over converted states (i, I) with x in I R_+^d of
    |det I^-1| f_(i,I)(I^-1 x); cells are the common refinement of those cones.
    """
    d = conv.graph.dim
    out = {}
    for i in general.states:
        cones = [st[1] for st in conv.graph.states if st[0] == i]
        pieces = []
        for cell in _refinement(cones, d):
            pieces.append((cell, pushforward_on_cone(conv, f, i, cell)))
        out[i] = pieces
    return out


# functional equation ----------------------------------------------------------------

@dataclass
class CounterexamplePoint:
    state: object
    point: tuple
    lhs: object
    rhs: object

    ok = False

    def __bool__(self):
        return False


def transfer(g: MatricesGraph, f: dict, state) -> DensityExpr:
    """Right-hand side sum over in-edges i -m-> j of |det m| f_i(m x)."""
    out = DensityExpr(g.dim, [])
    for e in g.in_edges(state):
        out = out + f[e.src].pullback(e.matrix, abs(det(e.matrix)))
    return out


def _degree_bound(exprs) -> int:
    """Degree of the cleared-denominator numerator of a difference of sums."""
    forms: dict = {}
    for ex in exprs:
        for _, fs in ex.terms:
            count: dict = {}
            for v in fs:
                count[v] = count.get(v, 0) + 1
            for v, k in count.items():
                forms[v] = max(forms.get(v, 0), k)
    return sum(forms.values())


def check_functional_equation(g: MatricesGraph, f: dict, grid=None):
    """Prove f_j = sum |det m| f_i(m .) for every state by exact evaluation on a grid.

    Multiplying the difference by the product Q of all distinct denominators
    gives a polynomial of total degree at most deg Q - d; a polynomial of
    degree D vanishing on {1..D+1}^d is zero. Q > 0 on positive points, so the
    difference itself is evaluated there.
    """
    d = g.dim
    for j in g.states:
        lhs = f[j]
        rhs = transfer(g, f, j)
        deg = max(_degree_bound([lhs, rhs]) - d, 0)
        pts = grid if grid is not None else itertools.product(range(1, deg + 2), repeat=d)
        for x in pts:
            a, b = lhs(x), rhs(x)
            if a != b:
                return CounterexamplePoint(j, tuple(x), a, b)
    return Report(True, ["functional equation certified"])


# polynomial arithmetic for simplification -------------------------------------------

class MPoly:
    """Sparse multivariate polynomial {exponent tuple: coefficient}."""

    __slots__ = ("n", "c")

    def __init__(self, n: int, coeffs=None):
        self.n = n
        self.c = {k: v for k, v in (coeffs or {}).items() if v != 0}

    @classmethod
    def const(cls, n, a):
        return cls(n, {(0,) * n: a})

    @classmethod
    def linear(cls, v):
        n = len(v)
        return cls(n, {tuple(int(i == k) for i in range(n)): a for k, a in enumerate(v) if a != 0})

    def __add__(self, o):
        out = dict(self.c)
        for k, v in o.c.items():
            out[k] = out.get(k, 0) + v
        return MPoly(self.n, out)

    def __sub__(self, o):
        return self + o.scale(-1)

    def scale(self, a):
        return MPoly(self.n, {k: v * a for k, v in self.c.items()})

    def __mul__(self, o):
        out: dict = {}
        for k1, v1 in self.c.items():
            for k2, v2 in o.c.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                out[k] = out.get(k, 0) + v1 * v2
        return MPoly(self.n, out)

    def is_zero(self) -> bool:
        return not self.c

    def constant(self):
        if not self.c:
            return 0
        if list(self.c) == [(0,) * self.n]:
            return self.c[(0,) * self.n]
        return None

    def divide_linear(self, v):
        """Exact quotient by the linear form v, or None."""
        k = max(i for i, a in enumerate(v) if a != 0)
        lead = v[k]
        order = lambda e: (e[k],) + tuple(e[i] for i in range(self.n) if i != k)
        rem = MPoly(self.n, self.c)
        q: dict = {}
        f = MPoly.linear(v)
        while rem.c:
            e = max(rem.c, key=order)
            if e[k] == 0:
                return None
            qe = tuple(a - (i == k) for i, a in enumerate(e))
            qc = rem.c[e] / lead
            q[qe] = q.get(qe, 0) + qc
            rem = rem - MPoly(self.n, {qe: qc}) * f
        return MPoly(self.n, q)


def combine_to_single(expr: DensityExpr):
    """Return a one-term DensityExpr equal to expr, or None if the numerator is not constant."""
    n = expr.dim
    mult: dict = {}
    for _, fs in expr.terms:
        count: dict = {}
        for v in fs:
            count[v] = count.get(v, 0) + 1
        for v, k in count.items():
            mult[v] = max(mult.get(v, 0), k)
    num = MPoly(n)
    for c, fs in expr.terms:
        count = dict(mult)
        for v in fs:
            count[v] -= 1
        p = MPoly.const(n, c)
        for v, k in count.items():
            for _ in range(k):
                p = p * MPoly.linear(v)
        num = num + p
    for v in list(mult):
        while mult[v] > 0:
            q = num.divide_linear(v)
            if q is None:
                break
            num = q
            mult[v] -= 1
    c = num.constant()
    if c is None or c == 0:
        return None
    forms = [v for v, k in mult.items() for _ in range(k)]
    if len(forms) != n:
        return None
    return DensityExpr(n, [(c, forms)])


# series densities (d = 2) -------------------------------------------------------------

@dataclass
class SeriesDensity:
    """Sum over n >= n0 of the Veech terms of m_u m_v^n m_w G (G the cone generators)."""

    u: tuple
    v: tuple
    w: tuple
    cone: tuple
    n0: int = 0

    @property
    def dim(self) -> int:
        return len(self.cone[0])

    def matrix(self, n: int):
        d = self.dim
        p = mat_mul(mat_mul(word_product(self.u, d), word_product(tuple(self.v) * n, d)), word_product(self.w, d))
        gens = [[g[i] for g in self.cone] for i in range(d)]
        return mat_mul(p, gens)

    def term(self, n: int) -> DensityExpr:
        return veech_term(self.matrix(n))

    def general_term(self, n: int) -> DensityExpr:
        """Term number n counted from the first one (index n0 + n - 1 internally)."""
        return self.term(self.n0 + n - 1)


def _mat_ge(a, b) -> bool:
    return all(x >= y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def eval_series(s: SeriesDensity, x, n_terms: int, canonical: bool = True):
    """Partial sum of n_terms terms at x and a rigorous bound on the remainder."""
    x = [Fraction(a) for a in x]
    if any(a <= 0 for a in x):
        raise ValueError("x must be positive")
    k = volume_constant(s.dim) if canonical else 1
    total = Fraction(0)
    for n in range(s.n0, s.n0 + n_terms):
        total += s.term(n)(x) * k
    return total, _tail_bound(s, x, s.n0 + n_terms) * k


def _tail_bound(s: SeriesDensity, x, start: int) -> Fraction:
    d = s.dim
    mv = word_product(tuple(s.v), d)
    eye = [[int(i == j) for j in range(d)] for i in range(d)]
    nil = [[mv[i][j] - eye[i][j] for j in range(d)] for i in range(d)]
    if all(a == 0 for r in mat_mul(nil, nil) for a in r):
        # m_v = I + N with N^2 = 0: columns are a_k + n b_k with a_k, b_k >= 0
        a = s.matrix(0)
        b = [[s.matrix(1)[i][j] - a[i][j] for j in range(d)] for i in range(d)]
        growth = Fraction(1)
        for j in range(d):
            bj = dot([b[i][j] for i in range(d)], x)
            if bj <= 0:
                raise ValueError("a column of the family does not grow")
            growth *= bj
        c = abs(det(a)) / volume_constant(d)
        n = max(start, 2)
        # sum_{m >= n} 1/m^d <= 1/((d-1)(n-1)^(d-1))
        bound = c / growth / ((d - 1) * Fraction(n - 1) ** (d - 1))
        if start < 2:
            bound += sum((s.term(m)(x) for m in range(start, 2)), Fraction(0))
        return bound
    # hyperbolic: find p with m_v^p >= 2 I, then term(n + p) <= |det m_v|^p term(n) / 2^d
    p_pow = eye
    for p in range(1, 65):
        p_pow = mat_mul(p_pow, mv)
        two = [[2 * eye[i][j] for j in range(d)] for i in range(d)]
        if _mat_ge(p_pow, two):
            ratio = Fraction(abs(det(mv))) ** p / 2 ** d
            if ratio < 1:
                head = sum((s.term(m)(x) for m in range(start, start + p)), Fraction(0))
                return head / (1 - ratio)
    raise ValueError("no tail bound available for this loop matrix")
