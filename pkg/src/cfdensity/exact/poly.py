"""Univariate polynomials with exact coefficients, Sturm sequences and real root isolation.

Coefficients are stored lowest degree first. Arithmetic only needs the
coefficients to form a field (``Fraction`` or :class:`~cfdensity.exact.algnum.AlgNum`);
the root isolation routines require rational coefficients.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


def _strip(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


class Poly:
    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable = ()):
        self.c = _strip(Fraction(a) if isinstance(a, int) else a for a in coeffs)

    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def const(cls, a) -> "Poly":
        return cls((a,))

    @classmethod
    def from_roots(cls, roots) -> "Poly":
        p = cls((1,))
        for r in roots:
            p = p * cls((-r, 1))
        return p

    @property
    def degree(self) -> int:
        return len(self.c) - 1

    @property
    def lead(self):
        return self.c[-1] if self.c else Fraction(0)

    def is_zero(self) -> bool:
        return not self.c

    def is_const(self) -> bool:
        return len(self.c) <= 1

    def __getitem__(self, i):
        return self.c[i] if 0 <= i < len(self.c) else Fraction(0)

    def __iter__(self):
        return iter(self.c)

    def __len__(self):
        return len(self.c)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            other = Poly((other,))
        return self.c == other.c

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        return f"Poly({[str(a) for a in self.c]})"

    def __str__(self):
        if not self.c:
            return "0"
        parts = []
        for i in range(len(self.c) - 1, -1, -1):
            a = self.c[i]
            if a == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and a == 1:
                parts.append(f"+{mono}")
            elif mono and a == -1:
                parts.append(f"-{mono}")
            else:
                s = str(a)
                if not s.startswith("-"):
                    s = "+" + s
                parts.append(s + ("*" + mono if mono else ""))
        out = "".join(parts)
        return out[1:] if out.startswith("+") else out

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly((other,))
        n = max(len(self.c), len(other.c))
        return Poly(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-a for a in self.c)

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly((other,))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return Poly(a * other for a in self.c)
        if not self.c or not other.c:
            return Poly()
        out = [Fraction(0)] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if a == 0:
                continue
            for j, b in enumerate(other.c):
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = Poly((1,))
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divmod(self, other: "Poly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.c)
        dq = len(r) - len(other.c)
        if dq < 0:
            return Poly(), self
        q = [Fraction(0)] * (dq + 1)
        lead = other.c[-1]
        for k in range(dq, -1, -1):
            coef = r[k + len(other.c) - 1] / lead
            q[k] = coef
            if coef != 0:
                for j, b in enumerate(other.c):
                    r[k + j] = r[k + j] - coef * b
        return Poly(q), Poly(r[: len(other.c) - 1])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self) -> "Poly":
        if not self.c:
            return self
        lc = self.c[-1]
        return Poly(a / lc for a in self.c)

    def deriv(self) -> "Poly":
        return Poly(i * self.c[i] for i in range(1, len(self.c)))

    def __call__(self, x):
        acc = Fraction(0)
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def eval_matrix(self, m):
        """Horner evaluation at a square matrix (list of rows)."""
        from .linalg import identity, mat_add, mat_mul, mat_scale

        n = len(m)
        acc = [[Fraction(0)] * n for _ in range(n)]
        eye = identity(n)
        for a in reversed(self.c):
            acc = mat_add(mat_mul(acc, m), mat_scale(eye, a))
        return acc

    def compose(self, other: "Poly") -> "Poly":
        acc = Poly()
        for a in reversed(self.c):
            acc = acc * other + a
        return acc

    def primitive_integer(self) -> "Poly":
        """Scale a rational polynomial to primitive integer coefficients with positive lead."""
        if not self.c:
            return self
        den = 1
        for a in self.c:
            den = den * a.denominator // gcd(den, a.denominator)
        ints = [int(a * den) for a in self.c]
        g = 0
        for v in ints:
            g = gcd(g, v)
        if ints[-1] < 0:
            g = -g
        return Poly(Fraction(v // g) for v in ints)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: Poly, b: Poly):
    """Return (g, s, t) with s*a + t*b = g monic."""
    r0, r1 = a, b
    s0, s1 = Poly((1,)), Poly()
    t0, t1 = Poly(), Poly((1,))
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    lc = r0.lead
    return r0.monic(), s0 * (1 / lc), t0 * (1 / lc)


def squarefree_part(p: Poly) -> Poly:
    if p.degree <= 0:
        return p.monic() if not p.is_zero() else p
    g = poly_gcd(p, p.deriv())
    return (p // g).monic()


# Sturm machinery (rational coefficients only) ------------------------------

def sturm_sequence(p: Poly) -> list[Poly]:
    seq = [p, p.deriv()]
    while not seq[-1].is_zero():
        r = seq[-2] % seq[-1]
        if r.is_zero():
            break
        seq.append(-r)
    return seq


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def _variations(signs: Iterable[int]) -> int:
    prev = 0
    n = 0
    for s in signs:
        if s == 0:
            continue
        if prev and s != prev:
            n += 1
        prev = s
    return n


def _var_at(seq, x) -> int:
    return _variations(_sign(q(x)) for q in seq)


def _var_at_inf(seq, positive: bool) -> int:
    out = []
    for q in seq:
        if q.is_zero():
            continue
        s = _sign(q.lead)
        if not positive and q.degree % 2:
            s = -s
        out.append(s)
    return _variations(out)


def count_roots(p: Poly, lo=None, hi=None, seq=None) -> int:
    """Number of distinct real roots of ``p`` in the half-open interval (lo, hi].

    ``None`` bounds stand for infinities.
    """
    if p.is_zero():
        raise ValueError("zero polynomial has infinitely many roots")
    if seq is None:
        seq = sturm_sequence(squarefree_part(p))
    vlo = _var_at_inf(seq, False) if lo is None else _var_at(seq, lo)
    vhi = _var_at_inf(seq, True) if hi is None else _var_at(seq, hi)
    return vlo - vhi


def cauchy_bound(p: Poly) -> Fraction:
    lc = abs(p.lead)
    return 1 + max((abs(a) / lc for a in p.c[:-1]), default=Fraction(0))


def isolate_real_roots(p: Poly) -> list[tuple[Fraction, Fraction]]:
    """Disjoint open intervals (lo, hi), each containing exactly one real root of ``p``.

    Interval endpoints are never roots. Intervals are sorted increasingly and
    cover every real root of the squarefree part of ``p``.
    """
    if p.is_zero():
        raise ValueError("cannot isolate roots of the zero polynomial")
    q = squarefree_part(p)
    if q.degree <= 0:
        return []
    seq = sturm_sequence(q)
    b = cauchy_bound(q)
    out: list[tuple[Fraction, Fraction]] = []
    stack = [(-b, b)]
    while stack:
        lo, hi = stack.pop()
        n = count_roots(q, lo, hi, seq)
        if n == 0:
            continue
        if n == 1 and q(hi) != 0:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        if q(mid) == 0:
            # keep endpoints off the roots: isolate the exact rational root separately
            eps = (hi - lo) / 8
            while count_roots(q, mid - eps, mid + eps, seq) > 1 or q(mid - eps) == 0 or q(mid + eps) == 0:
                eps /= 2
            out.append((mid - eps, mid + eps))
            stack.append((lo, mid - eps))
            stack.append((mid + eps, hi))
        else:
            stack.append((lo, mid))
            stack.append((mid, hi))
    out.sort()
    # the right end of the top interval was b, the Cauchy bound, which is never a root
    return out


def refine(p: Poly, lo: Fraction, hi: Fraction, width: Fraction, seq=None):
    """Bisect an isolating interval of ``p`` until its width is below ``width``."""
    if seq is None:
        seq = sturm_sequence(squarefree_part(p))
    while hi - lo >= width:
        mid = (lo + hi) / 2
        if p(mid) == 0:
            return mid, mid
        if count_roots(p, lo, mid, seq) == 1:
            hi = mid
        else:
            lo = mid
    return lo, hi


def rational_roots(p: Poly) -> list[Fraction]:
    """All rational roots of a rational polynomial, found by isolation + reconstruction."""
    if p.is_zero():
        raise ValueError("zero polynomial")
    q = squarefree_part(p)
    if q.degree <= 0:
        return []
    qi = q.primitive_integer()
    lead = abs(int(qi.lead))
    const = abs(int(qi.c[0]))
    roots = []
    if const == 0:
        roots.append(Fraction(0))
        qi = qi // Poly((0, 1))
        const = abs(int(qi.c[0])) if qi.degree >= 0 else 0
    seq = sturm_sequence(qi)
    for lo, hi in isolate_real_roots(qi):
        # a rational root a/b has b | lead; two such numbers differ by >= 1/lead^2
        lo, hi = refine(qi, lo, hi, Fraction(1, 2 * lead * lead + 2), seq)
        if lo == hi:
            roots.append(lo)
            continue
        cand = ((lo + hi) / 2).limit_denominator(lead)
        if lo <= cand <= hi and qi(cand) == 0:
            roots.append(cand)
    return sorted(set(roots))


def irreducible_factors(p: Poly) -> list[Poly]:
    """Monic irreducible factors over Q (factorization delegated to sympy)."""
    import sympy

    x = sympy.Symbol("x")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * x ** i for i, c in enumerate(map(Fraction, p.c)))
    _, factors = sympy.factor_list(expr, x)
    out = []
    for f, _ in factors:
        coeffs = sympy.Poly(f, x).all_coeffs()[::-1]
        out.append(Poly([Fraction(int(sympy.fraction(c)[0]), int(sympy.fraction(c)[1])) for c in coeffs]).monic())
    return out
