"""Real algebraic numbers.

An :class:`AlgNum` is ``residue(alpha)`` where ``alpha`` is a real root of a
squarefree rational polynomial, pinned down by an isolating interval
(:class:`RealRoot`). Numbers whose value is rational are always returned as
``Fraction``; together the two types form the scalar tower used everywhere
else in the package.

Quadratic generators are kept in the canonical form ``x^2 - D`` (``D`` a
squarefree integer, root ``+sqrt(D)``), so elements of the same real quadratic
field always share a generator. Elements of two different quadratic fields are
combined in the biquadratic compositum. Any other mix of generators raises
:class:`Unsupported`.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Union

from .poly import (
    irreducible_factors,
    Poly,
    count_roots,
    isolate_real_roots,
    poly_gcd,
    poly_xgcd,
    rational_roots,
    squarefree_part,
    sturm_sequence,
)


class Unsupported(ArithmeticError):
    """Raised when an exact computation falls outside the supported number fields."""


def squarefree_decompose(n: int) -> tuple[int, int]:
    """Return (s, D) with n = s^2 * D and D squarefree (sign kept in D)."""
    if n == 0:
        return 0, 0
    sign = -1 if n < 0 else 1
    n = abs(n)
    s, d = 1, 1
    p = 2
    while p * p <= n and p < 1_000_000:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            s *= p ** (e // 2)
            if e % 2:
                d *= p
        p += 1 if p == 2 else 2
    if n > 1:
        r = isqrt(n)
        if r * r == n:
            s *= r
        else:
            d *= n
    return s, sign * d


def _horner_range(q: Poly, lo: Fraction, hi: Fraction):
    """Enclosure of q over [lo, hi] by interval Horner evaluation."""
    a, b = Fraction(0), Fraction(0)
    for c in reversed(q.c):
        ps = (a * lo, a * hi, b * lo, b * hi)
        a, b = min(ps) + c, max(ps) + c
    return a, b


class RealRoot:
    """The unique root of ``poly`` inside the open interval (lo, hi)."""

    __slots__ = ("poly", "lo", "hi", "_seq", "quad_d", "sqrt_images", "irreducible")

    def __init__(self, poly: Poly, lo: Fraction, hi: Fraction, quad_d: int | None = None, irreducible: bool = False):
        self.poly = poly
        self.lo = Fraction(lo)
        self.hi = Fraction(hi)
        self._seq = None
        self.quad_d = quad_d
        # an irreducible generator polynomial makes every nonzero residue nonzero at alpha
        self.irreducible = irreducible or quad_d is not None
        # residues of sqrt(D) for the quadratic subfields of a biquadratic generator
        self.sqrt_images: dict[int, Poly] = {}

    @property
    def degree(self) -> int:
        return self.poly.degree

    @property
    def seq(self):
        if self._seq is None:
            self._seq = sturm_sequence(self.poly)
        return self._seq

    def bisect(self) -> None:
        # narrows the cached interval; the denoted root never changes
        mid = (self.lo + self.hi) / 2
        if self.poly(mid) == 0:
            raise AssertionError("generator polynomial has a rational root inside its interval")
        if count_roots(self.poly, self.lo, mid, self.seq) == 1:
            self.hi = mid
        else:
            self.lo = mid

    def refine_to(self, width: Fraction) -> None:
        while self.hi - self.lo >= width:
            self.bisect()

    def is_root_of(self, q: Poly) -> bool:
        if q.is_zero():
            return True
        if self.irreducible:
            return (q % self.poly).is_zero()
        g = poly_gcd(q, self.poly)
        if g.degree < 1:
            return False
        return count_roots(g, self.lo, self.hi) > 0

    def sign_at(self, q: Poly) -> int:
        """Exact sign of q(alpha)."""
        if q.is_zero() or self.is_root_of(q):
            return 0
        if q.degree == 0:
            return 1 if q.c[0] > 0 else -1
        if self.irreducible:
            # q(alpha) != 0, so a fine enough enclosure of alpha separates q from 0
            while True:
                lo, hi = _horner_range(q, self.lo, self.hi)
                if lo > 0:
                    return 1
                if hi < 0:
                    return -1
                self.bisect()
        sq = squarefree_part(q)
        sseq = sturm_sequence(sq)
        while sq(self.lo) == 0 or sq(self.hi) == 0 or count_roots(sq, self.lo, self.hi, sseq) > 0:
            self.bisect()
        v = q(self.lo)
        return 1 if v > 0 else -1

    def same_as(self, other: "RealRoot"):
        """Common generator for two descriptions of the same root, or None if the roots differ."""
        if other is self:
            return self
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        if lo >= hi:
            return None
        if self.poly == other.poly:
            if count_roots(self.poly, lo, hi) == 1 and self.poly(hi) != 0:
                return self
            return None
        g = poly_gcd(self.poly, other.poly)
        if g.degree < 1:
            return None
        while g(lo) == 0 or g(hi) == 0:
            # shrink towards the inside; both original intervals isolate the root
            if self.hi - self.lo > other.hi - other.lo:
                self.bisect()
            else:
                other.bisect()
            lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
            if lo >= hi:
                return None
        if count_roots(g, lo, hi) == 1:
            quad = self.quad_d if g == self.poly else (other.quad_d if g == other.poly else None)
            return RealRoot(g, lo, hi, quad)
        return None

    def approx(self) -> float:
        self.refine_to(Fraction(1, 2**60))
        return float((self.lo + self.hi) / 2)

    def __repr__(self):
        return f"RealRoot({self.poly}, ({self.lo}, {self.hi}))"


_QUAD_CACHE: dict[int, RealRoot] = {}


def sqrt_generator(d: int) -> RealRoot:
    """Generator +sqrt(d) for a squarefree integer d > 1."""
    gen = _QUAD_CACHE.get(d)
    if gen is None:
        r = isqrt(d)
        gen = RealRoot(Poly((-d, 0, 1)), Fraction(r), Fraction(r + 1), quad_d=d)
        _QUAD_CACHE[d] = gen
    return gen


def sqrt_rat(q) -> Union[Fraction, "AlgNum"]:
    """Exact square root of a nonnegative rational."""
    q = Fraction(q)
    if q < 0:
        raise ValueError("square root of a negative number")
    if q == 0:
        return Fraction(0)
    s, d = squarefree_decompose(q.numerator * q.denominator)
    coef = Fraction(s, q.denominator)
    if d == 1:
        return coef
    return AlgNum(sqrt_generator(d), Poly((0, coef)))


def root_of(poly: Poly, lo, hi):
    """The unique real root of ``poly`` in (lo, hi), as a Fraction or an AlgNum."""
    poly = squarefree_part(Poly(poly.c))
    lo, hi = Fraction(lo), Fraction(hi)
    if count_roots(poly, lo, hi) != 1 or poly(hi) == 0 or poly(lo) == 0:
        raise ValueError("interval does not isolate a single root")
    rr = rational_roots(poly)
    for r in rr:
        if lo < r < hi:
            return r
        poly = poly // Poly((-r, 1))
    poly = poly.monic()
    # without rational roots a cubic is irreducible
    if poly.degree > 3:
        for f in irreducible_factors(poly):
            if f.degree >= 1 and f(lo) != 0 and f(hi) != 0 and count_roots(f, lo, hi) == 1:
                poly = f.monic()
                break
    if poly.degree == 2:
        # alpha = -p/2 +/- sqrt(p^2/4 - q)
        p, q = poly.c[1], poly.c[0]
        centre = -p / 2
        gen = RealRoot(poly, lo, hi)
        while gen.lo < centre < gen.hi:
            gen.bisect()
        sign = 1 if gen.lo >= centre else -1
        s = sqrt_rat(centre * centre - q)
        return centre + sign * s
    return AlgNum(RealRoot(poly, lo, hi, irreducible=True), Poly((0, 1)))


def real_roots(poly: Poly) -> list:
    """All real roots of a rational polynomial in increasing order, as exact scalars."""
    return [root_of(squarefree_part(poly), lo, hi) for lo, hi in isolate_real_roots(poly)]


def _compositum(g1: RealRoot, g2: RealRoot):
    """Generator theta = sqrt(a) + sqrt(b) and the images of sqrt(a), sqrt(b) as residues."""
    a, b = Fraction(g1.quad_d), Fraction(g2.quad_d)
    poly = Poly(((a - b) ** 2, 0, -2 * (a + b), 0, 1))
    seq = sturm_sequence(poly)
    while True:
        lo, hi = g1.lo + g2.lo, g1.hi + g2.hi
        if poly(lo) != 0 and poly(hi) != 0 and count_roots(poly, lo, hi, seq) == 1:
            break
        g1.bisect()
        g2.bisect()
    theta = RealRoot(poly, lo, hi, irreducible=True)
    sa = Poly((0, -(3 * a + b), 0, 1)) * (1 / (2 * (b - a)))
    sb = Poly((0, 1)) - sa
    s, d = squarefree_decompose(g1.quad_d * g2.quad_d)
    theta.sqrt_images = {g1.quad_d: sa, g2.quad_d: sb, d: (sa * sb * Fraction(1, s)) % poly}
    return theta, sa, sb


def _common(x: "AlgNum", y: "AlgNum"):
    """Express two algebraic numbers over one generator: (gen, res_x, res_y)."""
    if x.gen is y.gen:
        return x.gen, x.res, y.res
    g = x.gen.same_as(y.gen)
    if g is not None:
        return g, x.res % g.poly, y.res % g.poly
    for u, v, flip in ((x, y, False), (y, x, True)):
        img = u.gen.sqrt_images.get(v.gen.quad_d) if v.gen.quad_d is not None else None
        if img is not None:
            rv = v.res.compose(img) % u.gen.poly
            return (u.gen, rv, u.res) if flip else (u.gen, u.res, rv)
    if x.gen.quad_d is not None and y.gen.quad_d is not None:
        key = (x.gen.quad_d, y.gen.quad_d)
        cached = _COMPOSITA.get(key)
        if cached is None:
            cached = _compositum(x.gen, y.gen)
            _COMPOSITA[key] = cached
            _COMPOSITA[(key[1], key[0])] = (cached[0], cached[2], cached[1])
        theta, sx, sy = cached
        rx = x.res.compose(sx) % theta.poly
        ry = y.res.compose(sy) % theta.poly
        return theta, rx, ry
    raise Unsupported(
        f"cannot combine algebraic numbers of degrees {x.gen.degree} and {y.gen.degree} from different fields"
    )


_COMPOSITA: dict = {}


def _make(gen: RealRoot, res: Poly):
    res = res % gen.poly
    if res.degree <= 0:
        return res.c[0] if res.c else Fraction(0)
    return AlgNum(gen, res)


class AlgNum:
    """residue(alpha) for a generator alpha given as a :class:`RealRoot`."""

    __slots__ = ("gen", "res")

    def __init__(self, gen: RealRoot, res: Poly):
        self.gen = gen
        self.res = res

    # coercion ------------------------------------------------------------
    def _pair(self, other):
        if isinstance(other, AlgNum):
            return _common(self, other)
        if isinstance(other, (int, Fraction)):
            return self.gen, self.res, Poly((Fraction(other),))
        return None

    def __add__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        g, a, b = p
        return _make(g, a + b)

    __radd__ = __add__

    def __sub__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        g, a, b = p
        return _make(g, a - b)

    def __rsub__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        g, a, b = p
        return _make(g, b - a)

    def __neg__(self):
        return AlgNum(self.gen, -self.res)

    def __pos__(self):
        return self

    def __mul__(self, other):
        p = self._pair(other)
        if p is None:
            return NotImplemented
        g, a, b = p
        return _make(g, a * b)

    __rmul__ = __mul__

    def _inverse_in(self, gen: RealRoot, res: Poly):
        gcd_, s, _ = poly_xgcd(res, gen.poly)
        if gcd_.degree == 0:
            return gen, s % gen.poly
        if gen.is_root_of(gcd_):
            raise ZeroDivisionError("division by an algebraic zero")
        # alpha is a root of the cofactor: shrink the generator and retry
        cof = gen.poly // gcd_
        new = RealRoot(cof.monic(), gen.lo, gen.hi, gen.quad_d)
        return self._inverse_in(new, res % new.poly)

    def inverse(self):
        g, inv = self._inverse_in(self.gen, self.res)
        return _make(g, inv)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return _make(self.gen, self.res * (1 / Fraction(other)))
        if isinstance(other, AlgNum):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = Fraction(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # order -----------------------------------------------------------------
    def sign(self) -> int:
        d = self.gen.quad_d
        if d is not None:
            r0, r1 = self.res[0], self.res[1]
            # sign of r0 + r1*sqrt(d)
            s0 = (r0 > 0) - (r0 < 0)
            s1 = (r1 > 0) - (r1 < 0)
            if s0 == 0 or s0 == s1:
                return s1 if s1 else s0
            if s1 == 0:
                return s0
            return s0 if r0 * r0 > r1 * r1 * d else -s0
        return self.gen.sign_at(self.res)

    def _cmp(self, other) -> int:
        diff = self - other
        if isinstance(diff, AlgNum):
            return diff.sign()
        return (diff > 0) - (diff < 0)

    def _range(self):
        return _horner_range(self.res, self.gen.lo, self.gen.hi)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, AlgNum)):
            # cheap disequality from the cached isolating intervals
            lo, hi = self._range()
            olo, ohi = other._range() if isinstance(other, AlgNum) else (other, other)
            if hi < olo or ohi < lo:
                return False
            try:
                return self._cmp(other) == 0
            except Unsupported:
                return False
        return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __lt__(self, other):
        if not isinstance(other, (int, Fraction, AlgNum)):
            return NotImplemented
        return self._cmp(other) < 0

    def __le__(self, other):
        if not isinstance(other, (int, Fraction, AlgNum)):
            return NotImplemented
        return self._cmp(other) <= 0

    def __gt__(self, other):
        if not isinstance(other, (int, Fraction, AlgNum)):
            return NotImplemented
        return self._cmp(other) > 0

    def __ge__(self, other):
        if not isinstance(other, (int, Fraction, AlgNum)):
            return NotImplemented
        return self._cmp(other) >= 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __bool__(self):
        return self.sign() != 0

    def __hash__(self):
        if self.gen.quad_d is not None:
            return hash(("sqrt", self.gen.quad_d, self.res[0], self.res[1]))
        return hash("algnum")

    def __float__(self):
        gen = self.gen
        gen.refine_to(Fraction(1, 2**64))
        return float(self.res((gen.lo + gen.hi) / 2))

    def quadratic_parts(self):
        """(r0, r1, D) with value r0 + r1*sqrt(D), for elements of a real quadratic field."""
        if self.gen.quad_d is None:
            raise Unsupported("not a quadratic irrational")
        return self.res[0], self.res[1], self.gen.quad_d

    def __str__(self):
        if self.gen.quad_d is not None:
            return format_quadratic(self.res[0], self.res[1], self.gen.quad_d)
        return f"({self.res})[x=root of {self.gen.poly} in ({self.gen.lo}, {self.gen.hi})]"

    def __repr__(self):
        return f"AlgNum({self})"


def format_quadratic(r0: Fraction, r1: Fraction, d: int) -> str:
    """Render r0 + r1*sqrt(d) as "(a+b*sqrt(D))/c" with integers a, b, c."""
    r0, r1 = Fraction(r0), Fraction(r1)
    c = r0.denominator * r1.denominator // _gcd(r0.denominator, r1.denominator)
    a, b = int(r0 * c), int(r1 * c)
    sb = f"+{b}" if b >= 0 else str(b)
    body = f"{a}{sb}*sqrt({d})"
    return f"({body})/{c}" if c != 1 else f"({body})"


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


Scalar = Union[Fraction, AlgNum]


def is_scalar(x) -> bool:
    return isinstance(x, (int, Fraction, AlgNum))


def sign(x) -> int:
    if isinstance(x, AlgNum):
        return x.sign()
    return (x > 0) - (x < 0)


def to_float(x) -> float:
    return float(x)
