"""Certified signs of expressions mixing algebraic numbers from unrelated fields.

Exact arithmetic needs a common number field; when none is available the
expression is evaluated in rational interval arithmetic with tighter and
tighter enclosures of each algebraic number. A nonzero value is eventually
certified; a value that stays ambiguous raises Unsupported.
"""

from __future__ import annotations

from fractions import Fraction

from .algnum import AlgNum, Unsupported


class Interval:
    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        self.lo = Fraction(lo)
        self.hi = self.lo if hi is None else Fraction(hi)

    @staticmethod
    def _wrap(x):
        return x if isinstance(x, Interval) else Interval(x)

    def __add__(self, o):
        o = self._wrap(o)
        return Interval(self.lo + o.lo, self.hi + o.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, o):
        return self + (-self._wrap(o))

    def __rsub__(self, o):
        return self._wrap(o) - self

    def __mul__(self, o):
        o = self._wrap(o)
        ps = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Interval(min(ps), max(ps))

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = self._wrap(o)
        if o.lo <= 0 <= o.hi:
            raise ZeroDivisionError("interval contains zero")
        return self * Interval(1 / o.hi, 1 / o.lo)

    def __rtruediv__(self, o):
        return self._wrap(o) / self

    def sign(self):
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        return None


def enclose(x, width: Fraction) -> Interval:
    if not isinstance(x, AlgNum):
        return Interval(x)
    gen = x.gen
    gen.refine_to(width)
    box = Interval(gen.lo, gen.hi)
    acc = Interval(0)
    for c in reversed(x.res.c):
        acc = acc * box + c
    return acc


def certified_sign(fn, values, max_bits: int = 512) -> int:
    """Sign of fn(*values) with fn built from + - * /, via shrinking enclosures."""
    bits = 12
    while bits <= max_bits:
        w = Fraction(1, 2 ** bits)
        try:
            s = fn(*[enclose(v, w) for v in values]).sign()
        except ZeroDivisionError:
            s = None
        if s is not None:
            return s
        bits *= 2
    raise Unsupported("sign could not be certified across unrelated number fields")


def robust_sign(fn, values) -> int:
    """Exact sign when the values share a field, certified interval sign otherwise."""
    if _unrelated(values):
        try:
            return certified_sign(fn, values, max_bits=96)
        except Unsupported:
            pass  # possibly an exact zero between two presentations of one field
    try:
        v = fn(*values)
        if isinstance(v, AlgNum):
            return v.sign()
        return (v > 0) - (v < 0)
    except Unsupported:
        return certified_sign(fn, values)


def _unrelated(values) -> bool:
    # two non-quadratic generators with different polynomials never share a field here
    polys = {v.gen.poly for v in values if isinstance(v, AlgNum) and v.gen.quad_d is None}
    return len(polys) > 1
