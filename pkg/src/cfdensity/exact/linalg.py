"""Dense exact linear algebra on lists of rows.

Entries may be ints, Fractions or algebraic numbers; every routine only uses
field operations and exact zero tests.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = list  # list of rows
Vector = list


def as_fraction_matrix(m) -> Matrix:
    return [[Fraction(a) if isinstance(a, int) else a for a in row] for row in m]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(n: int, k: int | None = None) -> Matrix:
    return [[Fraction(0)] * (n if k is None else k) for _ in range(n)]


def transpose(m) -> Matrix:
    return [list(col) for col in zip(*m)]


def mat_mul(a, b) -> Matrix:
    bt = list(zip(*b))
    out = []
    for row in a:
        out_row = []
        for col in bt:
            acc = 0
            for x, y in zip(row, col):
                if x != 0 and y != 0:
                    acc = acc + x * y
            out_row.append(acc)
        out.append(out_row)
    return out


def mat_vec(m, v) -> Vector:
    out = []
    for row in m:
        acc = 0
        for x, y in zip(row, v):
            if x != 0 and y != 0:
                acc = acc + x * y
        out.append(acc)
    return out


def vec_mat(v, m) -> Vector:
    return mat_vec(transpose(m), v)


def mat_add(a, b) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a, b) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a, s) -> Matrix:
    return [[x * s for x in row] for row in a]


def mat_pow(a, n: int) -> Matrix:
    out = identity(len(a))
    base = a
    while n:
        if n & 1:
            out = mat_mul(out, base)
        base = mat_mul(base, base)
        n >>= 1
    return out


def is_zero_matrix(a) -> bool:
    return all(x == 0 for row in a for x in row)


def columns(m) -> list[Vector]:
    return transpose(m)


def from_columns(cols) -> Matrix:
    return transpose(cols)


def det(m) -> Fraction:
    n = len(m)
    a = as_fraction_matrix(m)
    sign = 1
    result = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        p = a[c][c]
        result = result * p
        for r in range(c + 1, n):
            if a[r][c] != 0:
                f = a[r][c] / p
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return result * sign


def inverse(m) -> Matrix:
    n = len(m)
    a = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(as_fraction_matrix(m))]
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[piv] = a[piv], a[c]
        p = a[c][c]
        a[c] = [x / p for x in a[c]]
        for r in range(n):
            if r != c and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


def rank(m) -> int:
    a = as_fraction_matrix(m)
    if not a:
        return 0
    rows, cols = len(a), len(a[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, rows):
            if a[i][c] != 0:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == rows:
            break
    return r


def solve(m, b) -> Vector:
    """Solve m x = b for square invertible m."""
    return mat_vec(inverse(m), b)


def charpoly(m):
    """Characteristic polynomial det(xI - m) by Faddeev-LeVerrier."""
    from .poly import Poly

    n = len(m)
    a = as_fraction_matrix(m)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    mk = zeros(n)
    eye = identity(n)
    for k in range(1, n + 1):
        mk = mat_add(mat_mul(a, mk), mat_scale(eye, coeffs[n - k + 1]))
        am = mat_mul(a, mk)
        tr = sum((am[i][i] for i in range(n)), Fraction(0))
        coeffs[n - k] = -tr / k
    return Poly(coeffs)


def primitive_int_vector(v) -> tuple[int, ...]:
    """Scale a nonzero rational vector to coprime integers, keeping its direction."""
    den = 1
    for a in v:
        a = Fraction(a)
        den = den * a.denominator // gcd(den, a.denominator)
    ints = [int(Fraction(a) * den) for a in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no direction")
    return tuple(x // g for x in ints)


def int_matrix(m) -> tuple[tuple[int, ...], ...]:
    out = []
    for row in m:
        r = []
        for a in row:
            a = Fraction(a)
            if a.denominator != 1:
                raise ValueError(f"non-integer entry {a}")
            r.append(int(a))
        out.append(tuple(r))
    return tuple(out)


def dot(u, v):
    acc = 0
    for x, y in zip(u, v):
        if x != 0 and y != 0:
            acc = acc + x * y
    return acc
