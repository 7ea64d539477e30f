"""Limit cones of powers of nonnegative matrices."""

from __future__ import annotations

from fractions import Fraction
from math import gcd

import networkx as nx

from .algnum import Unsupported, root_of, sign
from .linalg import as_fraction_matrix, charpoly, identity, is_zero_matrix, mat_mul, mat_pow, mat_sub, mat_scale, transpose
from .poly import Poly, isolate_real_roots, poly_gcd, squarefree_part


def _sccs(adj: list[list[int]]) -> list[list[int]]:
    g = nx.DiGraph()
    g.add_nodes_from(range(len(adj)))
    g.add_edges_from((i, j) for i, row in enumerate(adj) for j in row)
    return [sorted(c) for c in nx.strongly_connected_components(g)]


def cyclicity(m) -> int:
    """lcm of the periods of the nontrivial strongly connected classes of the support digraph."""
    n = len(m)
    adj = [[j for j in range(n) if m[i][j] != 0] for i in range(n)]
    p = 1
    for comp in _sccs(adj):
        cs = set(comp)
        if len(comp) == 1 and comp[0] not in adj[comp[0]]:
            continue
        level = {comp[0]: 0}
        queue = [comp[0]]
        g = 0
        while queue:
            v = queue.pop(0)
            for w in adj[v]:
                if w not in cs:
                    continue
                if w not in level:
                    level[w] = level[v] + 1
                    queue.append(w)
                else:
                    g = gcd(g, level[v] + 1 - level[w])
        p = p * g // gcd(p, g)
    return p


def dominant_limit_cone(m) -> list[tuple]:
    """Extremal points (coordinate sum 1) of the closure of lim m^n (R_+^*)^d.

    The power m^p with p the cyclicity makes every class primitive; with
    Lambda its spectral radius and k the size of the largest Jordan block at
    Lambda, m^{pn}/(n^{k-1} Lambda^{pn}) converges to a positive multiple of
    B = (M - Lambda)^{k-1} H(M), H the cofactor of (x - Lambda)^a in the
    characteristic polynomial. The limit cone is spanned by the columns of B.
    """
    from ..geometry import extremal_rays, normalize_sum

    a = as_fraction_matrix(m)
    if any(sign(x) < 0 for row in a for x in row):
        raise ValueError("matrix must be nonnegative")
    n = len(a)
    big = mat_pow(a, cyclicity(a))
    cp = charpoly(big)
    lam = root_of(squarefree_part(cp), *isolate_real_roots(cp)[-1])
    if sign(lam) <= 0:
        raise Unsupported("nilpotent matrix has no limit cone")
    if _is_simple_root(cp, lam):
        return [normalize_sum(_perron_column(big, lam))]
    lin = Poly((-lam, 1))
    h = cp
    while True:
        q, r = h.divmod(lin)
        if not r.is_zero():
            break
        h = q
    shift = mat_sub(big, mat_scale(identity(n), lam))
    b = h.eval_matrix(big)
    if is_zero_matrix(b):
        raise Unsupported("spectral projection vanished")
    while True:
        nb = mat_mul(shift, b)
        if is_zero_matrix(nb):
            break
        b = nb
    cols = []
    for col in transpose(b):
        if all(x == 0 for x in col):
            continue
        signs = {sign(x) for x in col} - {0}
        if signs == {-1}:
            col = [-x for x in col]
        elif len(signs) > 1:
            raise Unsupported("limit direction leaves the positive cone")
        cols.append(col)
    return [normalize_sum(v) for v in extremal_rays(cols)]


def _is_simple_root(cp: Poly, lam) -> bool:
    g = poly_gcd(cp, cp.deriv())
    if g.degree < 1:
        return True
    acc = 0
    for c in reversed(g.c):
        acc = acc * lam + c
    return acc != 0


def _perron_column(m, lam) -> list:
    """A nonzero column of adj(m - lam), which spans the eigenline of a simple root lam."""
    n = len(m)
    a = [[m[i][j] - (lam if i == j else 0) for j in range(n)] for i in range(n)]
    for j in range(n):
        col = []
        for i in range(n):
            # cofactor C_{j,i} gives entry (i, j) of the adjugate
            minor = [[a[r][c] for c in range(n) if c != i] for r in range(n) if r != j]
            col.append((-1) ** (i + j) * _det(minor))
        signs = {sign(x) for x in col} - {0}
        if not signs:
            continue
        if signs == {-1}:
            col = [-x for x in col]
        elif len(signs) > 1:
            raise Unsupported("limit direction leaves the positive cone")
        return col
    raise Unsupported("adjugate vanished at a simple root")


def _det(a):
    n = len(a)
    if n == 0:
        return 1
    if n == 1:
        return a[0][0]
    if n == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    return sum((-1) ** j * a[0][j] * _det([r[:j] + r[j + 1:] for r in a[1:]]) for j in range(n) if a[0][j] != 0)
