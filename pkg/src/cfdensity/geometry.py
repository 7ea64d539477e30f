"""Exact geometry of cones in R_+^d through their cross-section with the simplex.

A cone is a list of generator vectors. For d = 2 its cross-section is an
interval of the parameter t = x0/(x0+x1); for d = 3 it is a convex polygon in
the chart (x0, x1) of the plane x0+x1+x2 = 1 (an affine chart, so area ratios
are preserved). All predicates are exact over Fraction and AlgNum.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .exact.algnum import AlgNum, Unsupported, sign
from .exact.interval import robust_sign
from .exact.linalg import primitive_int_vector


def is_rational_vector(v) -> bool:
    return all(not isinstance(a, AlgNum) for a in v)


def _exact(v):
    return [Fraction(a) if isinstance(a, int) else a for a in v]


def normalize_sum(v):
    v = _exact(v)
    s = sum(v[1:], v[0])
    if sign(s) <= 0:
        raise ValueError("vector outside the positive cone")
    return tuple(a / s for a in v)


def normalize_generator(v) -> tuple:
    """Canonical representative of the ray R_+ v: primitive integers if rational, else sum 1."""
    if is_rational_vector(v):
        return tuple(int(a) for a in primitive_int_vector(v))
    return normalize_sum(v)


def _key(v):
    return tuple(float(a) for a in normalize_sum(v))


def canonical_sort(vectors) -> list:
    """Sort generators lexicographically by exact value (ties cannot occur after dedupe)."""
    import functools

    def cmp(u, w):
        for a, b in zip(u, w):
            s = robust_sign(_diff, (a, b))
            if s:
                return s
        return 0

    return sorted(vectors, key=functools.cmp_to_key(cmp))


def dedupe_rays(vectors) -> list:
    out = []
    for v in vectors:
        nv = normalize_generator(v)
        if not any(all(a == b for a, b in zip(nv, w)) for w in out):
            out.append(nv)
    return out


# planar primitives ---------------------------------------------------------

def chart(v):
    """Point of the d=3 cross-section in the (x0, x1) chart."""
    v = _exact(v)
    s = v[0] + v[1] + v[2]
    return (v[0] / s, v[1] / s)


def cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _diff(a, b):
    return a - b


def orientation(o, a, b) -> int:
    """Sign of cross(o, a, b); certified even when the points lie in unrelated fields."""
    return robust_sign(lambda o0, o1, a0, a1, b0, b1: (a0 - o0) * (b1 - o1) - (a1 - o1) * (b0 - o0), (*o, *a, *b))


def _lt(p, q) -> bool:
    s = robust_sign(_diff, (p[0], q[0]))
    if s:
        return s < 0
    return robust_sign(_diff, (p[1], q[1])) < 0


def _eq(p, q) -> bool:
    return p[0] == q[0] and p[1] == q[1]


def convex_hull(points) -> list:
    """Vertices of the convex hull in counter-clockwise order, collinear points dropped."""
    import functools

    pts = []
    for p in points:
        if not any(_eq(p, q) for q in pts):
            pts.append(p)
    if len(pts) <= 2:
        return sorted(pts, key=functools.cmp_to_key(lambda a, b: -1 if _lt(a, b) else (1 if _lt(b, a) else 0)))
    pts.sort(key=functools.cmp_to_key(lambda a, b: -1 if _lt(a, b) else (1 if _lt(b, a) else 0)))
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and orientation(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and orientation(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def polygon_area(poly) -> Fraction:
    """Absolute area of a simple polygon (shoelace)."""
    n = len(poly)
    if n < 3:
        return Fraction(0)
    acc = Fraction(0)
    for i in range(n):
        x1, y1 = poly[i]
        x2, y2 = poly[(i + 1) % n]
        acc = acc + (x1 * y2 - x2 * y1)
    return abs(acc) / 2


def clip_convex(subject, clipper) -> list:
    """Intersection of two convex CCW polygons (Sutherland-Hodgman)."""
    out = list(subject)
    n = len(clipper)
    if n < 3:
        return []
    for i in range(n):
        a, b = clipper[i], clipper[(i + 1) % n]
        inp = out
        out = []
        if not inp:
            break
        for j in range(len(inp)):
            p, q = inp[j], inp[(j + 1) % len(inp)]
            sp, sq = sign(cross(a, b, p)), sign(cross(a, b, q))
            if sp >= 0:
                out.append(p)
            if sp * sq < 0:
                cp, cq = cross(a, b, p), cross(a, b, q)
                t = cp / (cp - cq)
                out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return convex_hull(out) if len(out) >= 3 else out


def point_in_convex(p, poly) -> bool:
    """Closed containment of a point in a convex CCW polygon."""
    n = len(poly)
    if n < 3:
        return False
    return all(orientation(poly[i], poly[(i + 1) % n], p) >= 0 for i in range(n))


# cones -----------------------------------------------------------------------

def cone_section(gens):
    """Cross-section of the cone spanned by ``gens``: an interval (d=2) or polygon (d=3)."""
    d = len(gens[0])
    if d == 2:
        ts = [normalize_sum(g)[0] for g in gens]
        lo = ts[0]
        hi = ts[0]
        for t in ts[1:]:
            if robust_sign(_diff, (t, lo)) < 0:
                lo = t
            if robust_sign(_diff, (t, hi)) > 0:
                hi = t
        return (lo, hi)
    if d == 3:
        return convex_hull([chart(g) for g in gens])
    raise ValueError("exact cross-sections are implemented for d <= 3")


def section_measure(sec, d: int):
    if d == 2:
        return sec[1] - sec[0]
    return polygon_area(sec)


def section_intersection_measure(a, b, d: int):
    if d == 2:
        lo = a[0] if sign(a[0] - b[0]) >= 0 else b[0]
        hi = a[1] if sign(a[1] - b[1]) <= 0 else b[1]
        return hi - lo if sign(hi - lo) > 0 else Fraction(0)
    return polygon_area(clip_convex(a, b))


def section_contains(outer, inner, d: int) -> bool:
    if d == 2:
        return sign(inner[0] - outer[0]) >= 0 and sign(outer[1] - inner[1]) >= 0
    return all(point_in_convex(p, outer) for p in inner)


def _float_hull(pts) -> list:
    """Indices of the convex hull vertices of float points (monotone chain)."""
    order = sorted(range(len(pts)), key=lambda i: pts[i])

    def turn(o, a, b):
        return (pts[a][0] - pts[o][0]) * (pts[b][1] - pts[o][1]) - (pts[a][1] - pts[o][1]) * (pts[b][0] - pts[o][0])

    def chain(idx):
        out: list = []
        for i in idx:
            while len(out) >= 2 and turn(out[-2], out[-1], i) <= 0:
                out.pop()
            out.append(i)
        return out[:-1]

    return chain(order) + chain(list(reversed(order)))


def _prefilter(vectors) -> list:
    """Drop d=3 vectors certified (exactly) to lie in a triangle of approximate hull vertices."""
    charts = [chart(v) for v in vectors]
    approx = [(float(a), float(b)) for a, b in charts]
    hull = _float_hull(approx)
    if len(hull) < 3:
        return list(vectors)
    hs = set(hull)
    keep = [vectors[i] for i in hull]
    root = hull[0]
    for i in range(len(vectors)):
        if i in hs:
            continue
        x, y = approx[i]
        inside = False
        for a, b in zip(hull[1:], hull[2:]):
            tri = (root, a, b)
            # float pre-test, then an exact certificate
            if all(_fturn(approx[p], approx[q], (x, y)) >= -1e-12 for p, q in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0]))):
                c = [charts[k] for k in tri]
                try:
                    inside = all(orientation(c[k], c[(k + 1) % 3], charts[i]) >= 0 for k in range(3))
                except Unsupported:
                    inside = False
                break
        if not inside:
            keep.append(vectors[i])
    return keep


def _fturn(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def extremal_rays(vectors) -> list:
    """Generators of the cone spanned by ``vectors`` that are not combinations of the others."""
    if len(vectors) > 6 and len(vectors[0]) == 3:
        vectors = _prefilter(list(vectors))
    rays = dedupe_rays(vectors)
    if not rays:
        return []
    d = len(rays[0])
    if len(rays) <= 1:
        return rays
    if d == 2:
        lo, hi = cone_section(rays)
        out = [r for r in rays if normalize_sum(r)[0] == lo or normalize_sum(r)[0] == hi]
        return canonical_sort(dedupe_rays(out))
    if d == 3:
        hull = convex_hull([chart(r) for r in rays])
        out = [r for r in rays if any(_eq(chart(r), h) for h in hull)]
        return canonical_sort(out)
    return canonical_sort(_extremal_lp(rays))


def _extremal_lp(rays) -> list:
    # floating-point LP; only reached for d >= 4 where exact polytopes are out of scope
    import numpy as np
    from scipy.optimize import linprog

    pts = np.array([[float(a) for a in normalize_sum(r)] for r in rays])
    keep = []
    for i in range(len(pts)):
        others = np.delete(pts, i, axis=0)
        a_eq = np.vstack([others.T, np.ones(len(others))])
        b_eq = np.append(pts[i], 1.0)
        res = linprog(np.zeros(len(others)), A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
        if res.status != 0:
            keep.append(rays[i])
    return keep


def fan_triangulation(gens) -> list:
    """Split a d=3 cone into simplicial cones by a fan from its canonically smallest extreme ray."""
    d = len(gens[0])
    ext = extremal_rays(gens)
    if d == 2 or len(ext) == d:
        return [ext]
    if d != 3:
        raise ValueError("fan triangulation implemented for d <= 3")
    root = ext[0]
    hull = convex_hull([chart(r) for r in ext])
    order = [next(r for r in ext if _eq(chart(r), h)) for h in hull]
    k = next(i for i, r in enumerate(order) if r is root or all(a == b for a, b in zip(r, root)))
    order = order[k:] + order[:k]
    return [canonical_sort([order[0], order[i], order[i + 1]]) for i in range(1, len(order) - 1)]
