"""Floating point checks: empirical densities from orbit histograms, and domain point clouds."""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..cfgraph import MatricesGraph, WinLoseGraph, eye, matmul, tr
from ..convert import GeneralCFGraph, cone_contains
from ..exact.linalg import inverse, mat_vec
from ..geometry import fan_triangulation, normalize_sum
from ..density import DensityExpr

CHUNK = 25_000
TRI_DEPTH = 6
BINS_1D = 200


class NonFiniteOrbit(ArithmeticError):
    pass


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    samples: int = 100_000
    iters: int = 1000
    depth: int = 10
    tolerance: Fraction = Fraction(1, 20)
    workers: int = 4

    def __post_init__(self):
        for name in ("samples", "iters", "depth", "workers"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must fit in 64 bits")


# float evaluation of densities -----------------------------------------------------------

def eval_expr(expr: DensityExpr, pts: np.ndarray) -> np.ndarray:
    """Evaluate a sum of c / prod (V|x) at the rows of pts."""
    out = np.zeros(len(pts))
    for c, forms in expr.terms:
        den = np.ones(len(pts))
        for v in forms:
            den *= pts @ np.array([float(a) for a in v])
        out += float(c) / den
    return out


def _chart_poly(gens):
    g = [normalize_sum(list(v)) for v in gens]
    return np.array([[float(p[0]), float(p[1])] for p in g])


def _in_poly(poly: np.ndarray, xy: np.ndarray) -> np.ndarray:
    """Points of xy inside the convex polygon (vertices in cyclic order)."""
    n = len(poly)
    cross = []
    for k in range(n):
        a, b = poly[k], poly[(k + 1) % n]
        cross.append((b[0] - a[0]) * (xy[:, 1] - a[1]) - (b[1] - a[1]) * (xy[:, 0] - a[0]))
    cross = np.array(cross)
    return np.all(cross >= -1e-12, axis=0) | np.all(cross <= 1e-12, axis=0)


def eval_density(f, pts: np.ndarray) -> np.ndarray:
    """f is a DensityExpr or a piecewise list [(cell generators, DensityExpr)]."""
    if isinstance(f, DensityExpr):
        return eval_expr(f, pts)
    out = np.full(len(pts), np.nan)
    d = pts.shape[1]
    for cell, expr in f:
        if d == 2:
            t = sorted(float(Fraction(v[0]) / (v[0] + v[1])) for v in cell)
            u = pts[:, 0] / pts.sum(axis=1)
            mask = (u >= t[0]) & (u <= t[1])
        else:
            mask = _in_poly(_chart_poly(cell), pts[:, :2] / pts.sum(axis=1, keepdims=True))
        mask &= np.isnan(out)
        if mask.any():
            out[mask] = eval_expr(expr, pts[mask])
    return np.nan_to_num(out)


# binning ---------------------------------------------------------------------------------

def bin_count(d: int) -> int:
    return BINS_1D if d == 2 else 2 * 4 ** TRI_DEPTH


def bin_index(pts: np.ndarray) -> np.ndarray:
    """Bin of each point on the cross-section sum(x) = 1.

    d = 2: uniform bins in x0. d = 3: triangles of the depth-6 subdivision of the
    simplex, indexed by the square (i, j) of the (x0, x1) grid and a lower/upper flag.
    """
    d = pts.shape[1]
    s = pts.sum(axis=1)
    if d == 2:
        return np.clip((pts[:, 0] / s * BINS_1D).astype(np.int64), 0, BINS_1D - 1)
    if d != 3:
        raise ValueError("histograms are implemented for d <= 3")
    n = 2 ** TRI_DEPTH
    a, b = pts[:, 0] / s * n, pts[:, 1] / s * n
    i = np.clip(np.floor(a).astype(np.int64), 0, n - 1)
    j = np.clip(np.floor(b).astype(np.int64), 0, n - 1)
    j = np.minimum(j, n - 1 - i)
    upper = ((a - i) + (b - j) > 1) & (i + j < n - 1)
    return 2 * (i * n + j) + upper


def symbolic_bins(f, d: int, refine: int = 4) -> np.ndarray:
    """Integral of f over each bin by the centroid rule on a finer grid."""
    if d == 2:
        m = BINS_1D * refine * 16
        t = (np.arange(m) + 0.5) / m
        pts = np.stack([t, 1 - t], axis=1)
        w = eval_density(f, pts) / m
        return np.bincount(bin_index(pts), weights=w, minlength=BINS_1D)
    n = 2 ** TRI_DEPTH * refine
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    keep = i + j <= n - 1
    i, j = i[keep], j[keep]
    lower = np.stack([(i + 1 / 3) / n, (j + 1 / 3) / n], axis=1)
    up = (i + j) < n - 1
    upper = np.stack([(i[up] + 2 / 3) / n, (j[up] + 2 / 3) / n], axis=1)
    xy = np.concatenate([lower, upper])
    pts = np.column_stack([xy, 1 - xy.sum(axis=1)])
    w = eval_density(f, pts) / (2 * n * n)
    return np.bincount(bin_index(pts), weights=w, minlength=bin_count(3))


# the floating point map ------------------------------------------------------------------

@dataclass
class _FloatMap:
    states: list
    out: dict  # state index -> (stacked selector and inverse rows, transposed; piece count; targets)
    dim: int


def _float_map(g) -> _FloatMap:
    if isinstance(g, WinLoseGraph):
        g = g.to_matrices()
    idx = {s: k for k, s in enumerate(g.states)}
    pieces: dict = {k: [] for k in range(len(g.states))}
    if isinstance(g, MatricesGraph):
        for e in g.edges:
            inv = inverse(e.matrix)
            pieces[idx[e.src]].append((inv, inv, idx[e.dst]))
    elif isinstance(g, GeneralCFGraph):
        for e in g.edges:
            inv = inverse(e.matrix)
            gens = g.cone_generators(e)
            simplices = [gens] if len(gens) == g.dim else fan_triangulation(gens)
            for sim in simplices:
                dm = [[v[i] for v in sim] for i in range(g.dim)]
                pieces[idx[e.src]].append((inverse(dm), inv, idx[e.dst]))
    else:
        raise TypeError(f"cannot simulate {type(g).__name__}")
    out = {}
    for k, ps in pieces.items():
        if not ps:
            continue
        sel = [[float(a) for a in row] for p in ps for row in _normalize_rows(p[0])]
        mats = [[float(a) for a in row] for p in ps for row in p[1]]
        # one product gives every selector value and every candidate image
        out[k] = (np.array(sel + mats).T.copy(), len(ps), np.array([p[2] for p in ps]))
    return _FloatMap(list(g.states), out, g.dim)


def _normalize_rows(m):
    # scale each selector row so that min(D^-1 x) is comparable between pieces
    rows = []
    for r in m:
        s = max(abs(Fraction(a)) for a in r) or 1
        rows.append([Fraction(a) / s for a in r])
    return rows


def _apply(xs, a, k, d):
    z = xs @ a
    kd = k * d
    score = z[:, 0:kd:d]
    for r in range(1, d):
        score = np.minimum(score, z[:, r:kd:d])
    pick = score.argmax(axis=1)
    y = z[:, kd:].reshape(len(xs), k, d)[np.arange(len(xs)), pick]
    return y, pick


def _step(fm: _FloatMap, x: np.ndarray, st: np.ndarray):
    d = fm.dim
    if len(fm.out) == 1 and len(fm.states) == 1:
        a, k, tgt = fm.out[0]
        nx, pick = _apply(x, a, k, d)
        nst = tgt[pick]
    else:
        nx = np.empty_like(x)
        nst = np.empty_like(st)
        for s, (a, k, tgt) in fm.out.items():
            mask = st == s
            if not mask.any():
                continue
            y, pick = _apply(x[mask], a, k, d)
            nx[mask] = y
            nst[mask] = tgt[pick]
    np.maximum(nx, 0.0, out=nx)
    s = nx.sum(axis=1, keepdims=True)
    if not np.all(np.isfinite(s)) or np.any(s <= 0):
        raise NonFiniteOrbit("orbit left the positive cone or overflowed")
    nx /= s
    return nx, nst


def _run_chunk(fm: _FloatMap, seed_seq, n: int, iters: int, burn: int, nbins: int) -> np.ndarray:
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    x = rng.exponential(size=(n, fm.dim))
    x /= x.sum(axis=1, keepdims=True)
    st = rng.integers(0, len(fm.states), size=n)
    counts = np.zeros((len(fm.states), nbins), dtype=np.int64)
    for it in range(iters):
        x, st = _step(fm, x, st)
        if it >= burn:
            flat = st * nbins + bin_index(x)
            counts += np.bincount(flat, minlength=len(fm.states) * nbins).reshape(counts.shape)
    return counts


@dataclass
class EmpiricalReport:
    seed: int
    samples: int
    iters: int
    burn_in: int
    bins: int
    tolerance: Fraction
    l1: dict
    visits: dict
    elapsed: float
    counts: np.ndarray = field(repr=False)
    expected: dict = field(repr=False, default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(v < self.tolerance for v in self.l1.values())

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "samples": self.samples,
            "iters": self.iters,
            "burn_in": self.burn_in,
            "bins": self.bins,
            "tolerance": str(self.tolerance),
            "l1": {str(k): v for k, v in self.l1.items()},
            "visits": {str(k): v for k, v in self.visits.items()},
            "passed": self.passed,
            "elapsed_seconds": round(self.elapsed, 3),
        }


def simulate_counts(g, cfg: RunConfig) -> tuple[list, np.ndarray, int]:
    """Histogram counts per state and bin; reproducible for a given (seed, cfg)."""
    fm = _float_map(g)
    nbins = bin_count(fm.dim)
    burn = cfg.iters // 10
    sizes = [min(CHUNK, cfg.samples - k) for k in range(0, cfg.samples, CHUNK)]
    seqs = np.random.SeedSequence(cfg.seed).spawn(len(sizes))
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        parts = list(pool.map(lambda a: _run_chunk(fm, a[0], a[1], cfg.iters, burn, nbins), zip(seqs, sizes)))
    return fm.states, sum(parts), burn


def empirical_density(g, f: dict, cfg: RunConfig) -> EmpiricalReport:
    """Compare orbit histograms with the normalized symbolic density, state by state."""
    t0 = time.perf_counter()
    states, counts, burn = simulate_counts(g, cfg)
    d = g.dim
    l1, visits, expected = {}, {}, {}
    total = counts.sum()
    for k, s in enumerate(states):
        row = counts[k]
        visits[s] = float(row.sum() / total)
        if s not in f or row.sum() == 0:
            continue
        sym = symbolic_bins(f[s], d)
        sym = sym / sym.sum()
        expected[s] = sym
        l1[s] = float(np.abs(row / row.sum() - sym).sum())
    return EmpiricalReport(cfg.seed, cfg.samples, cfg.iters, burn, bin_count(d), cfg.tolerance, l1, visits,
                           time.perf_counter() - t0, counts, expected)


# domain point clouds ---------------------------------------------------------------------

@dataclass
class DomainCloud:
    depth: int  # depth actually enumerated
    points: dict  # state -> list of exact points on the cross-section
    contained: bool | None = None  # exact containment in the given domains, if any


def _path_counts(g: MatricesGraph, depth: int) -> list:
    cnt = [{s: 1 for s in g.states}]
    for _ in range(depth):
        prev = cnt[-1]
        cnt.append({s: sum(prev[e.src] for e in g.in_edges(s)) for s in g.states})
    return cnt


def _base_point(assign, s, d):
    if assign is None:
        return [Fraction(1)] * d
    pieces = assign.pieces.get(s) or []
    if not pieces:
        return None
    gens = pieces[0]
    return [sum(v[i] for v in gens) for i in range(d)]


def approximate_domains(g, cfg: RunConfig, assign=None) -> DomainCloud:
    """Images tm_n ... tm_1 c of base points over in-paths of one fixed length.

    The length is the largest one up to cfg.depth whose number of paths stays
    within cfg.samples per state. With a domain assignment, c is an interior
    point of the source domain and every emitted point is checked exactly.
    """
    if isinstance(g, WinLoseGraph):
        g = g.to_matrices()
    d = g.dim
    cnt = _path_counts(g, cfg.depth)
    depth = 0
    for n in range(cfg.depth + 1):
        if max(cnt[n].values()) <= cfg.samples:
            depth = n
    points: dict = {}
    for s in g.states:
        pts = []
        stack = [(s, eye(d), 0)]
        while stack:
            t, p, n = stack.pop()
            if n == depth:
                c = _base_point(assign, t, d)
                if c is not None:
                    pts.append(tuple(normalize_sum(mat_vec([list(r) for r in p], c))))
                continue
            for e in reversed(g.in_edges(t)):
                stack.append((e.src, matmul(p, tr(e.matrix)), n + 1))
        if assign is not None and not assign.pieces.get(s):
            pts = []
        points[s] = pts
    contained = None
    if assign is not None:
        contained = all(
            any(cone_contains([list(v) for v in cone], list(x)) for cone in assign.pieces[s])
            for s, pts in points.items()
            for x in pts
        )
    return DomainCloud(depth, points, contained)
