"""Acceptance criteria 1-13; the terminal summary prints one PASS/FAIL line per criterion.

Run alone with ``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``.
"""

import json
import random
import time
from fractions import Fraction as F

import numpy as np
import pytest

from cfdensity import automata as fa
from cfdensity import catalog
from cfdensity import density as dn
from cfdensity import quadratic as qd
from cfdensity import winlose2 as wl
from cfdensity.cfgraph import tr
from cfdensity.convert import cone_key
from cfdensity.density import DensityExpr, parse_density, veech_term
from cfdensity.exact import sqrt_rat
from cfdensity.exact.linalg import det, mat_vec
from cfdensity.geometry import section_contains, section_measure, cone_section
from cfdensity.harness import cli
from cfdensity.harness.montecarlo import RunConfig, empirical_density
from cfdensity.harness.pipeline import solve

from conftest import solved

XYZ = ["x", "y", "z"]
XY = ["x", "y"]


def canon(text, dim, names=None):
    return parse_density(text, dim, names=names)


# 1 --------------------------------------------------------------------------------------------

def test_c01_cassaigne():
    t0 = time.perf_counter()
    sol = solve(catalog.get("cassaigne"))
    elapsed = time.perf_counter() - t0
    assert sol.result.pieces[0] == [((0, 1, 1), (1, 1, 0), (1, 1, 1))]
    assert sol.densities[0].render() == "1/((x0+x1+x2)(x0+x1)(x1+x2))"
    assert sol.densities[0] == canon("1/((x0+x1+x2)(x0+x1)(x1+x2))", 3)
    assert sol.certificate.ok
    assert elapsed < 1.0


# 2 --------------------------------------------------------------------------------------------

def test_c02_cassaigne_extension():
    sol = solved("cassaigne-extension")
    assert sol.certificate.ok
    f0 = canon("1/((x+y)(x+y+z)(x+2y+z))", 3, XYZ)
    f1 = canon("1/((y+z)(x+y+z)(x+2y+z))", 3, XYZ)
    assert sol.densities[0].render() == f0.render()
    assert sol.densities[1].render() == f1.render()


# 3 --------------------------------------------------------------------------------------------

def test_c03_cassaigne_winlose():
    sol = solved("cassaigne-winlose")
    assert sol.certificate.ok
    expected = [
        "1/((x0+x1+x2)(x0+x1)(x0+x2))",
        "1/((x0+x1+x2)(x0+x1)(x1+x2))",
        "1/((x0+x1+x2)(x0+x2)(x1+x2))",
    ]
    for s, text in enumerate(expected):
        assert sol.densities[s] == canon(text, 3)


# 4 --------------------------------------------------------------------------------------------

BRUN_CONES = {
    ((1, 1, 2), (1, 1, 1), (0, 1, 1)): 3,
    ((0, 1, 1), (1, 1, 2), (1, 1, 1)): 2,
    ((1, 1, 2), (0, 1, 1), (1, 1, 1)): 1,
}
BRUN_DENSITIES = {
    "1/((2x0+x1+x2)(x0+x1+x2)(x0+x1))": 3,
    "1/((x0+2x1+x2)(x0+x1+x2)(x1+x2))": 2,
    "1/((2x0+x1+x2)(x0+x1+x2)(x0+x2))": 1,
}


def test_c04_brun():
    t0 = time.perf_counter()
    sol = solve(catalog.get("brun3"))
    elapsed = time.perf_counter() - t0
    assert sol.certificate.ok
    got: dict = {}
    for s, cones in sol.result.pieces.items():
        assert len(cones) == 1
        key = cone_key(cones[0])
        got[key] = got.get(key, 0) + 1
    expected = {cone_key([[m[i][j] for i in range(3)] for j in range(3)]): k for m, k in BRUN_CONES.items()}
    assert got == expected
    rendered: dict = {}
    for f in sol.densities.values():
        rendered[f.render()] = rendered.get(f.render(), 0) + 1
    want = {canon(t, 3).render(): k for t, k in BRUN_DENSITIES.items()}
    assert rendered == want
    # x0 < x1 < x2 is the cone spanned by (0,0,1), (0,1,1), (1,1,1)
    f = dn.pushforward_on_cone(sol.conversion, sol.densities, 0, [(0, 0, 1), (0, 1, 1), (1, 1, 1)])
    assert f.render() == "1/((x0+x2)x1*x2)"
    assert f == canon("1/((x0+x2)*x1*x2)", 3)
    assert elapsed < 10.0


# 5 --------------------------------------------------------------------------------------------

def test_c05_dimension_one():
    sol = solved("dim1")
    assert sol.result.pieces[0] == [((1, 1), (2, 1))]
    assert sol.densities[0] == canon("1/((2x+y)(x+y))", 2, XY)
    assert sol.certificate.ok


def test_c05_euclid_family():
    domain = [(2, 1), (1, 1)]
    sec = cone_section(domain)
    images = []
    for n in range(21):
        tm = tr(catalog.euclid_matrix(n))
        img = cone_section([mat_vec(tm, list(v)) for v in domain])
        assert section_contains(sec, img, 2)
        images.append(img)
    # consecutive images tile D from the top, leaving a single gap that shrinks with n
    images.sort()
    for a, b in zip(images, images[1:]):
        assert a[1] == b[0]
    assert images[-1][1] == sec[1]
    gap = images[0][0] - sec[0]
    assert gap == F(1, 2 * (2 * 20 + 5))
    assert sum(section_measure(s, 2) for s in images) + gap == section_measure(sec, 2)


# 6 --------------------------------------------------------------------------------------------

def test_c06_reverse():
    sol = solved("reverse")
    assert sol.certificate.ok
    assert sol.densities[0].render() == "2/((x0+x1)(x0+x2)(x1+x2))"
    assert any(abs(det(e.matrix)) == 2 for e in sol.graph.edges)


def test_c06_poincare():
    sol = solved("poincare3")
    assert sol.certificate.ok
    assert sol.densities[0] == canon("1/(x0*x1*x2)", 3)


# 7 --------------------------------------------------------------------------------------------

def test_c07_golden_boundary():
    g = catalog.get("golden")
    _, lang = wl.decompose(g, 0)
    expected = fa.union(fa.from_regex("0*"), fa.prefix_closure(fa.from_regex("(01)*")))
    assert fa.equivalent(wl.boundary_language(lang), expected)


def test_c07_golden_density():
    g = catalog.get("golden")
    v = wl.verdict_for(g, 0)
    assert isinstance(v, wl.Rational)
    phi = (1 + sqrt_rat(5)) / 2
    for x, y in [(1, 1), (2, 3), (F(1, 3), 5), (7, F(2, 9))]:
        got = v.density([x, y]) * 4  # canonical coefficient d d! = 4
        assert got == 1 / (x * (phi * x + y))
    assert "sqrt(5)" in v.density.render()


# 8 --------------------------------------------------------------------------------------------

def test_c08_verdicts():
    vs = wl.decide_rational(catalog.get("nonrational"))
    kinds = [type(vs[s]).__name__ for s in range(4)]
    assert kinds == ["Rational", "Rational", "NonRational", "NonRational"]
    assert vs[0].density == canon("1/(x(2x+y))", 2, XY)
    assert vs[1].density == canon("1/((2x+y)(x+y))", 2, XY)


def test_c08_series():
    vs = wl.decide_rational(catalog.get("nonrational"))
    (s2,), (s3,) = vs[2].series, vs[3].series
    for n in range(1, 30):
        assert s2.general_term(n) == canon(f"1/((2x+{2 * n + 1}y)(x+{n + 1}y))", 2, XY)
        assert s3.general_term(n) == canon(f"1/((x+{n}y)(2x+{2 * n + 1}y))", 2, XY)
    for s, term in ((s2, lambda n: F(1, (2 + 2 * n + 1) * (1 + n + 1))),
                    (s3, lambda n: F(1, (1 + n) * (2 + 2 * n + 1)))):
        partial, tail = dn.eval_series(s, (1, 1), 100)
        assert partial == sum(term(n) for n in range(1, 101))
        # direct float summation far past the cut
        direct = sum(float(term(n)) for n in range(1, 200_000))
        assert float(partial) <= direct <= float(partial + tail) + 1e-12


# 9 --------------------------------------------------------------------------------------------

def test_c09_sqrt2():
    r2 = sqrt_rat(2)
    assert qd.fs_expansion("sqrt(2)") == ((), (0, 1, 1, 0))
    g, rep = qd.build_winlose(["0", "sqrt(2)"])
    published = [(0, 1), (r2 - 1, 1), (r2 - 1, 2 - r2), (r2, 1), (r2 - 1, 3 - 2 * r2), (1, 0)]
    expected = sorted(wl.ProjPoint2(a, b) for a, b in published)
    assert len(set(expected)) == 6
    assert rep.endpoints == expected
    assert rep.missing == []
    assert wl.ProjPoint2(0, 1) in rep.endpoints and wl.ProjPoint2(r2, 1) in rep.endpoints
    assert rep.mirror_identity


# 10 -------------------------------------------------------------------------------------------

def test_c10_cantor():
    g = catalog.get("cantor")
    for s in g.states:
        _, lang = wl.decompose(g, s)
        c = wl.classify_boundary(wl.boundary_language(lang))
        assert isinstance(c, wl.Infinite)
        assert c.perfect_certified


# 11 -------------------------------------------------------------------------------------------

@pytest.mark.parametrize("name", ["jacobi-perron3", "symmetric-jacobi-perron3", "arp3", "fully-subtractive3"])
def test_c11_no_finite_domains(name, capsys):
    code = cli.main(["domains", f"builtin:{name}", "--format", "json"])
    out = json.loads(capsys.readouterr().out)
    assert out["result"] == "Failure"
    assert code == 2


# 12 -------------------------------------------------------------------------------------------

SUCCESSFUL = ["cassaigne", "cassaigne-extension", "cassaigne-winlose", "poincare3", "reverse", "dim1", "brun3"]


def _all_densities():
    out = []
    for name in SUCCESSFUL:
        out += list(solved(name).densities.values())
    out += list(wl.all_rational_densities(catalog.get("golden")).values())
    out += [v.density for v in wl.decide_rational(catalog.get("nonrational")).values() if isinstance(v, wl.Rational)]
    return out


def test_c12_homogeneity():
    rng = random.Random(12)
    for f in _all_densities():
        d = f.dim
        for _ in range(100):
            x = [F(rng.randint(1, 50), rng.randint(1, 9)) for _ in range(d)]
            a = F(rng.randint(1, 30), rng.randint(1, 30))
            assert f([a * c for c in x]) == f(x) / a ** d


def test_c12_certificates():
    for name in SUCCESSFUL:
        assert solved(name).certificate.ok, name
    g = catalog.get("golden")
    assert dn.check_functional_equation(g.to_matrices(), wl.all_rational_densities(g)).ok


def _simplex_volume_mc(m, x, n, rng):
    """Monte Carlo volume of {y in m R_+^d : (y|x) <= 1} from uniform samples in a bounding box."""
    d = len(m)
    mf = np.array(m, dtype=float)
    xf = np.array(x, dtype=float)
    verts = [mf[:, j] / (mf[:, j] @ xf) for j in range(d)]
    box = np.max(verts, axis=0)
    y = rng.random((n, d)) * box
    t = np.linalg.solve(mf, y.T).T
    inside = np.all(t >= 0, axis=1) & (y @ xf <= 1)
    p = inside.mean()
    vol = float(np.prod(box))
    return vol * p, vol * np.sqrt(p * (1 - p) / n)


@pytest.mark.parametrize("d", [2, 3])
def test_c12_veech_vs_monte_carlo(d):
    rng = np.random.default_rng(2024 + d)
    pyr = random.Random(d)
    done = 0
    while done < 20:
        m = [[pyr.randint(0, 4) for _ in range(d)] for _ in range(d)]
        if det(m) == 0 or any(all(m[i][j] == 0 for i in range(d)) for j in range(d)):
            continue
        x = [pyr.randint(1, 5) for _ in range(d)]
        est, sigma = _simplex_volume_mc(m, x, 10 ** 6, rng)
        # the simplex volume is |det m| / (d! prod tm x), d times the Veech density term
        exact = float(d * veech_term(m)(x))
        assert abs(est - exact) <= 3 * sigma, (m, x, est, exact, sigma)
        done += 1


def _random_nfa(rng, n):
    delta = {}
    for s in range(n):
        for a in (0, 1):
            ts = {t for t in range(n) if rng.random() < 0.35}
            if ts:
                delta[(s, a)] = ts
    finals = {s for s in range(n) if rng.random() < 0.4}
    return fa.Fsa((0, 1), n, delta, {0}, finals)


def _words(max_len):
    out = [()]
    for k in range(1, max_len + 1):
        out += [tuple((i >> (k - 1 - b)) & 1 for b in range(k)) for i in range(2 ** k)]
    return out


def test_c12_automata_brute_force():
    rng = random.Random(10)
    words = _words(10)
    for _ in range(12):
        a, b = _random_nfa(rng, rng.randint(1, 4)), _random_nfa(rng, rng.randint(1, 4))
        A = {w for w in words if a.accepts(w)}
        B = {w for w in words if b.accepts(w)}
        ops = {
            "union": (fa.union(a, b), lambda w: w in A or w in B),
            "intersection": (fa.intersection(a, b), lambda w: w in A and w in B),
            "difference": (fa.difference(a, b), lambda w: w in A and w not in B),
            "complement": (fa.complement(a), lambda w: w not in A),
            "concat": (fa.concat(a, b), lambda w: any(w[:i] in A and w[i:] in B for i in range(len(w) + 1))),
            "mirror": (fa.mirror(a), lambda w: w[::-1] in A),
            "minimize": (fa.minimize(a), lambda w: w in A),
            "determinize": (fa.determinize(a), lambda w: w in A),
            "prefix_closure": (fa.prefix_closure(a),
                               lambda w: any(a.accepts(w + v) for v in _words(a.n))),
        }
        for name, (res, oracle) in ops.items():
            for w in words:
                assert res.accepts(w) == oracle(w), (name, w)


# 13 -------------------------------------------------------------------------------------------

def _statistical(g, f):
    cfg = RunConfig(seed=20240613, samples=100_000, iters=1000)
    rep = empirical_density(g, f, cfg)
    again = empirical_density(g, f, RunConfig(seed=20240613, samples=100_000, iters=1000, workers=1))
    return rep, again


def test_c13_cassaigne_statistical():
    sol = solved("cassaigne")
    rep, again = _statistical(catalog.get("cassaigne"), sol.densities)
    print(rep.to_json())
    assert rep.burn_in == 100
    assert all(v < 0.05 for v in rep.l1.values())
    assert rep.elapsed < 60
    assert np.array_equal(rep.counts, again.counts)


def test_c13_brun_statistical():
    sol = solved("brun3")
    rep, again = _statistical(catalog.get("brun3"), sol.pushforward)
    print(rep.to_json())
    assert all(v < 0.05 for v in rep.l1.values())
    assert rep.elapsed < 60
    assert np.array_equal(rep.counts, again.counts)


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-v", "-p", "no:cacheprovider"]))
