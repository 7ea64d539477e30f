import csv
import json
from fractions import Fraction as F

import numpy as np
import pytest

from cfdensity import catalog
from cfdensity import density as dn
from cfdensity.cfgraph import MatricesGraph
from cfdensity.harness import cli, io, render
from cfdensity.harness.montecarlo import (
    RunConfig,
    approximate_domains,
    bin_count,
    bin_index,
    empirical_density,
    simulate_counts,
)

from conftest import solved

SMALL = RunConfig(seed=7, samples=25_000, iters=200)


# documents -----------------------------------------------------------------------------

@pytest.mark.parametrize("name", catalog.NAMES)
def test_document_round_trip(name):
    g = catalog.get(name)
    doc = io.to_document(g)
    back = io.from_document(json.loads(io.dump(doc)))
    assert io.to_document(back) == doc


@pytest.mark.parametrize("doc, msg", [
    ([], "JSON object"),
    ({"kind": "other", "dim": 2, "states": ["a"], "edges": []}, "kind"),
    ({"kind": "matrices", "dim": 1, "states": ["a"], "edges": []}, "dim"),
    ({"kind": "matrices", "dim": 2, "states": ["a", "a"], "edges": []}, "duplicate"),
    ({"kind": "matrices", "dim": 2, "states": ["a"], "edges": [{"from": "a", "to": "b"}]}, "name states"),
    ({"kind": "matrices", "dim": 2, "states": ["a"], "edges": [{"from": "a", "to": "a", "matrix": [[1, 1]]}]}, "2x2"),
    ({"kind": "matrices", "dim": 2, "states": ["a"], "edges": [{"from": "a", "to": "a", "matrix": [[1, 1], [1, 1]]}]}, "singular"),
    ({"kind": "winlose", "dim": 2, "states": ["a"], "edges": [{"from": "a", "to": "a"}]}, "letter"),
])
def test_document_errors(doc, msg):
    with pytest.raises(io.DocumentError, match=msg):
        io.from_document(doc)


def test_load_graph_sources(tmp_path):
    p = tmp_path / "g.json"
    p.write_text(io.dump(io.to_document(catalog.get("cassaigne"))))
    assert io.to_document(io.load_graph(str(p))) == io.to_document(io.load_graph("builtin:cassaigne"))
    with pytest.raises(io.DocumentError):
        io.load_graph("builtin:nope")
    with pytest.raises(io.DocumentError):
        io.load_graph(str(tmp_path / "missing.json"))


def test_scalar_and_state_names():
    assert io.scalar_str(F(3, 4)) == "3/4" and io.scalar_str(5) == "5"
    assert io.state_name((0, ((1, 0), (0, 1)))) == "0|1,0;0,1"


# command line ----------------------------------------------------------------------------

def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr()


def test_cli_density_and_domains(capsys):
    code, cap = run(capsys, "density", "builtin:cassaigne")
    assert code == 0 and "1/((x0+x1+x2)(x0+x1)(x1+x2))" in cap.out
    code, cap = run(capsys, "domains", "builtin:cassaigne", "--format", "json")
    assert code == 0 and json.loads(cap.out)
    code, cap = run(capsys, "density", "builtin:golden")
    assert code == 0 and "sqrt(5)" in cap.out


def test_cli_verified_negative(capsys):
    code, _ = run(capsys, "decide-rational", "builtin:nonrational")
    assert code == 2
    code, _ = run(capsys, "validate", "builtin:cassaigne")
    assert code == 0


def test_cli_expand(capsys):
    code, cap = run(capsys, "expand", "builtin:fully-subtractive2", "--point", "sqrt(2),1", "--format", "json")
    assert code == 0 and json.loads(cap.out)
    code, _ = run(capsys, "expand", "builtin:fully-subtractive2", "--point", "3,1")
    assert code == 2


def test_cli_errors(capsys, tmp_path):
    code, cap = run(capsys, "density", str(tmp_path / "missing.json"))
    assert code == 1 and "error" in cap.err
    with pytest.raises(SystemExit) as info:
        cli.main(["density"])
    assert info.value.code == 1


def test_cli_from_quadratics(capsys):
    code, cap = run(capsys, "from-quadratics", "sqrt(2)", "--format", "json")
    assert code == 0 and json.loads(cap.out)


def test_cli_out_file(capsys, tmp_path):
    out = tmp_path / "d.txt"
    code, cap = run(capsys, "density", "builtin:cassaigne", "--out", str(out))
    assert code == 0 and cap.out == "" and "x0" in out.read_text()


# monte carlo -------------------------------------------------------------------------------

def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(samples=0)
    with pytest.raises(ValueError):
        RunConfig(seed=-1)


def test_bins_cover_the_simplex():
    rng = np.random.default_rng(0)
    pts = rng.dirichlet([1, 1, 1], size=10_000)
    idx = bin_index(pts)
    assert idx.min() >= 0 and idx.max() < bin_count(3)
    # uniform points fill the 4096 grid triangles about evenly
    used = np.bincount(idx, minlength=bin_count(3))
    assert (used > 0).sum() > 3000


def test_simulation_is_reproducible():
    g = catalog.get("cassaigne")
    cfg = RunConfig(seed=3, samples=5_000, iters=100)
    _, a, _ = simulate_counts(g, cfg)
    _, b, _ = simulate_counts(g, RunConfig(seed=3, samples=5_000, iters=100, workers=1))
    _, c, _ = simulate_counts(g, RunConfig(seed=4, samples=5_000, iters=100))
    assert np.array_equal(a, b) and not np.array_equal(a, c)


def test_right_and_wrong_densities():
    g = catalog.get("cassaigne")
    good = empirical_density(g, solved("cassaigne").densities, SMALL)
    bad = empirical_density(g, {0: dn.parse_density("1/(x0x1x2)", 3)}, SMALL)
    assert good.l1[0] < 0.1 and bad.l1[0] > 0.5


def test_two_dimensional_histogram():
    rep = empirical_density(catalog.get("dim1"), solved("dim1").densities, SMALL)
    assert rep.bins == 200 and rep.l1[0] < 0.02


def test_winlose_visits_are_symmetric():
    g = catalog.get("cassaigne-winlose")
    rep = empirical_density(g, solved("cassaigne-winlose").densities, SMALL)
    assert all(abs(v - 1 / 3) < 0.01 for v in rep.visits.values())
    assert all(v < 0.1 for v in rep.l1.values())


def test_domain_cloud_is_contained():
    sol = solved("cassaigne")
    cloud = approximate_domains(sol.graph, RunConfig(depth=6, samples=1000), sol.result)
    assert cloud.depth == 6 and len(cloud.points[0]) == 64 and cloud.contained


def test_domain_cloud_empty_state():
    from cfdensity import domains as dm

    g = MatricesGraph(3, [0, 1], [(0, 0, catalog.M0), (0, 0, catalog.M1), (1, 0, catalog.M0), (1, 0, catalog.M1)])
    assign = dm.DomainAssignment(3, {0: solved("cassaigne").result.pieces[0], 1: []})
    cloud = approximate_domains(g, RunConfig(depth=4, samples=1000), assign)
    assert cloud.points[1] == [] and cloud.points[0]


def test_render_domains_svg(tmp_path):
    sol = solved("cassaigne")
    cloud = approximate_domains(sol.graph, RunConfig(depth=5, samples=1000), sol.result)
    path = tmp_path / "d.svg"
    render.save(render.domains_figure(cloud, 3, sol.result), str(path), "svg")
    assert path.read_text().lstrip().startswith("<?xml")


def test_simulate_report_dir(capsys, tmp_path):
    code, cap = run(capsys, "simulate", "builtin:cassaigne", "--samples", "5000", "--iters", "100",
                    "--tolerance", "1/2", "--report-dir", str(tmp_path))
    assert code == 0 and "PASS" in cap.out
    rep = json.loads((tmp_path / "report.json").read_text())
    assert rep["passed"] and rep["samples"] == 5000
    with open(tmp_path / "bins.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["state", "bin", "empirical", "symbolic"] and len(rows) == 1 + bin_count(3)
    assert (tmp_path / "density.svg").stat().st_size > 0
