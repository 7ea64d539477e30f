"""GraphDocument JSON files and exact scalar formatting."""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .. import catalog
from ..cfgraph import GraphError, MatricesGraph, WinLoseGraph
from ..convert import GeneralCFGraph
from ..exact.algnum import AlgNum

KINDS = ("matrices", "winlose", "general")


class DocumentError(ValueError):
    pass


def scalar_str(a) -> str:
    """Exact text for a scalar: "p/q" for rationals, "(a+b*sqrt(D))/c" for quadratics."""
    if isinstance(a, AlgNum):
        return str(a)
    a = Fraction(a)
    return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"


def state_name(s) -> str:
    if isinstance(s, tuple) and len(s) == 2 and isinstance(s[1], tuple):
        i, J = s
        return f"{i}|" + ";".join(",".join(str(a) for a in row) for row in J)
    return str(s)


def _matrix(m, d, where):
    if not isinstance(m, list) or len(m) != d or any(not isinstance(r, list) or len(r) != d for r in m):
        raise DocumentError(f"{where}: expected a {d}x{d} matrix")
    if any(not isinstance(a, int) for r in m for a in r):
        raise DocumentError(f"{where}: matrix entries must be integers")
    return tuple(tuple(r) for r in m)


def from_document(doc: dict):
    """Build a MatricesGraph, WinLoseGraph or GeneralCFGraph from a parsed document."""
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise DocumentError(f"kind must be one of {KINDS}")
    d = doc.get("dim")
    if not isinstance(d, int) or d < 2:
        raise DocumentError("dim must be an integer >= 2")
    states = doc.get("states")
    if not isinstance(states, list) or not states or any(not isinstance(s, str) for s in states):
        raise DocumentError("states must be a nonempty list of strings")
    if len(set(states)) != len(states):
        raise DocumentError("duplicate state names")
    edges = doc.get("edges")
    if not isinstance(edges, list):
        raise DocumentError("edges must be a list")
    out = []
    for k, e in enumerate(edges):
        where = f"edge {k}"
        if not isinstance(e, dict) or e.get("from") not in states or e.get("to") not in states:
            raise DocumentError(f"{where}: 'from' and 'to' must name states")
        if kind == "winlose":
            if not isinstance(e.get("letter"), int):
                raise DocumentError(f"{where}: winlose edges need an integer 'letter'")
            out.append((e["from"], e["to"], e["letter"]))
        elif kind == "matrices":
            out.append((e["from"], e["to"], _matrix(e.get("matrix"), d, where)))
        else:
            m = _matrix(e.get("matrix"), d, where)
            cone = e.get("cone")
            if not isinstance(cone, list) or len(cone) != d or any(not isinstance(r, list) for r in cone):
                raise DocumentError(f"{where}: general edges need a 'cone' with {d} rows")
            out.append((e["from"], e["to"], m, tuple(tuple(r) for r in cone)))
    try:
        if kind == "winlose":
            return WinLoseGraph(d, states, out)
        if kind == "matrices":
            return MatricesGraph(d, states, out)
        return GeneralCFGraph(d, states, out)
    except GraphError as exc:
        raise DocumentError(str(exc)) from exc


def to_document(g) -> dict:
    names = {s: state_name(s) for s in g.states}
    if isinstance(g, WinLoseGraph):
        kind = "winlose"
        edges = [{"from": names[s], "to": names[t], "letter": j} for s, t, j in g.edges]
    elif isinstance(g, MatricesGraph):
        kind = "matrices"
        edges = [{"from": names[e.src], "to": names[e.dst], "matrix": [list(r) for r in e.matrix]} for e in g.edges]
    elif isinstance(g, GeneralCFGraph):
        kind = "general"
        edges = [
            {"from": names[e.src], "to": names[e.dst], "matrix": [list(r) for r in e.matrix], "cone": [list(r) for r in e.cone]}
            for e in g.edges
        ]
    else:
        raise TypeError(f"cannot serialize {type(g).__name__}")
    return {"kind": kind, "dim": g.dim, "states": [names[s] for s in g.states], "edges": edges}


def load_graph(source: str):
    """Read a graph from a JSON file, or from ``builtin:NAME``."""
    if source.startswith("builtin:"):
        name = source.split(":", 1)[1]
        try:
            return catalog.get(name)
        except KeyError as exc:
            raise DocumentError(str(exc.args[0])) from exc
    try:
        doc = json.loads(Path(source).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise DocumentError(f"cannot read {source}: {exc}") from exc
    return from_document(doc)


def dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


# results -----------------------------------------------------------------------------------

def point_json(p) -> list:
    return [scalar_str(a) for a in p]


def cone_json(cone) -> list:
    return [point_json(v) for v in cone]


def report_json(rep) -> dict:
    out = {"ok": bool(rep.ok), "messages": list(rep.messages)}
    if not rep.ok and rep.state is not None:
        out["state"] = state_name(rep.state)
    if getattr(rep, "probabilistic", False):
        out["probabilistic"] = True
    return out


def series_json(s) -> dict:
    from ..cfgraph import bar_word

    return {
        "u": bar_word(s.u),
        "v": bar_word(s.v),
        "w": bar_word(s.w),
        "n0": s.n0,
        "terms": [s.general_term(n).render() for n in (1, 2, 3)],
    }


def verdict_json(v) -> dict:
    from .. import winlose2 as wl

    if isinstance(v, wl.Rational):
        return {
            "verdict": "Rational",
            "intervals": [[f"({scalar_str(a.a)}:{scalar_str(a.b)})", f"({scalar_str(b.a)}:{scalar_str(b.b)})"] for a, b in v.intervals],
            "density": v.density.to_json(),
        }
    if isinstance(v, wl.NonRational):
        return {
            "verdict": "NonRational",
            "witness": sorted(str(s) for s in v.witness),
            "series": [series_json(s) for s in v.series or []],
            "finite_part": v.finite_part.render() if v.finite_part is not None else None,
        }
    return {"verdict": "Degenerate", "reason": v.reason}
