"""cfdensity command line.

Exit codes: 0 success, 2 a verified negative answer (no domains found, not
rational, invalid graph, failed check), 1 an error.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import sys
from fractions import Fraction
from pathlib import Path

from .. import domains as dm
from .. import quadratic as qd
from .. import winlose2 as wl
from ..cfgraph import BoundaryHit, GraphError, MatricesGraph, WinLoseGraph, expand_point, validate_cone_partition
from ..convert import GeneralCFGraph, semiconjugacy_check, to_matrices_graph
from ..density import parse_density
from ..exact.algnum import Unsupported
from . import io
from .montecarlo import NonFiniteOrbit, RunConfig

OK, ERROR, NEGATIVE = 0, 1, 2


class Output:
    """Collects text and writes it to --out or stdout."""

    def __init__(self, args):
        self.path = args.out
        self.buf = _io.StringIO()

    def write(self, text: str):
        self.buf.write(text if text.endswith("\n") else text + "\n")

    def close(self):
        if self.path:
            Path(self.path).write_text(self.buf.getvalue())
        else:
            sys.stdout.write(self.buf.getvalue())


def _config(args) -> RunConfig:
    return RunConfig(seed=args.seed, samples=args.samples, iters=args.iters, depth=args.depth)


def _graph_text(g, fmt):
    if fmt == "dot":
        return (g.to_matrices() if isinstance(g, WinLoseGraph) else g).to_dot()
    return io.dump(io.to_document(g))


# commands ---------------------------------------------------------------------------------

def cmd_validate(args, out):
    g = io.load_graph(args.file)
    if isinstance(g, GeneralCFGraph):
        conv = to_matrices_graph(g)
        rep = semiconjugacy_check(g, conv, samples=50, seed=args.seed)
        rep.messages.insert(0, f"converted to {len(conv.graph.states)} states")
    else:
        mg = g.to_matrices() if isinstance(g, WinLoseGraph) else g
        rep = validate_cone_partition(mg, seed=args.seed)
    if args.format == "json":
        out.write(io.dump(io.report_json(rep)))
    else:
        out.write(("valid" if rep.ok else "invalid") + "".join(f"\n  {m}" for m in rep.messages))
    return OK if rep.ok else NEGATIVE


def cmd_minimize(args, out):
    g = io.load_graph(args.file)
    mg = g.to_matrices() if isinstance(g, WinLoseGraph) else g
    if not isinstance(mg, MatricesGraph):
        raise GraphError("minimize expects a matrices or win-lose graph")
    q, cls = dm.minimize_graph(mg)
    if args.format == "text":
        out.write(f"{len(mg.states)} states -> {len(q.states)} classes")
        for s, c in cls.items():
            out.write(f"  {io.state_name(s)} -> {c}")
    else:
        out.write(_graph_text(q, args.format))
    return OK


def _domains_payload(sol):
    return {io.state_name(s): [io.cone_json(c) for c in cones] for s, cones in sol.result.pieces.items()}


def cmd_domains(args, out):
    from .pipeline import solve

    sol = solve(io.load_graph(args.file), pushforward=False)
    if not sol.result:
        _failure(out, args.format, sol.result)
        return NEGATIVE
    if args.format == "json":
        out.write(io.dump({"domains": _domains_payload(sol)}))
    else:
        for s, cones in sol.result.pieces.items():
            body = " + ".join("cone(" + ", ".join("(" + ",".join(io.point_json(v)) + ")" for v in c) + ")" for c in cones)
            out.write(f"{io.state_name(s)}: {body or 'empty'}")
    return OK


def _failure(out, fmt, f):
    if fmt == "json":
        out.write(io.dump({"result": "Failure", "reason": f.reason, "details": f.details}))
    else:
        out.write(f"Failure: {f.reason}" + "".join(f"\n  {m}" for m in f.details))


def cmd_density(args, out):
    from .pipeline import solve

    g = io.load_graph(args.file)
    if isinstance(g, WinLoseGraph) and g.dim == 2:
        dens = wl.all_rational_densities(g)
        if dens is not None:
            return _print_densities(out, args.format, dens, None, None)
    sol = solve(g)
    if not sol.result:
        _failure(out, args.format, sol.result)
        return NEGATIVE
    _print_densities(out, args.format, sol.densities, sol.certificate, sol.pushforward)
    return OK if sol.certificate else NEGATIVE


def _print_densities(out, fmt, dens, cert, push):
    if fmt == "json":
        doc = {"densities": {io.state_name(s): f.to_json() for s, f in dens.items()}}
        if cert is not None:
            doc["certificate"] = {"ok": bool(cert)}
        if push:
            doc["pushforward"] = {
                io.state_name(s): [{"cell": io.cone_json(c), "density": f.render()} for c, f in pieces]
                for s, pieces in push.items()
            }
        out.write(io.dump(doc))
    else:
        for s, f in dens.items():
            out.write(f"f[{io.state_name(s)}] = {f.render()}")
        if cert is not None:
            out.write("functional equation: " + ("Ok" if cert else f"counterexample at {cert.point}"))
        for s, pieces in (push or {}).items():
            out.write(f"original algorithm, state {s}:")
            for c, f in pieces:
                out.write(f"  on cone({'; '.join(','.join(io.point_json(v)) for v in c)}): {f.render()}")
    return OK


def cmd_convert(args, out):
    g = io.load_graph(args.file)
    if not isinstance(g, GeneralCFGraph):
        raise GraphError("convert expects a general graph")
    conv = to_matrices_graph(g)
    if args.format == "text":
        out.write(f"{len(conv.graph.states)} states, {len(conv.graph.edges)} edges")
        for s in conv.graph.states:
            out.write(f"  {io.state_name(s)}")
    else:
        out.write(_graph_text(conv.graph, args.format))
    return OK


def cmd_decide(args, out):
    g = io.load_graph(args.file)
    if not isinstance(g, WinLoseGraph) or g.dim != 2:
        raise GraphError("decide-rational expects a two-letter win-lose graph")
    vs = wl.decide_rational(g)
    if args.format == "json":
        out.write(io.dump({io.state_name(s): io.verdict_json(v) for s, v in vs.items()}))
    else:
        for s, v in vs.items():
            j = io.verdict_json(v)
            line = f"{s}: {j['verdict']}"
            if j["verdict"] == "Rational":
                line += f"  f = {j['density']['canonical']}"
            elif j["verdict"] == "NonRational":
                line += "".join(f"\n    series u={x['u']} v={x['v']} w={x['w']}: {x['terms'][0]} + {x['terms'][1]} + ..." for x in j["series"])
            out.write(line)
    return NEGATIVE if any(isinstance(v, wl.NonRational) for v in vs.values()) else OK


def cmd_from_quadratics(args, out):
    xs = [t for t in args.numbers.replace(";", ",").split(",") if t.strip()]
    g, rep = qd.build_winlose(xs)
    if args.format == "text":
        out.write(f"inputs after parity fix: {', '.join(rep.inputs)} ({rep.translation})")
        for k, (u, v) in rep.expansions.items():
            out.write(f"  {k}: {''.join(map(str, u))}({''.join(map(str, v))})^omega")
        out.write(f"{len(g.states)} states, {len(g.edges)} edges")
        out.write("endpoints: " + ", ".join(f"({io.scalar_str(p.a)}:{io.scalar_str(p.b)})" for p in rep.endpoints))
        out.write(f"missing inputs: {rep.missing or 'none'}; mirror identity: {rep.mirror_identity}")
    elif args.format == "dot":
        out.write(_graph_text(g, "dot"))
    else:
        out.write(io.dump({
            "graph": io.to_document(g),
            "inputs": rep.inputs,
            "translation": rep.translation,
            "expansions": {k: ["".join(map(str, u)), "".join(map(str, v))] for k, (u, v) in rep.expansions.items()},
            "endpoints": [[io.scalar_str(p.a), io.scalar_str(p.b)] for p in rep.endpoints],
            "missing": rep.missing,
            "mirror_identity": rep.mirror_identity,
        }))
    return OK if rep.ok else NEGATIVE


def parse_point(text: str) -> list:
    return [_scalar(t) for t in text.split(",")]


def _scalar(t: str):
    t = t.strip()
    if "sqrt" in t:
        return qd.QuadNum.parse(t).value()
    return Fraction(t)


def cmd_expand(args, out):
    g = io.load_graph(args.file)
    mg = g.to_matrices() if isinstance(g, WinLoseGraph) else g
    if not isinstance(mg, MatricesGraph):
        raise GraphError("expand expects a matrices or win-lose graph")
    x = parse_point(args.point)
    if len(x) != mg.dim:
        raise GraphError(f"point has {len(x)} coordinates, graph dimension is {mg.dim}")
    state = mg.states[0] if args.state is None else next(s for s in mg.states if io.state_name(s) == args.state)
    try:
        ex = expand_point(mg, x, state, args.iters)
    except BoundaryHit as hit:
        out.write(f"boundary hit after {len(hit.prefix)} steps: the point lies on several cones")
        return NEGATIVE
    names = [f"{io.state_name(mg.edges[k].src)}->{io.state_name(mg.edges[k].dst)}" for k in ex.edges]
    if args.format == "json":
        out.write(io.dump({
            "edges": ex.edges,
            "preperiod": ex.preperiod,
            "period": ex.period,
            "final_state": io.state_name(ex.final_state),
        }))
    else:
        if ex.period is None:
            out.write(f"no period within {args.iters} steps")
        else:
            out.write(f"preperiod {ex.preperiod}, period {ex.period}")
        out.write("path: " + " ".join(names[:50]) + (" ..." if len(names) > 50 else ""))
    return OK


def _densities_for(g, choice):
    from .pipeline import solve

    if choice == "auto":
        if isinstance(g, WinLoseGraph) and g.dim == 2:
            dens = wl.all_rational_densities(g)
            if dens is not None:
                return dens, None
        sol = solve(g)
        if not sol.result:
            return None, sol.result
        return (sol.pushforward if isinstance(g, GeneralCFGraph) else sol.densities), None
    parts = [p for p in choice.split(";") if p.strip()]
    if len(parts) == 1 and "=" not in parts[0]:
        f = parse_density(parts[0], g.dim)
        return {s: f for s in g.states}, None
    out = {}
    for p in parts:
        name, text = p.split("=", 1)
        s = next(s for s in g.states if io.state_name(s) == name.strip())
        out[s] = parse_density(text, g.dim)
    return out, None


def cmd_simulate(args, out):
    from . import render
    from .montecarlo import empirical_density, symbolic_bins

    g = io.load_graph(args.file)
    dens, failure = _densities_for(g, args.density)
    if dens is None:
        _failure(out, args.format, failure)
        return NEGATIVE
    cfg = RunConfig(seed=args.seed, samples=args.samples, iters=args.iters, depth=args.depth,
                    tolerance=Fraction(args.tolerance))
    rep = empirical_density(g, dens, cfg)
    if args.format == "json":
        out.write(io.dump(rep.to_json()))
    else:
        out.write(f"seed {rep.seed}, {rep.samples} orbits x {rep.iters} steps, burn-in {rep.burn_in}, {rep.bins} bins")
        for s, v in rep.l1.items():
            out.write(f"  state {io.state_name(s)}: L1 = {v:.4f}")
        out.write(("PASS" if rep.passed else "FAIL") + f" (tolerance {rep.tolerance})")
    if args.report_dir:
        d = Path(args.report_dir)
        d.mkdir(parents=True, exist_ok=True)
        (d / "report.json").write_text(io.dump(rep.to_json()))
        states = list(g.states) if not isinstance(g, WinLoseGraph) else g.states
        with open(d / "bins.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["state", "bin", "empirical", "symbolic"])
            for k, s in enumerate(states):
                row = rep.counts[k]
                if s not in rep.expected or row.sum() == 0:
                    continue
                for b, (c, e) in enumerate(zip(row / row.sum(), rep.expected[s])):
                    w.writerow([io.state_name(s), b, f"{c:.6g}", f"{e:.6g}"])
        render.save(render.density_figure(rep, states, g.dim), str(d / "density.svg"), "svg")
    return OK if rep.passed else NEGATIVE


def cmd_render_domains(args, out):
    from .montecarlo import approximate_domains

    g = io.load_graph(args.file)
    if isinstance(g, GeneralCFGraph):
        g = to_matrices_graph(g).graph
    mg = g.to_matrices() if isinstance(g, WinLoseGraph) else g
    assign = None
    if args.check:
        res = dm.polyhedral_domains(mg)
        assign = res if res else None
    cloud = approximate_domains(mg, _config(args), assign)
    if args.format == "csv":
        buf = _io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["state"] + [f"x{i}" for i in range(mg.dim)])
        for s, pts in cloud.points.items():
            for p in pts:
                w.writerow([io.state_name(s)] + io.point_json(p))
        out.write(buf.getvalue())
    elif args.format == "json":
        out.write(io.dump({
            "depth": cloud.depth,
            "contained": cloud.contained,
            "points": {io.state_name(s): [io.point_json(p) for p in pts] for s, pts in cloud.points.items()},
        }))
    else:
        from . import render

        fig = render.domains_figure(cloud, mg.dim, assign)
        if not args.out:
            raise GraphError("svg output needs --out")
        render.save(fig, args.out, "svg")
        out.path = None
        print(f"wrote {args.out} (depth {cloud.depth})", file=sys.stderr)
    return NEGATIVE if cloud.contained is False else OK


COMMANDS = {
    "validate": (cmd_validate, "check that the out-edge cones partition the positive cone"),
    "minimize": (cmd_minimize, "merge states with equal path languages"),
    "domains": (cmd_domains, "search one polyhedral domain per state"),
    "density": (cmd_density, "invariant densities with a functional-equation certificate"),
    "convert": (cmd_convert, "turn a general graph into a matrices graph"),
    "decide-rational": (cmd_decide, "rationality verdicts for a two-letter win-lose graph"),
    "from-quadratics": (cmd_from_quadratics, "win-lose graph with given quadratic boundary points"),
    "expand": (cmd_expand, "iterate the map from an exact point"),
    "simulate": (cmd_simulate, "Monte Carlo comparison of orbit histograms with a density"),
    "render-domains": (cmd_render_domains, "point clouds approximating the domains"),
}

FORMATS = {
    "validate": ("text", "json"),
    "minimize": ("json", "text", "dot"),
    "domains": ("text", "json"),
    "density": ("text", "json"),
    "convert": ("json", "text", "dot"),
    "decide-rational": ("text", "json"),
    "from-quadratics": ("text", "json", "dot"),
    "expand": ("text", "json"),
    "simulate": ("text", "json"),
    "render-domains": ("svg", "csv", "json"),
}


class _Parser(argparse.ArgumentParser):
    # usage errors are errors (1), not verified negatives (2)
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cfdensity", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_)
        if name == "from-quadratics":
            sp.add_argument("numbers", help='comma separated, e.g. "0,sqrt(2)" or "(1+1*sqrt(5))/2"')
        else:
            sp.add_argument("file", help="GraphDocument JSON file or builtin:NAME")
        sp.add_argument("--format", choices=FORMATS[name], default=FORMATS[name][0])
        sp.add_argument("--out", help="output file (default stdout)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--depth", type=int, default=10)
        sp.add_argument("--samples", type=int, default=100_000)
        sp.add_argument("--iters", type=int, default=1000)
        if name == "expand":
            sp.add_argument("--point", required=True, help='exact coordinates, e.g. "1,sqrt(2)" or "3/7,1"')
            sp.add_argument("--state", help="starting state (default: the first)")
        if name == "simulate":
            sp.add_argument("--density", default="auto",
                            help='"auto", one expression for every state, or "name=expr;name=expr"')
            sp.add_argument("--tolerance", default="1/20", help="L1 tolerance per state")
            sp.add_argument("--report-dir", help="also write report.json, bins.csv and density.svg here")
        if name == "render-domains":
            sp.add_argument("--check", action="store_true", help="compute exact domains and check containment")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    fn = COMMANDS[args.command][0]
    out = Output(args)
    try:
        code = fn(args, out)
    except (io.DocumentError, GraphError, Unsupported, NonFiniteOrbit, ValueError, StopIteration) as exc:
        print(f"error: {exc or type(exc).__name__}", file=sys.stderr)
        return ERROR
    out.close()
    return code


if __name__ == "__main__":
    sys.exit(main())
