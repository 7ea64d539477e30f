"""Graph in, domains and densities out: the route shared by the CLI and the tests."""

from __future__ import annotations

from dataclasses import dataclass, field

from .. import density as dn
from .. import domains as dm
from ..cfgraph import MatricesGraph, WinLoseGraph
from ..convert import Conversion, GeneralCFGraph, to_matrices_graph


@dataclass
class Solution:
    graph: MatricesGraph  # the graph the domains live on
    result: object  # DomainAssignment or Failure
    densities: dict = field(default_factory=dict)
    certificate: object = None
    conversion: Conversion | None = None
    pushforward: dict | None = None  # state of the general graph -> [(cell, DensityExpr)]

    @property
    def ok(self) -> bool:
        return bool(self.result) and bool(self.certificate)


def as_matrices(g) -> tuple[MatricesGraph, Conversion | None]:
    if isinstance(g, WinLoseGraph):
        return g.to_matrices(), None
    if isinstance(g, GeneralCFGraph):
        conv = to_matrices_graph(g)
        return conv.graph, conv
    return g, None


def solve(g, pushforward: bool = True) -> Solution:
    """Domains, densities and the functional-equation certificate; general graphs are converted first."""
    mg, conv = as_matrices(g)
    res = dm.polyhedral_domains(mg)
    sol = Solution(mg, res, conversion=conv)
    if not res:
        return sol
    sol.densities = {s: f.simplify() for s, f in dn.domains_to_density(res).items()}
    sol.certificate = dn.check_functional_equation(mg, sol.densities)
    if conv is not None and pushforward:
        sol.pushforward = dn.pushforward_density(g, conv, sol.densities)
    return sol
