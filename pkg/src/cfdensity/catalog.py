"""Built-in graphs, addressable from the CLI as ``builtin:NAME``."""

from __future__ import annotations

from .cfgraph import MatricesGraph, WinLoseGraph, fully_subtractive

M0 = ((0, 1, 0), (1, 0, 0), (0, 1, 1))
M1 = ((1, 1, 0), (0, 0, 1), (0, 1, 0))


def cassaigne() -> MatricesGraph:
    return MatricesGraph(3, [0], [(0, 0, M0), (0, 0, M1)])


def cassaigne_extension() -> MatricesGraph:
    """Two states remembering which Cassaigne letter was used last."""
    return MatricesGraph(3, [0, 1], [(0, 0, M0), (0, 1, M1), (1, 1, M1), (1, 0, M0)])


def cassaigne_winlose() -> WinLoseGraph:
    """Slowdown of Cassaigne: from state k, letter j != k leads to state j."""
    return WinLoseGraph(3, [0, 1, 2], [(k, j, j) for k in range(3) for j in range(3) if j != k])


def poincare3() -> MatricesGraph:
    mats = [
        ((1, 0, 0), (1, 1, 0), (1, 1, 1)),
        ((1, 1, 1), (0, 1, 1), (0, 0, 1)),
        ((1, 0, 0), (1, 1, 1), (1, 0, 1)),
        ((1, 1, 0), (0, 1, 0), (1, 1, 1)),
        ((1, 0, 1), (1, 1, 1), (0, 0, 1)),
        ((1, 1, 1), (0, 1, 0), (0, 1, 1)),
    ]
    return MatricesGraph(3, [0], [(0, 0, m) for m in mats])


def reverse() -> MatricesGraph:
    mats = [
        ((1, 0, 0), (0, 1, 0), (1, 1, 1)),
        ((1, 0, 0), (1, 1, 1), (0, 0, 1)),
        ((1, 1, 1), (0, 1, 0), (0, 0, 1)),
        ((0, 1, 1), (1, 0, 1), (1, 1, 0)),
    ]
    return MatricesGraph(3, [0], [(0, 0, m) for m in mats])


def dim1() -> MatricesGraph:
    """x -> 2x on [0, 1/2], x -> (1-x)/x on [1/2, 1], projectivized."""
    return MatricesGraph(2, [0], [(0, 0, ((1, 0), (1, 2))), (0, 0, ((1, 1), (1, 0)))])


def euclid_matrix(n: int):
    return ((1, 1), (n + 1, n))


def euclid_truncated(n_max: int) -> MatricesGraph:
    """The multiplicative Euclid graph restricted to the letters n = 0..n_max (not a partition)."""
    return MatricesGraph(2, [0], [(0, 0, euclid_matrix(n)) for n in range(n_max + 1)])


def golden_example() -> WinLoseGraph:
    """Three states; the domain of state 0 is bounded by (1, 0) and (phi, 1)."""
    return WinLoseGraph(2, [0, 1, 2], [(1, 2, 1), (1, 0, 0), (2, 1, 0), (2, 2, 1), (0, 1, 1), (0, 0, 0)])


def nonrational_example() -> WinLoseGraph:
    """Four states; two domains are countable unions of intervals."""
    return WinLoseGraph(
        2,
        [0, 1, 2, 3],
        [(0, 0, 0), (0, 3, 1), (1, 0, 0), (1, 2, 1), (2, 2, 1), (2, 1, 0), (3, 3, 1), (3, 1, 0)],
    )


def cantor_example() -> WinLoseGraph:
    """Three states whose domain boundaries are certified to have no isolated point.

    Found by exhaustive search over three-state graphs; every domain language
    is pref(A{0,1}^*) and every boundary passes the two-sided neighbour test.
    """
    return WinLoseGraph(2, [0, 1, 2], [(0, 0, 0), (0, 1, 1), (1, 0, 0), (1, 2, 1), (2, 1, 0), (2, 0, 1)])


def _graphs():
    from . import convert

    return {
        "cassaigne": cassaigne,
        "cassaigne-extension": cassaigne_extension,
        "cassaigne-winlose": cassaigne_winlose,
        "poincare3": poincare3,
        "reverse": reverse,
        "dim1": dim1,
        "golden": golden_example,
        "nonrational": nonrational_example,
        "cantor": cantor_example,
        "fully-subtractive2": lambda: fully_subtractive(2),
        "fully-subtractive3": lambda: fully_subtractive(3),
        "brun3": convert.brun,
        "arp3": convert.arnoux_rauzy_poincare,
        "jacobi-perron3": convert.jacobi_perron,
        "symmetric-jacobi-perron3": convert.symmetric_jacobi_perron,
    }


NAMES = (
    "cassaigne",
    "cassaigne-extension",
    "cassaigne-winlose",
    "poincare3",
    "reverse",
    "dim1",
    "golden",
    "nonrational",
    "cantor",
    "fully-subtractive2",
    "fully-subtractive3",
    "brun3",
    "arp3",
    "jacobi-perron3",
    "symmetric-jacobi-perron3",
)


def get(name: str):
    table = _graphs()
    if name not in table:
        raise KeyError(f"unknown builtin {name!r}; choose from {', '.join(NAMES)}")
    return table[name]()
