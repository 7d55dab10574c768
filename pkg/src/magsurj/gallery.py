"""Built-in graphs and the canonical objects of the worked examples.

Hexagram vertices are the strings ``"a1".."a6"`` (a 6-cycle) and
``"b1".."b6"``, where ``b_j`` is joined to ``a_j`` and ``a_{j+1}``.  With
alternating signs on the cycle, each ``a`` vertex sees ``4 phi(a) + 2 phi(a)``
and each ``b`` vertex sees ``phi(a_j) + phi(a_{j+1}) = 0``, so
``phi(a_i) = (-1)^i`` is an eigenfunction of eigenvalue 6.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .exceptions import InvalidParams, SupportOutsideStar
from .fields import VectorField
from .graph import FiniteGraph, GraphOracle

HEX_A = tuple(f"a{i}" for i in range(1, 7))
HEX_B = tuple(f"b{i}" for i in range(1, 7))
HEXAGRAM_VERTICES = HEX_A + HEX_B


@dataclass(frozen=True)
class GeneratorSpec:
    name: str
    params: dict = field(default_factory=dict)


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def lattice_z() -> GraphOracle:
    return GraphOracle(
        lambda x: ((x - 1, 1.0), (x + 1, 1.0)),
        _is_int,
        infinite_components_asserted=True,
        description="lattice Z",
        degree_bound=2.0,
    )


def lattice_z2() -> GraphOracle:
    def contains(x):
        return isinstance(x, tuple) and len(x) == 2 and all(_is_int(c) for c in x)

    def nbrs(x):
        i, j = x
        return (((i - 1, j), 1.0), ((i + 1, j), 1.0), ((i, j - 1), 1.0), ((i, j + 1), 1.0))

    return GraphOracle(nbrs, contains, infinite_components_asserted=True,
                       description="lattice Z^2", degree_bound=4.0)


def ray() -> GraphOracle:
    """The half-line ``0 ~ 1 ~ 2 ~ ...``."""
    def nbrs(x):
        return ((x + 1, 1.0),) if x == 0 else ((x - 1, 1.0), (x + 1, 1.0))

    return GraphOracle(nbrs, lambda x: _is_int(x) and x >= 0,
                       infinite_components_asserted=True, description="ray N_0", degree_bound=2.0)


def binary_tree() -> GraphOracle:
    """Rooted binary tree; vertices are bit tuples, the root is ``()``."""
    def contains(x):
        return isinstance(x, tuple) and all(c in (0, 1) and _is_int(c) for c in x)

    def nbrs(x):
        out = [(x + (0,), 1.0), (x + (1,), 1.0)]
        if x:
            out.append((x[:-1], 1.0))
        return out

    return GraphOracle(nbrs, contains, infinite_components_asserted=True,
                       description="binary tree", degree_bound=3.0)


def cycle(n: int) -> FiniteGraph:
    if not _is_int(n) or n < 3:
        raise InvalidParams("cycle needs an integer length n >= 3")
    return FiniteGraph(range(n), [(i, (i + 1) % n) for i in range(n)], f"cycle C_{n}")


def path(n: int) -> FiniteGraph:
    if not _is_int(n) or n < 1:
        raise InvalidParams("path needs an integer number of vertices n >= 1")
    return FiniteGraph(range(n), [(i, i + 1) for i in range(n - 1)], f"path P_{n}")


def _hexagram_edges():
    edges = []
    for i in range(6):
        a, a_next, b = HEX_A[i], HEX_A[(i + 1) % 6], HEX_B[i]
        edges += [(a, a_next, 1.0), (b, a, 1.0), (b, a_next, 1.0)]
    return edges


def hexagram() -> FiniteGraph:
    return FiniteGraph(HEXAGRAM_VERTICES, _hexagram_edges(), "hexagram")


def hexagram_glued_ray() -> GraphOracle:
    """Hexagram with ``b1`` joined to the root ``0`` of a ray ``0 ~ 1 ~ 2 ~ ...``."""
    hexa = hexagram()
    base = ray()

    def contains(x):
        return x in HEXAGRAM_VERTICES or base.contains(x)

    def nbrs(x):
        if isinstance(x, str):
            out = list(hexa.neighbors(x))
            if x == "b1":
                out.append((0, 1.0))
            return out
        out = list(base.neighbors(x))
        if x == 0:
            out.append(("b1", 1.0))
        return out

    return GraphOracle(nbrs, contains, infinite_components_asserted=True,
                       description="hexagram glued to a ray at b1", degree_bound=4.0)


def star_weights(n_leaves: int, base: float = 2.0) -> list[float]:
    """``b_n = base^{-n}`` for ``n = 1..n_leaves``."""
    return [base ** (-n) for n in range(1, n_leaves + 1)]


def infinite_star(n_leaves: int, base: float = 2.0, weights=None) -> FiniteGraph:
    """Truncation of the infinite star to its first ``n_leaves`` leaves.

    The full star (hub 0 joined to every ``n >= 1``) is not locally finite,
    so only truncations are available; the result has ``truncated=True``.
    """
    if not _is_int(n_leaves) or n_leaves < 1:
        raise InvalidParams("infinite_star needs an integer truncation level N >= 1")
    if weights is None:
        if base <= 1:
            raise InvalidParams("star weights base^-n need base > 1 to be summable")
        weights = star_weights(n_leaves, base)
    elif len(weights) != n_leaves or any(w <= 0 for w in weights):
        raise InvalidParams("star weights must be N positive numbers")
    g = FiniteGraph(range(n_leaves + 1), [(0, n, w) for n, w in zip(range(1, n_leaves + 1), weights)],
                    f"infinite star truncated at N={n_leaves}")
    g.truncated = True
    return g


def disjoint_union(*parts: GraphOracle) -> GraphOracle:
    """Disjoint union; vertex ``v`` of part ``i`` becomes ``(i, v)``."""
    if not parts:
        raise InvalidParams("disjoint_union needs at least one part")

    def contains(x):
        return (isinstance(x, tuple) and len(x) == 2 and _is_int(x[0])
                and 0 <= x[0] < len(parts) and parts[x[0]].contains(x[1]))

    def nbrs(x):
        i, v = x
        return [((i, y), w) for y, w in parts[i].neighbors(v)]

    verts = None
    if all(p.is_finite for p in parts):
        verts = [(i, v) for i, p in enumerate(parts) for v in p.vertices]
    bounds = [p.degree_bound for p in parts]
    return GraphOracle(
        nbrs, contains,
        infinite_components_asserted=all(p.infinite_components_asserted for p in parts),
        description=" + ".join(p.description for p in parts),
        vertices=verts,
        degree_bound=None if None in bounds else max(bounds),
    )


_GENERATORS = {
    "lattice_z": lambda p: lattice_z(),
    "lattice_z2": lambda p: lattice_z2(),
    "ray": lambda p: ray(),
    "binary_tree": lambda p: binary_tree(),
    "hexagram": lambda p: hexagram(),
    "hexagram_glued_ray": lambda p: hexagram_glued_ray(),
    "cycle": lambda p: cycle(p["n"]),
    "path": lambda p: path(p["n"]),
    "infinite_star": lambda p: infinite_star(p["N"], p.get("base", 2.0), p.get("weights")),
    "disjoint_union": lambda p: disjoint_union(*(make_graph(_as_spec(s)) for s in p["parts"])),
}

_PARAMS = {
    "cycle": {"n"}, "path": {"n"}, "infinite_star": {"N", "base", "weights"},
    "disjoint_union": {"parts"},
}

GENERATOR_NAMES = tuple(_GENERATORS)


def _as_spec(s) -> GeneratorSpec:
    if isinstance(s, GeneratorSpec):
        return s
    if isinstance(s, dict) and "generator" in s:
        return GeneratorSpec(s["generator"], dict(s.get("params", {})))
    if isinstance(s, dict) and "name" in s:
        return GeneratorSpec(s["name"], dict(s.get("params", {})))
    raise InvalidParams(f"cannot read generator spec {s!r}")


def make_graph(spec: GeneratorSpec) -> GraphOracle:
    """Build the graph named by ``spec``."""
    spec = _as_spec(spec)
    if spec.name not in _GENERATORS:
        raise InvalidParams(f"unknown generator {spec.name!r}")
    allowed = _PARAMS.get(spec.name, set())
    extra = set(spec.params) - allowed
    if extra:
        raise InvalidParams(f"unexpected parameters for {spec.name}: {sorted(extra)}")
    try:
        return _GENERATORS[spec.name](spec.params)
    except KeyError as exc:
        raise InvalidParams(f"missing parameter {exc.args[0]!r} for {spec.name}") from None
    except TypeError as exc:
        raise InvalidParams(str(exc)) from None


def hexagram_eigenfunction() -> VectorField:
    """``phi(a_i) = (-1)^i``, zero on the b vertices (and on anything glued on)."""
    return VectorField.from_scalars({a: (-1.0) ** i for i, a in enumerate(HEX_A, start=1)})


def star_image_defect(f: VectorField, n_leaves: int) -> complex:
    """``f(0) + sum_{n=1..N} f(n)``; ``L g = f`` is solvable on the truncated star iff it is 0."""
    allowed = set(range(n_leaves + 1))
    outside = [x for x in f.support if x not in allowed]
    if outside:
        raise SupportOutsideStar(f"support outside the star: {outside}")
    return sum((f.scalar(x) for x in f.support), 0j)
