"""Countable weighted graphs exposed through neighbor oracles.

A graph is never materialised as a whole.  It is an object that, given a
vertex token, returns the finite list of its neighbors together with the
positive edge weights.  Finite graphs and infinite generators (lattices,
rays, trees) share this interface, and every algorithm in the package only
ever touches finitely many vertices.

Vertex tokens are integers, strings, or (nested) tuples of those.  They are
totally ordered by :func:`vertex_key`, and every matrix in the package is
indexed in that order.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from .exceptions import InvalidVertex

Vertex = Hashable
Neighbors = Sequence[tuple[Vertex, float]]

_TYPE_RANK = {int: 0, tuple: 1, str: 2}


def vertex_key(v):
    """Sort key giving a total order on vertex tokens.

    Integers come first, then tuples (compared element-wise), then strings.
    """
    if isinstance(v, bool):
        raise InvalidVertex(v)
    if isinstance(v, (int, np.integer)):
        return (0, int(v))
    if isinstance(v, tuple):
        return (1, tuple(vertex_key(u) for u in v))
    if isinstance(v, str):
        return (2, v)
    raise InvalidVertex(v)


def is_vertex_token(v) -> bool:
    try:
        vertex_key(v)
    except InvalidVertex:
        return False
    return True


def sort_vertices(vertices: Iterable[Vertex]) -> list[Vertex]:
    return sorted(vertices, key=vertex_key)


class GraphOracle:
    """A locally finite weighted graph given by its neighbor function.

    Parameters
    ----------
    neighbors : callable
        Maps a valid vertex to an iterable of ``(neighbor, weight)`` pairs.
        Weights must be positive; pairs with zero weight are dropped.
    contains : callable
        Predicate deciding whether a token is a vertex of the graph.
    infinite_components_asserted : bool
        Set by generators that know every connected component is infinite.
    vertices : sequence, optional
        The full vertex set, for finite graphs only.
    degree_bound : float, optional
        A known upper bound for ``deg`` over all vertices.
    truncated : bool
        The oracle is a finite truncation of a graph that is not locally
        finite (the infinite star).
    """

    def __init__(
        self,
        neighbors: Callable[[Vertex], Iterable[tuple[Vertex, float]]],
        contains: Callable[[Vertex], bool],
        *,
        infinite_components_asserted: bool = False,
        description: str = "",
        vertices: Sequence[Vertex] | None = None,
        degree_bound: float | None = None,
        truncated: bool = False,
    ):
        self._neighbors = neighbors
        self._contains = contains
        self.infinite_components_asserted = bool(infinite_components_asserted)
        self.description = description
        self._vertices = None if vertices is None else tuple(sort_vertices(vertices))
        self.degree_bound = degree_bound
        self.truncated = truncated

    def __repr__(self):
        return f"GraphOracle({self.description!r})"

    @property
    def vertices(self) -> tuple[Vertex, ...] | None:
        """All vertices in canonical order, or None for infinite graphs."""
        return self._vertices

    @property
    def is_finite(self) -> bool:
        return self._vertices is not None

    def contains(self, x) -> bool:
        return is_vertex_token(x) and bool(self._contains(x))

    def check_vertex(self, x) -> None:
        if not self.contains(x):
            raise InvalidVertex(x)

    def neighbors(self, x) -> list[tuple[Vertex, float]]:
        """Neighbors of ``x`` with positive weights, in canonical order."""
        self.check_vertex(x)
        out = [(y, float(w)) for y, w in self._neighbors(x) if w > 0]
        out.sort(key=lambda p: vertex_key(p[0]))
        return out

    def weight(self, x, y) -> float:
        self.check_vertex(y)
        for z, w in self.neighbors(x):
            if z == y:
                return w
        return 0.0


class FiniteGraph(GraphOracle):
    """Explicit finite graph built from an undirected edge list.

    Each undirected edge is listed once; the reverse direction is added
    automatically.  Repeated edges have their weights summed.
    """

    def __init__(self, vertices: Iterable[Vertex], edges: Iterable[tuple], description: str = ""):
        verts = sort_vertices(set(vertices))
        for v in verts:
            vertex_key(v)
        adj: dict = {v: {} for v in verts}
        for edge in edges:
            u, v = edge[0], edge[1]
            w = float(edge[2]) if len(edge) > 2 else 1.0
            if u not in adj:
                raise InvalidVertex(u)
            if v not in adj:
                raise InvalidVertex(v)
            if u == v:
                raise ValueError(f"self-loop at {u!r}")
            if w < 0 or not np.isfinite(w):
                raise ValueError(f"invalid weight {w} on edge ({u!r}, {v!r})")
            if w == 0:
                continue
            adj[u][v] = adj[u].get(v, 0.0) + w
            adj[v][u] = adj[v].get(u, 0.0) + w
        self._adj = adj
        degs = [sum(nb.values()) for nb in adj.values()]
        super().__init__(
            lambda x: adj[x].items(),
            lambda x: x in adj,
            infinite_components_asserted=False,
            description=description or f"finite graph on {len(verts)} vertices",
            vertices=verts,
            degree_bound=max(degs, default=0.0),
        )

    def edges(self) -> list[tuple[Vertex, Vertex, float]]:
        """Each undirected edge once, as ``(u, v, weight)`` with ``u < v``."""
        out = []
        for u in self.vertices:
            for v, w in self.neighbors(u):
                if vertex_key(u) < vertex_key(v):
                    out.append((u, v, w))
        return out


@dataclass(frozen=True)
class ComponentProbe:
    """Result of a budgeted breadth-first search of a connected component."""

    finite: bool
    size: int | None
    explored: int

    def __str__(self):
        return f"Finite({self.size})" if self.finite else f"ExceedsBudget(>{self.explored})"


@dataclass(frozen=True)
class FiniteGraphView:
    vertices: tuple
    weights: np.ndarray

    def index(self, x) -> int:
        return self.vertices.index(x)


def degree(g: GraphOracle, x) -> float:
    """Weighted degree ``sum_y b(x, y)``."""
    return float(sum(w for _, w in g.neighbors(x)))


def ball_of_set(g: GraphOracle, sources: Iterable[Vertex], n: int) -> set:
    """All vertices within combinatorial distance ``n`` of ``sources``."""
    if n < 0:
        raise ValueError("radius must be nonnegative")
    frontier = list(sources)
    for x in frontier:
        g.check_vertex(x)
    seen = set(frontier)
    for _ in range(n):
        nxt = []
        for x in frontier:
            for y, _ in g.neighbors(x):
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        if not nxt:
            break
        frontier = nxt
    return seen


def ball(g: GraphOracle, x, n: int) -> set:
    """The combinatorial ball ``B_n(x)``."""
    return ball_of_set(g, [x], n)


def distances(g: GraphOracle, x, n: int) -> dict:
    """Breadth-first distances from ``x`` for all vertices of ``B_n(x)``."""
    g.check_vertex(x)
    dist = {x: 0}
    queue = deque([x])
    while queue:
        u = queue.popleft()
        if dist[u] == n:
            continue
        for y, _ in g.neighbors(u):
            if y not in dist:
                dist[y] = dist[u] + 1
                queue.append(y)
    return dist


def component_probe(g: GraphOracle, x, budget: int) -> ComponentProbe:
    """Breadth-first search of the component of ``x``, stopping at ``budget`` vertices."""
    if budget < 1:
        raise ValueError("budget must be positive")
    g.check_vertex(x)
    seen = {x}
    queue = deque([x])
    while queue:
        u = queue.popleft()
        for y, _ in g.neighbors(u):
            if y not in seen:
                if len(seen) >= budget:
                    return ComponentProbe(False, None, len(seen))
                seen.add(y)
                queue.append(y)
    return ComponentProbe(True, len(seen), len(seen))


def component_vertices(g: GraphOracle, x, budget: int) -> set | None:
    """Vertex set of the component of ``x`` if it has at most ``budget`` vertices."""
    g.check_vertex(x)
    seen = {x}
    queue = deque([x])
    while queue:
        u = queue.popleft()
        for y, _ in g.neighbors(u):
            if y not in seen:
                if len(seen) >= budget:
                    return None
                seen.add(y)
                queue.append(y)
    return seen


def finite_view(g: GraphOracle, vertices: Iterable[Vertex]) -> FiniteGraphView:
    """Weight matrix of ``g`` restricted to ``vertices`` in canonical order."""
    verts = tuple(sort_vertices(set(vertices)))
    index = {v: i for i, v in enumerate(verts)}
    mat = np.zeros((len(verts), len(verts)))
    for v in verts:
        for y, w in g.neighbors(v):
            j = index.get(y)
            if j is not None:
                mat[index[v], j] = w
    return FiniteGraphView(verts, mat)


def check_symmetry(g: GraphOracle, vertices: Iterable[Vertex]) -> list[str]:
    """Axiom violations (self-loops, asymmetric weights) seen from ``vertices``."""
    problems = []
    for x in sort_vertices(set(vertices)):
        for y, w in g.neighbors(x):
            if y == x:
                problems.append(f"self-loop at {x!r}")
                continue
            back = [wy for z, wy in g.neighbors(y) if z == x]
            if len(back) != 1 or abs(back[0] - w) > 1e-14 * max(1.0, abs(w)):
                problems.append(f"asymmetric weight on ({x!r}, {y!r})")
    return problems
