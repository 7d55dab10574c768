"""Magnetic Schrödinger operators, scalar Laplacians and their energy forms.

The operator acts by

    M f(x) = sum_y b(x, y) (f(x) - phi(x, y) f(y)) + W(x) f(x),

which on a locally finite graph is a finite sum at every vertex.  All
evaluation happens on finitely supported fields.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

import numpy as np

from .bundle import (
    Connection,
    Endomorphism,
    HermitianBundle,
    negate_connection,
    w_max,
    w_min,
)
from .exceptions import NonScalarFiber
from .fields import VectorField, modulus_field, pairing
from .graph import GraphOracle, Vertex, ball_of_set, degree, sort_vertices, vertex_key


class ScalarPotential:
    """Real potential ``V`` given by a finite table over a constant default,
    or by a rule ``func``.

    ``lower_bound`` is a known global lower bound of ``V`` (None when
    unknown); it is exact for table potentials.
    """

    def __init__(self, values: Mapping[Vertex, float] | None = None, default: float = 0.0,
                 func: Callable[[Vertex], float] | None = None,
                 lower_bound: float | None = None):
        self.values = {x: float(v) for x, v in (values or {}).items()}
        self.default = float(default)
        self.func = func
        for v in list(self.values.values()) + [self.default]:
            if not np.isfinite(v):
                raise ValueError("potential values must be finite")
        if lower_bound is None and func is None:
            lower_bound = min([self.default, *self.values.values()])
        self.lower_bound = lower_bound

    def __call__(self, x) -> float:
        if x in self.values:
            return self.values[x]
        if self.func is not None:
            return float(self.func(x))
        return self.default

    @classmethod
    def constant(cls, c: float) -> "ScalarPotential":
        return cls(default=c)


@dataclass(frozen=True)
class MagneticOperator:
    """The triple ``(b, phi, W)`` bound to a graph and a Hermitian bundle."""

    graph: GraphOracle
    bundle: HermitianBundle = field(default_factory=HermitianBundle)
    connection: Connection = field(default_factory=Connection)
    endo: Endomorphism = field(default_factory=Endomorphism)
    potential: ScalarPotential | None = None  # set for scalar Laplacians

    @property
    def is_scalar(self) -> bool:
        return self.bundle.is_line_bundle and self.connection.is_trivial

    def fiber_dim(self, x) -> int:
        return self.bundle.fiber_dim(x)

    def w_min(self, x) -> float:
        return w_min(self.endo, x, self.fiber_dim(x))

    def w_max(self, x) -> float:
        return w_max(self.endo, x, self.fiber_dim(x))


def apply_at(m: MagneticOperator, f: VectorField, x) -> np.ndarray:
    """The fiber vector ``M f(x)``."""
    dx = m.fiber_dim(x)
    fx = f.get(x, dx)
    out = np.zeros(dx, dtype=complex)
    for y, b in m.graph.neighbors(x):
        dy = m.fiber_dim(y)
        fy = f.get(y, dy)
        if fy.any():
            out += b * (fx - m.connection.matrix(x, y, dx, dy) @ fy)
        else:
            out += b * fx
    return out + m.endo.matrix(x, dx) @ fx


def apply_supported(m: MagneticOperator, f: VectorField) -> VectorField:
    """``M f`` for finitely supported ``f``; its support lies in ``B_1(supp f)``."""
    region = ball_of_set(m.graph, f.support, 1)
    return VectorField({x: apply_at(m, f, x) for x in region})


def scalar_laplacian(graph: GraphOracle, v: ScalarPotential | None = None) -> MagneticOperator:
    """``L_V``: trivial line bundle, identity connection, ``W(x) = [V(x)]``."""
    v = v if v is not None else ScalarPotential()
    if v.func is None:
        endo = Endomorphism({x: [[val]] for x, val in v.values.items()}, default=v.default)
    else:
        endo = Endomorphism(func=lambda x, d: [[v(x)]], bounds=(v.lower_bound, None))
    return MagneticOperator(graph, HermitianBundle(), Connection(), endo, potential=v)


def _scalar_values(h: VectorField) -> dict:
    if not h.is_scalar:
        raise NonScalarFiber("quadratic forms act on scalar fields")
    return {x: complex(vec[0]) for x, vec in h.items()}


def quadratic_form(graph: GraphOracle, v: ScalarPotential, h: VectorField) -> float:
    """``q_V(h) = 1/2 sum_{x,y} b(x,y)|h(x)-h(y)|^2 + sum_x V(x)|h(x)|^2``.

    Each edge touching the support is visited once, so the factor 1/2 is
    absorbed.
    """
    vals = _scalar_values(h)
    total = 0.0
    for x, hx in vals.items():
        kx = vertex_key(x)
        for y, b in graph.neighbors(x):
            hy = vals.get(y)
            if hy is None:
                total += b * abs(hx) ** 2
            elif kx < vertex_key(y):
                total += b * abs(hx - hy) ** 2
        total += v(x) * abs(hx) ** 2
    return float(total)


def form_matrix(graph: GraphOracle, v: ScalarPotential, K: Iterable[Vertex]) -> np.ndarray:
    """Symmetric ``Q`` with ``h^H Q h = q_V(h)`` for ``h`` supported in ``K``.

    Rows follow the canonical vertex order; the diagonal is the full degree
    plus the potential.
    """
    verts = sort_vertices(set(K))
    index = {x: i for i, x in enumerate(verts)}
    q = np.zeros((len(verts), len(verts)))
    for x in verts:
        i = index[x]
        for y, b in graph.neighbors(x):
            q[i, i] += b
            j = index.get(y)
            if j is not None:
                q[i, j] -= b
        q[i, i] += v(x)
    return q


class FiberIndex:
    """Flat coordinate layout of the fibers over a finite vertex set."""

    def __init__(self, bundle: HermitianBundle, vertices: Iterable[Vertex]):
        self.vertices = tuple(sort_vertices(set(vertices)))
        self.offsets = {}
        pos = 0
        for x in self.vertices:
            self.offsets[x] = (pos, bundle.fiber_dim(x))
            pos += bundle.fiber_dim(x)
        self.size = pos

    def slice(self, x) -> slice:
        start, d = self.offsets[x]
        return slice(start, start + d)

    def pack(self, f: VectorField) -> np.ndarray:
        out = np.zeros(self.size, dtype=complex)
        for x in self.vertices:
            start, d = self.offsets[x]
            out[start:start + d] = f.get(x, d)
        return out

    def unpack(self, vec: np.ndarray) -> VectorField:
        return VectorField({x: vec[self.slice(x)] for x in self.vertices})


def assemble(m: MagneticOperator, rows: FiberIndex, cols: FiberIndex) -> np.ndarray:
    """Matrix of ``g -> (M g)|_rows`` for ``g`` supported on the ``cols`` vertices."""
    mat = np.zeros((rows.size, cols.size), dtype=complex)
    for x in rows.vertices:
        rs = rows.slice(x)
        dx = rows.offsets[x][1]
        nbrs = m.graph.neighbors(x)
        if x in cols.offsets:
            deg = sum(b for _, b in nbrs)
            mat[rs, cols.slice(x)] += deg * np.eye(dx) + m.endo.matrix(x, dx)
        for y, b in nbrs:
            if y in cols.offsets:
                dy = cols.offsets[y][1]
                mat[rs, cols.slice(y)] -= b * m.connection.matrix(x, y, dx, dy)
    return mat


def green_symmetry_defect(m: MagneticOperator, phi: VectorField, psi: VectorField) -> float:
    """``|(phi, M psi) - (M phi, psi)|``; vanishes up to rounding."""
    return abs(pairing(phi, apply_supported(m, psi)) - pairing(apply_supported(m, phi), psi))


def w_min_potential(m: MagneticOperator) -> ScalarPotential:
    """The potential ``x -> smallest eigenvalue of W(x)``."""
    return ScalarPotential(func=m.w_min, lower_bound=m.endo.bounds[0])


def neg_w_max_potential(m: MagneticOperator) -> ScalarPotential:
    """The potential ``x -> -W_max(x) - 2 deg(x)``."""
    hi = m.endo.bounds[1]
    lo = None
    if hi is not None and m.graph.degree_bound is not None:
        lo = -hi - 2.0 * m.graph.degree_bound
    return ScalarPotential(func=lambda x: -m.w_max(x) - 2.0 * degree(m.graph, x), lower_bound=lo)


def domination_defect(m: MagneticOperator, phi: VectorField) -> float:
    """``(phi, M phi) - q_{W_min}(|phi|)``; nonnegative by Kato's inequality."""
    lhs = pairing(phi, apply_supported(m, phi)).real
    return lhs - quadratic_form(m.graph, w_min_potential(m), modulus_field(phi))


def negate_operator(m: MagneticOperator) -> MagneticOperator:
    """The operator ``(b, -phi, -W - 2 deg)``, which acts as ``-M``."""
    g, endo = m.graph, m.endo

    def neg_w(x, d):
        return -endo.matrix(x, d) - 2.0 * degree(g, x) * np.eye(d)

    lo, hi = endo.bounds
    dmax = g.degree_bound
    new_lo = -hi - 2.0 * dmax if hi is not None and dmax is not None else None
    new_hi = -lo if lo is not None else None
    return MagneticOperator(g, m.bundle, negate_connection(m.connection),
                            Endomorphism(func=neg_w, bounds=(new_lo, new_hi)))


__all__ = [
    "ScalarPotential", "MagneticOperator", "FiberIndex", "apply_at", "apply_supported",
    "scalar_laplacian", "quadratic_form", "form_matrix", "assemble",
    "green_symmetry_defect", "domination_defect", "negate_operator",
    "w_min_potential", "neg_w_max_potential",
]
