"""Hermitian vector bundles, unitary connections and fiber endomorphisms.

Fibers carry the standard inner product ``<u, v> = u^H v`` (conjugate-linear
in the first slot).  Connections are only consulted on edges.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

import numpy as np

from .exceptions import DimensionMismatch, NonHermitian
from .graph import GraphOracle, Vertex, sort_vertices, vertex_key

TOL = 1e-10


def as_matrix(a) -> np.ndarray:
    m = np.atleast_2d(np.asarray(a, dtype=complex))
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got shape {m.shape}")
    return m


class HermitianBundle:
    """Fiber dimensions over the vertex set; unlisted vertices get ``default``."""

    def __init__(self, dims: Mapping[Vertex, int] | None = None, default: int = 1,
                 func: Callable[[Vertex], int] | None = None):
        self.dims = dict(dims or {})
        self.default = int(default)
        self.func = func
        for x, d in self.dims.items():
            if int(d) < 1:
                raise DimensionMismatch(f"fiber dimension at {x!r} must be >= 1")
        if self.default < 1:
            raise DimensionMismatch("default fiber dimension must be >= 1")

    def fiber_dim(self, x) -> int:
        if x in self.dims:
            return int(self.dims[x])
        if self.func is not None:
            return int(self.func(x))
        return self.default

    @property
    def is_line_bundle(self) -> bool:
        return self.func is None and self.default == 1 and all(d == 1 for d in self.dims.values())


class Connection:
    """Unitary parallel transport ``phi(x, y): F_y -> F_x`` on edges.

    Matrices may be stored for one orientation only; the other is taken as
    the conjugate transpose.  Edges without data use the identity, or
    ``func(x, y)`` when a rule is supplied.  ``sign`` multiplies every
    transport map and is how :func:`negate_connection` is realised.
    """

    def __init__(self, edges: Mapping[tuple, object] | None = None,
                 func: Callable[[Vertex, Vertex], object] | None = None,
                 sign: float = 1.0):
        self.edges = {tuple(k): as_matrix(v) for k, v in (edges or {}).items()}
        self.func = func
        self.sign = sign

    def _raw(self, x, y, dim_x: int, dim_y: int) -> np.ndarray:
        if (x, y) in self.edges:
            return self.edges[(x, y)]
        if (y, x) in self.edges:
            return self.edges[(y, x)].conj().T
        if self.func is not None:
            return as_matrix(self.func(x, y))
        if dim_x != dim_y:
            raise DimensionMismatch(f"no connection data on ({x!r}, {y!r}) with unequal fibers")
        return np.eye(dim_x, dtype=complex)

    def matrix(self, x, y, dim_x: int, dim_y: int) -> np.ndarray:
        m = self._raw(x, y, dim_x, dim_y)
        if m.shape != (dim_x, dim_y):
            raise DimensionMismatch(
                f"connection on ({x!r}, {y!r}) has shape {m.shape}, expected {(dim_x, dim_y)}")
        return self.sign * m

    @property
    def is_trivial(self) -> bool:
        return not self.edges and self.func is None and self.sign == 1.0


class Endomorphism:
    """Self-adjoint map ``W(x)`` on each fiber.

    Stored matrices override ``func(x, dim)``, which overrides the constant
    ``default * I``.  ``bounds`` are global bounds ``(lo, hi)`` on the
    spectrum of every ``W(x)``; they are computed automatically when no
    ``func`` is given.
    """

    def __init__(self, matrices: Mapping[Vertex, object] | None = None, default: float = 0.0,
                 func: Callable[[Vertex, int], object] | None = None,
                 bounds: tuple[float | None, float | None] | None = None):
        self.matrices = {x: as_matrix(m) for x, m in (matrices or {}).items()}
        self.default = float(default)
        self.func = func
        if bounds is None:
            bounds = (None, None)
            if func is None:
                try:
                    spectra = [_eigh_checked(m, x) for x, m in self.matrices.items()]
                except NonHermitian:
                    pass  # reported by validate()
                else:
                    bounds = (min([self.default] + [s[0] for s in spectra]),
                              max([self.default] + [s[-1] for s in spectra]))
        self.bounds = bounds

    def matrix(self, x, dim: int) -> np.ndarray:
        if x in self.matrices:
            m = self.matrices[x]
        elif self.func is not None:
            m = as_matrix(self.func(x, dim))
        else:
            return self.default * np.eye(dim, dtype=complex)
        if m.shape != (dim, dim):
            raise DimensionMismatch(f"endomorphism at {x!r} has shape {m.shape}, expected {(dim, dim)}")
        return m

    @property
    def is_zero(self) -> bool:
        return self.func is None and self.default == 0.0 and not any(
            np.any(m) for m in self.matrices.values())


def _eigh_checked(m: np.ndarray, x=None) -> np.ndarray:
    if m.shape[0] != m.shape[1] or np.max(np.abs(m - m.conj().T), initial=0.0) > TOL:
        raise NonHermitian(f"W({x!r}) is not Hermitian")
    if m.shape == (1, 1):
        return np.array([m[0, 0].real])
    return np.linalg.eigvalsh(m)


def w_min(e: Endomorphism, x, dim: int = 1) -> float:
    """Smallest eigenvalue of ``W(x)``."""
    return float(_eigh_checked(e.matrix(x, dim), x)[0])


def w_max(e: Endomorphism, x, dim: int = 1) -> float:
    """Largest eigenvalue of ``W(x)``."""
    return float(_eigh_checked(e.matrix(x, dim), x)[-1])


@dataclass(frozen=True)
class Violation:
    kind: str  # "unitarity" | "compatibility" | "hermiticity" | "dimension"
    where: tuple
    detail: str = field(default="", compare=False)

    def __str__(self):
        return f"{self.kind} violation at {self.where}: {self.detail}"


def validate(graph: GraphOracle, bundle: HermitianBundle, connection: Connection,
             endo: Endomorphism, vertices: Iterable[Vertex]) -> list[Violation]:
    """Check the bundle data on every vertex of ``vertices`` and its incident edges."""
    out: list[Violation] = []
    vset = set(vertices)
    for x in sort_vertices(vset):
        dx = bundle.fiber_dim(x)
        try:
            w = endo.matrix(x, dx)
        except DimensionMismatch as exc:
            out.append(Violation("dimension", (x,), str(exc)))
        else:
            err = np.max(np.abs(w - w.conj().T), initial=0.0)
            if err > TOL:
                out.append(Violation("hermiticity", (x,), f"|W - W^H| = {err:.3g}"))
        for y, _ in graph.neighbors(x):
            if y in vset and vertex_key(y) < vertex_key(x):
                continue  # each edge inside the set is checked once
            dy = bundle.fiber_dim(y)
            if dx != dy:
                out.append(Violation("dimension", (x, y), f"fiber dims {dx} != {dy}"))
                continue
            try:
                p = connection.matrix(x, y, dx, dy)
                q = connection.matrix(y, x, dy, dx)
            except DimensionMismatch as exc:
                out.append(Violation("dimension", (x, y), str(exc)))
                continue
            err = np.max(np.abs(p @ p.conj().T - np.eye(dx)))
            if err > TOL:
                out.append(Violation("unitarity", (x, y), f"|phi phi^H - I| = {err:.3g}"))
            err = np.max(np.abs(q - p.conj().T))
            if err > TOL:
                out.append(Violation("compatibility", (x, y), f"|phi_yx - phi_xy^H| = {err:.3g}"))
    return out


def negate_connection(connection: Connection) -> Connection:
    """The connection ``-phi``; still unitary and compatible."""
    return Connection(connection.edges, connection.func, -connection.sign)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian matrix."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_hermitian(n: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * (z + z.conj().T) / 2
