"""Finitely supported vector fields and the finite dual pairing."""

from __future__ import annotations

from typing import Iterable, Mapping

import numpy as np

from .exceptions import DimensionMismatch
from .graph import Vertex, sort_vertices, vertex_key


class VectorField:
    """A finitely supported section ``x -> f(x)``.

    Vertices missing from the mapping carry the zero vector.  Exactly-zero
    vectors are pruned on construction so that :attr:`support` is exact.

    >>> f = VectorField({0: [1.0], 1: [0.0]})
    >>> f.support
    (0,)
    """

    __slots__ = ("_data",)

    def __init__(self, entries: Mapping[Vertex, object] | None = None):
        data = {}
        for x, v in (entries or {}).items():
            vertex_key(x)
            vec = np.atleast_1d(np.asarray(v, dtype=complex)).copy()
            if vec.ndim != 1:
                raise DimensionMismatch(f"value at {x!r} must be a vector")
            if np.any(vec != 0):
                vec.setflags(write=False)
                data[x] = vec
        self._data = {x: data[x] for x in sort_vertices(data)}

    @classmethod
    def delta(cls, x, value=1.0) -> "VectorField":
        return cls({x: value})

    @classmethod
    def from_scalars(cls, values: Mapping[Vertex, complex]) -> "VectorField":
        return cls({x: [v] for x, v in values.items()})

    @property
    def support(self) -> tuple:
        return tuple(self._data)

    def items(self):
        return self._data.items()

    def __contains__(self, x) -> bool:
        return x in self._data

    def __len__(self) -> int:
        return len(self._data)

    def __iter__(self):
        return iter(self._data)

    def get(self, x, dim: int) -> np.ndarray:
        """``f(x)``, as a zero vector of length ``dim`` off the support."""
        v = self._data.get(x)
        if v is None:
            return np.zeros(dim, dtype=complex)
        if v.shape[0] != dim:
            raise DimensionMismatch(f"field value at {x!r} has length {v.shape[0]}, fiber has {dim}")
        return v

    def scalar(self, x) -> complex:
        v = self._data.get(x)
        if v is None:
            return 0j
        if v.shape[0] != 1:
            raise DimensionMismatch(f"field value at {x!r} is not scalar")
        return complex(v[0])

    @property
    def is_scalar(self) -> bool:
        return all(v.shape[0] == 1 for v in self._data.values())

    def norm(self) -> float:
        """Euclidean norm over all fiber coordinates."""
        return float(np.sqrt(sum(np.vdot(v, v).real for v in self._data.values())))

    def max_norm(self) -> float:
        return max((float(np.max(np.abs(v))) for v in self._data.values()), default=0.0)

    def _combine(self, other: "VectorField", sign: float) -> "VectorField":
        out = dict(self._data)
        for x, v in other.items():
            if x in out:
                if out[x].shape != v.shape:
                    raise DimensionMismatch(f"fields disagree in dimension at {x!r}")
                out[x] = out[x] + sign * v
            else:
                out[x] = sign * v
        return VectorField(out)

    def __add__(self, other: "VectorField") -> "VectorField":
        return self._combine(other, 1.0)

    def __sub__(self, other: "VectorField") -> "VectorField":
        return self._combine(other, -1.0)

    def __mul__(self, alpha) -> "VectorField":
        return VectorField({x: alpha * v for x, v in self._data.items()})

    __rmul__ = __mul__

    def __neg__(self) -> "VectorField":
        return self * -1.0

    def restrict(self, vertices: Iterable[Vertex]) -> "VectorField":
        keep = set(vertices)
        return VectorField({x: v for x, v in self._data.items() if x in keep})

    def conj(self) -> "VectorField":
        return VectorField({x: v.conj() for x, v in self._data.items()})

    def allclose(self, other: "VectorField", atol: float = 1e-12) -> bool:
        return (self - other).max_norm() <= atol

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return self._data.keys() == other._data.keys() and all(
            np.array_equal(v, other._data[x]) for x, v in self._data.items())

    def __repr__(self):
        body = ", ".join(f"{x!r}: {np.round(v, 12).tolist()}" for x, v in self._data.items())
        return f"VectorField({{{body}}})"


def pairing(phi: VectorField, f: VectorField) -> complex:
    """``sum_x <phi(x), f(x)>`` with the inner product conjugate-linear in ``phi``."""
    total = 0j
    for x, u in phi.items():
        if x in f:
            v = f.get(x, u.shape[0])
            total += np.vdot(u, v)
    return complex(total)


def pointwise_norm(f: VectorField) -> dict:
    """``|f|(x) = ||f(x)||`` on the support of ``f``."""
    return {x: float(np.linalg.norm(v)) for x, v in f.items()}


def modulus_field(f: VectorField) -> VectorField:
    """``|f|`` as a scalar field."""
    return VectorField.from_scalars(pointwise_norm(f))


def seminorm_pK(f: VectorField, K: Iterable[Vertex]) -> float:
    """``p_K(f) = sum_{x in K} ||f(x)||``."""
    norms = pointwise_norm(f)
    return float(sum(norms.get(x, 0.0) for x in set(K)))
