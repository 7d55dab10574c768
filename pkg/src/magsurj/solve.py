"""Windowed solution of ``M g = f``.

For ``k = 0, 1, ...`` the unknowns are the fiber coordinates on
``B_k(window)`` and the equations are ``M g(x) = f(x)`` for ``x`` in the
window.  The first ``k`` whose minimal-norm least-squares solution meets the
tolerance wins.  When no radius up to the budget works, a finitely supported
kernel vector pairing nontrivially with ``f`` proves that no solution exists
at all: ``(psi, f) = (psi, M g) = (M psi, g) = 0`` for any ``g``.

If ``M`` is injective on finitely supported fields, the loop always succeeds
at some finite radius; the radius needed is not bounded a priori.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal

import numpy as np

from .certify import REPLAY_TOL, kernel_basis
from .exceptions import EmptyWindow
from .fields import VectorField, pairing
from .graph import ball_of_set, sort_vertices
from .schroedinger import FiberIndex, MagneticOperator, apply_at, apply_supported, assemble

OBSTRUCTION_TOL = 1e-8


@dataclass(frozen=True)
class SolveRequest:
    operator: MagneticOperator
    rhs: VectorField
    window: tuple
    r_max: int = 64
    tol: float = 1e-10
    kernel_radius: int = 0

    def __post_init__(self):
        if not self.window:
            raise EmptyWindow("window must be nonempty")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        object.__setattr__(self, "window", tuple(sort_vertices(set(self.window))))


@dataclass(frozen=True)
class SolveOutcome:
    status: Literal["solved", "obstructed", "exhausted"]
    solution: VectorField | None = None
    radius_used: int | None = None
    residual: float | None = None
    kernel_witness: VectorField | None = None
    pairing_value: complex | None = None
    best_residual: float | None = None


def residual(m: MagneticOperator, g: VectorField, f: VectorField, window: Iterable) -> float:
    """``max_{x in window} ||M g(x) - f(x)||``, evaluated vertex by vertex."""
    worst = 0.0
    for x in set(window):
        d = m.fiber_dim(x)
        worst = max(worst, float(np.linalg.norm(apply_at(m, g, x) - f.get(x, d))))
    return worst


def _lstsq(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.size == 0:
        return np.zeros(a.shape[1], dtype=complex)
    sol, *_ = np.linalg.lstsq(a, b, rcond=1e-10)
    return sol


def windowed_solve(req: SolveRequest) -> SolveOutcome:
    """Find finitely supported ``g`` with ``M g = f`` on ``req.window``."""
    m, f, window = req.operator, req.rhs, req.window
    rows = FiberIndex(m.bundle, window)
    rhs = rows.pack(f)
    if not rhs.any():
        return SolveOutcome("solved", VectorField(), 0, 0.0)

    best = np.inf
    prev_size = -1
    for k in range(req.r_max + 1):
        region = ball_of_set(m.graph, window, k)
        if len(region) == prev_size:
            break  # the unknowns stopped growing
        prev_size = len(region)
        cols = FiberIndex(m.bundle, region)
        g = cols.unpack(_lstsq(assemble(m, rows, cols), rhs))
        res = residual(m, g, f, window)
        best = min(best, res)
        if res <= req.tol:
            return SolveOutcome("solved", g, k, res)

    probe = ball_of_set(m.graph, window, req.kernel_radius)
    basis, _ = kernel_basis(m, probe)
    if basis:
        # the kernel element with the largest overlap with f is the projection of f
        coeffs = np.array([pairing(psi, f) for psi in basis])
        psi = VectorField()
        for c, b in zip(coeffs, basis):
            psi = psi + b * np.conj(c)
        n = psi.norm()
        if n > 0:
            psi = psi * (1.0 / n)
            val = pairing(psi, f)
            if abs(val) > OBSTRUCTION_TOL * f.norm():
                return SolveOutcome("obstructed", kernel_witness=psi, pairing_value=val,
                                    best_residual=float(best))
    return SolveOutcome("exhausted", best_residual=float(best))


def obstruction_holds(m: MagneticOperator, psi: VectorField, f: VectorField) -> bool:
    """Independent check of an obstruction certificate ``(psi, f)``."""
    n = psi.norm()
    return (n > 0 and apply_supported(m, psi).norm() <= REPLAY_TOL * n
            and abs(pairing(psi, f)) > OBSTRUCTION_TOL * f.norm())
