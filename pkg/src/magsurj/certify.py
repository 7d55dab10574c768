"""Surjectivity verdicts for magnetic Schrödinger operators.

Two routes decide surjectivity here.  A nonzero finitely supported field in
the kernel of ``M`` refutes it, because ``M`` restricted to finitely
supported fields is the dual operator.  The sufficient conditions certify
it: local finiteness, infinite connected components, and a nonnegative
form ``q_{W_min}`` or ``q_{-W_max - 2 deg}``.  Every verdict records how
each condition was established.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Literal

import numpy as np

from .exceptions import EmptySupport, PreconditionViolated
from .fields import VectorField
from .graph import (
    GraphOracle,
    ball,
    ball_of_set,
    component_probe,
    component_vertices,
    degree,
    sort_vertices,
)
from .schroedinger import (
    FiberIndex,
    MagneticOperator,
    ScalarPotential,
    apply_at,
    apply_supported,
    assemble,
    form_matrix,
    neg_w_max_potential,
    quadratic_form,
    scalar_laplacian,
    w_min_potential,
)

KERNEL_TOL = 1e-10
FORM_TOL = 1e-10
REPLAY_TOL = 1e-9


@dataclass(frozen=True)
class Witness:
    """A unit-norm finitely supported field with ``M phi = 0``."""

    field: VectorField
    singular_value: float
    residual: float
    searched: tuple = ()


@dataclass(frozen=True)
class FormProbeResult:
    status: Literal["certified", "refuted", "not_refuted"]
    tier: str
    checked_radii: tuple = ()
    witness: VectorField | None = None
    value: float | None = None
    radius: int | None = None

    def as_dict(self) -> dict:
        out = {"status": self.status, "tier": self.tier, "checked_radii": list(self.checked_radii)}
        if self.status == "refuted":
            out.update(value=self.value, radius=self.radius)
        return out


@dataclass(frozen=True)
class SurjectivityVerdict:
    status: Literal["certified", "refuted", "undecided"]
    evidence: dict = field(default_factory=dict)
    witness: Witness | None = None
    form_probes: dict = field(default_factory=dict, compare=False)


def _phase_normalize(vec: np.ndarray) -> np.ndarray:
    """Scale to unit norm with the largest entry real and positive.

    Entries at roundoff level are set to exactly zero so supports are clean.
    """
    vec = np.asarray(vec, dtype=complex) / np.linalg.norm(vec)
    mags = np.round(np.abs(vec), 12)
    k = int(np.argmax(mags))
    vec = vec * (abs(vec[k]) / vec[k])
    vec.real[np.abs(vec.real) < 1e-14] = 0.0
    vec.imag[np.abs(vec.imag) < 1e-14] = 0.0
    return vec


def kernel_basis(m: MagneticOperator, support: Iterable, tol: float = KERNEL_TOL):
    """Orthonormal basis of the fields supported in ``support`` that ``M`` kills.

    All rows that such a field can reach, i.e. the ball of radius one around
    ``support``, enter the system, so every basis element is a genuine kernel
    element of ``M``.  Returns ``(basis, singular_values)``.
    """
    support = set(support)
    if not support:
        raise EmptySupport("kernel search needs a nonempty support")
    cols = FiberIndex(m.bundle, support)
    rows = FiberIndex(m.bundle, ball_of_set(m.graph, support, 1))
    a = assemble(m, rows, cols)
    _, s, vh = np.linalg.svd(a, full_matrices=True)
    sv = np.zeros(cols.size)
    sv[: s.size] = s
    null = [i for i in range(cols.size) if sv[i] < tol]
    basis = [cols.unpack(_phase_normalize(vh[i].conj())) for i in null]
    return basis, sv


def kernel_search(m: MagneticOperator, support: Iterable, tol: float = KERNEL_TOL) -> Witness | None:
    """A finitely supported kernel vector of ``M`` inside ``support``, if any."""
    support = sort_vertices(set(support))
    basis, sv = kernel_basis(m, support, tol)
    if not basis:
        return None
    phi = basis[-1]
    return Witness(phi, float(sv[-1]), apply_supported(m, phi).norm(), tuple(support))


def replay_kernel_witness(m: MagneticOperator, phi: VectorField, tol: float = REPLAY_TOL) -> bool:
    n = phi.norm()
    return n > 0 and apply_supported(m, phi).norm() <= tol * n


def form_nonnegativity_probe(graph: GraphOracle, v: ScalarPotential, center, r_max: int) -> FormProbeResult:
    """Falsify nonnegativity of ``q_V`` on the balls ``B_r(center)``, ``r <= r_max``.

    ``q_V >= 0`` on finitely supported functions iff every form matrix on an
    exhausting family of finite sets is positive semidefinite.  A pointwise
    nonnegative potential certifies outright when ``v.lower_bound >= 0``; a
    finite graph whose ball covers everything certifies exhaustively.
    """
    if r_max < 0:
        raise ValueError("r_max must be nonnegative")
    if v.lower_bound is not None and v.lower_bound >= 0:
        return FormProbeResult("certified", "pointwise-global")
    checked = []
    prev = None
    region = {center}
    for r in range(r_max + 1):
        region = ball(graph, center, r)
        if prev is not None and len(region) == len(prev):
            break
        prev = region
        checked.append(r)
        verts = sort_vertices(region)
        q = form_matrix(graph, v, verts)
        evals, evecs = np.linalg.eigh(q)
        if evals[0] < -FORM_TOL:
            h = VectorField.from_scalars(dict(zip(verts, _phase_normalize(evecs[:, 0]).real)))
            return FormProbeResult("refuted", "refuted", tuple(checked), h,
                                   quadratic_form(graph, v, h), r)
    if graph.is_finite and len(region) == len(graph.vertices):
        return FormProbeResult("certified", "exhaustive", tuple(checked))
    if all(v(x) >= 0 for x in region):
        return FormProbeResult("not_refuted", "pointwise-probed", tuple(checked))
    return FormProbeResult("not_refuted", "psd-probed", tuple(checked))


def _probe_components(m: MagneticOperator, vertices, budget: int) -> dict:
    finite_components = []
    exceeded = 0
    covered: set = set()
    for x in sort_vertices(vertices):
        if x in covered:
            continue
        probe = component_probe(m.graph, x, budget)
        if probe.finite:
            comp = component_vertices(m.graph, x, budget)
            covered |= comp
            finite_components.append(sort_vertices(comp))
        else:
            exceeded += 1
    return {"finite": finite_components, "exceeded": exceeded}


def surjectivity_certificate(m: MagneticOperator, center, form_radius: int = 4,
                             component_budget: int = 1000, kernel_radius: int = 3) -> SurjectivityVerdict:
    """Certify, refute, or leave undecided the surjectivity of ``m``."""
    if min(form_radius, component_budget, kernel_radius) < 0 or component_budget < 1:
        raise ValueError("budgets must be positive")
    g = m.graph
    evidence: dict = {"local_finiteness": "by-construction"}

    region = ball(g, center, kernel_radius)
    wit = kernel_search(m, region)
    evidence["kernel_search"] = {"radius": kernel_radius, "support_size": len(region)}
    if wit is not None:
        evidence["kernel_search"]["found"] = True
        return SurjectivityVerdict("refuted", evidence, wit)
    evidence["kernel_search"]["found"] = False

    probes = _probe_components(m, region, component_budget)
    comp_ev = {
        "asserted_infinite": g.infinite_components_asserted,
        "budget": component_budget,
        "finite_sizes": [len(c) for c in probes["finite"]],
        "exceeds_budget": probes["exceeded"],
    }
    evidence["components"] = comp_ev
    for comp in probes["finite"]:
        wit = kernel_search(m, comp)
        if wit is not None:
            comp_ev["status"] = "failed"
            return SurjectivityVerdict("refuted", evidence, wit)

    if probes["finite"]:
        if g.is_finite and sum(len(c) for c in probes["finite"]) == len(g.vertices):
            # Every component was searched: M is injective on the whole space.
            comp_ev["status"] = "finite-exhaustive"
            evidence["dual_injectivity"] = "exhaustive"
            return SurjectivityVerdict("certified", evidence)
        comp_ev["status"] = "failed"
        return SurjectivityVerdict("undecided", evidence)
    comp_ev["status"] = "asserted+probed" if g.infinite_components_asserted else "probed-only"

    form_ev: dict = {}
    evidence["form_condition"] = form_ev
    held = None
    probes_out = {}
    for name, pot in (("q_w_min", w_min_potential(m)), ("q_neg_w_max_2deg", neg_w_max_potential(m))):
        res = form_nonnegativity_probe(g, pot, center, form_radius)
        probes_out[name] = res
        form_ev[name] = res.as_dict()
        if res.status == "certified":
            held = name
            break
    form_ev["held"] = held

    status = "certified" if held is not None and g.infinite_components_asserted else "undecided"
    return SurjectivityVerdict(status, evidence, form_probes=probes_out)


@dataclass(frozen=True)
class MaxPrincipleResult:
    vertex: object
    holds: bool
    beta: float | None = None
    witness: VectorField | None = None
    residual: float | None = None


def max_principle_condition(v_x: float, deg_x: float) -> bool:
    return v_x >= 0 or v_x + 2 * deg_x <= 0


def max_principle_analyze(graph: GraphOracle, v: ScalarPotential, x) -> MaxPrincipleResult:
    """Decide the radius-one maximum principle of ``L_V`` at ``x``.

    When it fails, ``f_beta`` (1 at ``x``, ``beta`` on the neighbors) with
    ``beta = (V(x) + deg(x)) / deg(x)`` is returned as the violating field.
    """
    vx, dx = v(x), degree(graph, x)
    if max_principle_condition(vx, dx):
        return MaxPrincipleResult(x, True)
    assert dx > 0, "V(x) < 0 < V(x) + 2 deg(x) forces deg(x) > 0"
    beta = (vx + dx) / dx
    values = {y: beta for y, _ in graph.neighbors(x)}
    values[x] = 1.0
    f_beta = VectorField.from_scalars(values)
    res = float(abs(apply_at(scalar_laplacian(graph, v), f_beta, x)[0]))
    if res > 1e-12 or not abs(beta) < 1:
        raise ArithmeticError(f"maximum-principle witness failed at {x!r}: residual {res}, beta {beta}")
    return MaxPrincipleResult(x, False, beta, f_beta, res)


def is_max_principle_violation(graph: GraphOracle, v: ScalarPotential, x, f: VectorField,
                               tol: float = 1e-12) -> bool:
    """Whether ``f`` reaches a non-constant modulus maximum at ``x`` over ``B_1(x)``
    while ``L_V f(x) = 0``."""
    lv = abs(apply_at(scalar_laplacian(graph, v), f, x)[0])
    scale = max(1.0, f.max_norm())
    if lv > tol * scale:
        return False
    mods = [abs(f.scalar(y)) for y in ball(graph, x, 1)]
    fx = abs(f.scalar(x))
    return fx >= max(mods) - tol * scale and max(abs(fx - mv) for mv in mods) > 1e-9 * scale


@dataclass(frozen=True)
class ZeroEnergyCheck:
    consistent: bool
    violations: tuple = ()


def zero_energy_component_check(graph: GraphOracle, v: ScalarPotential, h: VectorField,
                                component_budget: int = 1000) -> ZeroEnergyCheck:
    """Check that ``{h != 0}`` is closed under neighbors when ``q_V(h) = 0``."""
    n2 = h.norm() ** 2
    q = quadratic_form(graph, v, h)
    if abs(q) > 1e-10 * max(n2, 1e-300) or n2 == 0:
        raise PreconditionViolated(f"q_V(h) = {q:.3g} is not zero")
    near = ball_of_set(graph, h.support, 1)
    if np.linalg.eigvalsh(form_matrix(graph, v, near))[0] < -FORM_TOL:
        raise PreconditionViolated("q_V is not nonnegative near the support of h")
    level = {x for x, val in h.items() if np.linalg.norm(val) > 1e-10}
    violations = []
    explored = 0
    for x in sort_vertices(level):
        for y, _ in graph.neighbors(x):
            explored += 1
            if y not in level:
                violations.append((x, y))
        if explored > component_budget:
            break
    return ZeroEnergyCheck(not violations, tuple(violations))
