import numpy as np
import pytest

from magsurj.certify import (
    form_nonnegativity_probe,
    is_max_principle_violation,
    kernel_basis,
    kernel_search,
    max_principle_analyze,
    replay_kernel_witness,
    surjectivity_certificate,
    zero_energy_component_check,
)
from magsurj.exceptions import EmptySupport, PreconditionViolated
from magsurj.fields import VectorField, pairing
from magsurj.gallery import (
    HEXAGRAM_VERTICES,
    binary_tree,
    cycle,
    disjoint_union,
    hexagram_eigenfunction,
    hexagram_glued_ray,
    lattice_z,
    lattice_z2,
    path,
)
from magsurj.graph import FiniteGraph
from magsurj.schroedinger import ScalarPotential, apply_supported, scalar_laplacian

from _instances import random_graph


def is_constant(f, support):
    vals = [f.scalar(x) for x in support]
    return set(f.support) == set(support) and max(abs(v - vals[0]) for v in vals) < 1e-12


def test_kernel_search_cycle_gives_constant():
    m = scalar_laplacian(cycle(6))
    w = kernel_search(m, range(6))
    assert w is not None and is_constant(w.field, range(6))
    assert w.field.norm() == pytest.approx(1.0)
    assert w.residual < 1e-12


def test_kernel_search_glued_hexagram_gives_eigenfunction():
    m = scalar_laplacian(hexagram_glued_ray(), ScalarPotential.constant(-6.0))
    w = kernel_search(m, HEXAGRAM_VERTICES)
    phi = hexagram_eigenfunction()
    assert abs(pairing(w.field, phi)) / phi.norm() == pytest.approx(1.0, abs=1e-10)
    assert replay_kernel_witness(m, w.field)


def test_kernel_search_z_none_and_brute_force_rank():
    m = scalar_laplacian(lattice_z())
    assert kernel_search(m, range(-10, 11)) is None
    # rows at -11..11, columns at -10..10 of the path Laplacian
    a = np.zeros((23, 21))
    for j in range(21):
        a[j + 1, j] = 2
        a[j, j] = -1
        a[j + 2, j] = -1
    assert np.linalg.matrix_rank(a) == 21


def test_kernel_search_empty_support():
    with pytest.raises(EmptySupport):
        kernel_search(scalar_laplacian(lattice_z()), [])


def test_kernel_basis_dimension_counts_finite_components():
    g = disjoint_union(cycle(3), cycle(4), path(2))
    basis, _ = kernel_basis(scalar_laplacian(g), g.vertices)
    assert len(basis) == 3
    for b in basis:
        assert apply_supported(scalar_laplacian(g), b).norm() < 1e-12


def test_form_probe_fast_path():
    for g, x in ((lattice_z(), 0), (binary_tree(), ()), (cycle(5), 0)):
        r = form_nonnegativity_probe(g, ScalarPotential(), x, 3)
        assert (r.status, r.tier) == ("certified", "pointwise-global")


def test_form_probe_refutes_at_radius_zero():
    r = form_nonnegativity_probe(lattice_z(), ScalarPotential.constant(-5.0), 0, 4)
    assert r.status == "refuted" and r.radius == 0
    assert r.value == pytest.approx(-3.0)
    assert r.witness.allclose(VectorField.delta(0))


def test_form_probe_glued_hexagram_minus_six():
    r = form_nonnegativity_probe(hexagram_glued_ray(), ScalarPotential.constant(-6.0), "a1", 4)
    assert r.status == "refuted" and r.value < 0


def test_form_probe_exhaustive_on_finite_graph():
    # q_V >= 0 with V negative somewhere: one vertex at -0.5 on a heavy path
    g = FiniteGraph([0, 1, 2], [(0, 1, 5.0), (1, 2, 5.0)])
    v = ScalarPotential({0: -0.5, 1: 1.0, 2: 1.0})
    r = form_nonnegativity_probe(g, v, 0, 5)
    assert (r.status, r.tier) == ("certified", "exhaustive")


def test_form_probe_psd_probed_on_infinite_graph():
    v = ScalarPotential(func=lambda x: -0.1 if x == 0 else 1.0)
    r = form_nonnegativity_probe(lattice_z(), v, 0, 3)
    assert (r.status, r.tier) == ("not_refuted", "psd-probed")
    assert r.checked_radii == (0, 1, 2, 3)


def test_certificate_z_certified():
    v = surjectivity_certificate(scalar_laplacian(lattice_z()), 0)
    assert v.status == "certified"
    assert v.evidence["components"]["status"] == "asserted+probed"
    assert v.evidence["form_condition"]["q_w_min"]["tier"] == "pointwise-global"


def test_certificate_z2_and_tree():
    assert surjectivity_certificate(scalar_laplacian(lattice_z2()), (0, 0), kernel_radius=2).status == "certified"
    assert surjectivity_certificate(scalar_laplacian(binary_tree()), ()).status == "certified"


def test_certificate_second_branch_of_form_condition():
    # V <= -2 deg everywhere on Z: q_{-V-2deg} has nonnegative potential
    m = scalar_laplacian(lattice_z(), ScalarPotential.constant(-5.0))
    v = surjectivity_certificate(m, 0)
    assert v.status == "certified"
    assert v.evidence["form_condition"]["held"] == "q_neg_w_max_2deg"


def test_certificate_cycle_refuted():
    v = surjectivity_certificate(scalar_laplacian(cycle(6)), 0)
    assert v.status == "refuted" and is_constant(v.witness.field, range(6))


def test_certificate_glued_hexagram_refuted():
    m = scalar_laplacian(hexagram_glued_ray(), ScalarPotential.constant(-6.0))
    v = surjectivity_certificate(m, "a1")
    assert v.status == "refuted"
    assert abs(pairing(v.witness.field, hexagram_eigenfunction())) / 6 ** 0.5 > 0.99


def test_certificate_union_probed_in_cycle():
    g = disjoint_union(cycle(6), lattice_z())
    v = surjectivity_certificate(scalar_laplacian(g), (0, 0), kernel_radius=1)
    assert v.status == "refuted"
    assert is_constant(v.witness.field, [(0, i) for i in range(6)])


def test_certificate_finite_injective_graph_certified_exhaustively():
    m = scalar_laplacian(cycle(5), ScalarPotential.constant(1.0))
    v = surjectivity_certificate(m, 0)
    assert v.status == "certified" and v.evidence["dual_injectivity"] == "exhaustive"
    assert v.evidence["components"]["status"] == "finite-exhaustive"


def test_certificate_undecided_without_form_certificate():
    v = ScalarPotential(func=lambda x: -0.1 if x == 0 else 1.0)
    out = surjectivity_certificate(scalar_laplacian(lattice_z(), v), 0)
    assert out.status == "undecided"


def test_max_principle_examples():
    z = lattice_z()
    assert max_principle_analyze(z, ScalarPotential(), 0).holds
    r = max_principle_analyze(z, ScalarPotential({0: -1.0}), 0)
    assert not r.holds and r.beta == 0.5 and r.residual == 0
    assert is_max_principle_violation(z, ScalarPotential({0: -1.0}), 0, r.witness)
    assert max_principle_analyze(z, ScalarPotential.constant(-4.0), 0).holds


def test_zero_energy_examples():
    g = disjoint_union(cycle(6), lattice_z())
    h = VectorField.from_scalars({(0, i): 1.0 for i in range(6)})
    assert zero_energy_component_check(g, ScalarPotential(), h).consistent
    with pytest.raises(PreconditionViolated):
        zero_energy_component_check(lattice_z(), ScalarPotential(), VectorField.delta(0))
    rng = np.random.default_rng(3)
    for _ in range(5):
        fg = random_graph(rng)
        h = VectorField.from_scalars({x: 2.5 for x in fg.vertices})
        assert zero_energy_component_check(fg, ScalarPotential(), h).consistent


def test_zero_energy_ground_state_is_consistent():
    from magsurj.schroedinger import form_matrix
    rng = np.random.default_rng(4)
    for _ in range(10):
        g = random_graph(rng, p=0.6)
        verts = list(g.vertices)
        raw = {x: float(rng.uniform(-2, 2)) for x in verts}
        lam, vecs = np.linalg.eigh(form_matrix(g, ScalarPotential(raw), verts))
        v = ScalarPotential({x: raw[x] - lam[0] for x in verts})
        h = VectorField.from_scalars(dict(zip(verts, vecs[:, 0])))
        assert zero_energy_component_check(g, v, h).consistent
