import numpy as np
import pytest

from magsurj.exceptions import EmptyWindow
from magsurj.fields import VectorField
from magsurj.gallery import cycle, infinite_star, lattice_z, lattice_z2
from magsurj.graph import ball
from magsurj.schroedinger import ScalarPotential, apply_supported, scalar_laplacian
from magsurj.solve import SolveRequest, obstruction_holds, residual, windowed_solve

from _instances import random_field, random_instance


def tent():
    return VectorField.from_scalars({x: float(min(x, 0)) for x in range(-4, 5)})


def test_tent_solves_delta_on_window():
    m = scalar_laplacian(lattice_z())
    window = sorted(ball(lattice_z(), 0, 3))
    assert residual(m, tent(), VectorField.delta(0), window) == 0.0


def test_solve_delta_on_z():
    m = scalar_laplacian(lattice_z())
    window = tuple(ball(lattice_z(), 0, 3))
    out = windowed_solve(SolveRequest(m, VectorField.delta(0), window))
    assert out.status == "solved" and out.residual <= 1e-10
    assert residual(m, out.solution, VectorField.delta(0), window) <= 1e-10
    # any solution differs from the tent by a harmonic function on the window
    diff = out.solution - tent()
    assert residual(m, diff, VectorField(), window) <= 1e-10


def test_solve_obstructed_on_cycle():
    m = scalar_laplacian(cycle(6))
    out = windowed_solve(SolveRequest(m, VectorField.delta(2), tuple(range(6))))
    assert out.status == "obstructed"
    psi = out.kernel_witness
    vals = [psi.scalar(x) for x in range(6)]
    assert np.allclose(vals, vals[0])
    assert abs(out.pairing_value) == pytest.approx(1 / 6 ** 0.5)
    assert obstruction_holds(m, psi, VectorField.delta(2))


def test_solve_zero_rhs():
    rng = np.random.default_rng(0)
    m = random_instance(rng)
    out = windowed_solve(SolveRequest(m, VectorField(), tuple(m.graph.vertices)))
    assert out.status == "solved" and out.solution.support == () and out.residual == 0


def test_empty_window():
    with pytest.raises(EmptyWindow):
        SolveRequest(scalar_laplacian(lattice_z()), VectorField.delta(0), ())


def test_residual_examples():
    m = scalar_laplacian(lattice_z())
    assert residual(m, VectorField(), VectorField.delta(0), [0, 1]) == 1
    assert residual(m, VectorField.delta(0), VectorField(), [10, 11]) == 0


def test_star_examples():
    n = 5
    m = scalar_laplacian(infinite_star(n))
    verts = tuple(range(n + 1))
    f = VectorField.from_scalars({0: -1.0, 1: 1.0})
    out = windowed_solve(SolveRequest(m, f, verts))
    assert out.status == "solved"
    g = out.solution
    assert g.scalar(1) - g.scalar(0) == pytest.approx(2.0, abs=1e-10)
    assert windowed_solve(SolveRequest(m, VectorField.delta(0), verts)).status == "obstructed"


def test_exhausted_when_radius_budget_too_small():
    # V = -2 on Z has a zero diagonal: the row at 0 needs unknowns at +-1
    m = scalar_laplacian(lattice_z(), ScalarPotential.constant(-2.0))
    out = windowed_solve(SolveRequest(m, VectorField.delta(0), (0,), r_max=0))
    assert out.status == "exhausted" and out.best_residual == pytest.approx(1.0)
    out = windowed_solve(SolveRequest(m, VectorField.delta(0), (0,), r_max=1))
    assert out.status == "solved" and out.radius_used == 1


def test_solve_random_bundle_on_z2():
    rng = np.random.default_rng(11)
    m = scalar_laplacian(lattice_z2())
    window = tuple(ball(lattice_z2(), (0, 0), 2))
    f = VectorField.from_scalars({x: complex(*rng.standard_normal(2)) for x in window})
    out = windowed_solve(SolveRequest(m, f, window))
    assert out.status == "solved"
    assert residual(m, out.solution, f, window) <= 1e-10


def test_finite_random_instances_solve_iff_orthogonal_to_kernel():
    rng = np.random.default_rng(12)
    for _ in range(15):
        m = random_instance(rng, n_max=8)
        verts = tuple(m.graph.vertices)
        f = random_field(rng, m)
        out = windowed_solve(SolveRequest(m, f, verts))
        assert out.status in ("solved", "obstructed")
        if out.status == "solved":
            assert (apply_supported(m, out.solution) - f).max_norm() <= 1e-9
        else:
            assert obstruction_holds(m, out.kernel_witness, f)
