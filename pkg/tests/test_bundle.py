import numpy as np
import pytest

from magsurj.bundle import (
    Connection,
    Endomorphism,
    HermitianBundle,
    negate_connection,
    random_hermitian,
    random_unitary,
    validate,
    w_max,
    w_min,
)
from magsurj.exceptions import DimensionMismatch, NonHermitian
from magsurj.gallery import cycle


@pytest.mark.parametrize("mat, lo, hi", [
    ([[2]], 2, 2),
    (np.diag([-1.0, 3.0]), -1, 3),
    ([[0, 1], [1, 0]], -1, 1),
])
def test_extreme_eigenvalues(mat, lo, hi):
    e = Endomorphism({"x": mat})
    d = np.asarray(mat).shape[0]
    assert w_min(e, "x", d) == pytest.approx(lo, abs=1e-14)
    assert w_max(e, "x", d) == pytest.approx(hi, abs=1e-14)


def test_w_min_rejects_non_hermitian():
    with pytest.raises(NonHermitian):
        w_min(Endomorphism({0: [[0, 1], [0, 0]]}), 0, 2)


def test_validate_clean():
    g = cycle(4)
    assert validate(g, HermitianBundle(), Connection(), Endomorphism(), g.vertices) == []


def test_validate_unitarity_violation():
    g = cycle(4)
    out = validate(g, HermitianBundle(), Connection({(0, 1): [[2]]}), Endomorphism(), g.vertices)
    assert [v.kind for v in out] == ["unitarity"] and out[0].where == (0, 1)


def test_validate_hermiticity_violation():
    g = cycle(4)
    b = HermitianBundle({0: 2, 1: 2, 2: 2, 3: 2})
    out = validate(g, b, Connection(), Endomorphism({0: [[0, 1], [0, 0]]}), g.vertices)
    assert [v.kind for v in out] == ["hermiticity"] and out[0].where == (0,)


def test_identity_connection_needs_equal_dims():
    c = Connection()
    with pytest.raises(DimensionMismatch):
        c.matrix(0, 1, 2, 1)


def test_connection_reverse_is_inverse():
    rng = np.random.default_rng(0)
    u = random_unitary(3, rng)
    c = Connection({(0, 1): u})
    np.testing.assert_allclose(c.matrix(1, 0, 3, 3) @ c.matrix(0, 1, 3, 3), np.eye(3), atol=1e-14)


def test_negate_connection_examples():
    c = Connection()
    np.testing.assert_array_equal(negate_connection(c).matrix(0, 1, 2, 2), -np.eye(2))
    rng = np.random.default_rng(1)
    c = Connection({(0, 1): random_unitary(2, rng)})
    twice = negate_connection(negate_connection(c))
    assert np.array_equal(twice.matrix(0, 1, 2, 2), c.matrix(0, 1, 2, 2))


def test_random_generators():
    rng = np.random.default_rng(2)
    for n in (1, 2, 3):
        u = random_unitary(n, rng)
        np.testing.assert_allclose(u.conj().T @ u, np.eye(n), atol=1e-13)
        h = random_hermitian(n, rng)
        np.testing.assert_allclose(h, h.conj().T)


def test_endomorphism_bounds_from_table():
    e = Endomorphism({0: np.diag([1.0, 4.0]), 1: [[-2.0]]}, default=0.5)
    assert e.bounds == pytest.approx((-2.0, 4.0))
