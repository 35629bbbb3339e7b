import numpy as np
import pytest

from holomat.fiber import (
    FiberError,
    HermitianFiber,
    SkewEndo,
    ad_inner_product,
    complexify,
    random_skew,
    realify,
    standard_J,
)


def test_standard_J_squares_to_minus_one():
    for m in (1, 2, 4):
        J = standard_J(m)
        assert np.array_equal(J @ J, -np.eye(2 * m))


def test_fiber_validates_metric():
    with pytest.raises(FiberError):
        HermitianFiber(2, np.array([[1.0, 1.0], [0.0, 1.0]]))
    with pytest.raises(FiberError):
        HermitianFiber(2, -np.eye(2))
    f = HermitianFiber(2)
    assert f.is_standard


def test_coframe_change_inverts():
    G = np.array([[2.0, 0.5j], [-0.5j, 1.0]])
    f = HermitianFiber(2, G)
    B, M = f.coframe_change()
    assert np.allclose(B @ M, np.eye(2), atol=1e-12)
    # metric reconstructed from the Cholesky factor: G = C C^dagger, M = C^T
    C = M.T
    assert np.allclose(C @ C.conj().T, G, atol=1e-12)


def test_realify_complexify_roundtrip():
    rng = np.random.default_rng(0)
    a = random_skew(3, rng)
    r = realify(a)
    # complex-linear: commutes with J
    J = standard_J(3)
    assert np.allclose(r @ J, J @ r, atol=1e-12)
    back = complexify(r)
    assert np.allclose(back.matrix, a.matrix, atol=1e-12)


def test_realify_is_algebra_homomorphism():
    rng = np.random.default_rng(1)
    a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    b = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    assert np.allclose(realify(a) @ realify(b), realify(a @ b), atol=1e-12)


def test_skew_endo_rejects_non_skew():
    with pytest.raises(FiberError):
        SkewEndo(np.eye(2, dtype=complex))


def test_ad_inner_product_invariance():
    rng = np.random.default_rng(2)
    a, b, c = (random_skew(3, rng).matrix for _ in range(3))
    lhs = ad_inner_product(a @ b - b @ a, c)
    rhs = -ad_inner_product(b, a @ c - c @ a)
    assert abs(lhs - rhs) < 1e-10
    # positive definiteness on u(m)
    assert ad_inner_product(a, a) > 0
