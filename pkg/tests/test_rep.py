import numpy as np
import pytest

from holomat import rep


def test_wedge_action_characters_on_diagonal():
    g = np.diag([2.0, 3.0, 5.0]).astype(complex)
    r2 = rep.WedgeRep(3, 2)
    mat = rep.wedge_action(r2, g)
    assert np.allclose(np.diag(mat), [6.0, 10.0, 15.0])
    assert np.abs(mat - np.diag(np.diag(mat))).max() == 0.0


def test_wedge_action_determinant_and_multiplicativity():
    rng = np.random.default_rng(0)
    g = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    h = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    r2 = rep.WedgeRep(3, 2)
    # det(wedge^2 g) = det(g)^{C(m-1, p-1)} = det(g)^2... for (3,2): det^2
    lhs = np.linalg.det(rep.wedge_action(r2, g))
    assert abs(lhs - np.linalg.det(g) ** 2) < 1e-8 * max(1, abs(lhs))
    prod = rep.wedge_action(r2, g @ h)
    assert np.allclose(prod, rep.wedge_action(r2, g) @ rep.wedge_action(r2, h),
                       atol=1e-10)


def test_daction_is_derivative_of_action():
    rng = np.random.default_rng(1)
    a = rng.standard_normal((4, 4)) + 1j * rng.standard_normal((4, 4))
    r = rep.WedgeRep(4, 2)
    h = 1e-6
    fd = (rep.wedge_action(r, np.eye(4) + h * a)
          - rep.wedge_action(r, np.eye(4) - h * a)) / (2 * h)
    assert np.abs(fd - rep.wedge_daction(r, a)).max() < 1e-8


def test_permutation_action_carries_sign():
    r = rep.WedgeRep(2, 2)
    P = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    mat = rep.wedge_action(r, P)
    assert mat[0, 0] == pytest.approx(-1.0)


def test_torus_projection_properties():
    r = rep.WedgeRep(4, 2)
    rng = np.random.default_rng(2)
    v = rng.standard_normal(r.dim) + 1j * rng.standard_normal(r.dim)
    basis = r.basis
    projs = [rep.torus_project(r, v, I) for I in basis]
    # completeness and idempotence
    assert np.allclose(sum(projs), v, atol=1e-12)
    for I, p in zip(basis, projs):
        again = rep.torus_project(r, p, I)
        assert np.allclose(again, p, atol=1e-12)
        # supported exactly on the monomial e_I
        for a, K in enumerate(basis):
            if K != I:
                assert abs(p[a]) < 1e-12
    with pytest.raises(rep.RepError):
        rep.torus_project(r, v, (0, 1), N=2)


def test_irreducibility_all_wedge_powers():
    rng = np.random.default_rng(3)
    for m in range(2, 6):
        for p in range(1, m):
            r = rep.WedgeRep(m, p)
            out = rep.irreducibility_certificate(
                r, rng=np.random.default_rng(100 * m + p), samples=10
            )
            assert out["irreducible"], (m, p, out)
            assert out["stable"]
            assert out["constructive"]["ok"]


def test_special_unitary_also_irreducible():
    r = rep.WedgeRep(3, 2)
    rng = np.random.default_rng(4)
    out = rep.irreducibility_certificate(
        r, sampler=rep.special_unitary_sampler(3, rng), rng=rng, samples=10
    )
    assert out["irreducible"]


def test_reducible_controls_detected():
    rng = np.random.default_rng(5)
    r = rep.WedgeRep(3, 1)
    torus = rep.irreducibility_certificate(
        r, sampler=rep.torus_sampler(3, rng), rng=rng, samples=10
    )
    assert torus["commutant_dim"] == 3
    assert not torus["irreducible"]
    rng2 = np.random.default_rng(6)
    block = rep.irreducibility_certificate(
        r, sampler=rep.block_sampler(3, 1, rng2), rng=rng2, samples=10
    )
    assert block["commutant_dim"] == 2
    assert "witness" in block


def test_tensor_power_commutant_reported():
    rng = np.random.default_rng(7)
    assert rep.tensor_commutant_dim(3, 1, rng) == 1
    # full tensor square is reducible (sym + alt): commutant dimension 2
    assert rep.tensor_commutant_dim(3, 2, rng) == 2
