import numpy as np
import pytest

from holomat.fiber import FiberError, HermitianFiber
from holomat.forms import (
    FiberForm,
    beta_tilde,
    bochner_rhs,
    check_kaehler_symmetries,
    hodge_star,
    inner,
    lefschetz_L,
    lefschetz_Lambda,
    norm2,
    top_coefficient,
    verify_kaehler_identities,
    verify_L1,
    volume_form,
    wedge,
)


def test_wedge_anticommutes_on_one_forms():
    fiber = HermitianFiber(3)
    a = FiberForm.monomial(fiber, (0,), ())
    b = FiberForm.monomial(fiber, (1,), ())
    ab = wedge(a, b)
    ba = wedge(b, a)
    assert np.allclose(ab.coeff, -ba.coeff)
    assert np.abs(wedge(a, a).coeff).max() == 0.0


def test_wedge_associative():
    fiber = HermitianFiber(4)
    rng = np.random.default_rng(0)
    forms = []
    for holo, anti in [((0,), (1,)), ((2,), ()), ((), (3,))]:
        forms.append(FiberForm.monomial(
            fiber, holo, anti, rng.standard_normal() + 1j * rng.standard_normal()
        ))
    a, b, c = forms
    lhs = wedge(wedge(a, b), c)
    rhs = wedge(a, wedge(b, c))
    assert np.allclose(lhs.coeff, rhs.coeff, atol=1e-14)


def test_conjugate_involution_and_degree_swap():
    fiber = HermitianFiber(3)
    f = FiberForm.monomial(fiber, (0, 2), (1,), 2.0 + 1.0j)
    fc = f.conjugate()
    assert fc.bidegree() == (1, 2)
    assert np.allclose(fc.conjugate().coeff, f.coeff)


def test_inner_product_orthonormal_monomials_standard_fiber():
    fiber = HermitianFiber(3)
    a = FiberForm.monomial(fiber, (0,), (1,))
    b = FiberForm.monomial(fiber, (0,), (2,))
    assert inner(a, a) == pytest.approx(1.0)
    assert inner(a, b) == pytest.approx(0.0)


def test_norm_in_nonstandard_metric():
    G = np.array([[4.0, 0.0], [0.0, 1.0]])
    fiber = HermitianFiber(2, G)
    # |dz^1|^2 = (G^{-1})_{11} = 1/4 for the coframe
    f = FiberForm.monomial(fiber, (0,), ())
    assert norm2(f) == pytest.approx(0.25, abs=1e-12)


def test_volume_form_standard():
    fiber = HermitianFiber(2)
    vol = volume_form(fiber)
    # omega^m/m! has unit norm and top coefficient 1 relative to itself
    assert top_coefficient(vol) == pytest.approx(1.0)
    assert norm2(vol) == pytest.approx(1.0, abs=1e-12)


def test_hodge_star_defining_property():
    """g wedge star(f) = <g, f> vol for random monomial pairs."""
    fiber = HermitianFiber(3)
    rng = np.random.default_rng(1)
    mons = [((0,), (1,)), ((0, 1), (2,)), ((1,), ()), ((0, 2), (0, 1))]
    for hf, af in mons:
        f = FiberForm.monomial(fiber, hf, af, rng.standard_normal())
        sf = hodge_star(f)
        for hg, ag in mons:
            g = FiberForm.monomial(fiber, hg, ag, rng.standard_normal())
            try:
                prod = wedge(g, sf)
            except FiberError:
                continue
            lhs = top_coefficient(prod)
            rhs = inner(g, f)
            assert abs(lhs - rhs) < 1e-10


def test_lefschetz_adjointness():
    fiber = HermitianFiber(3)
    rng = np.random.default_rng(2)
    f = FiberForm.monomial(fiber, (0,), (1,), rng.standard_normal())
    g = FiberForm.monomial(fiber, (0, 1), (1, 2), rng.standard_normal())
    assert abs(inner(lefschetz_L(f), g) - inner(f, lefschetz_Lambda(g))) < 1e-12


def test_kaehler_identities_operator_level():
    for m in (1, 2, 3):
        out = verify_kaehler_identities(m)
        assert out["pass"], out


def test_beta_tilde_simple_form():
    # s = c dz^1 wedge dz^2 on m=3: beta_tilde = (|c|^2/2)(i dz^1 dzbar^1 + i dz^2 dzbar^2)
    fiber = HermitianFiber(3)
    s = FiberForm.monomial(fiber, (0, 1), (), 2.0)
    bt = beta_tilde(s)
    h = bt.matrix11()
    expect = np.diag([2.0, 2.0, 0.0])
    assert np.allclose(h, expect, atol=1e-12)


def test_verify_L1_random_draws():
    rng = np.random.default_rng(3)
    fiber = HermitianFiber(3)
    for _ in range(5):
        c = rng.standard_normal() + 1j * rng.standard_normal()
        s = FiberForm.monomial(fiber, (0, 2), (), c)
        s = s + FiberForm.monomial(fiber, (1, 2), (), rng.standard_normal())
        H = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
        eta = FiberForm.from_matrix11(fiber, H + H.conj().T)
        r1, r2 = verify_L1(s, eta)
        assert r1 < 1e-10 and r2 < 1e-10


def test_bochner_rhs_two_routes_agree():
    rng = np.random.default_rng(4)
    m = 3
    # Fubini-Study-like algebraic tensor has the Kahler symmetries
    G = np.eye(m, dtype=complex)
    R = np.einsum("ij,kl->ijkl", G, G) + np.einsum("il,kj->ijkl", G, G)
    assert check_kaehler_symmetries(R) < 1e-12
    fiber = HermitianFiber(m)
    s = FiberForm.monomial(fiber, (0, 1), (), 1.5)
    v = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    v /= np.linalg.norm(v)
    val, resid = bochner_rhs(R, s, v)
    assert resid < 1e-10
