import numpy as np
import pytest

from holomat import hol
from holomat.models import catalog


def test_lie_closure_su2_from_two_generators():
    a = np.array([[1j, 0], [0, -1j]])
    b = np.array([[0, 1], [-1, 0]], dtype=complex)
    g = hol.lie_closure([a, b])
    assert g.dim == 3  # su(2)
    assert hol.closure_residual(g) < 1e-12
    assert hol.is_in_su(g)


def test_contains_and_project():
    a = np.array([[1j, 0], [0, -1j]])
    g = hol.lie_closure([a])
    assert g.contains(2.5 * a) < 1e-12
    other = np.array([[0, 1], [-1, 0]], dtype=complex)
    assert g.contains(other) > 0.5


def test_flat_holonomy_trivial():
    mod = catalog("flat")
    x = mod.sample_points(1, np.random.default_rng(0))[0]
    alg, info = hol.holonomy_algebra(mod, "chern", x, order=1)
    assert alg.dim == 0
    assert info["stable"]


def test_fubini_study_holonomy_full_unitary():
    for m in (1, 2):
        mod = catalog("fubini-study", m=m)
        x = mod.sample_points(1, np.random.default_rng(1))[0]
        alg, info = hol.holonomy_algebra(mod, "chern", x, order=1)
        assert alg.dim == m * m
        assert info["stable"]
        assert info["ambient"] == "u(m)"
        flag, witness = hol.is_irreducible(alg)
        assert flag and witness is None


def test_lie_group_2d_chern_trivial_holonomy():
    mod = catalog("complex-lie-group-2d")
    alg, info = hol.holonomy_algebra(mod, "chern", order=2)
    assert alg.dim == 0
    assert info["stable"]


def test_hopf_holonomy_dimensions():
    mod = catalog("hopf-surface")
    x = mod.sample_points(1, np.random.default_rng(2))[0]
    alg_b, _ = hol.holonomy_algebra(mod, "bismut", x, order=1)
    assert alg_b.dim == 0
    alg_c, info_c = hol.holonomy_algebra(mod, "chern", x, order=1)
    assert alg_c.dim == 1
    assert info_c["stable"]


def test_reducible_witness_is_invariant():
    rng = np.random.default_rng(3)
    # block algebra u(2) + 0 inside u(3)
    gens = []
    for i in range(2):
        for j in range(2):
            a = np.zeros((3, 3), dtype=complex)
            if i == j:
                a[i, i] = 1j
            else:
                a[i, j], a[j, i] = 1.0, -1.0
            gens.append(a)
    g = hol.lie_closure(gens)
    flag, witness = hol.is_irreducible(g)
    assert not flag
    # witness spans an invariant subspace: b W stays in span(W)
    P = witness @ witness.conj().T
    for b in g.basis:
        assert np.abs((np.eye(3) - P) @ b @ P).max() < 1e-8


def test_center_derived_orthogonal_u2():
    gens = []
    for i in range(2):
        for j in range(2):
            a = np.zeros((2, 2), dtype=complex)
            if i == j:
                a[i, i] = 1j
            else:
                a[i, j], a[j, i] = 1.0, -1.0
            gens.append(a)
    b = np.zeros((2, 2), dtype=complex)
    b[0, 1] = b[1, 0] = 1j
    gens.append(b)
    g = hol.lie_closure(gens)
    assert g.dim == 4
    z, d = hol.decompose(g)
    assert z.dim == 1 and d.dim == 3
    assert hol.orthogonality_residual(z, d) < 1e-10


def test_random_closed_subalgebras_properties():
    rng = np.random.default_rng(4)
    for _ in range(10):
        m = int(rng.integers(2, 5))
        g = hol.random_closed_subalgebra(m, rng)
        assert hol.closure_residual(g) < 1e-10
        z, d = hol.decompose(g)
        assert hol.orthogonality_residual(z, d) < 1e-8


def test_schur_center_implication():
    """Commutant dim 1 forces the center into the line R * i*id."""
    rng = np.random.default_rng(5)
    for _ in range(20):
        m = int(rng.integers(2, 5))
        g = hol.random_closed_subalgebra(m, rng)
        irred, _ = hol.is_irreducible(g, n=m)
        if not irred:
            continue
        z = hol.center(g)
        for c in z.basis:
            off = c - (np.trace(c) / m) * np.eye(m)
            assert np.abs(off).max() < 1e-8


def test_trivial_center_implies_traceless():
    rng = np.random.default_rng(6)
    for _ in range(20):
        m = int(rng.integers(2, 5))
        g = hol.random_closed_subalgebra(m, rng)
        if hol.center(g).dim == 0:
            for b in g.basis:
                assert abs(np.trace(b)) < 1e-8


def test_ricci_vs_su_check_catalog():
    mod = catalog("flat")
    pts = mod.sample_points(2, np.random.default_rng(7))
    out = hol.ricci_vs_su_check(mod, "chern", pts)
    assert out["agree"] and out["in_su"]
    mod = catalog("fubini-study", m=2)
    pts = mod.sample_points(2, np.random.default_rng(8))
    out = hol.ricci_vs_su_check(mod, "chern", pts)
    assert out["agree"] and not out["in_su"]
    out = hol.ricci_vs_su_check(catalog("complex-lie-group-2d"), "chern",
                                order=2)
    assert out["agree"] and out["in_su"]


def test_order2_requires_lie_model():
    mod = catalog("flat")
    x = mod.sample_points(1, np.random.default_rng(9))[0]
    with pytest.raises(hol.HolError):
        hol.holonomy_algebra(mod, "chern", x, order=2)
