import numpy as np
import pytest

from holomat import kforms as K
from holomat.fiber import HermitianFiber


def test_fs_tensor_symmetries_and_ricci():
    t = K.fs_tensor(3)
    # Ric = (m+1) I for the unit-curvature normalization
    assert np.allclose(t.ric(), 4.0 * np.eye(3), atol=1e-12)
    r = K.random_tensor(3, np.random.default_rng(0))
    assert np.allclose(r.ric(), r.ric().conj().T, atol=1e-12)


def test_from_hermitian_form_symmetrization():
    rng = np.random.default_rng(1)
    m = 3
    Q = rng.standard_normal((m * m, m * m))
    Q = Q + Q.T
    t = K.from_hermitian_form(m, Q)
    # Kahler symmetries hold by construction
    R = t.R
    assert np.abs(R - R.transpose(2, 1, 0, 3)).max() < 1e-12
    assert np.abs(R - R.transpose(0, 3, 2, 1)).max() < 1e-12
    assert np.abs(R - R.transpose(1, 0, 3, 2).conj()).max() < 1e-12


def test_rotate_is_an_action():
    rng = np.random.default_rng(2)
    t = K.random_tensor(2, rng)
    z = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    U, _ = np.linalg.qr(z)
    z2 = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    V, _ = np.linalg.qr(z2)
    a = t.rotate(U).rotate(V)
    b = t.rotate(U @ V)
    assert np.abs(a.R - b.R).max() < 1e-10


def test_minimize_H_fubini_study():
    t = K.fs_tensor(3)
    kappa, x, info = K.minimize_H(t, restarts=10, rng=np.random.default_rng(3))
    assert kappa == pytest.approx(2.0, abs=1e-9)
    assert info["grad_residual"] < 1e-8


def test_minimizer_cross_validated_by_mesh():
    rng = np.random.default_rng(4)
    t = K.fs_shifted_tensor(3, rng, target_min=0.25)
    kappa, _, _ = K.minimize_H(t, restarts=30, rng=np.random.default_rng(5))
    mesh = K.mesh_min_H(t, n=4000, rng=np.random.default_rng(6))
    assert abs(kappa - mesh) < 1e-3 * max(1.0, abs(kappa))


def test_greedy_frame_and_lemma_bound_fs_equality():
    t = K.fs_tensor(3)
    U, kappa, hvals = K.greedy_extremal_frame(
        t, restarts=10, rng=np.random.default_rng(7)
    )
    assert np.abs(U.conj().T @ U - np.eye(3)).max() < 1e-10
    slack, vals = K.lemma_bound_slack(t, U, kappa)
    # FS saturates Ric(e_i, ebar_i) >= kappa (m+1)/2
    assert abs(slack) < 1e-9


def test_lemma_bound_never_violated_on_shifted_tensors():
    rng = np.random.default_rng(8)
    for _ in range(10):
        t = K.fs_shifted_tensor(2, rng, target_min=0.2)
        U, kappa, _ = K.greedy_extremal_frame(t, restarts=15, rng=rng)
        slack, _ = K.lemma_bound_slack(t, U, kappa)
        assert slack > -1e-6


def test_second_variation_fs():
    t = K.fs_tensor(3)
    kappa, x, _ = K.minimize_H(t, restarts=10, rng=np.random.default_rng(9))
    out = K.second_variation_check(t, x, kappa)
    # for FS the restricted Hessian form is exactly kappa/2 = 1
    assert out["min_value"] == pytest.approx(1.0, abs=1e-10)
    assert out["slack"] >= -1e-10


def test_second_variation_rejects_uncertified_minimizer():
    t = K.fs_tensor(3)
    bad = np.array([1.0, 1.0, 0.0]) / np.sqrt(2)
    with pytest.raises(K.KformError):
        K.second_variation_check(t, bad, 1.0, grad_tol=1e-300)


def test_eigen_sum_min():
    ric = np.diag([1.0, 2.0, 5.0]).astype(complex)
    assert K.eigen_sum_min(ric, 2) == pytest.approx(3.0)


def test_berger_average_fs():
    t = K.fs_tensor(4)
    worst = K.berger_average_check(t, 1.0, 0.0, 2, frames=20,
                                   hypothesis_samples=2000)
    # alpha-term only: average Ricci over 2k-frames = (m+1) = 5
    assert worst == pytest.approx(5.0, abs=1e-8)
    with pytest.raises(K.KformError):
        K.berger_average_check(t, -1.0, 0.0, 2, hypothesis_samples=500)


def test_normal_form_2form_roundtrip():
    rng = np.random.default_rng(10)
    m = 5
    Z = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    A = Z - Z.T
    U, f, k = K.normal_form_2form(A)
    assert np.abs(U.conj().T @ U - np.eye(m)).max() < 1e-10
    assert sorted(f, reverse=True) == f and all(v > 0 for v in f)
    blocks = np.zeros((m, m), dtype=complex)
    for i, v in enumerate(f):
        blocks[2 * i, 2 * i + 1] = v
        blocks[2 * i + 1, 2 * i] = -v
    assert np.abs(U.T @ A @ U - blocks).max() < 1e-10
    assert np.abs(U.conj() @ blocks @ U.conj().T - A).max() < 1e-9


def test_wedge_rank_matches_normal_form():
    rng = np.random.default_rng(11)
    m = 5
    Z = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    A = Z - Z.T
    _, _, k = K.normal_form_2form(A)
    assert K.wedge_rank(HermitianFiber(m), A) == k
    A1 = np.zeros((4, 4), dtype=complex)
    A1[0, 1], A1[1, 0] = 2.0, -2.0
    assert K.wedge_rank(HermitianFiber(4), A1) == 1


def test_bochner_chain_fs_oracle():
    t = K.fs_tensor(4)
    A = np.zeros((4, 4), dtype=complex)
    A[0, 1], A[1, 0] = 2.0, -2.0
    A[2, 3], A[3, 2] = 1.0, -1.0
    out = K.bochner_chain_pointwise(t, A)
    # s = phi^2 with pair values (2,1): |s|^2 = (2! * 2)^2 = 16
    assert out["k"] == 2
    assert out["s_norm2"] == pytest.approx(16.0, abs=1e-10)
    # FS: Ric = 5I so sum_{i<=4} = 20; S_4 = sum (1 + delta) = 20
    assert out["term_59"] == pytest.approx(320.0, abs=1e-8)
    assert out["partial_scalar_2k"] == pytest.approx(20.0, abs=1e-8)
    assert out["term_510"] == pytest.approx(1280.0, abs=1e-8)
    assert out["beta_tilde_residual"] is None  # top degree


def test_bochner_chain_beta_consistency():
    t = K.fs_tensor(5)
    A = np.zeros((5, 5), dtype=complex)
    A[0, 1], A[1, 0] = 2.0, -2.0
    A[2, 3], A[3, 2] = 1.0, -1.0
    out = K.bochner_chain_pointwise(t, A)
    assert out["beta_tilde_residual"] < 1e-10
