"""Pointwise curvature-positivity machinery: eigenvalue sums, extremal
frames for holomorphic sectional curvature, second-variation and Berger
averaging inequalities, and the normal form of (2,0)-forms.

Algebraic curvature tensors live on the standard fiber (metric = identity)
with components R[i,j,k,l] ~ R_{i jbar k lbar} carrying all Kahler
symmetries."""

from dataclasses import dataclass
from math import factorial

import numpy as np

from ._kernels import quartic_gradients, quartic_values
from .forms import FiberForm, wedge
from .fiber import HermitianFiber


class KformError(ValueError):
    pass


@dataclass
class AlgebraicKaehlerTensor:
    m: int
    R: np.ndarray
    provenance: str = "unspecified"

    def __post_init__(self):
        R = np.asarray(self.R, dtype=complex)
        if R.shape != (self.m,) * 4:
            raise KformError("components must be m^4")
        if self.symmetry_residual(R) > 1e-10 * max(1.0, np.abs(R).max()):
            raise KformError("Kahler symmetries violated")
        self.R = R

    @staticmethod
    def symmetry_residual(R):
        herm = np.abs(R - R.transpose(1, 0, 3, 2).conj()).max()
        s1 = np.abs(R - R.transpose(2, 1, 0, 3)).max()
        s2 = np.abs(R - R.transpose(0, 3, 2, 1)).max()
        return float(max(herm, s1, s2))

    def ric(self):
        return np.einsum("ijkk->ij", self.R)

    def rotate(self, U):
        """Components in the unitary frame e'_a = sum_i U[i,a] e_i."""
        Rp = np.einsum(
            "ijkl,ia,jb,kc,ld->abcd", self.R, U, U.conj(), U, U.conj(),
            optimize=True,
        )
        return AlgebraicKaehlerTensor(self.m, Rp, self.provenance + "+rotated")


def from_hermitian_form(m, Q):
    """Exact Kahler-symmetric tensor from a Hermitian form Q on the m^2
    symmetric index pairs: R[i,j,k,l] = sym over the paired slots."""
    Q = np.asarray(Q, dtype=complex)
    if Q.shape != (m * m, m * m):
        raise KformError("Q must be m^2 x m^2")
    Q = 0.5 * (Q + Q.conj().T)
    Qt = Q.reshape(m, m, m, m)  # Q[(i,k),(j,l)]
    R = (
        Qt.transpose(0, 2, 1, 3)
        + Qt.transpose(1, 2, 0, 3)
        + Qt.transpose(0, 3, 1, 2)
        + Qt.transpose(1, 3, 0, 2)
    )
    return AlgebraicKaehlerTensor(m, R, "random-symmetrized")


def fs_tensor(m, c=1.0):
    """Constant-H tensor of the standard positively curved metric:
    R = c (delta delta + delta delta), H == 2c, Ric = c (m+1) id."""
    eye = np.eye(m)
    R = c * (
        np.einsum("ij,kl->ijkl", eye, eye) + np.einsum("il,kj->ijkl", eye, eye)
    )
    return AlgebraicKaehlerTensor(m, R, "fs")


def random_tensor(m, rng, scale=1.0):
    Q = rng.standard_normal((m * m, m * m)) + 1j * rng.standard_normal(
        (m * m, m * m)
    )
    t = from_hermitian_form(m, scale * Q / m)
    t.provenance = "random-symmetrized"
    return t


def fs_shifted_tensor(m, rng, target_min=0.1, scale=1.0):
    """Random symmetric tensor shifted by a multiple of the constant-H
    tensor so the global minimum of H is (approximately) target_min."""
    t = random_tensor(m, rng, scale)
    kappa, _, _ = minimize_H(t)
    c = max(0.0, (target_min - kappa) / 2.0)
    out = AlgebraicKaehlerTensor(m, t.R + fs_tensor(m, c).R, "fs-shifted")
    return out


# -- H minimization over the unit sphere --------------------------------

def H_values(t, X):
    """Holomorphic sectional curvature at unit rows of X."""
    return quartic_values(np.ascontiguousarray(t.R), np.ascontiguousarray(X))


def _normalize_rows(X):
    return X / np.linalg.norm(X, axis=1, keepdims=True)


def minimize_H(t, restarts=50, iters=400, rng=None, tol=1e-10):
    """Global minimum of H over the unit sphere by batched multi-start
    projected gradient descent with the analytic quartic gradient.

    Returns (kappa, minimizer, info); info carries the first-order condition
    residual and the spread of converged values across restarts."""
    if rng is None:
        rng = np.random.default_rng(12345)
    m = t.m
    R = np.ascontiguousarray(t.R)
    X = rng.standard_normal((restarts, m)) + 1j * rng.standard_normal(
        (restarts, m)
    )
    X = _normalize_rows(X)
    scale = max(np.abs(R).max(), 1e-12)
    step = 0.2 / scale
    vals = quartic_values(R, X)
    for it in range(iters):
        G = quartic_gradients(R, X)
        # tangent projection: remove the radial component
        rad = np.einsum("tj,tj->t", G, X.conj()).real
        G = G - rad[:, None] * X
        Xn = _normalize_rows(X - step * G)
        new_vals = quartic_values(R, Xn)
        worse = new_vals > vals
        if worse.any():
            Xn[worse] = X[worse]
            new_vals[worse] = vals[worse]
            step *= 0.7
        if np.abs(new_vals - vals).max() < tol * scale and it > 20:
            X, vals = Xn, new_vals
            break
        X, vals = Xn, new_vals
    best = int(np.argmin(vals))
    x = X[best]
    g = quartic_gradients(R, x[None])[0]
    g = g - np.vdot(x, g).real * x
    conv = np.sort(vals)
    spread = float(conv[min(5, len(conv) - 1)] - conv[0])
    return (
        float(vals[best]),
        x,
        {"grad_residual": float(np.linalg.norm(g)), "value_spread": spread},
    )


def mesh_min_H(t, n=10000, rng=None, refine=True):
    """Independent brute-force oracle: min of H over n random unit vectors,
    optionally polished with a derivative-free local search."""
    if rng is None:
        rng = np.random.default_rng(54321)
    m = t.m
    R = np.ascontiguousarray(t.R)
    X = rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))
    X = _normalize_rows(X)
    vals = quartic_values(R, X)
    order = np.argsort(vals)
    best_val = float(vals[order[0]])
    if not refine:
        return best_val
    from scipy.optimize import minimize as sp_minimize

    def f(u):
        z = u[:m] + 1j * u[m:]
        nz = np.linalg.norm(z)
        if nz < 1e-12:
            return 1e9
        z = z / nz
        return float(quartic_values(R, z[None])[0])

    for idx in order[:8]:
        z0 = X[idx]
        u0 = np.concatenate([z0.real, z0.imag])
        res = sp_minimize(f, u0, method="Nelder-Mead",
                          options={"xatol": 1e-8, "fatol": 1e-12, "maxiter": 4000})
        best_val = min(best_val, float(res.fun))
    return best_val


def eigen_sum_min(ric, p):
    """Sum of the p smallest eigenvalues of a Hermitian matrix; equals the
    min of sum lambda_{i_1..i_p} over index subsets."""
    ric = np.asarray(ric)
    m = ric.shape[0]
    if not 1 <= p <= m:
        raise KformError("need 1 <= p <= m")
    w = np.linalg.eigvalsh(0.5 * (ric + ric.conj().T))
    return float(w[:p].sum())


def greedy_extremal_frame(t, restarts=50, rng=None):
    """Unitary frame built by greedily minimizing H over successive
    orthogonal complements; returns (frame columns, kappa, H values)."""
    if t.m > 4:
        raise KformError("greedy frame limited to m <= 4")
    if rng is None:
        rng = np.random.default_rng(999)
    m = t.m
    frame = []
    hvals = []
    basis = np.eye(m, dtype=complex)  # columns: current complement basis
    cur = t
    kappa = None
    for level in range(m):
        val, x, info = minimize_H(cur, restarts=restarts, rng=rng)
        if info["value_spread"] > 1e-5 * max(1.0, abs(val)) and level == 0:
            # restart disagreement: retry with more starts before giving up
            val2, x2, info2 = minimize_H(cur, restarts=4 * restarts, rng=rng)
            if val2 < val:
                val, x, info = val2, x2, info2
        if kappa is None:
            kappa = val
        e = basis @ x
        frame.append(e)
        hvals.append(val)
        if level == m - 1:
            break
        # orthonormal complement of x inside the current basis
        q, _ = np.linalg.qr(
            np.hstack([x[:, None], rng.standard_normal((basis.shape[1], basis.shape[1] - 1))
                       + 1j * rng.standard_normal((basis.shape[1], basis.shape[1] - 1))])
        )
        comp = q[:, 1:]
        basis = basis @ comp
        Rsub = np.einsum(
            "ijkl,ia,jb,kc,ld->abcd", cur.R, comp, comp.conj(), comp,
            comp.conj(), optimize=True,
        )
        cur = AlgebraicKaehlerTensor(cur.m - 1, Rsub, t.provenance + "+restricted")
    U = np.stack(frame, axis=1)
    return U, float(kappa), [float(v) for v in hvals]


def lemma_bound_slack(t, frame, kappa):
    """Slack of Ric(e_i, ebar_i) >= kappa (m+1)/2 over the frame."""
    ric = t.ric()
    bound = kappa * (t.m + 1) / 2.0
    vals = [float(np.einsum("i,j,ij->", e, e.conj(), ric).real) for e in frame.T]
    return min(v - bound for v in vals), vals


def second_variation_check(t, minimizer, kappa, mode="H-min", subframe_size=None,
                           grad_tol=1e-6):
    """Second-variation inequalities at a certified minimizer.

    H-min: min over unit X orthogonal to e1 of R(e1,e1bar,X,Xbar) - kappa/2.
    S2k-min: with the first 2k frame vectors minimizing the partial scalar,
    min over later frame directions of sum_{i<=2k} R(e_i,e_ibar,l,lbar)."""
    R = t.R
    if mode == "H-min":
        e1 = np.asarray(minimizer, dtype=complex)
        g = quartic_gradients(np.ascontiguousarray(R), e1[None])[0]
        g = g - np.vdot(e1, g).real * e1
        if np.linalg.norm(g) > grad_tol:
            raise KformError(
                f"minimizer not certified: gradient {np.linalg.norm(g):.2e}"
            )
        A = np.einsum("ijkl,i,j->kl", R, e1, e1.conj())
        A = 0.5 * (A + A.conj().T)
        # Hermitian form value is X^T A conj(X): restrict A^T to e1-perp
        q, _ = np.linalg.qr(
            np.hstack([e1[:, None], np.eye(t.m, dtype=complex)[:, : t.m - 1]])
        )
        comp = q[:, 1:]
        w = np.linalg.eigvalsh(comp.conj().T @ A.T @ comp)
        return {"min_value": float(w[0]), "slack": float(w[0] - kappa / 2.0)}
    if mode == "S2k-min":
        U = np.asarray(minimizer, dtype=complex)  # frame columns
        k2 = subframe_size
        if k2 is None or not 0 < k2 < t.m:
            raise KformError("S2k-min needs 0 < subframe_size < m")
        Rp = t.rotate(U).R
        sums = [
            float(sum(Rp[i, i, l, l].real for i in range(k2)))
            for l in range(k2, t.m)
        ]
        return {"min_value": min(sums), "slack": min(sums)}
    raise KformError(f"unknown mode {mode!r}")


def berger_average_check(t, alpha, beta, k, rng=None, frames=100,
                         hypothesis_samples=10000):
    """Berger-averaged positivity: with C_{alpha,beta}(X) >= 0 established
    by dense sphere sampling, the min over random unitary 2k-subframes of

        alpha/(2k) sum_i Ric_{i ibar} + beta/(k(2k+1)) sum_{ij} R_{i ibar j jbar}

    must be >= -1e-6."""
    if rng is None:
        rng = np.random.default_rng(777)
    m = t.m
    if not 1 <= 2 * k <= m:
        raise KformError("need 1 <= 2k <= m")
    R = np.ascontiguousarray(t.R)
    ric = t.ric()
    X = rng.standard_normal((hypothesis_samples, m)) + 1j * rng.standard_normal(
        (hypothesis_samples, m)
    )
    X = _normalize_rows(X)
    quart = quartic_values(R, X)
    ricvals = np.einsum("ij,ti,tj->t", ric, X, X.conj()).real
    cvals = alpha * ricvals + beta * quart
    if cvals.min() < -1e-8:
        raise KformError(
            f"hypothesis unverified: C_(alpha,beta) reaches {cvals.min():.3e}"
        )
    worst = np.inf
    for _ in range(frames):
        z = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
        q, r = np.linalg.qr(z)
        A = (q @ np.diag(np.diag(r) / np.abs(np.diag(r))))[:, : 2 * k].T
        s1 = np.einsum("ij,pi,pj->", ric, A, A.conj()).real
        s2 = np.einsum(
            "ijkl,pi,pj,qk,ql->", R, A, A.conj(), A, A.conj(), optimize=True
        ).real
        avg = alpha / (2 * k) * s1 + beta / (k * (2 * k + 1)) * s2
        worst = min(worst, float(avg))
    return worst


# -- normal form of (2,0)-forms -----------------------------------------

def normal_form_2form(A):
    """Youla normal form of a complex antisymmetric matrix by unitary
    congruence: returns (U, f, k) with U^T A U block-diagonal, blocks
    [[0, f_i], [-f_i, 0]] with f_1 >= f_2 >= ... > 0, k = number of blocks.

    A encodes the (2,0)-form phi = sum_{i<j} A[i,j] dz^i wedge dz^j."""
    A = np.asarray(A, dtype=complex)
    m = A.shape[0]
    if np.abs(A + A.T).max() > 1e-10 * max(1.0, np.abs(A).max()):
        raise KformError("matrix is not antisymmetric")
    A = 0.5 * (A - A.T)
    U = np.zeros((m, m), dtype=complex)
    basis = np.eye(m, dtype=complex)
    cur = A.copy()
    col = 0
    fs = []
    while basis.shape[1] >= 2:
        u, s, vh = np.linalg.svd(cur)
        if s[0] < 1e-12 * max(1.0, np.abs(A).max()):
            break
        sigma = s[0]
        v = vh[0].conj()  # right singular vector: cur @ v = sigma * u[:,0]
        w = u[:, 0].conj()  # antisymmetry: cur @ w = -sigma * v.conj()... pair
        # orthonormalize the invariant pair (v, w)
        w = w - np.vdot(v, w) * v
        w = w / np.linalg.norm(w)
        # fix the phase so that v^T cur w = f > 0
        f = v @ cur @ w
        w = w * (np.conj(f) / abs(f))
        f = abs(f)
        U[:, col] = basis @ v
        U[:, col + 1] = basis @ w
        fs.append(float(f))
        col += 2
        # deflate: restrict to the orthogonal complement of (v, w)
        q, _ = np.linalg.qr(
            np.hstack([v[:, None], w[:, None],
                       np.eye(basis.shape[1], dtype=complex)])
        )
        comp = q[:, 2:]
        basis = basis @ comp
        cur = comp.T @ cur @ comp
        cur = 0.5 * (cur - cur.T)
    # complete the frame on the kernel
    if col < m:
        U[:, col:] = basis[:, : m - col]
    # exact unitarity clean-up
    q, r = np.linalg.qr(U)
    U = q @ np.diag(np.diag(r) / np.abs(np.diag(r)))
    return U, fs, len(fs)


def form_from_matrix(fiber, A):
    """FiberForm of the (2,0)-form encoded by an antisymmetric matrix."""
    out = FiberForm.zero(fiber)
    m = fiber.m
    for i in range(m):
        for j in range(i + 1, m):
            if A[i, j] != 0:
                out = out + FiberForm.monomial(fiber, (i, j), (), A[i, j])
    return out


def wedge_rank(fiber, A):
    """Largest k with phi^{wedge k} != 0, by explicit wedge powers."""
    phi = form_from_matrix(fiber, A)
    power = phi
    k = 0
    scale = max(np.abs(A).max(), 1e-300)
    while np.abs(power.coeff).max() > 1e-12 * scale**(k + 1):
        k += 1
        if 2 * (k + 1) > fiber.m:
            return k
        power = wedge(power, phi)
    return k


def bochner_chain_pointwise(t, A):
    """Curvature terms of the pointwise Bochner chain for s = phi^{wedge k}.

    Rotates the curvature tensor into the normal frame of phi, forms the
    simple top power s there, and evaluates the two curvature quantities
    |s|^2 sum_{i<=2k} Ric_{i ibar}  and  (|s|^4 / 2k) sum_{i,j<=2k} R_{i ibar j jbar},
    plus a consistency check of the averaged (1,1)-form beta_tilde against
    the exterior-algebra construction."""
    U, f, k = normal_form_2form(A)
    if k == 0:
        raise KformError("zero form")
    Rp = t.rotate(U)
    ric = Rp.ric()
    coeff = factorial(k) * np.prod(f)
    s_norm2 = float(coeff) ** 2
    term_59 = s_norm2 * float(sum(ric[i, i].real for i in range(2 * k)))
    s2sum = float(
        sum(Rp.R[i, i, j, j].real for i in range(2 * k) for j in range(2 * k))
    )
    term_510 = (s_norm2**2 / (2 * k)) * s2sum
    # beta_tilde consistency in the normal frame
    fiber = HermitianFiber(t.m)
    from .forms import beta_tilde

    if 2 * k <= t.m - 1:
        s_form = FiberForm.monomial(fiber, tuple(range(2 * k)), (), coeff)
        bt = beta_tilde(s_form)
        expect = np.zeros((t.m, t.m), dtype=complex)
        for i in range(2 * k):
            expect[i, i] = s_norm2 / (2 * k)
        resid = float(np.abs(bt.matrix11() - expect).max())
    else:
        resid = None  # top-degree form: (1,1)-average undefined
    return {
        "k": k,
        "pair_values": f,
        "s_norm2": s_norm2,
        "term_59": term_59,
        "term_510": term_510,
        "partial_scalar_2k": s2sum,
        "beta_tilde_residual": resid,
    }
