"""Matrix Lie subalgebras: closure, commutant, center/derived decomposition,
and holonomy-algebra approximation from curvature data.

Subalgebra elements are plain matrices: skew-Hermitian m x m complex for
ambient "u(m)", skew-symmetric 2m x 2m real for ambient "so(2m)".  The
inner product is <a, b> = Re tr(a^dagger b) (proportional to the ad-invariant
form -tr(ab) on u(m))."""

from dataclasses import dataclass, field

import numpy as np

from . import conn
from .models import LieGroupModel

RANK_TOL = 1e-8


class HolError(ValueError):
    pass


def _vec(mats):
    return np.array([m.ravel() for m in mats])


def _orth_basis(mats, tol=RANK_TOL, noise_floor=0.0):
    """Orthonormal basis of span(mats) via SVD with a relative rank cut.

    noise_floor is an absolute cut below which directions are treated as
    numerical debris (FD error in the generators)."""
    mats = [m for m in mats if np.abs(m).max() > 0]
    if not mats:
        return [], 0.0
    V = _vec(mats)
    u, s, vh = np.linalg.svd(V, full_matrices=False)
    cut = max(tol * s[0], noise_floor)
    keep = s > cut
    shape = mats[0].shape
    basis = [vh[i].reshape(shape) for i in range(len(s)) if keep[i]]
    smin = float(s[keep].min()) if keep.any() else 0.0
    return basis, smin


@dataclass
class MatrixLieSubalgebra:
    ambient: str  # "u(m)" or "so(2m)"
    basis: list
    closed: bool = False
    provenance: tuple = ()
    min_singular_value: float = 0.0

    @property
    def dim(self):
        return len(self.basis)

    @property
    def n(self):
        return self.basis[0].shape[0] if self.basis else None

    def contains(self, mat, tol=RANK_TOL):
        """Projection residual of mat onto span(basis), relative."""
        scale = max(np.abs(mat).max(), 1e-300)
        r = mat.copy()
        for b in self.basis:
            r = r - np.vdot(b, r) * b
        return float(np.abs(r).max() / scale)

    def project(self, mat):
        out = np.zeros_like(mat)
        for b in self.basis:
            out = out + np.vdot(b, mat) * b
        return out


def lie_closure(generators, ambient="u(m)", noise_floor=0.0, provenance=()):
    """Smallest bracket-closed subspace containing the generators."""
    mats = [g.matrix if hasattr(g, "matrix") else np.asarray(g) for g in generators]
    basis, smin = _orth_basis(mats, noise_floor=noise_floor)
    if not basis:
        return MatrixLieSubalgebra(ambient, [], closed=True, provenance=provenance)
    n = basis[0].shape[0]
    cap = n * (n - 1) // 2 + (n if np.iscomplexobj(basis[0]) else 0)
    while True:
        brackets = [
            a @ b - b @ a for i, a in enumerate(basis) for b in basis[i + 1 :]
        ]
        new_basis, smin = _orth_basis(basis + brackets, noise_floor=noise_floor)
        if len(new_basis) == len(basis) or len(new_basis) >= cap:
            basis = new_basis
            break
        basis = new_basis
    alg = MatrixLieSubalgebra(
        ambient, basis, closed=True, provenance=provenance,
        min_singular_value=smin,
    )
    return alg


def closure_residual(g):
    """Max projection residual of [b_i, b_j] onto the span (0 if closed)."""
    worst = 0.0
    for i, a in enumerate(g.basis):
        for b in g.basis[i + 1 :]:
            br = a @ b - b @ a
            if np.abs(br).max() > 1e-12:
                worst = max(worst, g.contains(br))
    return worst


def holonomy_algebra(model, kind, base_point=None, order=1, t=None):
    """Approximate restricted holonomy algebra at a base point.

    Generators are curvature endomorphisms (order 0) augmented with
    covariant derivatives of the curvature up to `order`; the result is
    order-stable if the dimension is unchanged from order-1 to order.
    Returns (algebra, info dict)."""
    if order not in (0, 1, 2):
        raise HolError("order must be 0, 1 or 2")
    if order == 2 and not isinstance(model, LieGroupModel):
        raise HolError("order 2 requires exact (Lie group) models")
    cd = conn.connection(model, base_point, kind, t=t)
    dims = []
    alg = None
    ambient = None
    for k in range(order + 1):
        if k == 2:
            alg2, amb = _lie_order2(cd, alg)
            dims.append(alg2.dim)
            alg = alg2
            continue
        gens, amb, noise = conn.holonomy_generators(cd, order=k)
        if ambient is not None and amb != ambient:
            raise HolError("ambient changed between orders")
        ambient = amb
        alg = lie_closure(
            gens, ambient=amb, noise_floor=noise,
            provenance=(f"curvature order {k} at base point",),
        )
        dims.append(alg.dim)
    info = {
        "dims_by_order": dims,
        "stable": len(dims) < 2 or dims[-1] == dims[-2],
        "ambient": ambient,
    }
    return alg, info


def _lie_order2(cd, alg1):
    """Second covariant derivatives of R on an invariant frame, exactly."""
    gm = cd.gamma
    nR = conn.nabla_curvature(cd)
    n = gm.shape[0]
    # (nabla_f nabla_e R)(a,b) from the same covariant-derivative recursion
    nnR = (
        np.einsum("dfm,eabmc->feabdc", gm, nR)
        - np.einsum("eabdm,mfc->feabdc", nR, gm)
        - np.einsum("mfe,mabdc->feabdc", gm, nR)
        - np.einsum("mfa,embdc->feabdc", gm, nR)
        - np.einsum("mfb,eamdc->feabdc", gm, nR)
    )
    ops = [
        nnR[f, e, a, b]
        for f in range(n)
        for e in range(n)
        for a in range(n)
        for b in range(a + 1, n)
    ]
    J = conn.standard_J(cd.m)
    jres = max((float(np.abs(o @ J - J @ o).max()) for o in ops), default=0.0)
    E, P10 = conn.complex_frame(cd.m)
    _, M = cd.fiber.coframe_change()
    U = np.linalg.inv(M)
    gens = list(alg1.basis)
    if jres < 1e-9 and alg1.ambient == "u(m)":
        for o in ops:
            opc = M @ (P10 @ o.astype(complex) @ E) @ U
            gens.append(0.5 * (opc - opc.conj().T))
        return lie_closure(gens, ambient="u(m)"), "u(m)"
    L = np.linalg.cholesky(cd.g)
    Linv = np.linalg.inv(L)
    for o in ops:
        oo = L.T @ o @ Linv.T
        gens.append(0.5 * (oo - oo.T))
    return lie_closure(gens, ambient="so(2m)"), "so(2m)"


# -- commutant and Schur irreducibility ---------------------------------

def commutant(g, n=None):
    """Basis of the complex commutant {X : [b, X] = 0 for all b in basis}."""
    if g.basis:
        n = g.basis[0].shape[0]
    elif n is None:
        raise HolError("empty algebra needs an explicit dimension")
    if not g.basis:
        return [
            np.eye(n, dtype=complex)[:, [j]] @ np.eye(n, dtype=complex)[[i], :]
            for i in range(n)
            for j in range(n)
        ]
    rows = []
    eye = np.eye(n)
    for b in g.basis:
        b = b.astype(complex)
        rows.append(np.kron(b, eye) - np.kron(eye, b.T))
    A = np.vstack(rows)
    _, s, vh = np.linalg.svd(A, full_matrices=False)
    ncols = A.shape[1]
    rank = int((s > RANK_TOL * max(s[0], 1.0)).sum())
    null = vh[rank:].conj()
    return [null[i].reshape(n, n) for i in range(ncols - rank)]


def is_irreducible(g, n=None):
    """Schur criterion on the complex fiber: irreducible iff the complex
    commutant is one-dimensional.  Returns (flag, witness): for reducible
    algebras the witness is an orthonormal basis of a proper invariant
    subspace extracted from a non-scalar commutant element."""
    com = commutant(g, n=n)
    if len(com) == 1:
        return True, None
    nn = com[0].shape[0]
    # find a non-scalar element and return one of its eigenspaces
    for c in com:
        c = c / max(np.abs(c).max(), 1e-300)
        off = c - (np.trace(c) / nn) * np.eye(nn)
        if np.abs(off).max() < 1e-8:
            continue
        herm = c + c.conj().T
        if np.abs(herm - (np.trace(herm) / nn) * np.eye(nn)).max() < 1e-8:
            herm = 1j * (c - c.conj().T)
        w, v = np.linalg.eigh(herm)
        # group eigenvalues; take the eigenspace of the smallest cluster
        groups = []
        for i, lam in enumerate(w):
            if groups and abs(lam - w[groups[-1][-1]]) < 1e-6 * max(1, abs(lam)):
                groups[-1].append(i)
            else:
                groups.append([i])
        grp = min(groups, key=len)
        return False, v[:, grp]
    return True, None


# -- center, derived algebra, su containment ----------------------------

def center(g):
    if not g.closed:
        raise HolError("close the algebra first")
    if not g.basis:
        return MatrixLieSubalgebra(g.ambient, [], closed=True)
    d = g.dim
    # matrix of x = sum x_j b_j -> coefficients of [b_i, x] in the basis
    A = np.zeros((d * d, d), dtype=complex)
    for j, bj in enumerate(g.basis):
        for i, bi in enumerate(g.basis):
            br = bi @ bj - bj @ bi
            for k, bk in enumerate(g.basis):
                A[i * d + k, j] = np.vdot(bk, br)
    _, s, vh = np.linalg.svd(A, full_matrices=False)
    rank = int((s > RANK_TOL * max(s[0] if len(s) else 0.0, 1.0)).sum())
    null = vh[rank:].conj()
    mats = [
        sum(null[r, j] * g.basis[j] for j in range(d)) for r in range(d - rank)
    ]
    basis, _ = _orth_basis(mats)
    return MatrixLieSubalgebra(g.ambient, basis, closed=True)


def derived(g):
    if not g.closed:
        raise HolError("close the algebra first")
    brackets = [
        a @ b - b @ a for i, a in enumerate(g.basis) for b in g.basis[i + 1 :]
    ]
    # the basis is unit Frobenius norm, so genuine brackets are O(1);
    # an absolute floor keeps rounding debris out of abelian algebras
    basis, _ = _orth_basis(brackets, noise_floor=1e-10)
    return MatrixLieSubalgebra(g.ambient, basis, closed=True)


def decompose(g):
    """(center, derived) pair; orthogonal under the invariant inner product."""
    return center(g), derived(g)


def orthogonality_residual(a, b):
    worst = 0.0
    for x in a.basis:
        for y in b.basis:
            worst = max(worst, abs(np.vdot(x, y)))
    return float(worst)


def is_in_su(g, tol=1e-9):
    if g.ambient != "u(m)":
        raise HolError("su containment needs ambient u(m)")
    return all(abs(np.trace(b)) < tol for b in g.basis)


def ricci_vs_su_check(model, kind, sample_points=None, t=None, order=1,
                      ric_tol=1e-6):
    """Evaluate both sides of: holonomy in SU(m) iff Chern Ricci vanishes.

    Returns a dict with the max |Ric1| over sample points, the su-containment
    flag of the order-stable holonomy approximation, and whether they agree
    (Ric1 = 0 should match containment)."""
    pts = [None] if isinstance(model, LieGroupModel) else list(sample_points)
    ric_max = 0.0
    for x in pts:
        cd = conn.connection(model, x, kind, t=t)
        ric_max = max(ric_max, float(np.abs(conn.curvature_scalars(cd).ric1).max()))
    alg, info = holonomy_algebra(model, kind, pts[0], order=order, t=t)
    if info["ambient"] not in (None, "u(m)"):
        raise HolError("holonomy did not land in u(m); check the kind")
    in_su = is_in_su(alg) if alg.dim else True
    ric_zero = ric_max < ric_tol
    return {
        "ric1_max": ric_max,
        "holonomy_dim": alg.dim,
        "in_su": in_su,
        "stable": info["stable"],
        "agree": in_su == ric_zero,
    }


# -- randomized closed subalgebras for property tests -------------------

def random_closed_subalgebra(m, rng):
    """Random bracket-closed subalgebra of u(m) built from a conjugated
    block pattern: pick a partition of m, take u/su blocks, conjugate by a
    random unitary, and close (a no-op up to numerics)."""
    # random partition of m
    parts = []
    left = m
    while left:
        k = int(rng.integers(1, left + 1))
        parts.append(k)
        left -= k
    # haar-ish unitary
    z = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    q, r = np.linalg.qr(z)
    q = q @ np.diag(np.diag(r) / np.abs(np.diag(r)))
    gens = []
    off = 0
    for k in parts:
        kind = rng.integers(0, 3)  # 0: u(k), 1: su(k), 2: skip block
        if kind == 2 and len(parts) > 1:
            off += k
            continue
        for i in range(k):
            for j in range(i, k):
                a = np.zeros((m, m), dtype=complex)
                if i == j:
                    if kind == 1:
                        continue
                    a[off + i, off + i] = 1j
                else:
                    a[off + i, off + j] = 1.0
                    a[off + j, off + i] = -1.0
                gens.append(q @ a @ q.conj().T)
                if i != j:
                    b = np.zeros((m, m), dtype=complex)
                    b[off + i, off + j] = 1j
                    b[off + j, off + i] = 1j
                    gens.append(q @ b @ q.conj().T)
        if kind == 1 and k > 1:
            for i in range(k - 1):
                a = np.zeros((m, m), dtype=complex)
                a[off + i, off + i] = 1j
                a[off + i + 1, off + i + 1] = -1j
                gens.append(q @ a @ q.conj().T)
        off += k
    if not gens:
        gens = [np.zeros((m, m), dtype=complex)]
    return lie_closure(gens, ambient="u(m)")
