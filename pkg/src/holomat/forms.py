"""Exterior algebra on a Hermitian fiber: wedge, Hodge star, Lefschetz calculus.

A form is stored as a dense complex array indexed by bitmask pairs
(I, J) meaning dz^I wedge dzbar^J with increasing indices inside each
group; the total dimension is 4^m, which is fine at desk scale (m <= 6
for pure wedge work, m <= 5 where operator matrices are built).

All metric-dependent operations (inner product, star, Lambda) are done
by passing to a unitary coframe via the Cholesky factor of the metric,
where the basis monomials are orthonormal.
"""

from dataclasses import dataclass
from math import factorial

import numpy as np

from ._kernels import _merge_sign, _popcount, wedge_accumulate
from .fiber import FiberError, HermitianFiber

_OP_CACHE = {}


def _mask(indices):
    m = 0
    for i in indices:
        m |= 1 << i
    return m


def _bits(mask):
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


@dataclass(eq=False)
class FiberForm:
    fiber: HermitianFiber
    coeff: np.ndarray

    def __post_init__(self):
        n = 1 << self.fiber.m
        c = np.asarray(self.coeff, dtype=complex)
        if c.shape != (n, n):
            raise FiberError(f"coefficient array must be {n}x{n}")
        self.coeff = c

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, fiber):
        n = 1 << fiber.m
        return cls(fiber, np.zeros((n, n), dtype=complex))

    @classmethod
    def monomial(cls, fiber, holo=(), anti=(), value=1.0):
        """value * dz^holo wedge dzbar^anti (0-based increasing indices)."""
        f = cls.zero(fiber)
        f.coeff[_mask(holo), _mask(anti)] = value
        return f

    @classmethod
    def from_matrix11(cls, fiber, h):
        """(1,1)-form i * sum h[i,j] dz^i wedge dzbar^j."""
        h = np.asarray(h, dtype=complex)
        f = cls.zero(fiber)
        for i in range(fiber.m):
            for j in range(fiber.m):
                f.coeff[1 << i, 1 << j] = 1j * h[i, j]
        return f

    @classmethod
    def kaehler_form(cls, fiber):
        return cls.from_matrix11(fiber, fiber.metric)

    # -- basic structure ------------------------------------------------
    @property
    def m(self):
        return self.fiber.m

    def bidegrees(self):
        """Set of (p, q) bidegrees carried by nonzero coefficients."""
        out = set()
        for i, j in zip(*np.nonzero(self.coeff)):
            out.add((_popcount(int(i)), _popcount(int(j))))
        return out

    def bidegree(self):
        degs = self.bidegrees()
        if len(degs) > 1:
            raise FiberError(f"form is not homogeneous: {sorted(degs)}")
        return degs.pop() if degs else None

    def matrix11(self):
        """Coefficient matrix h of a (1,1)-form i*sum h dz dzbar."""
        deg = self.bidegree()
        if deg not in (None, (1, 1)):
            raise FiberError("not a (1,1)-form")
        h = np.zeros((self.m, self.m), dtype=complex)
        for i in range(self.m):
            for j in range(self.m):
                h[i, j] = -1j * self.coeff[1 << i, 1 << j]
        return h

    def conjugate(self):
        out = FiberForm.zero(self.fiber)
        for i, j in zip(*np.nonzero(self.coeff)):
            i, j = int(i), int(j)
            s = -1 if (_popcount(i) * _popcount(j)) & 1 else 1
            out.coeff[j, i] = s * np.conj(self.coeff[i, j])
        return out

    def __add__(self, other):
        self._same_fiber(other)
        return FiberForm(self.fiber, self.coeff + other.coeff)

    def __sub__(self, other):
        self._same_fiber(other)
        return FiberForm(self.fiber, self.coeff - other.coeff)

    def __mul__(self, z):
        return FiberForm(self.fiber, self.coeff * z)

    __rmul__ = __mul__

    def _same_fiber(self, other):
        if other.fiber != self.fiber:
            raise FiberError("forms live on different fibers")

    def to_json_dict(self):
        """Explicit (multi-index -> [re, im]) map for reports."""
        out = {}
        for i, j in zip(*np.nonzero(self.coeff)):
            key = ",".join(str(b + 1) for b in _bits(int(i)))
            key += "|" + ",".join(str(b + 1) for b in _bits(int(j)))
            v = self.coeff[i, j]
            out[key] = [float(v.real), float(v.imag)]
        return out


# -- wedge --------------------------------------------------------------

def _wedge_coeff(c1, c2, m):
    n = 1 << m
    i1, j1 = np.nonzero(c1)
    i2, j2 = np.nonzero(c2)
    out = np.zeros((n, n), dtype=complex)
    if len(i1) and len(i2):
        wedge_accumulate(
            i1.astype(np.int64), j1.astype(np.int64), c1[i1, j1],
            i2.astype(np.int64), j2.astype(np.int64), c2[i2, j2], out,
        )
    return out


def wedge(f, g):
    f._same_fiber(g)
    for (p1, q1) in f.bidegrees():
        for (p2, q2) in g.bidegrees():
            if p1 + p2 > f.m or q1 + q2 > f.m:
                raise FiberError("bidegree overflow in wedge")
    return FiberForm(f.fiber, _wedge_coeff(f.coeff, g.coeff, f.m))


# -- coframe change -----------------------------------------------------

def _family_image(mask, B, m):
    """Image of dz^mask under dz^i -> sum_a B[i,a] dz^a, as a mask vector."""
    vec = np.zeros(1 << m, dtype=complex)
    vec[0] = 1.0
    for i in _bits(mask):
        new = np.zeros_like(vec)
        for a in range(m):
            if B[i, a] == 0:
                continue
            bit = 1 << a
            nz = np.nonzero(vec)[0]
            for c in nz:
                c = int(c)
                if c & bit:
                    continue
                # append dz^a on the right of the existing product
                new[c | bit] += _merge_sign(c, bit) * vec[c] * B[i, a]
        vec = new
    return vec


def _change_generators(coeff, B, m):
    """Substitute dz^i -> sum B[i,a] dz'^a (and conjugates on dzbar)."""
    n = 1 << m
    out = np.zeros((n, n), dtype=complex)
    Bc = B.conj()
    hol_cache, anti_cache = {}, {}
    for i, j in zip(*np.nonzero(coeff)):
        i, j = int(i), int(j)
        if i not in hol_cache:
            hol_cache[i] = _family_image(i, B, m)
        if j not in anti_cache:
            anti_cache[j] = _family_image(j, Bc, m)
        out += coeff[i, j] * np.outer(hol_cache[i], anti_cache[j])
    return out


def _to_unitary(f):
    if f.fiber.is_standard:
        return f.coeff
    B, _ = f.fiber.coframe_change()
    return _change_generators(f.coeff, B, f.m)


def _from_unitary(fiber, coeff):
    if fiber.is_standard:
        return FiberForm(fiber, coeff)
    _, M = fiber.coframe_change()
    # inverse substitution: phi^a = sum_i M[a,i] dz^i
    return FiberForm(fiber, _change_generators(coeff, M, fiber.m))


# -- inner product ------------------------------------------------------

def inner(f, g):
    """Hermitian inner product, monomials in a unitary coframe orthonormal."""
    f._same_fiber(g)
    cf, cg = _to_unitary(f), _to_unitary(g)
    return complex(np.sum(cf * cg.conj()))


def norm2(f):
    c = _to_unitary(f)
    return float(np.sum(np.abs(c) ** 2))


# -- standard-fiber operator matrices -----------------------------------

def _basis_index(i, j, m):
    return i * (1 << m) + j


def _ops(m):
    """Operator matrices (L, Lambda, star, vol coefficient) on the standard fiber."""
    if m in _OP_CACHE:
        return _OP_CACHE[m]
    if m > 5:
        raise FiberError("operator matrices are built only for m <= 5")
    n = 1 << m
    N = n * n
    L = np.zeros((N, N), dtype=complex)
    for i in range(n):
        pi = _popcount(i)
        for j in range(n):
            src = _basis_index(i, j, m)
            for k in range(m):
                bit = 1 << k
                if (i & bit) or (j & bit):
                    continue
                s = _merge_sign(bit, i) * _merge_sign(bit, j)
                if pi & 1:
                    s = -s
                L[_basis_index(i | bit, j | bit, m), src] += 1j * s
    Lam = L.conj().T

    # volume form omega^m / m! as a coefficient on the top monomial
    fiber = HermitianFiber(m)
    om = FiberForm.kaehler_form(fiber)
    top = FiberForm.monomial(fiber, (), ())
    for _ in range(m):
        top = FiberForm(fiber, _wedge_coeff(top.coeff, om.coeff, m))
    vol_coeff = top.coeff[n - 1, n - 1] / factorial(m)

    # star: conj(S b_{I,J}) is the complementary monomial normalized so
    # that b_{I,J} wedge conj(S b_{I,J}) = vol
    star = np.zeros((N, N), dtype=complex)
    full = n - 1
    for i in range(n):
        for j in range(n):
            ic, jc = full ^ i, full ^ j
            a = np.zeros((n, n), dtype=complex)
            a[i, j] = 1.0
            b = np.zeros((n, n), dtype=complex)
            b[ic, jc] = 1.0
            prod = _wedge_coeff(a, b, m)
            s = prod[full, full]
            c = vol_coeff / s
            # S b = conj(c * b_{ic,jc}) with the monomial conjugation sign
            sgn = -1 if (_popcount(ic) * _popcount(jc)) & 1 else 1
            star[_basis_index(jc, ic, m), _basis_index(i, j, m)] = sgn * np.conj(c)
    _OP_CACHE[m] = {"L": L, "Lam": Lam, "star": star, "vol": vol_coeff}
    return _OP_CACHE[m]


def _apply_op(f, name):
    ops = _ops(f.m)
    c = _to_unitary(f)
    out = (ops[name] @ c.reshape(-1)).reshape(c.shape)
    return _from_unitary(f.fiber, out)


def lefschetz_L(f):
    """Wedge with the Kahler form of the fiber metric."""
    om = FiberForm.kaehler_form(f.fiber)
    for (p, q) in f.bidegrees():
        if p + 1 > f.m or q + 1 > f.m:
            raise FiberError("bidegree overflow in Lefschetz L")
    return wedge(om, f)


def lefschetz_Lambda(f):
    """Adjoint of lefschetz_L with respect to the fiber inner product."""
    return _apply_op(f, "Lam")


def _conj_coeff(c):
    """Coefficients of the conjugate form (mask swap, sign, conjugation)."""
    n = c.shape[0]
    out = np.zeros_like(c)
    for i, j in zip(*np.nonzero(c)):
        i, j = int(i), int(j)
        s = -1 if (_popcount(i) * _popcount(j)) & 1 else 1
        out[j, i] = s * np.conj(c[i, j])
    return out


def hodge_star(f):
    """Conjugate-linear star: g wedge hodge_star(f) = <g, f> vol for all g."""
    ops = _ops(f.m)
    c = _to_unitary(f)
    out = (ops["star"] @ c.reshape(-1)).reshape(c.shape)
    return _from_unitary(f.fiber, _conj_coeff(out))


def volume_form(fiber):
    om = FiberForm.kaehler_form(fiber)
    out = FiberForm.monomial(fiber, (), ())
    for _ in range(fiber.m):
        out = FiberForm(fiber, _wedge_coeff(out.coeff, om.coeff, fiber.m))
    return (1.0 / factorial(fiber.m)) * out


def top_coefficient(f):
    """Coefficient of a (m,m)-form relative to the volume form."""
    fiber = f.fiber
    vol = volume_form(fiber)
    n = (1 << fiber.m) - 1
    return f.coeff[n, n] / vol.coeff[n, n]


# -- identity checks ----------------------------------------------------

def verify_kaehler_identities(m, max_degree=None):
    """Residuals of L star = star Lambda and the [L^l, Lambda] formula.

    Checked as operator identities on every basis monomial of total
    degree k <= max_degree on the standard fiber.
    """
    if m > 5:
        raise FiberError("combinatorial blow-up bound: m <= 5")
    if max_degree is None:
        max_degree = 2 * m
    ops = _ops(m)
    L, Lam, star = ops["L"], ops["Lam"], ops["star"]
    n = 1 << m
    res_star = 0.0
    res_comm = 0.0
    # conjugation matrix: star is conjugate-linear, compose on monomials
    conj_sign = np.zeros((n * n, n * n), dtype=complex)
    for i in range(n):
        for j in range(n):
            s = -1 if (_popcount(i) * _popcount(j)) & 1 else 1
            conj_sign[_basis_index(j, i, m), _basis_index(i, j, m)] = s

    def star_apply(vec):
        return star @ (conj_sign @ vec).conj()

    degrees = np.array(
        [_popcount(i) + _popcount(j) for i in range(n) for j in range(n)]
    )
    for idx in range(n * n):
        k = degrees[idx]
        if k > max_degree:
            continue
        v = np.zeros(n * n, dtype=complex)
        v[idx] = 1.0
        # L * = * Lambda
        lhs = L @ star_apply(v)
        rhs = star_apply(Lam @ v)
        res_star = max(res_star, float(np.abs(lhs - rhs).max()))
        # [L^l, Lambda] = l (k - m + l - 1) L^(l-1)
        Lv = v
        for ell in range(1, m + 2):
            Lv_prev = Lv
            Lv = L @ Lv
            lhs = Lam @ Lv  # Lambda L^l v
            # L^l Lambda v
            w = Lam @ v
            for _ in range(ell):
                w = L @ w
            comm = w - lhs  # [L^l, Lambda] v
            expected = ell * (k - m + ell - 1) * Lv_prev
            res_comm = max(res_comm, float(np.abs(comm - expected).max()))
    passed = res_star < 1e-10 and res_comm < 1e-10
    return {
        "residual_L_star": res_star,
        "residual_commutator": res_comm,
        "max_residual": max(res_star, res_comm),
        "pass": passed,
    }


# -- Lemma L1 machinery --------------------------------------------------

def beta_tilde(s):
    """Real semi-positive (1,1)-form associated to a (p,0)-form."""
    deg = s.bidegree()
    if deg is None:
        return FiberForm.zero(s.fiber)
    p, q = deg
    if q != 0 or p < 1 or p > s.m - 1:
        raise FiberError("degree out of range for Lemma L1")
    sbar = s.conjugate()
    w = wedge(s, sbar)
    w = ((1j) ** ((p * p) % 4) / factorial(p)) * w
    for _ in range(p - 1):
        w = lefschetz_Lambda(w)
    return w


def verify_L1(s, eta):
    """Residual pair for the trace identity and the wedge identity.

    r1: |Lambda beta_tilde - |s|^2|;  r2: mismatch of the top-form identity
    relating eta wedge s wedge sbar against trace and pairing terms.
    """
    fiber = s.fiber
    p, _ = s.bidegree()
    m = fiber.m
    h = eta.matrix11()
    if np.linalg.norm(h - h.conj().T) > 1e-9 * max(1.0, np.linalg.norm(h)):
        raise FiberError("eta must be a real (1,1)-form")
    bt = beta_tilde(s)
    ns = norm2(s)
    r1 = abs(top_coefficient_scalar(lefschetz_Lambda(bt)) - ns)

    lhs = wedge(wedge(eta, s), s.conjugate())
    om = FiberForm.kaehler_form(fiber)
    for _ in range(m - p - 1):
        lhs = wedge(lhs, om)
    lhs = ((1j) ** ((p * p) % 4) / factorial(m - p - 1)) * lhs
    tr_eta = top_coefficient_scalar(lefschetz_Lambda(eta))
    rhs = tr_eta * ns - p * inner(eta, bt)
    r2 = abs(top_coefficient(lhs) - rhs)
    return float(r1), float(r2)


def top_coefficient_scalar(f):
    """Scalar value of a (0,0)-form."""
    deg = f.bidegree()
    if deg not in (None, (0, 0)):
        raise FiberError("not a scalar form")
    return complex(f.coeff[0, 0])


# -- Bochner curvature term ---------------------------------------------

def check_kaehler_symmetries(R, tol=1e-8):
    """Max violation of the Kahler curvature symmetries of R[i,j,k,l]."""
    R = np.asarray(R, dtype=complex)
    scale = max(1.0, np.abs(R).max())
    r = max(
        np.abs(R - R.transpose(2, 1, 0, 3)).max(),
        np.abs(R - R.transpose(0, 3, 2, 1)).max(),
        np.abs(R - R.transpose(1, 0, 3, 2).conj()).max(),
    )
    return float(r / scale)


def _full_antisymmetric(s):
    """Antisymmetric coefficient array f[i1,...,ip] from a (p,0)-form."""
    from itertools import permutations

    p, _ = s.bidegree()
    m = s.m
    F = np.zeros((m,) * p, dtype=complex)
    for i, j in zip(*np.nonzero(s.coeff)):
        if j != 0:
            continue
        idx = tuple(_bits(int(i)))
        v = s.coeff[i, 0]
        for perm in permutations(range(p)):
            sgn = _perm_sign(perm)
            F[tuple(idx[k] for k in perm)] = sgn * v
    return F


def _perm_sign(perm):
    sgn = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, ln = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            ln += 1
        if ln % 2 == 0:
            sgn = -sgn
    return sgn


def bochner_rhs(R, s, v, tol=1e-8):
    """Curvature term of the Bochner identity for a (p,0)-form and direction v.

    Computed both directly and after diagonalizing the Hermitian form in
    the replaced index; returns (value, residual between the two routes).
    """
    R = np.asarray(R, dtype=complex)
    if check_kaehler_symmetries(R) > tol:
        raise FiberError("curvature lacks Kahler symmetries")
    v = np.asarray(v, dtype=complex)
    if abs(np.linalg.norm(v) - 1.0) > 1e-8:
        raise FiberError("direction must be a unit vector")
    p, q = s.bidegree() or (0, 0)
    if q != 0:
        raise FiberError("s must be a (p,0)-form")
    m = s.m
    A = np.einsum("ijkl,i,j->kl", R, v, v.conj())
    F = _full_antisymmetric(s)
    pf = factorial(p)

    def term(Amat, Farr):
        acc = 0.0 + 0.0j
        idx_all = np.ndindex(*(m,) * p)
        for I in idx_all:
            fI = Farr[I]
            if fI == 0:
                continue
            for k in range(p):
                for l in range(m):
                    I2 = list(I)
                    I2[k] = l
                    acc += Amat[I[k], l] * fI * np.conj(Farr[tuple(I2)])
        return acc / pf

    direct = term(A, F)
    # diagonalized route: rotate the frame so A is diagonal
    w, U = np.linalg.eigh(A)
    Frot = F
    for axis in range(p):
        Frot = np.tensordot(Frot, U, axes=([0], [0]))
    D = np.diag(w)
    diag = term(D, Frot)
    return float(direct.real), float(abs(direct - diag))
