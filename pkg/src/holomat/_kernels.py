"""Hot numeric kernels with a numba fast path and a pure-numpy fallback.

Set HOLOMAT_NO_NUMBA=1 to force the fallback path (used by the benchmark
and as an escape hatch on platforms where numba misbehaves).  Both paths
compute bit-identical results up to floating point associativity.
"""

import os

import numpy as np

USE_NUMBA = os.environ.get("HOLOMAT_NO_NUMBA", "0") not in ("1", "true", "yes")

if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover
        USE_NUMBA = False

if not USE_NUMBA:
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(f):
            return f

        return wrap


@njit(cache=True)
def _popcount(x):
    n = 0
    while x:
        x &= x - 1
        n += 1
    return n


@njit(cache=True)
def _merge_sign(a, b):
    """Sign of reordering the concatenation of two increasing index sets.

    `a` and `b` are disjoint bitmasks; returns (-1)**(number of transpositions
    needed to sort the concatenated generators of a then b).
    """
    sign = 1
    bb = b
    while bb:
        low = bb & (-bb)
        # generators of `a` strictly above this element of `b`
        above = a & ~(low - 1) & ~low
        if _popcount(above) & 1:
            sign = -sign
        bb &= bb - 1
    return sign


@njit(cache=True)
def wedge_accumulate(i1, j1, v1, i2, j2, v2, out):
    """Accumulate the wedge of two sparse mask-indexed forms into `out`.

    Monomials are dz^I wedge dzbar^J keyed by bitmask pairs (I, J); wedging
    (I1,J1) with (I2,J2) moves dz^I2 across dzbar^J1, hence the extra
    (-1)**(|J1|*|I2|) factor.
    """
    for a in range(i1.shape[0]):
        ia = i1[a]
        ja = j1[a]
        pa = _popcount(ja)
        for b in range(i2.shape[0]):
            ib = i2[b]
            jb = j2[b]
            if (ia & ib) or (ja & jb):
                continue
            s = _merge_sign(ia, ib) * _merge_sign(ja, jb)
            if (pa * _popcount(ib)) & 1:
                s = -s
            out[ia | ib, ja | jb] += s * v1[a] * v2[b]


@njit(cache=True)
def quartic_values(R, X):
    """Batch evaluation of the holomorphic-sectional quartic form.

    R has Kahler symmetries, indexed R[i,j,k,l] ~ R_{i jbar k lbar};
    X is (n, m) complex; returns the n real values R(x,xbar,x,xbar).
    """
    n, m = X.shape
    out = np.empty(n)
    for t in range(n):
        acc = 0.0 + 0.0j
        for i in range(m):
            for j in range(m):
                zij = X[t, i] * np.conj(X[t, j])
                if zij == 0:
                    continue
                for k in range(m):
                    for l in range(m):
                        acc += R[i, j, k, l] * zij * X[t, k] * np.conj(X[t, l])
        out[t] = acc.real
    return out


@njit(cache=True)
def quartic_gradients(R, X):
    """Batch conjugate gradients 2*sum_{ikl} R[i,j,k,l] x_i x_k conj(x_l)."""
    n, m = X.shape
    out = np.empty((n, m), dtype=np.complex128)
    for t in range(n):
        for j in range(m):
            acc = 0.0 + 0.0j
            for i in range(m):
                for k in range(m):
                    zik = X[t, i] * X[t, k]
                    if zik == 0:
                        continue
                    for l in range(m):
                        acc += R[i, j, k, l] * zik * np.conj(X[t, l])
            out[t, j] = 2.0 * acc
    return out


def quartic_values_numpy(R, X):
    """Vectorized reference for quartic_values (always available)."""
    return np.einsum("ijkl,ti,tj,tk,tl->t", R, X, X.conj(), X, X.conj()).real


def quartic_gradients_numpy(R, X):
    return 2.0 * np.einsum("ijkl,ti,tk,tl->tj", R, X, X, X.conj())


if not USE_NUMBA:
    quartic_values = quartic_values_numpy  # noqa: F811
    quartic_gradients = quartic_gradients_numpy  # noqa: F811
