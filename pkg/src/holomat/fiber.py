"""Linear algebra on a single Hermitian fiber.

A fiber is a complex m-dimensional inner-product space together with its
real 2m-dimensional realification.  Real coordinates are ordered
(x_1..x_m, y_1..y_m) with z = x + iy, so the complex structure J sends
the x-block to the y-block.  A complex matrix a = alpha + i*beta acts on
the realification as [[alpha, -beta], [beta, alpha]].
"""

from dataclasses import dataclass, field

import numpy as np

SKEW_TOL = 1e-9


class FiberError(ValueError):
    pass


def standard_J(m):
    J = np.zeros((2 * m, 2 * m))
    J[:m, m:] = -np.eye(m)
    J[m:, :m] = np.eye(m)
    return J


@dataclass(frozen=True)
class HermitianFiber:
    """Complex m-dimensional fiber with a Hermitian positive-definite metric."""

    m: int
    metric: np.ndarray = None

    def __post_init__(self):
        if self.m < 1:
            raise FiberError("fiber dimension must be positive")
        g = self.metric
        if g is None:
            g = np.eye(self.m, dtype=complex)
        g = np.asarray(g, dtype=complex)
        if g.shape != (self.m, self.m):
            raise FiberError(f"metric must be {self.m}x{self.m}")
        if np.linalg.norm(g - g.conj().T) > 1e-10 * max(1.0, np.linalg.norm(g)):
            raise FiberError("metric is not Hermitian")
        if np.linalg.eigvalsh(g).min() <= 0:
            raise FiberError("metric is not positive definite")
        object.__setattr__(self, "metric", g)

    @property
    def J(self):
        return standard_J(self.m)

    @property
    def is_standard(self):
        return np.allclose(self.metric, np.eye(self.m), atol=1e-14)

    def coframe_change(self):
        """Matrix B with dz^i = sum_a B[i, a] phi^a, phi a unitary coframe.

        Built from the Cholesky factor metric = C C^dagger; orthonormal
        vector coordinates are v' = C^T v and the coframe transforms
        contragrediently.
        """
        C = np.linalg.cholesky(self.metric)
        M = C.T
        return np.linalg.inv(M), M

    def __hash__(self):
        return hash((self.m, self.metric.tobytes()))

    def __eq__(self, other):
        return (
            isinstance(other, HermitianFiber)
            and self.m == other.m
            and np.array_equal(self.metric, other.metric)
        )


@dataclass(frozen=True)
class SkewEndo:
    """Element of u(m): complex matrix a with a + a^dagger = 0."""

    matrix: np.ndarray
    real_form: np.ndarray = field(default=None, compare=False)

    def __post_init__(self):
        a = np.asarray(self.matrix, dtype=complex)
        scale = max(1.0, np.linalg.norm(a))
        if np.linalg.norm(a + a.conj().T) > SKEW_TOL * scale:
            raise FiberError("matrix is not skew-Hermitian")
        object.__setattr__(self, "matrix", a)
        if self.real_form is not None:
            r = np.asarray(self.real_form, dtype=float)
            if not np.allclose(r, realify(a), atol=1e-9):
                raise FiberError("real_form does not match matrix")
            object.__setattr__(self, "real_form", r)

    @property
    def m(self):
        return self.matrix.shape[0]


def _as_matrix(a):
    return a.matrix if isinstance(a, SkewEndo) else np.asarray(a, dtype=complex)


def ad_inner_product(a, b):
    """Ad-invariant inner product on u(m): <a, b> = -2 Re tr(a b)."""
    am, bm = _as_matrix(a), _as_matrix(b)
    if am.shape != bm.shape:
        raise FiberError("dimension mismatch")
    for x in (am, bm):
        if np.linalg.norm(x + x.conj().T) > SKEW_TOL * max(1.0, np.linalg.norm(x)):
            raise FiberError("input is not skew-Hermitian")
    return -2.0 * np.trace(am @ bm).real


def realify(a):
    """Real 2m x 2m form of a complex-linear endomorphism."""
    am = _as_matrix(a)
    m = am.shape[0]
    r = np.zeros((2 * m, 2 * m))
    r[:m, :m] = am.real
    r[m:, m:] = am.real
    r[:m, m:] = -am.imag
    r[m:, :m] = am.imag
    return r


def complexify(r):
    """Inverse of realify; requires a skew r with [r, J] = 0."""
    r = np.asarray(r, dtype=float)
    n = r.shape[0]
    if n % 2:
        raise FiberError("realification has odd dimension")
    m = n // 2
    scale = max(1.0, np.linalg.norm(r))
    if np.linalg.norm(r + r.T) > SKEW_TOL * scale:
        raise FiberError("realification is not skew-symmetric")
    J = standard_J(m)
    if np.linalg.norm(r @ J - J @ r) > 1e-9 * scale:
        raise FiberError("not complex-linear")
    a = 0.5 * (r[:m, :m] + r[m:, m:]) + 0.5j * (r[m:, :m] - r[:m, m:])
    return SkewEndo(a)


def random_skew(m, rng):
    """Random element of u(m), entries O(1)."""
    x = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    return SkewEndo(0.5 * (x - x.conj().T))
