"""Concrete manifold backends: left-invariant Lie group structures and
coordinate-chart metrics with finite-difference derivatives.

Chart conventions: complex coordinates z in C^m, real coordinates
x = (Re z, Im z) in R^(2m).  The metric matrix G stores G[i, j] = g_{i jbar}
= <d/dz_i, d/dz_j>, a Hermitian positive-definite matrix.
"""

from dataclasses import dataclass, field

import numpy as np


class ModelError(ValueError):
    pass


def _check_hermitian_pd(G, what="metric"):
    G = np.asarray(G, dtype=complex)
    if np.linalg.norm(G - G.conj().T) > 1e-10 * max(1.0, np.linalg.norm(G)):
        raise ModelError(f"{what} is not Hermitian")
    if np.linalg.eigvalsh(G).min() <= 1e-8:
        raise ModelError(f"{what} is not positive definite")
    return G


@dataclass
class LieGroupModel:
    """Complex Lie algebra structure constants plus a left-invariant metric.

    structure_constants c[k, i, j] encode [e_i, e_j] = sum_k c[k,i,j] e_k
    on a left-invariant (1,0)-frame; the metric is the value at the identity.
    """

    m: int
    structure_constants: np.ndarray
    metric: np.ndarray = None
    name: str = "lie-group"

    def __post_init__(self):
        m = self.m
        c = np.asarray(self.structure_constants, dtype=complex)
        if c.shape != (m, m, m):
            raise ModelError(f"structure constants must be ({m},{m},{m})")
        if np.abs(c + c.transpose(0, 2, 1)).max() > 1e-12:
            raise ModelError("structure constants are not antisymmetric")
        self.structure_constants = c
        if self.metric is None:
            self.metric = np.eye(m, dtype=complex)
        self.metric = _check_hermitian_pd(self.metric)
        jr = self.jacobi_residual()
        if jr > 1e-12:
            raise ModelError(f"Jacobi identity violated (residual {jr:.2e})")

    def jacobi_residual(self):
        c = self.structure_constants
        # sum over cyclic of [[e_i, e_j], e_k]
        t = np.einsum("lij,slk->sijk", c, c)
        cyc = t + t.transpose(0, 2, 3, 1) + t.transpose(0, 3, 1, 2)
        return float(np.abs(cyc).max())

    def real_structure_constants(self):
        """Real structure constants f[c,a,b] on the frame (u_1..u_m, v_1..v_m)
        with u_i = e_i + conj(e_i), v_i = J u_i."""
        m = self.m
        c = self.structure_constants
        f = np.zeros((2 * m, 2 * m, 2 * m))
        re, im = c.real, c.imag
        for i in range(m):
            for j in range(m):
                for k in range(m):
                    # [u_i, u_j] = Re(c) u + Im(c) v
                    f[k, i, j] = re[k, i, j]
                    f[m + k, i, j] = im[k, i, j]
                    # [u_i, v_j] = -Im(c) u + Re(c) v; [v_i, u_j] by antisymmetry
                    f[k, i, m + j] = -im[k, i, j]
                    f[m + k, i, m + j] = re[k, i, j]
                    f[k, m + i, j] = im[k, j, i]
                    f[m + k, m + i, j] = -re[k, j, i]
                    # [v_i, v_j] = -Re(c) u - Im(c) v
                    f[k, m + i, m + j] = -re[k, i, j]
                    f[m + k, m + i, m + j] = -im[k, i, j]
        return f

    def real_metric(self):
        m = self.m
        E, F = 2 * self.metric.real, 2 * self.metric.imag
        g = np.zeros((2 * m, 2 * m))
        g[:m, :m] = E
        g[m:, m:] = E
        g[:m, m:] = F
        g[m:, :m] = -F
        return g


@dataclass
class ChartModel:
    """Smooth Hermitian metric on a coordinate box, FD derivatives."""

    m: int
    metric_fn: callable
    domain: np.ndarray  # (2m, 2) real low/high box
    fd_step: float = 1e-4
    derivative_order: int = 2
    name: str = "chart"
    domain_predicate: callable = None

    def __post_init__(self):
        d = np.asarray(self.domain, dtype=float)
        if d.shape != (2 * self.m, 2):
            raise ModelError("domain must be a (2m, 2) low/high box")
        self.domain = d
        # spot-check the metric over the domain
        rng = np.random.default_rng(0)
        for x in self.sample_points(8, rng):
            _check_hermitian_pd(self.metric_fn(self.to_complex(x)))

    def to_complex(self, x):
        x = np.asarray(x, dtype=float)
        return x[: self.m] + 1j * x[self.m :]

    def metric_at(self, x):
        return np.asarray(self.metric_fn(self.to_complex(x)), dtype=complex)

    def interior(self, x, margin=None):
        if margin is None:
            margin = 2 * self.fd_step
        x = np.asarray(x, dtype=float)
        ok = np.all(x >= self.domain[:, 0] + margin) and np.all(
            x <= self.domain[:, 1] - margin
        )
        if ok and self.domain_predicate is not None:
            ok = bool(self.domain_predicate(self.to_complex(x), margin))
        return ok

    def sample_points(self, count, rng, margin=None):
        if margin is None:
            margin = max(0.05, 4 * self.fd_step)
        lo = self.domain[:, 0] + margin
        hi = self.domain[:, 1] - margin
        pts = []
        for _ in range(100 * count):
            x = lo + (hi - lo) * rng.random(2 * self.m)
            if self.domain_predicate is None or self.domain_predicate(
                self.to_complex(x), margin
            ):
                pts.append(x)
            if len(pts) == count:
                return np.array(pts)
        raise ModelError("could not sample enough interior points")


# -- finite-difference metric jets --------------------------------------

def _fd_dir(fn, x, mu, h):
    e = np.zeros_like(x)
    e[mu] = h
    return (fn(x + e) - fn(x - e)) / (2 * h)


def metric_jet(model, x, order=2):
    """Metric value and Wirtinger derivatives at a chart point.

    Returns a dict with keys g, d (d[i] = partial_i g), dbar, ddbar
    (ddbar[i,j] = partial_i partial_jbar g), plus the max Hermitian
    asymmetry seen before symmetrization and a warning flag.
    """
    if not isinstance(model, ChartModel):
        raise ModelError("metric_jet needs a ChartModel")
    if order > model.derivative_order:
        raise ModelError("derivative order unsupported")
    x = np.asarray(x, dtype=float)
    if not model.interior(x):
        raise ModelError("point too close to domain boundary")
    m, h = model.m, model.fd_step
    g = model.metric_at(x)
    asym = float(np.linalg.norm(g - g.conj().T))
    out = {"g": 0.5 * (g + g.conj().T)}
    if order >= 1:
        d = np.empty((m, m, m), dtype=complex)
        for i in range(m):
            dx = _fd_dir(model.metric_at, x, i, h)
            dy = _fd_dir(model.metric_at, x, m + i, h)
            d[i] = 0.5 * (dx - 1j * dy)
        dbar = np.empty_like(d)
        # conjugate symmetry: partial_ibar g = (partial_i g^T)^conj transposed
        for i in range(m):
            dx = _fd_dir(model.metric_at, x, i, h)
            dy = _fd_dir(model.metric_at, x, m + i, h)
            dbar[i] = 0.5 * (dx + 1j * dy)
        for i in range(m):
            a = np.linalg.norm(d[i] - dbar[i].conj().T)
            asym = max(asym, a)
            sym = 0.5 * (d[i] + dbar[i].conj().T)
            d[i] = sym
            dbar[i] = sym.conj().T
        out["d"], out["dbar"] = d, dbar
    if order >= 2:
        dd = np.empty((m, m, m, m), dtype=complex)

        def dbar_j(x, j):
            dx = _fd_dir(model.metric_at, x, j, h)
            dy = _fd_dir(model.metric_at, x, m + j, h)
            return 0.5 * (dx + 1j * dy)

        for i in range(m):
            for j in range(m):
                dx = _fd_dir(lambda y: dbar_j(y, j), x, i, h)
                dy = _fd_dir(lambda y: dbar_j(y, j), x, m + i, h)
                dd[i, j] = 0.5 * (dx - 1j * dy)
        for i in range(m):
            for j in range(m):
                # Hermitianity: (d_i d_jbar g)_{k lbar} = conj of swapped
                a = np.linalg.norm(dd[i, j] - dd[j, i].conj().T)
                asym = max(asym, a)
                sym = 0.5 * (dd[i, j] + dd[j, i].conj().T)
                dd[i, j] = sym
                dd[j, i] = sym.conj().T
        out["ddbar"] = dd
    out["asymmetry"] = asym
    out["asymmetry_warning"] = asym > 100 * h * h
    return out


# -- catalog ------------------------------------------------------------

CATALOG_NAMES = (
    "flat",
    "torus-flat",
    "fubini-study",
    "hopf-surface",
    "complex-lie-group-2d",
    "complex-lie-group-heisenberg",
    "product",
    "perturbed",
)


@dataclass
class CatalogEntry:
    name: str
    params: dict = field(default_factory=dict)
    expected_properties: tuple = ()


def _fubini_study_metric(m):
    def fn(z):
        s = 1.0 + np.vdot(z, z).real
        return np.eye(m) / s - np.outer(z.conj(), z) / (s * s)

    return fn


def _box(m, half):
    return np.array([[-half, half]] * (2 * m), dtype=float)


def _hessian_abs4(z):
    return 2.0 * (np.vdot(z, z).real * np.eye(len(z)) + np.outer(z.conj(), z))


def _hessian_gauss(z):
    w = np.exp(-np.vdot(z, z).real)
    return w * (np.outer(z.conj(), z) - np.eye(len(z)))


_POTENTIAL_HESSIANS = {"abs4": _hessian_abs4, "gauss": _hessian_gauss}


def _lie_group_2d(metric=None):
    c = np.zeros((2, 2, 2), dtype=complex)
    c[1, 0, 1] = 1.0
    c[1, 1, 0] = -1.0
    return LieGroupModel(2, c, metric, name="complex-lie-group-2d")


def _lie_group_heisenberg(metric=None):
    c = np.zeros((3, 3, 3), dtype=complex)
    c[2, 0, 1] = 1.0
    c[2, 1, 0] = -1.0
    return LieGroupModel(3, c, metric, name="complex-lie-group-heisenberg")


def chart_realization(model, fd_step=1e-4):
    """Coordinate-chart realization of a catalog Lie group model."""
    if isinstance(model, ChartModel):
        return model
    if model.name == "complex-lie-group-2d":
        def fn(z):
            return np.diag([1.0, np.exp(-2.0 * z[0].real)]).astype(complex)

        return ChartModel(2, fn, _box(2, 0.5), fd_step, name=model.name + "-chart")
    if model.name == "complex-lie-group-heisenberg":
        def fn(z):
            A = np.eye(3, dtype=complex)
            A[2, 1] = -z[0]
            return (A.conj().T @ A).T

        return ChartModel(3, fn, _box(3, 0.5), fd_step, name=model.name + "-chart")
    raise ModelError(f"no chart realization for {model.name}")


def catalog(name, **params):
    """Construct a validated catalog model by name."""
    fd_step = params.pop("fd_step", 1e-4)
    if name == "flat":
        m = params.pop("m", 2)
        _no_extra(name, params)
        return ChartModel(
            m, lambda z: np.eye(m, dtype=complex), _box(m, 1.0), fd_step, name="flat"
        )
    if name == "torus-flat":
        m = params.pop("m", 2)
        G = params.pop("metric", None)
        _no_extra(name, params)
        if G is None:
            G = np.eye(m, dtype=complex) + 0.25 * (
                np.diag(np.arange(m)) + 0.5j * (np.eye(m, k=1) - np.eye(m, k=-1))
            )
        G = _check_hermitian_pd(G)
        return ChartModel(
            m, lambda z: G.copy(), _box(m, 1.0), fd_step, name="torus-flat"
        )
    if name == "fubini-study":
        m = params.pop("m", 2)
        _no_extra(name, params)
        return ChartModel(
            m, _fubini_study_metric(m), _box(m, 0.8), fd_step, name="fubini-study"
        )
    if name == "hopf-surface":
        m = params.pop("m", 2)
        _no_extra(name, params)
        if m != 2:
            raise ModelError("hopf-surface is a complex surface (m = 2)")

        def fn(z):
            return np.eye(2, dtype=complex) / np.vdot(z, z).real

        dom = np.array([[0.4, 1.4], [-0.8, 0.8], [-0.8, 0.8], [-0.8, 0.8]])
        pred = lambda z, margin: 0.5 + 2 * margin < np.linalg.norm(z) < 2.0 - 2 * margin
        return ChartModel(
            2, fn, dom, fd_step, name="hopf-surface", domain_predicate=pred
        )
    if name == "complex-lie-group-2d":
        G = params.pop("metric", None)
        _no_extra(name, params)
        return _lie_group_2d(G)
    if name == "complex-lie-group-heisenberg":
        G = params.pop("metric", None)
        _no_extra(name, params)
        return _lie_group_heisenberg(G)
    if name == "product":
        factors = params.pop("factors", ("flat", "fubini-study"))
        factor_params = params.pop("factor_params", ({}, {}))
        _no_extra(name, params)
        mods = []
        for fname, fparams in zip(factors, factor_params):
            mod = catalog(fname, fd_step=fd_step, **dict(fparams))
            mods.append(chart_realization(mod, fd_step))
        return product_model(mods, fd_step)
    if name == "perturbed":
        base_name = params.pop("base", "fubini-study")
        base_params = params.pop("base_params", {})
        eps = params.pop("eps", 0.05)
        potential = params.pop("potential", "abs4")
        _no_extra(name, params)
        base = catalog(base_name, fd_step=fd_step, **dict(base_params))
        base = chart_realization(base, fd_step)
        if potential not in _POTENTIAL_HESSIANS:
            raise ModelError(
                f"unknown potential {potential!r}; options: {sorted(_POTENTIAL_HESSIANS)}"
            )
        hess = _POTENTIAL_HESSIANS[potential]
        base_fn = base.metric_fn

        def fn(z):
            return np.asarray(base_fn(z), dtype=complex) + eps * hess(z)

        return ChartModel(
            base.m, fn, base.domain.copy(), fd_step,
            name=f"perturbed({base.name})", domain_predicate=base.domain_predicate,
        )
    raise ModelError(f"unknown model {name!r}; catalog: {', '.join(CATALOG_NAMES)}")


def _no_extra(name, params):
    if params:
        raise ModelError(f"unknown parameters for {name}: {sorted(params)}")


def product_model(models, fd_step=1e-4):
    ms = [mod.m for mod in models]
    m = sum(ms)
    splits = np.cumsum(ms)[:-1]

    def fn(z):
        parts = np.split(z, splits)
        G = np.zeros((m, m), dtype=complex)
        off = 0
        for mod, zz in zip(models, parts):
            G[off : off + mod.m, off : off + mod.m] = mod.metric_fn(zz)
            off += mod.m
        return G

    dom = np.zeros((2 * m, 2))
    off = 0
    for mod in models:
        mm = mod.m
        dom[off : off + mm] = mod.domain[:mm]
        dom[m + off : m + off + mm] = mod.domain[mm:]
        off += mm

    preds = [(mod, off) for mod, off in zip(models, np.concatenate([[0], splits]))]

    def pred(z, margin):
        for mod, off in preds:
            if mod.domain_predicate is not None:
                if not mod.domain_predicate(z[off : off + mod.m], margin):
                    return False
        return True

    name = "x".join(mod.name for mod in models)
    return ChartModel(m, fn, dom, fd_step, name=f"product({name})",
                      domain_predicate=pred)


def left_invariant_jet(model):
    """Invariant-frame structure data consumed by the connection module."""
    if not isinstance(model, LieGroupModel):
        raise ModelError("left_invariant_jet needs a LieGroupModel")
    return {
        "m": model.m,
        "f_real": model.real_structure_constants(),
        "g_real": model.real_metric(),
        "metric": model.metric,
        "c": model.structure_constants,
    }
