"""Theorem-level verification pipelines over the model catalog.

Each check evaluates the hypotheses and conclusions of a structural statement
about Hermitian connections numerically and reports one of four statuses:

    pass                  -- the implication is not violated (possibly vacuously)
    fail                  -- a recorded residual exceeds its tolerance
    hypothesis-not-met    -- the statement's preconditions do not hold here
    approximation-unstable-- the holonomy approximation changed between orders

The checks never assume catalog tags: a finite catalog can only falsify a
universally quantified statement, so every "pass" is backed by recorded
numbers and vacuous satisfaction is branded with a branch annotation.
"""

import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

from . import conn, hol
from .models import CATALOG_NAMES, LieGroupModel, ModelError, catalog

SCHEMA_VERSION = 1
DEFAULT_SEED = 0x5EED
DEFAULT_SAMPLES = 20

CHECK_NAMES = (
    "bianchi",
    "torsion-relations",
    "theorem-1-2",
    "prop-lich2",
    "bracket-jacobi",
    "prop-cy",
)

# checks that quantify over a single connection kind
KIND_CHECKS = ("bianchi", "theorem-1-2", "prop-lich2", "prop-cy")

PASS = "pass"
FAIL = "fail"
HYP = "hypothesis-not-met"
UNSTABLE = "approximation-unstable"


class ConfigError(ValueError):
    pass


# -- tolerances ----------------------------------------------------------
#
# Each named threshold carries an exact-algebra value (Lie group models,
# where every tensor is closed-form) and a chart value sized to the
# finite-difference error budget at the default step h = 1e-4.

_TOL_TABLE = {
    "bianchi": (1e-10, 5e-4, "algebraic identity; chart budget from h=1e-4 FD"),
    "torsion-relations": (1e-10, 1e-4, "frame-contraction of FD torsion tensors"),
    "parallel-torsion": (1e-10, 1e-4, "nabla T noise floor of the outer FD step"),
    "torsion-zero": (1e-6, 1e-6, "Kahler detection threshold on the Chern torsion"),
    "ric-zero": (1e-6, 1e-5, "first-Ricci vanishing threshold; chart value "
                 "covers the h=1e-4 FD noise floor"),
    "jacobi": (1e-10, 1e-4, "cyclic bracket sum of FD torsion tensors"),
    "holo-curvature": (1e-12, 1e-4, "R(Z,X) block for (1,0) pairs, FD budget"),
    "ideal-mixing": (1e-14, 1e-14, "mixed Chern torsion is zero by construction"),
    "lich2-projection": (1e-10, 1e-4, "invariant-subspace torsion projection"),
}


def tolerance(name, model, overrides=None):
    """(value, provenance) for a named threshold on a given model."""
    if name not in _TOL_TABLE:
        raise ConfigError(f"unknown tolerance {name!r}")
    exact, chart, why = _TOL_TABLE[name]
    if overrides and name in overrides:
        return float(overrides[name]), "config override"
    if isinstance(model, LieGroupModel):
        return exact, f"{why} (exact algebra)"
    return chart, why


def _points(model, samples, rng):
    if isinstance(model, LieGroupModel):
        return [None]
    return list(model.sample_points(samples, rng))


def _entry(check, model, kind, t, status, branch, evidence, tols):
    return {
        "check": check,
        "model": getattr(model, "name", str(model)),
        "kind": kind,
        "t": t,
        "status": status,
        "branch": branch,
        "evidence": evidence,
        "tolerances": {
            k: {"value": v, "provenance": p} for k, (v, p) in tols.items()
        },
    }


# -- individual checks ---------------------------------------------------

def verify_bianchi(model, kind, samples=DEFAULT_SAMPLES, t=None, rng=None,
                   overrides=None):
    """Generalized first Bianchi identity residual over sample points."""
    rng = rng or np.random.default_rng(DEFAULT_SEED)
    tol, prov = tolerance("bianchi", model, overrides)
    worst = 0.0
    for x in _points(model, samples, rng):
        cd = conn.connection(model, x, kind, t=t)
        worst = max(worst, conn.bianchi_residual(cd))
    status = PASS if worst < tol else FAIL
    return _entry(
        "bianchi", model, kind, t, status, None,
        {"bianchi_residual": worst, "points": samples},
        {"bianchi": (tol, prov)},
    )


def verify_torsion_relations(model, samples=DEFAULT_SAMPLES, rng=None,
                             overrides=None):
    """Bismut/Chern torsion contraction relations over sample points."""
    rng = rng or np.random.default_rng(DEFAULT_SEED)
    tol, prov = tolerance("torsion-relations", model, overrides)
    worst = (0.0, 0.0, 0.0)
    flags = set()
    for x in _points(model, samples, rng):
        out = conn.torsion_relation_residuals(
            conn.bismut(model, x), conn.chern(model, x)
        )
        worst = tuple(max(a, b) for a, b in zip(worst, out["residuals"]))
        flags.add(out["sign_flipped"])
    consistent = len(flags) == 1
    status = PASS if max(worst) < tol and consistent else FAIL
    return _entry(
        "torsion-relations", model, None, None, status, None,
        {
            "residuals": list(worst),
            "sign_flipped": sorted(flags),
            "flag_constant": consistent,
        },
        {"torsion-relations": (tol, prov)},
    )


def verify_theorem_1_2(model, kind, samples=DEFAULT_SAMPLES, t=None, rng=None,
                       overrides=None):
    """Implication check: parallel torsion + irreducible holonomy +
    nonvanishing first Ricci must force a vanishing Chern torsion (Kahler).

    All five quantities are recorded; vacuous truth passes with a branch
    annotation naming the hypothesis that fails here."""
    rng = rng or np.random.default_rng(DEFAULT_SEED)
    tols = {
        name: tolerance(name, model, overrides)
        for name in ("parallel-torsion", "torsion-zero", "ric-zero")
    }
    pts = _points(model, samples, rng)
    nabla_t = conn.parallel_torsion_residual(
        model, kind, points=None if pts == [None] else pts, t=t
    )
    tc_max = 0.0
    ric_max = 0.0
    for x in pts:
        ct = conn.complex_torsion(conn.chern(model, x))
        tc_max = max(tc_max, float(np.abs(ct["holo"]).max()))
        cd = conn.connection(model, x, kind, t=t)
        ric_max = max(ric_max, float(np.abs(conn.curvature_scalars(cd).ric1).max()))
    order = 2 if isinstance(model, LieGroupModel) else 1
    alg, info = hol.holonomy_algebra(model, kind, pts[0], order=order, t=t)
    irreducible, _ = hol.is_irreducible(
        alg, n=model.m if info["ambient"] in (None, "u(m)") else 2 * model.m
    )
    in_su = None
    if info["ambient"] in (None, "u(m)"):
        in_su = hol.is_in_su(alg) if alg.dim else True
    parallel = nabla_t < tols["parallel-torsion"][0]
    kahler = tc_max < tols["torsion-zero"][0]
    ric_nonzero = ric_max > tols["ric-zero"][0]
    hypotheses = parallel and irreducible and info["stable"] and ric_nonzero
    violated = hypotheses and not kahler
    if kahler:
        branch = "conclusion-Kahler"
    elif not ric_nonzero:
        branch = "generalized-Calabi-Yau"
    elif not irreducible:
        branch = "hypothesis-reducible"
    elif not parallel:
        branch = "hypothesis-torsion-not-parallel"
    elif not info["stable"]:
        branch = "hypothesis-unmet-holonomy-unstable"
    else:
        branch = "violation"
    return _entry(
        "theorem-1-2", model, kind, t, FAIL if violated else PASS, branch,
        {
            "nabla_torsion_residual": nabla_t,
            "chern_torsion_max": tc_max,
            "ric1_max": ric_max,
            "holonomy_dim": alg.dim,
            "holonomy_dims_by_order": info["dims_by_order"],
            "holonomy_stable": info["stable"],
            "holonomy_ambient": info["ambient"],
            "irreducible": irreducible,
            "in_su": in_su,
        },
        tols,
    )


def verify_prop_lich2(model, kind, samples=DEFAULT_SAMPLES, t=None, rng=None,
                      overrides=None):
    """Reducible-holonomy torsion projection: with parallel torsion, an
    invariant subspace V carrying nonzero first Ricci must satisfy
    P_V(T(X, Y)) = 0 for all X, Y in V + conj(V)."""
    rng = rng or np.random.default_rng(DEFAULT_SEED)
    tols = {
        name: tolerance(name, model, overrides)
        for name in ("parallel-torsion", "ric-zero", "lich2-projection")
    }
    pts = _points(model, samples, rng)
    order = 2 if isinstance(model, LieGroupModel) else 1
    alg, info = hol.holonomy_algebra(model, kind, pts[0], order=order, t=t)
    base = {
        "holonomy_dim": alg.dim,
        "holonomy_stable": info["stable"],
        "holonomy_ambient": info["ambient"],
    }
    if info["ambient"] not in (None, "u(m)"):
        return _entry("prop-lich2", model, kind, t, HYP,
                      "holonomy-not-complex-linear", base, tols)
    m = model.m
    # candidate invariant subspaces: eigenspace clusters of non-scalar
    # commutant elements (unitary-frame coordinates)
    com = hol.commutant(alg, n=m)
    base["commutant_dim"] = len(com)
    if len(com) == 1:
        return _entry("prop-lich2", model, kind, t, HYP,
                      "holonomy-irreducible", base, tols)
    candidates = []
    for c in com:
        c = c / max(np.abs(c).max(), 1e-300)
        if np.abs(c - (np.trace(c) / m) * np.eye(m)).max() < 1e-8:
            continue
        herm = c + c.conj().T
        if np.abs(herm - (np.trace(herm) / m) * np.eye(m)).max() < 1e-8:
            herm = 1j * (c - c.conj().T)
        w, v = np.linalg.eigh(herm)
        groups = [[0]]
        for i in range(1, m):
            if abs(w[i] - w[groups[-1][-1]]) < 1e-6 * max(1.0, abs(w[i])):
                groups[-1].append(i)
            else:
                groups.append([i])
        if len(groups) > 1:
            for grp in groups:
                candidates.append(v[:, grp])
    if not candidates:
        return _entry("prop-lich2", model, kind, t, HYP,
                      "no-invariant-subspace-witness", base, tols)
    nabla_t = conn.parallel_torsion_residual(
        model, kind, points=None if pts == [None] else pts, t=t
    )
    base["nabla_torsion_residual"] = nabla_t
    if nabla_t > tols["parallel-torsion"][0]:
        return _entry("prop-lich2", model, kind, t, HYP,
                      "torsion-not-parallel", base, tols)
    E, P10 = conn.complex_frame(m)
    worst_proj = None
    ric_v = None
    zero_ric = 0
    for x in pts:
        cd = conn.connection(model, x, kind, t=t)
        ric1 = conn.curvature_scalars(cd).ric1
        _, M = cd.fiber.coframe_change()
        Ucol = np.linalg.inv(M)
        T = cd.torsion.astype(complex)
        scale = max(float(np.abs(T).max()), 1.0)
        for W in candidates:
            # V in coordinate-frame (1,0) components, then real-frame columns
            VC = Ucol @ W
            rv = float(np.abs(
                np.einsum("ij,ia,jb->ab", ric1, VC, VC.conj())
            ).max())
            if rv < tols["ric-zero"][0]:
                zero_ric += 1
                continue
            Q = (W @ W.conj().T) @ M @ P10  # (1,0)-part, projected onto V
            cols = [E @ VC[:, a] for a in range(VC.shape[1])]
            cols += [c.conj() for c in cols]
            proj = 0.0
            for X in cols:
                for Y in cols:
                    txy = np.einsum("cab,a,b->c", T, X, Y)
                    proj = max(proj, float(np.abs(Q @ txy).max()),
                               float(np.abs((Q @ txy.conj()).conj()).max()))
            proj /= scale
            if worst_proj is None or proj > worst_proj:
                worst_proj, ric_v = proj, rv
    if worst_proj is None:
        return _entry("prop-lich2", model, kind, t, HYP,
                      "no-subspace-with-nonzero-ricci", base, tols)
    base["projection_residual"] = worst_proj
    base["ric1_on_subspace"] = ric_v
    base["subspaces_with_zero_ricci"] = zero_ric
    status = PASS if worst_proj < tols["lich2-projection"][0] else FAIL
    branch = "some-subspaces-ricci-zero" if zero_ric else None
    return _entry("prop-lich2", model, kind, t, status, branch, base, tols)


def verify_bracket_jacobi(model, samples=DEFAULT_SAMPLES, rng=None,
                          overrides=None):
    """Torsion brackets on (1,0) frames: with parallel Bismut torsion, the
    Chern-torsion and Bismut-torsion brackets satisfy Jacobi, the (1,0) and
    (0,1) halves do not mix, and R(Z,X) = 0 for (1,0) pairs."""
    rng = rng or np.random.default_rng(DEFAULT_SEED)
    tols = {
        name: tolerance(name, model, overrides)
        for name in ("parallel-torsion", "jacobi", "ideal-mixing",
                     "holo-curvature")
    }
    pts = _points(model, samples, rng)
    nabla_t = conn.parallel_torsion_residual(
        model, "bismut", points=None if pts == [None] else pts
    )
    base = {"nabla_torsion_residual": nabla_t}
    if nabla_t > tols["parallel-torsion"][0]:
        return _entry("bracket-jacobi", model, None, None, HYP,
                      "bismut-torsion-not-parallel", base, tols)
    m = model.m
    E, _ = conn.complex_frame(m)

    def jacobi(T):
        # cyclic sum of T(T(e_i, e_j), e_k) with complex-coefficient vectors
        B = np.einsum("cab,ai,bj->cij", T, E, E, optimize=True)
        JB = np.einsum("dce,cij,ek->dijk", T, B, E, optimize=True)
        cyc = JB + JB.transpose(0, 2, 3, 1) + JB.transpose(0, 3, 1, 2)
        return float(np.abs(cyc).max())

    jac_c = jac_b = mixing = footnote = 0.0
    for x in pts:
        cd_c = conn.chern(model, x)
        cd_b = conn.bismut(model, x)
        Tc = cd_c.torsion.astype(complex)
        Tb = cd_b.torsion.astype(complex)
        jac_c = max(jac_c, jacobi(Tc))
        jac_b = max(jac_b, jacobi(Tb))
        ct = conn.complex_torsion(cd_c)
        mixing = max(mixing, float(np.abs(ct["mixed10"]).max()),
                     float(np.abs(ct["mixed01"]).max()))
        # full operator R(e_i, e_j) of the Bismut connection
        Rc = np.einsum("abdc,ai,bj->ijdc", cd_b.curvature.astype(complex),
                       E, E, optimize=True)
        footnote = max(footnote, float(np.abs(Rc).max()))
    base.update({
        "jacobi_chern_bracket": jac_c,
        "jacobi_bismut_bracket": jac_b,
        "ideal_mixing": mixing,
        "holo_curvature_max": footnote,
    })
    ok = (
        jac_c < tols["jacobi"][0]
        and jac_b < tols["jacobi"][0]
        and mixing < tols["ideal-mixing"][0]
        and footnote < tols["holo-curvature"][0]
    )
    return _entry("bracket-jacobi", model, None, None, PASS if ok else FAIL,
                  None, base, tols)


def verify_prop_cy(model, kind, samples=DEFAULT_SAMPLES, t=None, rng=None,
                   overrides=None):
    """Holonomy-in-SU(m) iff vanishing first Ricci, via both sides."""
    rng = rng or np.random.default_rng(DEFAULT_SEED)
    pts = _points(model, samples, rng)
    tols = {"ric-zero": tolerance("ric-zero", model, overrides)}
    try:
        out = hol.ricci_vs_su_check(
            model, kind, sample_points=None if pts == [None] else pts, t=t,
            order=2 if isinstance(model, LieGroupModel) else 1,
            ric_tol=tols["ric-zero"][0],
        )
    except hol.HolError as exc:
        return _entry("prop-cy", model, kind, t, HYP, str(exc), {}, tols)
    if not out["stable"]:
        status = UNSTABLE
    elif out["agree"]:
        status = PASS
    else:
        status = FAIL
    return _entry("prop-cy", model, kind, t, status, None, dict(out), tols)


_CHECK_FNS = {
    "bianchi": verify_bianchi,
    "torsion-relations": verify_torsion_relations,
    "theorem-1-2": verify_theorem_1_2,
    "prop-lich2": verify_prop_lich2,
    "bracket-jacobi": verify_bracket_jacobi,
    "prop-cy": verify_prop_cy,
}


# -- configuration -------------------------------------------------------

@dataclass
class CheckConfig:
    """One resolved (check, model, kind, t) task from the config file."""

    index: int
    check: str
    model_name: str
    params: dict = field(default_factory=dict)
    kind: str = None
    t: float = None
    samples: int = DEFAULT_SAMPLES
    tolerances: dict = field(default_factory=dict)

    def build_model(self):
        return catalog(self.model_name, **{
            k: (tuple(v) if isinstance(v, list) else v)
            for k, v in self.params.items()
        })


@dataclass
class RunConfig:
    seed: int
    output: str
    tasks: list


def load_config(path):
    """Parse and validate a TOML config; unknown names are rejected here."""
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML in {path}: {exc}") from exc
    seed = int(data.get("seed", DEFAULT_SEED))
    output = data.get("output", "holomat-report.json")
    default_samples = int(data.get("samples", DEFAULT_SAMPLES))
    runs = data.get("run", [])
    if not isinstance(runs, list) or not runs:
        raise ConfigError("config needs at least one [[run]] table")
    tasks = []
    for r in runs:
        if "model" not in r:
            raise ConfigError("[[run]] table missing 'model'")
        name = r["model"]
        if name not in CATALOG_NAMES:
            raise ConfigError(
                f"unknown model {name!r}; catalog: {', '.join(CATALOG_NAMES)}"
            )
        checks = r.get("checks", [])
        if not checks:
            raise ConfigError(f"[[run]] for {name!r} has no checks")
        for c in checks:
            if c not in CHECK_NAMES:
                raise ConfigError(
                    f"unknown check {c!r}; options: {', '.join(CHECK_NAMES)}"
                )
        kinds = r.get("kinds", ["chern"])
        for k in kinds:
            if k not in conn.KINDS:
                raise ConfigError(
                    f"unknown kind {k!r}; options: {', '.join(conn.KINDS)}"
                )
        ts = r.get("t", None)
        ts = [None] if ts is None else (
            [float(x) for x in ts] if isinstance(ts, list) else [float(ts)]
        )
        params = dict(r.get("params", {}))
        samples = int(r.get("samples", default_samples))
        overrides = dict(r.get("tolerances", {}))
        for c in checks:
            if c in KIND_CHECKS:
                for k in kinds:
                    for t in (ts if k == "gauduchon" else [None]):
                        if k == "gauduchon" and t is None:
                            raise ConfigError(
                                "gauduchon kind needs t in the [[run]] table"
                            )
                        tasks.append(CheckConfig(
                            len(tasks), c, name, params, k, t,
                            samples, overrides,
                        ))
            else:
                tasks.append(CheckConfig(
                    len(tasks), c, name, params, None, None, samples, overrides,
                ))
    return RunConfig(seed, output, tasks)


# -- execution and reporting ---------------------------------------------

def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer, int)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, (np.complexfloating, complex)):
        return [float(x.real), float(x.imag)]
    return x


def execute_check(task, seed):
    rng = np.random.default_rng([seed, task.index])
    model = task.build_model()
    fn = _CHECK_FNS[task.check]
    kwargs = {"samples": task.samples, "rng": rng, "overrides": task.tolerances}
    if task.check in KIND_CHECKS:
        return fn(model, task.kind, t=task.t, **kwargs)
    return fn(model, **kwargs)


def _thread_count():
    env = os.environ.get("HOLOMAT_THREADS", "").strip()
    if env:
        n = int(env)
        if n < 1:
            raise ConfigError("HOLOMAT_THREADS must be a positive integer")
        return n
    return min(8, os.cpu_count() or 1)


def run_tasks(tasks, seed):
    """Execute checks concurrently; results keep task order."""
    with ThreadPoolExecutor(max_workers=_thread_count()) as pool:
        return list(pool.map(lambda t: execute_check(t, seed), tasks))


def assemble_report(cfg, results, config_path):
    counts = {s: 0 for s in (PASS, FAIL, HYP, UNSTABLE)}
    for r in results:
        counts[r["status"]] += 1
    return {
        "schema": SCHEMA_VERSION,
        "header": {
            "generated_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
            "tool": "holomat",
            "seed": cfg.seed,
            "config": os.path.basename(str(config_path)),
        },
        "summary": {"total": len(results), **counts},
        "checks": [_jsonable(r) for r in results],
    }


def exit_code(report):
    s = report["summary"]
    if s[FAIL]:
        return 2
    if s[UNSTABLE]:
        return 3
    return 0


def run(config_path, output_override=None):
    """Execute a config; returns (exit_code, report).  Raises ConfigError
    (callers map it to exit 1) on malformed input."""
    cfg = load_config(config_path)
    results = run_tasks(cfg.tasks, cfg.seed)
    report = assemble_report(cfg, results, config_path)
    out = output_override or cfg.output
    if out:
        with open(out, "w") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return exit_code(report), report
