"""Induced U(m) action on exterior and tensor powers of C^m: wedge
representation matrices, torus-character projections, and commutant-based
irreducibility certificates."""

from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

RANK_TOL = 1e-8


class RepError(ValueError):
    pass


@dataclass(frozen=True)
class WedgeRep:
    """Exterior power representation of U(m) on wedge^p C^m."""

    m: int
    p: int

    def __post_init__(self):
        if not 1 <= self.p <= self.m:
            raise RepError("need 1 <= p <= m")

    @property
    def basis(self):
        return list(combinations(range(self.m), self.p))

    @property
    def dim(self):
        return comb(self.m, self.p)


def wedge_action(rep, g):
    """Matrix of wedge^p g: entries are p x p minors det(g[K, I])."""
    g = np.asarray(g, dtype=complex)
    basis = rep.basis
    d = len(basis)
    out = np.empty((d, d), dtype=complex)
    for b, I in enumerate(basis):
        for a, K in enumerate(basis):
            out[a, b] = np.linalg.det(g[np.ix_(K, I)])
    return out


def wedge_daction(rep, a):
    """Lie algebra action: derivative of wedge^p at the identity."""
    a = np.asarray(a, dtype=complex)
    basis = rep.basis
    index = {I: i for i, I in enumerate(basis)}
    d = len(basis)
    out = np.zeros((d, d), dtype=complex)
    for b, I in enumerate(basis):
        for slot, i in enumerate(I):
            for r in range(rep.m):
                if a[r, i] == 0:
                    continue
                if r in I and r != i:
                    continue
                new = list(I)
                new[slot] = r
                # sort and count transpositions
                sign = 1
                for u in range(len(new)):
                    for v in range(len(new) - 1 - u):
                        if new[v] > new[v + 1]:
                            new[v], new[v + 1] = new[v + 1], new[v]
                            sign = -sign
                out[index[tuple(new)], b] += sign * a[r, i]
    return out


def tensor_action(m, p, g):
    """Matrix of g^{tensor p} on (C^m)^{tensor p}."""
    g = np.asarray(g, dtype=complex)
    out = np.eye(1, dtype=complex)
    for _ in range(p):
        out = np.kron(out, g)
    return out


def torus_project(rep, v, I, N=3):
    """Weight projection: average of chi_I(z)^{-1} rho(z) v over the N-point
    torus grid; exact for N >= 3 since exponent differences lie in {-1,0,1}."""
    if N < 3:
        raise RepError("grid size N must be at least 3")
    v = np.asarray(v, dtype=complex)
    I = tuple(sorted(I))
    basis = rep.basis
    if I not in basis:
        raise RepError("I is not an increasing p-index")
    m = rep.m
    out = np.zeros_like(v)
    # exponent vectors: e_K has weight sum of z_i over i in K
    expo = np.zeros((len(basis), m), dtype=int)
    for a, K in enumerate(basis):
        expo[a, list(K)] = 1
    target = np.zeros(m, dtype=int)
    target[list(I)] = 1
    diff = expo - target
    roots = np.exp(2j * np.pi * np.arange(N) / N)
    grid = np.stack(
        np.meshgrid(*([roots] * m), indexing="ij"), axis=-1
    ).reshape(-1, m)
    for z in grid:
        chars = np.prod(z ** diff, axis=1)
        out += chars * v
    return out / len(grid)


# -- group samplers ------------------------------------------------------

def random_unitary(m, rng):
    z = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    q, r = np.linalg.qr(z)
    return q @ np.diag(np.diag(r) / np.abs(np.diag(r)))


def unitary_sampler(m, rng):
    while True:
        yield random_unitary(m, rng)


def special_unitary_sampler(m, rng):
    while True:
        u = random_unitary(m, rng)
        yield u / np.linalg.det(u) ** (1.0 / m)


def torus_sampler(m, rng):
    while True:
        yield np.diag(np.exp(2j * np.pi * rng.random(m)))


def permutation_sampler(m, rng):
    while True:
        yield np.eye(m)[rng.permutation(m)].T.astype(complex)


def block_sampler(m, split, rng):
    """Block-diagonal U(split) x U(m - split) — a reducible control."""
    while True:
        u = np.zeros((m, m), dtype=complex)
        u[:split, :split] = random_unitary(split, rng)
        u[split:, split:] = random_unitary(m - split, rng)
        yield u


# -- commutant and certificates -----------------------------------------

def set_commutant(mats, tol=RANK_TOL):
    """Complex commutant dimension and basis of a set of d x d matrices."""
    d = mats[0].shape[0]
    eye = np.eye(d)
    rows = [np.kron(a, eye) - np.kron(eye, a.T) for a in mats]
    A = np.vstack(rows)
    _, s, vh = np.linalg.svd(A, full_matrices=False)
    rank = int((s > tol * max(s[0], 1.0)).sum())
    null = vh[rank:].conj()
    return [null[i].reshape(d, d) for i in range(d * d - rank)]


def irreducibility_certificate(rep, sampler=None, rng=None, samples=20):
    """Schur-commutant irreducibility certificate for the wedge action.

    Draws `samples` group elements, computes the complex commutant of their
    induced matrices, recomputes at double the sample count as a stability
    check, and (when irreducible) replays the constructive argument:
    torus-project a random vector onto a weight line, then spread it over
    all basis monomials with permutation matrices."""
    if rng is None:
        rng = np.random.default_rng(0)
    if sampler is None:
        sampler = unitary_sampler(rep.m, rng)
    group = [next(sampler) for _ in range(2 * samples)]
    if len({g.tobytes() for g in group[:2]}) < 2 and samples >= 2:
        raise RepError("degenerate sampler: repeated elements")
    acted = [wedge_action(rep, g) for g in group]
    com1 = set_commutant(acted[:samples])
    com2 = set_commutant(acted)
    stable = len(com1) == len(com2)
    out = {
        "commutant_dim": len(com2),
        "stable": stable,
        "irreducible": len(com2) == 1,
    }
    if len(com2) > 1:
        # invariant-subspace witness from a non-scalar commutant element
        d = com2[0].shape[0]
        for c in com2:
            off = c - (np.trace(c) / d) * np.eye(d)
            if np.abs(off).max() > 1e-8:
                herm = c + c.conj().T
                if np.abs(herm - (np.trace(herm) / d) * np.eye(d)).max() < 1e-8:
                    herm = 1j * (c - c.conj().T)
                w, v = np.linalg.eigh(herm)
                keep = np.abs(w - w[0]) < 1e-6 * max(1.0, abs(w[0]))
                out["witness"] = v[:, keep]
                break
        return out
    out["constructive"] = _constructive_spread(rep, rng)
    return out


def _constructive_spread(rep, rng):
    """Replay the proof: a random vector torus-projects onto some weight
    monomial, whose permutation orbit spans the whole space (up to signs)."""
    basis = rep.basis
    d = rep.dim
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    proj = None
    target = None
    for I in basis:
        w = torus_project(rep, v, I)
        if np.abs(w).max() > 1e-6:
            proj, target = w, I
            break
    if proj is None:
        return {"ok": False, "reason": "projection vanished"}
    # weight vector is supported on the single monomial e_target
    support_ok = (
        np.abs(proj[[i for i, K in enumerate(basis) if K != target]]).max()
        < 1e-10 * np.abs(proj).max()
    )
    spread = []
    rest = [i for i in range(rep.m) if i not in target]
    for K in basis:
        # permutation sending the support of e_target onto K
        s = list(range(rep.m))
        krest = [i for i in range(rep.m) if i not in K]
        for src, dst in zip(target, K):
            s[src] = dst
        for src, dst in zip(rest, krest):
            s[src] = dst
        P = np.zeros((rep.m, rep.m))
        for src, dst in enumerate(s):
            P[dst, src] = 1.0
        spread.append(wedge_action(rep, P.astype(complex)) @ proj)
    rank = np.linalg.matrix_rank(np.array(spread), tol=1e-8)
    return {"ok": support_ok and rank == d, "weight": target, "orbit_rank": int(rank)}


def tensor_commutant_dim(m, p, rng, samples=20):
    """Commutant dimension of U(m) on the full tensor power (reported, not
    asserted: for p >= 2 the tensor power is reducible)."""
    mats = [tensor_action(m, p, random_unitary(m, rng)) for _ in range(samples)]
    return len(set_commutant(mats))
