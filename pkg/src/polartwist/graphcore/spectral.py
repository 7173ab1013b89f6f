"""Cospectrality for regular graphs with at most four distinct eigenvalues.

A connected k-regular graph on n vertices whose adjacency matrix is
annihilated by ``(A - θ0)(A - θ1)(A - θ2)(A - θ3)`` with ``θ0 = k`` has
spectrum ``k^1`` plus the θi with multiplicities fixed by
``tr A^0 = n``, ``tr A = 0`` and ``tr A^2 = nk``.  Two such graphs with the
same n, k and θ are therefore cospectral.  The annihilation test applies
the polynomial to random vectors modulo a large prime, so a false pass needs
a random vector to hit a proper subspace: probability at most ``1/p`` per
trial.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .charpoly import random_primes
from .graph import DenseGraph
from .verify import IntersectionArray, bfs_distances


class NotIntegral(ValueError):
    pass


def drg_eigenvalues(ia: IntersectionArray) -> tuple[int, ...]:
    """Eigenvalues of a distance-regular graph from its intersection array,
    largest first.  Raises :class:`NotIntegral` for irrational ones."""
    b = list(ia.b) + [0]
    c = [0] + list(ia.c)
    k, d = b[0], len(ia.c)
    T = np.zeros((d + 1, d + 1), dtype=np.int64)
    for i in range(d + 1):
        T[i, i] = k - b[i] - c[i]
        if i < d:
            T[i, i + 1] = b[i]
        if i:
            T[i, i - 1] = c[i]
    ev = np.sort(np.linalg.eigvals(T.astype(float)).real)[::-1]
    th = np.rint(ev).astype(np.int64)
    # exact check: each rounded value is a root of det(T - x)
    for t in th:
        if round(np.linalg.det((T - t * np.eye(d + 1)).astype(float))) != 0 or abs(ev - t).min() > 1e-6:
            raise NotIntegral(f"eigenvalue near {float(t)} is not an integer")
    return tuple(int(t) for t in th)


def _matvec_mod(G: DenseGraph, x: np.ndarray, p: int, rows: int = 4096) -> np.ndarray:
    out = np.empty(G.n, dtype=np.int64)
    ip = G.indptr
    for s in range(0, G.n, rows):
        e = min(G.n, s + rows)
        seg = x[G.indices[ip[s] : ip[e]]]
        out[s:e] = np.add.reduceat(seg, ip[s:e] - ip[s]) % p
    return out


def annihilates(G: DenseGraph, theta, trials: int = 4, seed: int = 0) -> bool:
    """``prod(A - θ) x == 0 (mod p)`` for ``trials`` random vectors."""
    if (np.diff(G.indptr) == 0).any():
        raise ValueError("isolated vertex")
    for p in random_primes(trials, seed):
        x = np.random.default_rng([seed, p]).integers(0, p, G.n, dtype=np.int64)
        for t in theta:
            x = (_matvec_mod(G, x, p) - (t % p) * x) % p
        if x.any():
            return False
    return True


def multiplicities(n: int, k: int, theta) -> tuple[int, ...]:
    """Multiplicities forced by ``tr A^j`` for j < 3, with ``k`` simple."""
    theta = [int(t) for t in theta]
    if theta[0] != k or len(theta) > 4:
        raise ValueError("need theta[0] = k and at most four eigenvalues")
    rest = theta[1:]
    rhs = np.array([n - 1, -k, n * k - k * k], dtype=float)[: len(rest)]
    V = np.array([[t**j for t in rest] for j in range(len(rest))], dtype=float)
    m = np.rint(np.linalg.solve(V, rhs)).astype(np.int64)
    exact = [n, 0, n * k][: len(rest) + 1]
    for j, want in enumerate(exact):
        if k**j + sum(int(mi) * t**j for mi, t in zip(m, rest)) != want:
            raise NotIntegral("traces admit no integral multiplicities")
    return (1, *(int(x) for x in m))


@dataclass
class SpectrumCertificate:
    eigenvalues: tuple[int, ...]
    multiplicities: tuple[int, ...] | None
    regular: bool
    connected: bool
    annihilated: bool
    trials: int

    @property
    def valid(self) -> bool:
        return self.regular and self.connected and self.annihilated and self.multiplicities is not None


def spectrum_certificate(G: DenseGraph, theta, trials: int = 4, seed: int = 0) -> SpectrumCertificate:
    """Certify that ``G`` has spectrum ``{θ_i^{m_i}}`` (see the module notes)."""
    deg = G.degrees
    k = int(deg[0])
    regular = bool((deg == k).all())
    connected = bool((bfs_distances(G, 0) >= 0).all())
    ann = regular and annihilates(G, theta, trials, seed)
    mult = None
    if regular and connected and ann:
        try:
            mult = multiplicities(G.n, k, theta)
        except (NotIntegral, ValueError):
            mult = None
    return SpectrumCertificate(tuple(int(t) for t in theta), mult, regular, connected, ann, trials)
