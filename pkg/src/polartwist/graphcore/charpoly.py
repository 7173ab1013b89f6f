"""Characteristic polynomials of adjacency matrices modulo primes.

Each polynomial is computed exactly in GF(p) by reduction to upper Hessenberg
form followed by the Hessenberg determinant recurrence, O(n^3) per prime.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .graph import DenseGraph

DEFAULT_PRIMES = (2147483647, 2147483629, 2147483587)
_SPLIT = 1 << 16


class PrimeTooSmall(UserWarning):
    pass


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24."""
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
    for p in small:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def random_primes(count: int, seed: int, bits: int = 31) -> tuple[int, ...]:
    rng = np.random.default_rng(seed)
    out: list[int] = []
    while len(out) < count:
        c = int(rng.integers(1 << (bits - 1), 1 << bits)) | 1
        if is_prime(c) and c not in out:
            out.append(c)
    return tuple(out)


def _dot_mod(M: np.ndarray, v: np.ndarray, p: int) -> np.ndarray:
    """``M @ v mod p`` for entries below 2^31 without int64 overflow."""
    lo = v % _SPLIT
    hi = v // _SPLIT
    a = (M @ lo) % p
    b = (M @ hi) % p
    return (a + (b * _SPLIT) % p) % p


def hessenberg_mod(A, p: int) -> np.ndarray:
    """Upper Hessenberg matrix similar to ``A`` over GF(p)."""
    H = np.array(A, dtype=np.int64) % p
    n = H.shape[0]
    for j in range(n - 2):
        nz = np.nonzero(H[j + 1 :, j])[0]
        if not len(nz):
            continue
        i = j + 1 + int(nz[0])
        if i != j + 1:
            H[[i, j + 1], :] = H[[j + 1, i], :]
            H[:, [i, j + 1]] = H[:, [j + 1, i]]
        inv = pow(int(H[j + 1, j]), p - 2, p)
        f = H[j + 2 :, j] * inv % p
        if not f.any():
            continue
        H[j + 2 :, :] = (H[j + 2 :, :] - (f[:, None] * H[j + 1, :][None, :]) % p) % p
        H[:, j + 1] = (H[:, j + 1] + _dot_mod(H[:, j + 2 :], f, p)) % p
    return H


def charpoly_mod(A, p: int) -> tuple[int, ...]:
    """Coefficients of det(xI - A) mod p, highest degree first."""
    H = hessenberg_mod(A, p)
    n = H.shape[0]
    # P[k] holds p_k(x) low-order first, padded to n+1
    P = np.zeros((n + 1, n + 1), dtype=np.int64)
    P[0, 0] = 1
    for m in range(1, n + 1):
        prev = P[m - 1]
        cur = np.zeros(n + 1, dtype=np.int64)
        cur[1:] = prev[:-1]
        cur = (cur - (int(H[m - 1, m - 1]) * prev) % p) % p
        if m > 1:
            w = np.zeros(m - 1, dtype=np.int64)
            t = 1
            for i in range(m - 1, 0, -1):
                t = t * int(H[i, i - 1]) % p
                w[i - 1] = int(H[i - 1, m - 1]) * t % p
            cur = (cur - _dot_mod(P[: m - 1].T, w, p)) % p
        P[m] = cur
    return tuple(int(c) for c in P[n][::-1])


@dataclass(frozen=True)
class CharPolyFingerprint:
    n: int
    entries: tuple[tuple[int, tuple[int, ...]], ...]

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.entries)

    def __eq__(self, other):
        return isinstance(other, CharPolyFingerprint) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def collision_bound(self) -> float:
        """Upper bound on the chance that distinct integer polynomials agree
        modulo all primes, when the primes are drawn uniformly from 31-bit primes.

        A nonzero coefficient difference is below ``2 * binom(n, k) * k^(k/2)``
        (Hadamard) and so has at most ``log_{2^30}`` of that many 31-bit prime
        divisors; there are about 5.0e7 primes in ``[2^30, 2^31)``.
        """
        n = self.n
        bits = max(
            math.log2(2 * math.comb(n, k)) + 0.5 * k * math.log2(max(k, 1)) for k in range(n + 1)
        )
        per_prime = (bits / 30.0) / 5.0e7
        return min(1.0, per_prime) ** len(self.entries)


def charpoly_fingerprint(G: DenseGraph | np.ndarray, primes=DEFAULT_PRIMES) -> CharPolyFingerprint:
    A = G.adjacency() if isinstance(G, DenseGraph) else np.asarray(G)
    n = A.shape[0]
    if len(primes) < 3:
        warnings.warn("fewer than 3 primes give a weak cospectrality certificate", PrimeTooSmall)
    entries = []
    for p in primes:
        if p <= n:
            warnings.warn(f"prime {p} is not larger than n={n}", PrimeTooSmall)
        if p >= 1 << 31:
            raise ValueError("primes must be below 2^31")
        entries.append((int(p), charpoly_mod(A, p)))
    return CharPolyFingerprint(n, tuple(entries))


def cospectral(G: DenseGraph, H: DenseGraph, primes=DEFAULT_PRIMES) -> bool:
    return G.n == H.n and charpoly_fingerprint(G, primes) == charpoly_fingerprint(H, primes)
