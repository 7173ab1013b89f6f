"""Table-driven arithmetic in GF(q) for small prime powers q.

Elements are the integers ``0..q-1``.  For ``q = p**e`` with ``e > 1`` the
integer ``a = c_0 + c_1 p + ... + c_{e-1} p^{e-1}`` encodes the polynomial
``c_0 + c_1 x + ... + c_{e-1} x^{e-1}`` reduced modulo a fixed irreducible
polynomial (see ``IRREDUCIBLE``).  All tables are numpy ``uint8`` arrays so
they can be used with fancy indexing on whole arrays of elements.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

MAX_Q = 13

# Monic irreducible polynomials, low-order coefficient first (leading 1 omitted).
#   q=4: x^2 + x + 1     q=8: x^3 + x + 1     q=9: x^2 + 1
IRREDUCIBLE = {
    4: (1, 1),
    8: (1, 1, 0),
    9: (1, 0),
}


class NotAPrimePower(ValueError):
    pass


class Unsupported(ValueError):
    pass


def _prime_power(q: int) -> tuple[int, int] | None:
    if q < 2:
        return None
    for p in range(2, q + 1):
        if q % p == 0:
            e, r = 0, q
            while r % p == 0:
                r //= p
                e += 1
            return (p, e) if r == 1 else None
    return None


@dataclass(frozen=True, eq=False)
class FieldTables:
    """Complete arithmetic tables of GF(q)."""

    q: int
    p: int
    e: int
    add: np.ndarray = field(repr=False)
    mul: np.ndarray = field(repr=False)
    neg: np.ndarray = field(repr=False)
    inv: np.ndarray = field(repr=False)  # inv[0] is 0 by convention
    sub: np.ndarray = field(repr=False)

    zero = 0
    one = 1

    def __eq__(self, other):
        return isinstance(other, FieldTables) and other.q == self.q

    def __hash__(self):
        return hash(("GF", self.q))

    @property
    def elements(self) -> range:
        return range(self.q)

    def power(self, a: int, k: int) -> int:
        r = 1
        for _ in range(k):
            r = int(self.mul[r, a])
        return r

    def is_square(self, a: int) -> bool:
        return a == 0 or any(int(self.mul[x, x]) == a for x in range(1, self.q))

    def axiom_violations(self) -> list[str]:
        """Names of the field axioms that fail, checked over all triples."""
        q, add, mul = self.q, self.add, self.mul
        a, b, c = np.meshgrid(np.arange(q), np.arange(q), np.arange(q), indexing="ij")
        r = np.arange(q)
        checks = {
            "add associative": add[a, add[b, c]] == add[add[a, b], c],
            "mul associative": mul[a, mul[b, c]] == mul[mul[a, b], c],
            "distributive": mul[a, add[b, c]] == add[mul[a, b], mul[a, c]],
            "add commutative": add == add.T,
            "mul commutative": mul == mul.T,
            "additive identity": add[0] == r,
            "multiplicative identity": mul[1] == r,
            "negatives": add[r, self.neg] == 0,
            "inverses": mul[r[1:], self.inv[1:]] == 1,
            "subtraction": self.sub == add[r[:, None], self.neg[None, :]],
        }
        return [name for name, ok in checks.items() if not np.all(ok)]

    def dot(self, u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Field dot product along the last axis (broadcasting)."""
        prod = self.mul[u, v]
        acc = prod[..., 0]
        for i in range(1, prod.shape[-1]):
            acc = self.add[acc, prod[..., i]]
        return acc

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Matrix product over GF(q); ``a`` may carry leading batch axes."""
        a = np.asarray(a, dtype=np.uint8)
        b = np.asarray(b, dtype=np.uint8)
        if self.e == 1:
            out = np.matmul(a.astype(np.int64), b.astype(np.int64)) % self.q
            return out.astype(np.uint8)
        acc = np.zeros(a.shape[:-1] + b.shape[-1:], dtype=np.uint8)
        for k in range(a.shape[-1]):
            acc = self.add[acc, self.mul[a[..., :, k, None], b[..., None, k, :]]]
        return acc


def _poly_tables(p: int, e: int, red: tuple[int, ...]):
    q = p**e
    digits = np.array([[(a // p**i) % p for i in range(e)] for a in range(q)], dtype=np.int64)
    weights = p ** np.arange(e)

    def encode(c):
        return int(np.dot(np.asarray(c) % p, weights))

    add = np.zeros((q, q), dtype=np.uint8)
    mul = np.zeros((q, q), dtype=np.uint8)
    for a in range(q):
        for b in range(q):
            add[a, b] = encode(digits[a] + digits[b])
            prod = np.zeros(2 * e - 1, dtype=np.int64)
            for i in range(e):
                prod[i : i + e] += digits[a][i] * digits[b]
            # x^e = -(red_0 + red_1 x + ...)
            for d in range(2 * e - 2, e - 1, -1):
                c = prod[d] % p
                if c:
                    prod[d] = 0
                    for i, r in enumerate(red):
                        prod[d - e + i] -= c * r
            mul[a, b] = encode(prod[:e])
    return add, mul


@lru_cache(maxsize=None)
def field_new(q: int) -> FieldTables:
    """Return GF(q) for a prime power ``q <= 13``."""
    pe = _prime_power(int(q))
    if pe is None:
        raise NotAPrimePower(f"{q} is not a prime power")
    if q > MAX_Q:
        raise Unsupported(f"GF({q}) exceeds the supported bound q <= {MAX_Q}")
    p, e = pe
    if e == 1:
        r = np.arange(q)
        add = ((r[:, None] + r[None, :]) % q).astype(np.uint8)
        mul = ((r[:, None] * r[None, :]) % q).astype(np.uint8)
    else:
        add, mul = _poly_tables(p, e, IRREDUCIBLE[q])
    neg = np.array([int(np.nonzero(add[a] == 0)[0][0]) for a in range(q)], dtype=np.uint8)
    inv = np.zeros(q, dtype=np.uint8)
    for a in range(1, q):
        inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
    sub = add[:, neg]
    for t in (add, mul, neg, inv, sub):
        t.setflags(write=False)
    return FieldTables(q=q, p=p, e=e, add=add, mul=mul, neg=neg, inv=inv, sub=sub)
