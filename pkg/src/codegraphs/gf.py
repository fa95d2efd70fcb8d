"""Table-driven arithmetic in GF(q), q = p^e.

Elements are integer indices in ``range(q)``.  The index of an element is the
value of its coefficient vector (low degree first) read in base ``p``, so 0 and
1 are the field's zero and one.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field

import numpy as np

MAX_ORDER = 64


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, int(p**0.5) + 1))


def _poly_mulmod(a, b, modulus, p):
    """Multiply coefficient lists ``a`` and ``b`` modulo a monic ``modulus``."""
    e = len(modulus) - 1
    prod = [0] * (2 * e - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    for deg in range(len(prod) - 1, e - 1, -1):
        c = prod[deg]
        if c:
            for j in range(e + 1):
                prod[deg - e + j] = (prod[deg - e + j] - c * modulus[j]) % p
    return prod[:e]


def _is_irreducible(poly, p):
    """True iff monic ``poly`` (low degree first) is irreducible over GF(p)."""
    e = len(poly) - 1
    if e == 1:
        return True
    # trial division by every monic polynomial of degree 1..e//2
    for d in range(1, e // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            divisor = list(low) + [1]
            rem = list(poly)
            for deg in range(e, d - 1, -1):
                c = rem[deg]
                if c:
                    for j in range(d + 1):
                        rem[deg - d + j] = (rem[deg - d + j] - c * divisor[j]) % p
            if not any(rem[:d]):
                return False
    return True


def smallest_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible polynomial of degree ``e``.

    Candidates are ordered by their non-leading coefficients read from the
    highest degree down; the result is returned low degree first, leading 1
    included.
    """
    for high_first in itertools.product(range(p), repeat=e):
        poly = tuple(reversed(high_first)) + (1,)
        if poly[0] == 0:
            continue
        if _is_irreducible(poly, p):
            return poly
    raise ValueError(f"no irreducible polynomial of degree {e} over GF({p})")


@dataclass(frozen=True, eq=False, repr=False)
class FieldSpec:
    """GF(p^e) with dense operation tables.

    Instances are obtained from :func:`make_field`, which caches them, so one
    object exists per field and identity comparison is enough.
    """

    p: int
    e: int
    q: int
    modulus: tuple[int, ...]
    add: tuple[tuple[int, ...], ...]
    mul: tuple[tuple[int, ...], ...]
    neg: tuple[int, ...]
    inv: tuple[int, ...]
    sub: tuple[tuple[int, ...], ...] = field(init=False)

    def __post_init__(self):
        q = self.q
        sub = tuple(tuple(self.add[a][self.neg[b]] for b in range(q)) for a in range(q))
        object.__setattr__(self, "sub", sub)
        object.__setattr__(self, "add_np", np.array(self.add, dtype=np.int64))
        object.__setattr__(self, "mul_np", np.array(self.mul, dtype=np.int64))
        object.__setattr__(self, "inv_np", np.array(self.inv, dtype=np.int64))

    def __repr__(self):
        return f"GF({self.q})"

    @property
    def elements(self) -> range:
        return range(self.q)

    def power(self, a: int, k: int) -> int:
        r = 1
        for _ in range(k):
            r = self.mul[r][a]
        return r

    def order_of(self, a: int) -> int:
        """Multiplicative order of a nonzero element."""
        if a == 0:
            raise ValueError("0 has no multiplicative order")
        x, k = a, 1
        while x != 1:
            x = self.mul[x][a]
            k += 1
        return k

    def frobenius(self, a: int) -> int:
        return self.power(a, self.p)

    def to_json(self) -> dict:
        return {"p": self.p, "e": self.e, "modulus": list(self.modulus)}


@functools.lru_cache(maxsize=None)
def make_field(p: int, e: int = 1) -> FieldSpec:
    """Build GF(p^e).  Raises ``ValueError`` for bad parameters or q > 64."""
    if not isinstance(p, int) or not is_prime(p):
        raise ValueError(f"characteristic must be prime, got {p!r}")
    if not isinstance(e, int) or e < 1:
        raise ValueError(f"extension degree must be >= 1, got {e!r}")
    q = p**e
    if q > MAX_ORDER:
        raise ValueError(f"field order {q} exceeds the cap {MAX_ORDER}")

    if e == 1:
        modulus = (0, 1)
        add = tuple(tuple((a + b) % p for b in range(q)) for a in range(q))
        mul = tuple(tuple((a * b) % p for b in range(q)) for a in range(q))
    else:
        modulus = smallest_irreducible(p, e)
        digits = [[(a // p**i) % p for i in range(e)] for a in range(q)]

        def index(coeffs):
            return sum(c * p**i for i, c in enumerate(coeffs))

        add = tuple(
            tuple(index([(x + y) % p for x, y in zip(digits[a], digits[b])]) for b in range(q))
            for a in range(q)
        )
        mul = tuple(
            tuple(index(_poly_mulmod(digits[a], digits[b], modulus, p)) for b in range(q))
            for a in range(q)
        )

    neg = tuple(next(b for b in range(q) if add[a][b] == 0) for a in range(q))
    inv = (0,) + tuple(next(b for b in range(1, q) if mul[a][b] == 1) for a in range(1, q))
    return FieldSpec(p=p, e=e, q=q, modulus=modulus, add=add, mul=mul, neg=neg, inv=inv)


def field_of_order(q: int) -> FieldSpec:
    """GF(q) from its order alone."""
    for p in range(2, q + 1):
        if is_prime(p) and q % p == 0:
            e, r = 0, q
            while r % p == 0:
                r //= p
                e += 1
            if r != 1:
                break
            return make_field(p, e)
    raise ValueError(f"{q} is not a prime power")


def primitive_element(f: FieldSpec) -> int:
    """Smallest element generating the multiplicative group."""
    for a in range(1, f.q):
        if f.order_of(a) == f.q - 1:
            return a
    raise AssertionError("finite field without primitive element")
