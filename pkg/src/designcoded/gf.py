"""Finite field arithmetic over GF(p^m) with dense lookup tables.

Elements are integers in ``[0, q)``; the base-``p`` digits of an element are
the coefficients of its polynomial representative (least significant digit is
the constant term).  ``0`` is the additive and ``1`` the multiplicative
identity.
"""

from __future__ import annotations

from array import array
from functools import lru_cache
from itertools import product
from typing import List, Sequence, Tuple

MAX_ORDER = 1 << 16
# Full q x q tables are kept only up to this order; larger fields use log/exp.
DENSE_LIMIT = 256


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_power(q: int) -> Tuple[int, int]:
    """Return ``(p, m)`` with ``q == p**m``; raise FieldError otherwise."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    m, rest = 0, q
    while rest % p == 0:
        rest //= p
        m += 1
    if rest != 1 or not is_prime(p):
        raise FieldError(f"{q} is not a prime power")
    return p, m


def is_prime_power(q: int) -> bool:
    try:
        prime_power(q)
    except FieldError:
        return False
    return True


# -- polynomials over GF(p), coefficient lists, lowest degree first ---------

def _poly_trim(a: List[int]) -> List[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: Sequence[int], b: Sequence[int], p: int) -> List[int]:
    """Remainder of ``a`` divided by monic ``b``."""
    r = list(a)
    db = len(b) - 1
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i] % p
        if c:
            for j in range(db + 1):
                r[i - db + j] = (r[i - db + j] - c * b[j]) % p
    return _poly_trim([x % p for x in r[:db]])


def _monic_polys(p: int, deg: int):
    # lexicographic in the coefficients below the leading one, read from the
    # highest degree down; equals ascending order of the base-p integer code
    for tail in product(range(p), repeat=deg):
        yield list(reversed(tail)) + [1]


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    deg = len(poly) - 1
    if deg < 1 or poly[-1] != 1:
        return False
    for d in range(1, deg // 2 + 1):
        for div in _monic_polys(p, d):
            if not _poly_mod(poly, div, p):
                return False
    return True


def smallest_irreducible(p: int, m: int) -> Tuple[int, ...]:
    for poly in _monic_polys(p, m):
        if is_irreducible(poly, p):
            return tuple(poly)
    raise FieldError(f"no irreducible polynomial of degree {m} over GF({p})")  # pragma: no cover


class FieldTable:
    """Arithmetic tables for GF(p^m).

    Attributes
    ----------
    p, m, q : int
        Characteristic, extension degree and order.
    modulus : tuple of int
        Monic irreducible polynomial of degree ``m``, lowest degree first.
    """

    def __init__(self, p: int, m: int):
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        if m < 1:
            raise FieldError(f"extension degree must be positive, got {m}")
        q = p ** m
        if q > MAX_ORDER:
            raise FieldError(f"field order {q} exceeds cap {MAX_ORDER}")
        self.p, self.m, self.q = p, m, q
        self.modulus = (0, 1) if m == 1 else smallest_irreducible(p, m)
        self._build()

    # digits <-> integers
    def _digits(self, a: int) -> List[int]:
        out = []
        for _ in range(self.m):
            a, d = divmod(a, self.p)
            out.append(d)
        return out

    def _pack(self, digits: Sequence[int]) -> int:
        a = 0
        for d in reversed(digits):
            a = a * self.p + d
        return a

    def _slow_mul(self, a: int, b: int) -> int:
        p, m = self.p, self.m
        if m == 1:
            return a * b % p
        da, db = self._digits(a), self._digits(b)
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        rem = _poly_mod(prod, self.modulus, p)
        return self._pack(rem + [0] * (m - len(rem)))

    def _slow_pow(self, a: int, e: int) -> int:
        out = 1
        while e:
            if e & 1:
                out = self._slow_mul(out, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return out

    def _build(self) -> None:
        p, q = self.p, self.q
        self.neg_table = [self._pack([(-d) % p for d in self._digits(a)]) for a in range(q)]
        # primitive element: smallest g with g^((q-1)/l) != 1 for every prime l | q-1
        n = q - 1
        factors = [d for d in range(2, n + 1) if n % d == 0 and is_prime(d)]
        self.generator = next(
            g for g in range(1, q)
            if all(self._slow_pow(g, n // f) != 1 for f in factors))
        exp = [1]
        for _ in range(n - 1):
            exp.append(self._slow_mul(exp[-1], self.generator))
        if len(set(exp)) != n:  # pragma: no cover
            raise FieldError("multiplicative group is not cyclic; modulus not irreducible")
        self.exp_table = exp + exp
        self.log_table = [0] * q
        for i, x in enumerate(exp):
            self.log_table[x] = i
        self.inv_table = [0] * q
        for x in range(1, q):
            self.inv_table[x] = exp[(q - 1 - self.log_table[x]) % (q - 1)]
        self.dense = q <= DENSE_LIMIT
        if self.dense:
            self.add_table = [[self._slow_add(a, b) for b in range(q)] for a in range(q)]
            self.mul_table = [[self._log_mul(a, b) for b in range(q)] for a in range(q)]
            # flat int buffers consumed by the rref kernel
            self.add_flat = array("i", [x for row in self.add_table for x in row])
            self.mul_flat = array("i", [x for row in self.mul_table for x in row])
            self.inv_flat = array("i", self.inv_table)
            self.neg_flat = array("i", self.neg_table)

    def _slow_add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self.m == 1:
            return (a + b) % self.p
        return self._pack([(x + y) % self.p for x, y in zip(self._digits(a), self._digits(b))])

    def _log_mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp_table[self.log_table[a] + self.log_table[b]]

    def _check(self, *xs: int) -> None:
        for x in xs:
            if not 0 <= x < self.q:
                raise FieldError(f"{x} is not an element of GF({self.q})")

    def add(self, a: int, b: int) -> int:
        self._check(a, b)
        return self.add_table[a][b] if self.dense else self._slow_add(a, b)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        self._check(a, b)
        return self.mul_table[a][b] if self.dense else self._log_mul(a, b)

    def neg(self, a: int) -> int:
        self._check(a)
        return self.neg_table[a]

    def inv(self, a: int) -> int:
        self._check(a)
        if a == 0:
            raise ZeroDivisionError("zero has no inverse in a field")
        return self.inv_table[a]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        self._check(a)
        if a == 0:
            return 0 if e > 0 else 1
        return self.exp_table[(self.log_table[a] * e) % (self.q - 1)]

    def elements(self) -> range:
        return range(self.q)

    def subfield(self, order: int) -> List[int]:
        """Elements of the unique subfield of the given order, ascending."""
        p2, m2 = prime_power(order)
        if p2 != self.p or self.m % m2:
            raise FieldError(f"GF({self.q}) has no subfield of order {order}")
        return [x for x in range(self.q) if self.pow(x, order) == x]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FieldTable) and (self.p, self.m, self.modulus) == (
            other.p, other.m, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.m, self.modulus))

    def __repr__(self) -> str:
        return f"FieldTable(p={self.p}, m={self.m}, modulus={self.modulus})"


@lru_cache(maxsize=None)
def field_make(p: int, m: int = 1) -> FieldTable:
    """Build (and memoise) GF(p^m) with the smallest monic irreducible modulus."""
    return FieldTable(p, m)


def field_of_order(q: int) -> FieldTable:
    p, m = prime_power(q)
    return field_make(p, m)
