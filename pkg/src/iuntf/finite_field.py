"""Exact arithmetic in GF(p^e).

Elements are plain ``int`` indices in ``[0, q)``.  The index encodes the
coefficient vector ``(c_0, ..., c_{e-1})`` of the element's polynomial
representative in base ``p`` with ``c_0`` least significant, so index 0 is
the additive identity, index 1 the multiplicative identity, and for
``e == 1`` the index is simply the residue mod ``p``.

The enumeration ``f_1, ..., f_q`` used by the frame constructions is index
order, which puts ``f_1 = 0``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

from .errors import DivisionByZero, NotPrime, ParameterError, TooLarge

DEFAULT_MAX_ORDER = 2**20
# Beyond this order the add/mul tables cost more than they save.
_TABLE_MAX_ORDER = 256


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_power_decomposition(q: int) -> tuple[int, int] | None:
    """Return ``(p, e)`` with ``q == p**e`` and ``p`` prime, or ``None``."""
    if q < 2:
        return None
    p = next(d for d in itertools.count(2) if q % d == 0)
    e = 0
    while q % p == 0:
        q //= p
        e += 1
    return (p, e) if q == 1 else None


# --- polynomials over GF(p), coefficient lists low-to-high -----------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_rem(num: list[int], den: list[int], p: int) -> list[int]:
    num = _trim(list(num))
    den = _trim(list(den))
    if not den:
        raise DivisionByZero("polynomial division by zero")
    inv_lead = pow(den[-1], p - 2, p)
    while len(num) >= len(den):
        coef = num[-1] * inv_lead % p
        shift = len(num) - len(den)
        for i, d in enumerate(den):
            num[shift + i] = (num[shift + i] - coef * d) % p
        _trim(num)
    return num


def is_irreducible(coeffs: tuple[int, ...] | list[int], p: int) -> bool:
    """Trial-division irreducibility test for a polynomial over GF(p).

    ``coeffs`` is low-to-high.  Every monic candidate factor of degree
    ``1..deg//2`` is tried, which is fine for the field sizes this package
    allows.
    """
    poly = _trim(list(coeffs))
    deg = len(poly) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    for fdeg in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=fdeg):
            if not _poly_rem(poly, list(low) + [1], p):
                return False
    return True


def _smallest_irreducible(p: int, e: int) -> tuple[int, ...]:
    # Candidates in lexicographic order of (c_{e-1}, ..., c_0).
    for high_to_low in itertools.product(range(p), repeat=e):
        if high_to_low[-1] == 0:
            continue  # divisible by x
        coeffs = tuple(reversed(high_to_low)) + (1,)
        if is_irreducible(coeffs, p):
            return coeffs
    raise AssertionError(f"no irreducible polynomial of degree {e} over GF({p})")


@dataclass(frozen=True)
class FieldSpec:
    """The finite field GF(p^e) with a fixed monic irreducible modulus.

    ``modulus`` holds the coefficients low-to-high (length ``e + 1``, last
    entry 1).  For prime fields it is the placeholder ``(0, 1)``.
    """

    p: int
    e: int
    modulus: tuple[int, ...] = field(repr=False)

    @property
    def q(self) -> int:
        return self.p**self.e

    @property
    def order(self) -> int:
        return self.q

    # -- encoding --

    def digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.e):
            a, c = divmod(a, self.p)
            out.append(c)
        return out

    def from_digits(self, coeffs) -> int:
        idx = 0
        for c in reversed(list(coeffs)):
            idx = idx * self.p + (c % self.p)
        return idx

    def check(self, a: int) -> int:
        if not 0 <= a < self.q:
            raise ParameterError(f"{a} is not an element index of GF({self.q})")
        return a

    # -- tables --

    @cached_property
    def _add_table(self) -> list[list[int]]:
        return [[self._add_direct(a, b) for b in range(self.q)] for a in range(self.q)]

    @cached_property
    def _mul_table(self) -> list[list[int]]:
        return [[self._mul_direct(a, b) for b in range(self.q)] for a in range(self.q)]

    def _tabulated(self) -> bool:
        return self.e > 1 and self.q <= _TABLE_MAX_ORDER

    # -- arithmetic --

    def _add_direct(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        da, db = self.digits(a), self.digits(b)
        return self.from_digits(x + y for x, y in zip(da, db))

    def _mul_direct(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        da, db = self.digits(a), self.digits(b)
        prod = [0] * (2 * self.e - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % self.p
        return self.from_digits(_poly_rem(prod, list(self.modulus), self.p))

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        if self._tabulated():
            return self._add_table[a][b]
        return self._add_direct(a, b)

    def neg(self, a: int) -> int:
        if self.e == 1:
            return (-a) % self.p
        return self.from_digits(-c for c in self.digits(a))

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        if self._tabulated():
            return self._mul_table[a][b]
        return self._mul_direct(a, b)

    def power(self, a: int, n: int) -> int:
        result, base = 1, a
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero(f"0 has no inverse in GF({self.q})")
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        # a^(q-1) = 1 for every nonzero a
        return self.power(a, self.q - 2)

    def elements(self) -> list[int]:
        return list(range(self.q))

    def format(self, a: int) -> str:
        """Human-readable polynomial form, e.g. ``x+1`` in GF(4)."""
        if self.e == 1:
            return str(a)
        terms = []
        for i, c in reversed(list(enumerate(self.digits(a)))):
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            coef = str(c) if (c != 1 or i == 0) else ""
            terms.append(coef + mono)
        return "+".join(terms) or "0"


@lru_cache(maxsize=None)
def make_field(p: int, e: int = 1, max_order: int = DEFAULT_MAX_ORDER) -> FieldSpec:
    """Build GF(p^e).

    The modulus is the lexicographically smallest monic irreducible
    polynomial of degree ``e`` (coefficients compared high-to-low).

    Raises
    ------
    NotPrime
        If ``p`` is not prime.
    TooLarge
        If ``p**e`` exceeds ``max_order``.
    """
    if e < 1:
        raise ParameterError(f"extension degree must be >= 1, got {e}")
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if p**e > max_order:
        raise TooLarge(f"GF({p}^{e}) has order {p**e} > cap {max_order}")
    modulus = (0, 1) if e == 1 else _smallest_irreducible(p, e)
    return FieldSpec(p, e, modulus)


def field_of_order(q: int, max_order: int = DEFAULT_MAX_ORDER) -> FieldSpec:
    """GF(q) for a prime power ``q``."""
    pe = prime_power_decomposition(q)
    if pe is None:
        raise NotPrime(f"{q} is not a prime power")
    return make_field(pe[0], pe[1], max_order)


# Function-style aliases.

def add(a: int, b: int, f: FieldSpec) -> int:
    return f.add(a, b)


def mul(a: int, b: int, f: FieldSpec) -> int:
    return f.mul(a, b)


def neg(a: int, f: FieldSpec) -> int:
    return f.neg(a)


def inv(a: int, f: FieldSpec) -> int:
    return f.inv(a)


def enumerate_elements(f: FieldSpec) -> list[int]:
    """Elements ``f_1, ..., f_q`` in index order (``f_1 = 0``)."""
    return f.elements()
