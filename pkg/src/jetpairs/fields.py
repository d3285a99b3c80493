"""Exact scalar arithmetic: prime fields F_p and the rationals.

Scalars are plain Python values: integers in [0, p) for F_p and
``fractions.Fraction`` (kept normalized by the Fraction type itself) for Q.
A field object bundles the arithmetic so matrix and polynomial code stays
field-agnostic.  No floating point anywhere.
"""

from __future__ import annotations

import random
from fractions import Fraction

# Largest prime modulus routed through the numpy int64 fast path.  Row
# operations and dot products must stay below 2**63: with p < 2**20 even
# 2**20-term accumulations of p**2 products are safe.
NUMPY_PRIME_LIMIT = 1 << 20

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all n < 3.3e24."""
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
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


class PrimeField:
    """The field F_p; elements are canonical residues in [0, p)."""

    kind = "prime"
    __slots__ = ("p",)

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        self.p = p

    @property
    def char(self) -> int:
        return self.p

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1

    @property
    def fits_numpy(self) -> bool:
        return self.p < NUMPY_PRIME_LIMIT

    def from_int(self, c: int) -> int:
        return c % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0 in F_p")
        return pow(a, -1, self.p)

    def div(self, a: int, b: int) -> int:
        return a * self.inv(b) % self.p

    def is_zero(self, a: int) -> bool:
        return a % self.p == 0

    def rand(self, rng: random.Random) -> int:
        return rng.randrange(self.p)

    def rand_nonzero(self, rng: random.Random) -> int:
        return rng.randrange(1, self.p)

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("prime", self.p))

    def __repr__(self) -> str:
        return f"F_{self.p}"


class RationalField:
    """The rationals; elements are Fraction values (exact, auto-reduced)."""

    kind = "rationals"
    __slots__ = ()

    @property
    def char(self) -> int:
        return 0

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    @property
    def fits_numpy(self) -> bool:
        return False

    def from_int(self, c: int) -> Fraction:
        return Fraction(c)

    def add(self, a: Fraction, b: Fraction) -> Fraction:
        return a + b

    def sub(self, a: Fraction, b: Fraction) -> Fraction:
        return a - b

    def neg(self, a: Fraction) -> Fraction:
        return -a

    def mul(self, a: Fraction, b: Fraction) -> Fraction:
        return a * b

    def inv(self, a: Fraction) -> Fraction:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in Q")
        return 1 / a

    def div(self, a: Fraction, b: Fraction) -> Fraction:
        return a / b

    def is_zero(self, a: Fraction) -> bool:
        return a == 0

    def rand(self, rng: random.Random) -> Fraction:
        # Small integers keep intermediate growth modest in identity sweeps.
        return Fraction(rng.randint(-9, 9))

    def rand_nonzero(self, rng: random.Random) -> Fraction:
        c = rng.randint(1, 9)
        return Fraction(c if rng.random() < 0.5 else -c)

    def __eq__(self, other) -> bool:
        return isinstance(other, RationalField)

    def __hash__(self) -> int:
        return hash("rationals")

    def __repr__(self) -> str:
        return "QQ"


QQ = RationalField()


def prime_field(p: int) -> PrimeField:
    return PrimeField(p)


Field = PrimeField | RationalField
