"""Dense univariate polynomials over an exact field.

Coefficients are stored lowest degree first in a tuple whose last entry is
nonzero; the zero polynomial is the empty tuple.  Besides plain ring
arithmetic this module provides division, monic gcd, derivative, modular
powers, and the truncated (mod t^m) product/inverse used throughout the
matrix-series code.
"""

from __future__ import annotations

import random
from typing import Iterable, Sequence

from .fields import Field


class UniPoly:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs: Iterable = ()):
        cs = list(coeffs)
        while cs and field.is_zero(cs[-1]):
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, field: Field) -> "UniPoly":
        return cls(field, ())

    @classmethod
    def one(cls, field: Field) -> "UniPoly":
        return cls(field, (field.one,))

    @classmethod
    def x(cls, field: Field) -> "UniPoly":
        return cls(field, (field.zero, field.one))

    @classmethod
    def constant(cls, field: Field, c) -> "UniPoly":
        return cls(field, (c,))

    @classmethod
    def x_power(cls, field: Field, e: int) -> "UniPoly":
        return cls(field, (field.zero,) * e + (field.one,))

    @classmethod
    def from_ints(cls, field: Field, ints: Sequence[int]) -> "UniPoly":
        return cls(field, [field.from_int(c) for c in ints])

    @classmethod
    def rand(cls, field: Field, max_deg: int, rng: random.Random) -> "UniPoly":
        return cls(field, [field.rand(rng) for _ in range(max_deg + 1)])

    # -- structure ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Degree, with the zero polynomial at -1."""
        return len(self.coeffs) - 1

    def coeff(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.field.zero

    def leading(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, UniPoly)
            and self.field == other.field
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.field, self.coeffs))

    # -- ring arithmetic ----------------------------------------------------

    def __add__(self, other: "UniPoly") -> "UniPoly":
        f = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(f, [f.add(self.coeff(i), other.coeff(i)) for i in range(n)])

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        f = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return UniPoly(f, [f.sub(self.coeff(i), other.coeff(i)) for i in range(n)])

    def __neg__(self) -> "UniPoly":
        f = self.field
        return UniPoly(f, [f.neg(c) for c in self.coeffs])

    def __mul__(self, other: "UniPoly") -> "UniPoly":
        f = self.field
        if self.is_zero() or other.is_zero():
            return UniPoly.zero(f)
        out = [f.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if f.is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = f.add(out[i + j], f.mul(a, b))
        return UniPoly(f, out)

    def scale(self, c) -> "UniPoly":
        f = self.field
        return UniPoly(f, [f.mul(c, a) for a in self.coeffs])

    def monic(self) -> "UniPoly":
        if self.is_zero():
            return self
        return self.scale(self.field.inv(self.leading()))

    def divmod_(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        f = self.field
        rem = list(self.coeffs)
        dd, dv = len(rem) - 1, other.degree()
        if dd < dv:
            return UniPoly.zero(f), self
        inv_lead = f.inv(other.leading())
        quo = [f.zero] * (dd - dv + 1)
        for i in range(dd - dv, -1, -1):
            c = f.mul(rem[i + dv], inv_lead)
            if f.is_zero(c):
                continue
            quo[i] = c
            for j, b in enumerate(other.coeffs):
                rem[i + j] = f.sub(rem[i + j], f.mul(c, b))
        return UniPoly(f, quo), UniPoly(f, rem)

    def __mod__(self, other: "UniPoly") -> "UniPoly":
        return self.divmod_(other)[1]

    def gcd(self, other: "UniPoly") -> "UniPoly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def derivative(self) -> "UniPoly":
        f = self.field
        out = []
        for i in range(1, len(self.coeffs)):
            mult = f.from_int(i)
            out.append(f.mul(mult, self.coeffs[i]))
        return UniPoly(f, out)

    def pow_mod(self, e: int, mod: "UniPoly") -> "UniPoly":
        """Self**e reduced mod ``mod`` (square and multiply)."""
        result = UniPoly.one(self.field) % mod
        base = self % mod
        while e > 0:
            if e & 1:
                result = (result * base) % mod
            base = (base * base) % mod
            e >>= 1
        return result

    # -- evaluation ---------------------------------------------------------

    def eval_at(self, c):
        f = self.field
        acc = f.zero
        for a in reversed(self.coeffs):
            acc = f.add(f.mul(acc, c), a)
        return acc

    # -- truncated arithmetic (work in F[t]/t^m) -----------------------------

    def truncate(self, m: int) -> "UniPoly":
        return UniPoly(self.field, self.coeffs[:m])

    def mul_trunc(self, other: "UniPoly", m: int) -> "UniPoly":
        return (self * other).truncate(m)

    def inv_trunc(self, m: int) -> "UniPoly":
        """Multiplicative inverse mod t^m; requires a unit constant term."""
        f = self.field
        c0 = self.coeff(0)
        if f.is_zero(c0):
            raise ZeroDivisionError("series inverse needs a nonzero constant term")
        inv0 = f.inv(c0)
        out = [inv0] + [f.zero] * (m - 1)
        for i in range(1, m):
            # Coefficient i of self*out must vanish.
            acc = f.zero
            for j in range(1, i + 1):
                acc = f.add(acc, f.mul(self.coeff(j), out[i - j]))
            out[i] = f.neg(f.mul(inv0, acc))
        return UniPoly(f, out)

    def shift_up(self, r: int) -> "UniPoly":
        if self.is_zero():
            return self
        return UniPoly(self.field, (self.field.zero,) * r + self.coeffs)

    # -- display ------------------------------------------------------------

    def __repr__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if self.field.is_zero(c):
                continue
            if i == 0:
                parts.append(f"{c}")
            elif i == 1:
                parts.append(f"{c}*x" if c != self.field.one else "x")
            else:
                parts.append(f"{c}*x^{i}" if c != self.field.one else f"x^{i}")
        return " + ".join(parts)
