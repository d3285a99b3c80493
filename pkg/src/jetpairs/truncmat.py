"""The ring M_n(F)[t]/t^(k+1): truncated matrix polynomials.

A MatPoly carries its own size n and truncation order k, because several
arguments juggle two orders at once (an order-k element and its order-(k+l)
lift).  The coefficient list is dense: entry s is the n x n matrix on t^s,
with zero matrices stored explicitly.

Coordinatization convention, used by every kernel computation downstream:
a MatPoly flattens to a vector of length n^2 (k+1), order-major then
row-major (all of coefficient 0 first, each coefficient row by row).
"""

from __future__ import annotations

import math
from typing import Sequence

from .fields import Field
from .linalg import Matrix
from .unipoly import UniPoly

INF = math.inf


class MatPoly:
    __slots__ = ("field", "n", "k", "coeffs")

    def __init__(self, field: Field, n: int, k: int, coeffs: Sequence[Matrix]):
        coeffs = tuple(coeffs)
        if len(coeffs) != k + 1:
            raise ValueError(f"need {k + 1} coefficients, got {len(coeffs)}")
        for c in coeffs:
            if c.rows != n or c.cols != n or c.field != field:
                raise ValueError("coefficient of wrong shape or field")
        self.field = field
        self.n = n
        self.k = k
        self.coeffs = coeffs

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, field: Field, n: int, k: int) -> "MatPoly":
        return cls(field, n, k, [Matrix.zero(field, n) for _ in range(k + 1)])

    @classmethod
    def one(cls, field: Field, n: int, k: int) -> "MatPoly":
        out = [Matrix.identity(field, n)]
        out += [Matrix.zero(field, n) for _ in range(k)]
        return cls(field, n, k, out)

    @classmethod
    def constant(cls, m: Matrix, k: int) -> "MatPoly":
        out = [m] + [Matrix.zero(m.field, m.rows) for _ in range(k)]
        return cls(m.field, m.rows, k, out)

    @classmethod
    def t_power(cls, field: Field, n: int, k: int, j: int) -> "MatPoly":
        """The element t^j (identity coefficient in slot j)."""
        if not 0 <= j <= k:
            raise ValueError("t exponent outside truncation order")
        out = [
            Matrix.identity(field, n) if s == j else Matrix.zero(field, n)
            for s in range(k + 1)
        ]
        return cls(field, n, k, out)

    @classmethod
    def from_coeff_map(cls, field: Field, n: int, k: int, entries: dict[int, Matrix]) -> "MatPoly":
        out = [entries.get(s, Matrix.zero(field, n)) for s in range(k + 1)]
        return cls(field, n, k, out)

    @classmethod
    def from_vector(cls, field: Field, n: int, k: int, vec: Sequence) -> "MatPoly":
        if len(vec) != n * n * (k + 1):
            raise ValueError("coordinate vector length mismatch")
        out = []
        for s in range(k + 1):
            flat = vec[s * n * n : (s + 1) * n * n]
            out.append(Matrix.from_flat(field, n, n, flat))
        return cls(field, n, k, out)

    # -- structure ----------------------------------------------------------

    def to_vector(self) -> tuple:
        """Order-major then row-major flattening (the shared convention)."""
        return tuple(c for m in self.coeffs for c in m.to_flat())

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.coeffs)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MatPoly)
            and self.field == other.field
            and (self.n, self.k) == (other.n, other.k)
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.field, self.n, self.k, self.coeffs))

    def __repr__(self) -> str:
        return f"MatPoly(n={self.n}, k={self.k}, {list(self.coeffs)!r})"

    def _check_ring(self, other: "MatPoly") -> None:
        if (
            self.field != other.field
            or self.n != other.n
            or self.k != other.k
        ):
            raise ValueError("matpoly ring mismatch (n, k, or field differ)")

    # -- ring arithmetic ----------------------------------------------------

    def __add__(self, other: "MatPoly") -> "MatPoly":
        self._check_ring(other)
        return MatPoly(
            self.field, self.n, self.k,
            [a + b for a, b in zip(self.coeffs, other.coeffs)],
        )

    def __sub__(self, other: "MatPoly") -> "MatPoly":
        self._check_ring(other)
        return MatPoly(
            self.field, self.n, self.k,
            [a - b for a, b in zip(self.coeffs, other.coeffs)],
        )

    def __neg__(self) -> "MatPoly":
        return MatPoly(self.field, self.n, self.k, [-a for a in self.coeffs])

    def __mul__(self, other: "MatPoly") -> "MatPoly":
        """Ring product, truncated past t^k."""
        self._check_ring(other)
        out = [Matrix.zero(self.field, self.n) for _ in range(self.k + 1)]
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j in range(self.k + 1 - i):
                b = other.coeffs[j]
                if b.is_zero():
                    continue
                out[i + j] = out[i + j] + a * b
        return MatPoly(self.field, self.n, self.k, out)

    def scale(self, c) -> "MatPoly":
        return MatPoly(self.field, self.n, self.k, [m.scale(c) for m in self.coeffs])

    def mul_unipoly(self, p: UniPoly) -> "MatPoly":
        """Product with the central scalar polynomial p(t), truncated."""
        out = [Matrix.zero(self.field, self.n) for _ in range(self.k + 1)]
        for j in range(min(p.degree(), self.k) + 1):
            c = p.coeff(j)
            if self.field.is_zero(c):
                continue
            for s in range(self.k + 1 - j):
                out[s + j] = out[s + j] + self.coeffs[s].scale(c)
        return MatPoly(self.field, self.n, self.k, out)

    def pow_int(self, e: int) -> "MatPoly":
        result = MatPoly.one(self.field, self.n, self.k)
        base = self
        while e > 0:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def apply_unipoly(self, q: UniPoly) -> "MatPoly":
        """q evaluated at this element of the truncated ring (Horner)."""
        acc = MatPoly.zero(self.field, self.n, self.k)
        one = MatPoly.one(self.field, self.n, self.k)
        for c in reversed(q.coeffs):
            acc = acc * self + one.scale(c)
        return acc

    def conjugate(self, h: Matrix, h_inv: Matrix) -> "MatPoly":
        """Coefficient-wise h . self . h^-1."""
        return MatPoly(
            self.field, self.n, self.k,
            [h * c * h_inv for c in self.coeffs],
        )

    # -- order structure ----------------------------------------------------

    def valuation(self) -> int | float:
        """Least s with a nonzero t^s coefficient; infinity for zero."""
        for s, c in enumerate(self.coeffs):
            if not c.is_zero():
                return s
        return INF

    def truncate(self, new_k: int) -> "MatPoly":
        if new_k > self.k:
            raise ValueError("target order exceeds source order")
        return MatPoly(self.field, self.n, new_k, self.coeffs[: new_k + 1])

    def extend(self, new_k: int) -> "MatPoly":
        """Zero-pad up to a higher truncation order."""
        if new_k < self.k:
            raise ValueError("extend cannot lower the order")
        pad = [Matrix.zero(self.field, self.n) for _ in range(new_k - self.k)]
        return MatPoly(self.field, self.n, new_k, list(self.coeffs) + pad)

    def shift_up(self, r: int) -> "MatPoly":
        """Multiply by t^r (coefficients above t^k fall away)."""
        out = [Matrix.zero(self.field, self.n) for _ in range(r)]
        out += list(self.coeffs[: self.k + 1 - r])
        return MatPoly(self.field, self.n, self.k, out)

    def shift_down(self, r: int) -> "MatPoly":
        """Divide by t^r: requires the first r coefficients to vanish.

        The result lives in the same order-k ring, zero-padded at the top,
        so t^r * shift_down(r) reproduces the original element.
        """
        for s in range(r):
            if not self.coeffs[s].is_zero():
                raise ValueError("shift_down below the valuation")
        out = list(self.coeffs[r:]) + [
            Matrix.zero(self.field, self.n) for _ in range(r)
        ]
        return MatPoly(self.field, self.n, self.k, out)

    # -- entries as scalar polynomials (used by the n=3 pipeline) ------------

    def entry_poly(self, i: int, j: int) -> UniPoly:
        return UniPoly(self.field, [c.data[i][j] for c in self.coeffs])

    @classmethod
    def from_entry_polys(cls, field: Field, n: int, k: int, entries) -> "MatPoly":
        """Build from an n x n array of UniPoly entries (degrees <= k)."""
        coeffs = []
        for s in range(k + 1):
            coeffs.append(
                Matrix(field, [[entries[i][j].coeff(s) for j in range(n)] for i in range(n)])
            )
        return cls(field, n, k, coeffs)

    # -- the block-Toeplitz embedding ----------------------------------------

    def embed_toeplitz(self) -> Matrix:
        """Injective ring homomorphism into M_{n(k+1)}(F).

        Block (i, j) holds coefficient j - i for j >= i (constant diagonals),
        zeros below: the matrix picture of multiplication by this element on
        F[t]/t^(k+1) coordinates.
        """
        f = self.field
        n, k = self.n, self.k
        size = n * (k + 1)
        zero = f.zero
        data = [[zero] * size for _ in range(size)]
        for bi in range(k + 1):
            for bj in range(bi, k + 1):
                block = self.coeffs[bj - bi]
                for i in range(n):
                    for j in range(n):
                        data[bi * n + i][bj * n + j] = block.data[i][j]
        return Matrix(f, data)


def commutator(a: MatPoly, b: MatPoly) -> MatPoly:
    """AB - BA; zero exactly when the pair is a commuting jet point."""
    return a * b - b * a


def poly_combine(a: MatPoly, b: MatPoly, p: UniPoly, q: UniPoly, mode: str) -> MatPoly:
    """Apply one of the commutation-preserving affine moves.

    mode "shift_a"  -> A + p(t) I        (returns the new A)
    mode "shift_b"  -> B + p(t) I        (returns the new B)
    mode "shear_b"  -> B + p(t) A        (returns the new B)
    mode "scale_a"  -> A (1 + q(t)), q(0) = 0 so 1 + q is a unit (new A)
    """
    a._check_ring(b)
    if p.degree() > a.k or q.degree() > a.k:
        raise ValueError("move polynomial degree exceeds truncation order")
    one = MatPoly.one(a.field, a.n, a.k)
    if mode == "shift_a":
        return a + one.mul_unipoly(p)
    if mode == "shift_b":
        return b + one.mul_unipoly(p)
    if mode == "shear_b":
        return b + a.mul_unipoly(p)
    if mode == "scale_a":
        if not a.field.is_zero(q.coeff(0)):
            raise ValueError("scale move requires q(0) = 0")
        return a.mul_unipoly(q + UniPoly.one(a.field))
    raise ValueError(f"unknown poly_combine mode {mode!r}")
