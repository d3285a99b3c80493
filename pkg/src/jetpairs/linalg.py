"""Dense exact matrices and the linear-algebra kernel.

Matrices are immutable (tuple-of-tuples) over one of the fields in
``fields``.  rank / kernel / solve run over any field: prime fields below
the int64 bound go through the vectorized routines in ``modlin``, while the
rationals and oversized primes use a generic elimination with the same
deterministic pivot rule (first nonzero entry; exact arithmetic needs no
magnitude pivoting), so results are reproducible on both paths.

The characteristic polynomial uses the division-free Berkowitz scheme and is
therefore valid in any characteristic; the minimal polynomial comes from the
first linear dependence among the vectorized powers.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from . import modlin
from .fields import Field, PrimeField
from .unipoly import UniPoly


class Matrix:
    """Immutable dense matrix over an exact field."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: Field, data: Iterable[Iterable]):
        rows = tuple(tuple(r) for r in data)
        self.field = field
        self.rows = len(rows)
        self.cols = len(rows[0]) if rows else 0
        if any(len(r) != self.cols for r in rows):
            raise ValueError("ragged matrix data")
        self.data = rows

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, field: Field, rows: int, cols: int | None = None) -> "Matrix":
        cols = rows if cols is None else cols
        z = field.zero
        return cls(field, [[z] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        z, o = field.zero, field.one
        return cls(field, [[o if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def unit(cls, field: Field, n: int, i: int, j: int) -> "Matrix":
        """The matrix e_{i+1,j+1}: single 1 in (0-based) slot (i, j)."""
        z = field.zero
        data = [[z] * n for _ in range(n)]
        data[i][j] = field.one
        return cls(field, data)

    @classmethod
    def from_ints(cls, field: Field, data: Iterable[Iterable[int]]) -> "Matrix":
        return cls(field, [[field.from_int(c) for c in row] for row in data])

    @classmethod
    def diagonal(cls, field: Field, entries: Sequence) -> "Matrix":
        n = len(entries)
        z = field.zero
        return cls(field, [[entries[i] if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def from_flat(cls, field: Field, rows: int, cols: int, flat: Sequence) -> "Matrix":
        if len(flat) != rows * cols:
            raise ValueError("flat length does not match shape")
        return cls(field, [flat[i * cols : (i + 1) * cols] for i in range(rows)])

    # -- structure ----------------------------------------------------------

    def __getitem__(self, ij: tuple[int, int]):
        i, j = ij
        return self.data[i][j]

    def to_flat(self) -> tuple:
        return tuple(c for row in self.data for c in row)

    def is_zero(self) -> bool:
        f = self.field
        return all(f.is_zero(c) for row in self.data for c in row)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_scalar(self) -> bool:
        """True iff the matrix is c*I for some scalar c (square only)."""
        if not self.is_square():
            return False
        f = self.field
        c = self.data[0][0] if self.rows else f.zero
        for i in range(self.rows):
            for j in range(self.cols):
                want = c if i == j else f.zero
                if self.data[i][j] != want:
                    return False
        return True

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.data == other.data
        )

    def __hash__(self) -> int:
        return hash((self.field, self.data))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(c) for c in row) for row in self.data)
        return f"[{body}]"

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_shape(other)
        f = self.field
        return Matrix(
            f,
            [
                [f.add(a, b) for a, b in zip(ra, rb)]
                for ra, rb in zip(self.data, other.data)
            ],
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_shape(other)
        f = self.field
        return Matrix(
            f,
            [
                [f.sub(a, b) for a, b in zip(ra, rb)]
                for ra, rb in zip(self.data, other.data)
            ],
        )

    def __neg__(self) -> "Matrix":
        f = self.field
        return Matrix(f, [[f.neg(a) for a in row] for row in self.data])

    def __mul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows or self.field != other.field:
            raise ValueError("matrix product shape/field mismatch")
        f = self.field
        if isinstance(f, PrimeField) and f.fits_numpy:
            prod = modlin.matmul_mod(
                np.array(self.data, dtype=np.int64).reshape(self.rows, self.cols),
                np.array(other.data, dtype=np.int64).reshape(other.rows, other.cols),
                f.p,
            )
            return Matrix(f, [[int(c) for c in row] for row in prod])
        bt = list(zip(*other.data))
        out = []
        for row in self.data:
            out.append(
                [
                    _dot(f, row, col)
                    for col in bt
                ]
            )
        return Matrix(f, out)

    def scale(self, c) -> "Matrix":
        f = self.field
        return Matrix(f, [[f.mul(c, a) for a in row] for row in self.data])

    def transpose(self) -> "Matrix":
        return Matrix(self.field, list(zip(*self.data)))

    def trace(self):
        f = self.field
        acc = f.zero
        for i in range(min(self.rows, self.cols)):
            acc = f.add(acc, self.data[i][i])
        return acc

    def mul_vector(self, v: Sequence) -> tuple:
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        f = self.field
        return tuple(_dot(f, row, v) for row in self.data)

    def pow_int(self, e: int) -> "Matrix":
        if not self.is_square():
            raise ValueError("power of a non-square matrix")
        result = Matrix.identity(self.field, self.rows)
        base = self
        while e > 0:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def _check_shape(self, other: "Matrix") -> None:
        if (
            self.rows != other.rows
            or self.cols != other.cols
            or self.field != other.field
        ):
            raise ValueError("matrix shape/field mismatch")


def _dot(f: Field, u: Sequence, v: Sequence):
    acc = f.zero
    for a, b in zip(u, v):
        acc = f.add(acc, f.mul(a, b))
    return acc


def commutator_mat(a: Matrix, b: Matrix) -> Matrix:
    return a * b - b * a


# ---------------------------------------------------------------------------
# Echelon forms, rank, kernels, solving
# ---------------------------------------------------------------------------


class SubspaceBasis:
    """Row-reduced basis of a linear subspace of a coordinatized space.

    ``vectors`` is always a reduced row echelon family, which makes basis
    equality literal tuple equality (the RREF of a subspace is unique).
    ``context`` tags the coordinatization convention in force, e.g.
    "matrix 3x3" or "matpoly n=3 k=2".
    """

    __slots__ = ("ambient_dim", "vectors", "context", "field")

    def __init__(self, field: Field, ambient_dim: int, vectors, context: str = ""):
        self.field = field
        self.ambient_dim = ambient_dim
        self.vectors = tuple(tuple(v) for v in vectors)
        self.context = context
        for v in self.vectors:
            if len(v) != ambient_dim:
                raise ValueError("basis vector with wrong ambient dimension")

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def reduce(self, vec: Sequence) -> tuple:
        """Residual of vec after elimination against the basis rows."""
        f = self.field
        v = list(vec)
        pivots = [_pivot_index(f, row) for row in self.vectors]
        for row, pc in zip(self.vectors, pivots):
            if pc is None or f.is_zero(v[pc]):
                continue
            c = v[pc]  # basis rows have pivot 1
            for j in range(pc, self.ambient_dim):
                v[j] = f.sub(v[j], f.mul(c, row[j]))
        return tuple(v)

    def contains(self, vec: Sequence) -> bool:
        f = self.field
        return all(f.is_zero(c) for c in self.reduce(vec))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SubspaceBasis)
            and self.ambient_dim == other.ambient_dim
            and self.vectors == other.vectors
        )

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.vectors))

    def __repr__(self) -> str:
        return f"SubspaceBasis(dim={self.dim}, ambient={self.ambient_dim}, {self.context!r})"


def _pivot_index(f: Field, row: Sequence) -> int | None:
    for j, c in enumerate(row):
        if not f.is_zero(c):
            return j
    return None


def rref_rows(rows: Sequence[Sequence], field: Field) -> tuple[list[list], list[int]]:
    """Generic reduced row echelon form; first-nonzero pivoting."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    n_rows, n_cols = len(m), len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        if r >= n_rows:
            break
        sel = None
        for i in range(r, n_rows):
            if not field.is_zero(m[i][c]):
                sel = i
                break
        if sel is None:
            continue
        m[r], m[sel] = m[sel], m[r]
        inv = field.inv(m[r][c])
        m[r] = [field.mul(inv, a) for a in m[r]]
        for i in range(n_rows):
            if i == r or field.is_zero(m[i][c]):
                continue
            factor = m[i][c]
            m[i] = [field.sub(a, field.mul(factor, b)) for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def _use_numpy(field: Field) -> bool:
    return isinstance(field, PrimeField) and field.fits_numpy


def span_basis(
    vectors: Sequence[Sequence], field: Field, ambient_dim: int, context: str = ""
) -> SubspaceBasis:
    """Row-reduced basis of the span of the given coordinate vectors."""
    if not vectors:
        return SubspaceBasis(field, ambient_dim, (), context)
    if _use_numpy(field):
        arr = modlin.as_mod_array([list(v) for v in vectors], field.p)
        red, piv = modlin.rref_mod(arr, field.p)
        rows = [tuple(int(c) for c in red[i]) for i in range(len(piv))]
        return SubspaceBasis(field, ambient_dim, rows, context)
    red, piv = rref_rows(vectors, field)
    return SubspaceBasis(field, ambient_dim, red[: len(piv)], context)


def rank(m: Matrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    if _use_numpy(m.field):
        return modlin.rank_mod(np.array(m.data, dtype=np.int64), m.field.p)
    return len(rref_rows(m.data, m.field)[1])


def kernel_basis(m: Matrix, context: str = "") -> SubspaceBasis:
    """Row-reduced basis of the right kernel {v : m v = 0}."""
    f = m.field
    if m.rows == 0:
        return span_basis(
            [tuple(Matrix.identity(f, m.cols).data[i]) for i in range(m.cols)],
            f,
            m.cols,
            context,
        )
    if _use_numpy(f):
        ns = modlin.nullspace_mod(np.array(m.data, dtype=np.int64), f.p)
        vecs = [tuple(int(c) for c in row) for row in ns]
        return SubspaceBasis(f, m.cols, vecs, context)
    red, pivots = rref_rows(m.data, f)
    free = [c for c in range(m.cols) if c not in set(pivots)]
    vecs = []
    for fc in free:
        v = [f.zero] * m.cols
        v[fc] = f.one
        for row, pc in enumerate(pivots):
            v[pc] = f.neg(red[row][fc])
        vecs.append(v)
    return span_basis(vecs, f, m.cols, context)


def solve_particular(m: Matrix, rhs: Sequence) -> tuple | None:
    """One solution of m x = rhs with free variables set to 0, or None.

    The echelon back-substitution representative is deterministic, which is
    what makes every canonical-solution contract downstream reproducible.
    """
    f = m.field
    if len(rhs) != m.rows:
        raise ValueError("rhs length mismatch")
    if _use_numpy(f):
        x = modlin.solve_mod(
            np.array(m.data, dtype=np.int64),
            np.array(list(rhs), dtype=np.int64),
            f.p,
        )
        return None if x is None else tuple(int(c) for c in x)
    aug = [list(row) + [b] for row, b in zip(m.data, rhs)]
    red, pivots = rref_rows(aug, f)
    if m.cols in pivots:
        return None
    x = [f.zero] * m.cols
    for row, pc in enumerate(pivots):
        x[pc] = red[row][m.cols]
    return tuple(x)


def inverse(m: Matrix) -> Matrix:
    """Inverse of a square matrix; raises ValueError when singular."""
    if not m.is_square():
        raise ValueError("inverse of a non-square matrix")
    f = m.field
    n = m.rows
    ident = Matrix.identity(f, n)
    aug = [list(row) + list(irow) for row, irow in zip(m.data, ident.data)]
    red, pivots = rref_rows(aug, f)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return Matrix(f, [row[n:] for row in red[:n]])


def det(m: Matrix):
    """Determinant via the Berkowitz vector (division-free)."""
    if not m.is_square():
        raise ValueError("determinant of a non-square matrix")
    f = m.field
    if m.rows == 0:
        return f.one
    p = charpoly(m)
    # charpoly(x) = det(xI - M), so det(M) = (-1)^n * p(0).
    c0 = p.coeff(0)
    return c0 if m.rows % 2 == 0 else f.neg(c0)


# ---------------------------------------------------------------------------
# Characteristic and minimal polynomials
# ---------------------------------------------------------------------------


def charpoly(m: Matrix) -> UniPoly:
    """Monic characteristic polynomial det(xI - M), by Berkowitz.

    Division-free, hence valid over F_p for every p as well as over Q.
    """
    if not m.is_square():
        raise ValueError("characteristic polynomial of a non-square matrix")
    f = m.field
    n = m.rows
    vec = [f.one]  # charpoly of the empty matrix
    for r in range(1, n + 1):
        a = m.data[r - 1][r - 1]
        toep = [f.one, f.neg(a)]
        if r >= 2:
            row = m.data[r - 1][: r - 1]
            v = [m.data[i][r - 1] for i in range(r - 1)]
            toep.append(f.neg(_dot(f, row, v)))
            for _ in range(r - 2):
                v = [_dot(f, m.data[i][: r - 1], v) for i in range(r - 1)]
                toep.append(f.neg(_dot(f, row, v)))
        new = []
        for i in range(r + 1):
            acc = f.zero
            for j in range(min(i, len(vec) - 1) + 1):
                if i - j < len(toep):
                    acc = f.add(acc, f.mul(toep[i - j], vec[j]))
            new.append(acc)
        vec = new
    # vec holds highest degree first.
    return UniPoly(f, list(reversed(vec)))


def poly_at_matrix(p: UniPoly, m: Matrix) -> Matrix:
    """Evaluate p at a square matrix (Horner)."""
    f = m.field
    acc = Matrix.zero(f, m.rows, m.cols)
    ident = Matrix.identity(f, m.rows)
    for c in reversed(p.coeffs):
        acc = acc * m + ident.scale(c)
    return acc


def minpoly_dim(m: Matrix) -> tuple[UniPoly, int]:
    """Minimal polynomial of M and its degree (= dim of F[M])."""
    if not m.is_square():
        raise ValueError("minimal polynomial of a non-square matrix")
    f = m.field
    n = m.rows
    power = Matrix.identity(f, n)
    stack = [power.to_flat()]
    for d in range(1, n + 1):
        power = power * m
        stack.append(power.to_flat())
        coeff_mat = Matrix(f, list(zip(*stack)))  # columns = powers 0..d
        ker = kernel_basis(coeff_mat)
        if ker.dim > 0:
            # Powers 0..d-1 are independent, so any kernel vector has a
            # nonzero last coordinate; normalize to a monic polynomial.
            rel = next(v for v in ker.vectors if not f.is_zero(v[d]))
            inv = f.inv(rel[d])
            return UniPoly(f, [f.mul(inv, c) for c in rel]), d
    raise AssertionError("no minimal polynomial found below degree n+1")


def is_nilpotent(m: Matrix) -> bool:
    return poly_at_matrix(UniPoly.x_power(m.field, m.rows), m).is_zero()


# ---------------------------------------------------------------------------
# Squarefreeness and base-field roots
# ---------------------------------------------------------------------------


def base_root_count(p: UniPoly) -> int:
    """Number of distinct roots of p lying in the base field."""
    if p.is_zero():
        raise ValueError("root count of the zero polynomial")
    f = p.field
    if p.degree() == 0:
        return 0
    if f.kind == "prime":
        # gcd(p, x^q - x) collects exactly the distinct linear factors.
        xq = UniPoly.x(f).pow_mod(f.p, p)
        return p.gcd(xq - UniPoly.x(f)).degree()
    return len(rational_roots(p))


def unique_base_root(p: UniPoly):
    """The single base-field root of p if it has exactly one, else None."""
    f = p.field
    if p.degree() <= 0:
        return None
    if f.kind == "prime":
        xq = UniPoly.x(f).pow_mod(f.p, p)
        g = p.gcd(xq - UniPoly.x(f))
        if g.degree() != 1:
            return None
        return f.neg(g.coeff(0))  # monic x - r
    roots = rational_roots(p)
    return roots[0] if len(roots) == 1 else None


def rational_roots(p: UniPoly) -> list:
    """All rational roots (rational-root theorem; desk-scale coefficients)."""
    from fractions import Fraction

    if p.is_zero():
        raise ValueError("roots of the zero polynomial")
    coeffs = [Fraction(c) for c in p.coeffs]
    # Clear denominators to an integer polynomial.
    from math import lcm

    den = lcm(*[c.denominator for c in coeffs]) if coeffs else 1
    ints = [int(c * den) for c in coeffs]
    roots = []
    # Strip x^v: zero is a root iff the constant term vanishes.
    v = 0
    while v < len(ints) and ints[v] == 0:
        v += 1
    if v > 0:
        roots.append(Fraction(0))
        ints = ints[v:]
    if len(ints) <= 1:
        return sorted(set(roots))
    lead, const = ints[-1], ints[0]
    for r in _divisors(abs(const)):
        for s in _divisors(abs(lead)):
            for cand in (Fraction(r, s), Fraction(-r, s)):
                if p.eval_at(cand) == 0:
                    roots.append(cand)
    return sorted(set(roots))


def _divisors(n: int) -> list[int]:
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def squarefree_split_info(p: UniPoly) -> tuple[bool, int]:
    """(gcd(p, p') is constant, number of distinct base-field roots).

    The gcd logic stays valid in small characteristic: p' may vanish (then p
    is a q-th power and certainly not squarefree unless constant).
    """
    if p.is_zero():
        raise ValueError("squarefree test of the zero polynomial")
    dp = p.derivative()
    if dp.is_zero():
        squarefree = p.degree() == 0
    else:
        squarefree = p.gcd(dp).degree() == 0
    return squarefree, base_root_count(p)


# ---------------------------------------------------------------------------
# The ad operator as a coordinate matrix
# ---------------------------------------------------------------------------


def kron(a: Matrix, b: Matrix) -> Matrix:
    f = a.field
    out = []
    for i in range(a.rows):
        for k in range(b.rows):
            row = []
            for j in range(a.cols):
                for l in range(b.cols):
                    row.append(f.mul(a.data[i][j], b.data[k][l]))
            out.append(row)
    return Matrix(f, out)


def ad_matrix(a0: Matrix) -> Matrix:
    """Matrix of Z -> [a0, Z] on row-major vec coordinates: a0 (x) I - I (x) a0^T."""
    if not a0.is_square():
        raise ValueError("ad of a non-square matrix")
    ident = Matrix.identity(a0.field, a0.rows)
    return kron(a0, ident) - kron(ident, a0.transpose())
