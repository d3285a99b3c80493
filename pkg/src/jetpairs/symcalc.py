"""Noncommutative symmetric sums and the polynomial-data commutant maps.

The building block is S(x^[d], y_1, ..., y_t): the sum of all noncommuting
monomials with d copies of x and the given y's, zero when d < 0.  On top of
it sit the d-operators d_{y_1...y_t}(q(x)), the coefficients of powers of a
truncated matrix polynomial, and the two maps between polynomial tuples
(q_0, ..., q_k) and commutant elements B = sum q_j(A) t^j.

Enumeration is by the lexicographic multiset-permutation iterator, one
matrix product per arrangement: slow in the abstract but tiny at this scale,
and it matches the defining sum monomial for monomial.

Grouping caveat: arrangements are arrangements of *symbols*.  The public
``sym_sum``/``d_op`` take matrix lists and group equal values (a repeated
value in ys is the same symbol repeated).  The power-coefficient and
parametrization routines instead group by coefficient index, so that two
coefficient matrices that merely happen to be equal still count as distinct
symbols; otherwise degenerate inputs (say A_1 == A_2) would be undercounted.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .linalg import Matrix, minpoly_dim, poly_at_matrix, solve_particular
from .truncmat import MatPoly
from .unipoly import UniPoly


class NotOneRegularError(ValueError):
    """The constant coefficient is not 1-regular; the q-representation is not unique."""


class NotInCommutantError(ValueError):
    """B is not a polynomial in (A, t); recovery failed at the recorded stage."""

    def __init__(self, stage: int):
        super().__init__(f"no valid q at stage {stage}: element not in the commutant")
        self.stage = stage


@dataclass(frozen=True)
class SymArgs:
    """Arguments of S(x^[x_mult], ys); x_mult may be <= 0 (zero for < 0)."""

    x: Matrix
    x_mult: int
    ys: tuple[Matrix, ...]

    def __init__(self, x: Matrix, x_mult: int, ys: Sequence[Matrix] = ()):
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "x_mult", int(x_mult))
        object.__setattr__(self, "ys", tuple(ys))


def multiset_arrangements(counts: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """All distinct arrangements of a multiset, lexicographically.

    counts[g] copies of group index g; yields tuples of group indices.
    """
    total = sum(counts)
    remaining = list(counts)
    prefix: list[int] = []

    def rec() -> Iterator[tuple[int, ...]]:
        if len(prefix) == total:
            yield tuple(prefix)
            return
        for g in range(len(remaining)):
            if remaining[g] == 0:
                continue
            remaining[g] -= 1
            prefix.append(g)
            yield from rec()
            prefix.pop()
            remaining[g] += 1

    yield from rec()


def sym_sum_groups(groups: Sequence[tuple[Matrix, int]]) -> Matrix:
    """Sum over all arrangements of the symbol multiset given as (matrix, count) groups."""
    mats = [m for m, _ in groups]
    counts = [c for _, c in groups]
    if not mats:
        raise ValueError("sym_sum_groups needs at least one group for the shape")
    field, n = mats[0].field, mats[0].rows
    acc = Matrix.zero(field, n)
    for arrangement in multiset_arrangements(counts):
        prod = Matrix.identity(field, n)
        for g in arrangement:
            prod = prod * mats[g]
        acc = acc + prod
    return acc


def _value_groups(mats: Sequence[Matrix]) -> list[tuple[Matrix, int]]:
    groups: list[tuple[Matrix, int]] = []
    index: dict[tuple, int] = {}
    for m in mats:
        key = (m.rows, m.cols, m.to_flat())
        if key in index:
            g, c = groups[index[key]]
            groups[index[key]] = (g, c + 1)
        else:
            index[key] = len(groups)
            groups.append((m, 1))
    return groups


def sym_sum(args: SymArgs) -> Matrix:
    """S(x^[d], y_1, ..., y_t) with the multiset conventions.

    d < 0 gives the zero matrix; d = 0 drops x entirely; equal matrices in
    ys are the same symbol repeated.  Permuting ys never changes the value.
    """
    field, n = args.x.field, args.x.rows
    if args.x_mult < 0:
        return Matrix.zero(field, n)
    groups = _value_groups(args.ys)
    if args.x_mult > 0:
        groups = [(args.x, args.x_mult)] + groups
    if not groups:
        return Matrix.identity(field, n)  # the empty monomial
    return sym_sum_groups(groups)


def _d_op_groups(q: UniPoly, groups: Sequence[tuple[Matrix, int]], x: Matrix) -> Matrix:
    field, n = x.field, x.rows
    t = sum(c for _, c in groups)
    acc = Matrix.zero(field, n)
    for j in range(q.degree() + 1):
        c = q.coeff(j)
        if field.is_zero(c) or j < t:
            continue  # j - t < 0 terms vanish by convention
        term = sym_sum_groups([(x, j - t)] + list(groups)) if j > t else sym_sum_groups(list(groups))
        acc = acc + term.scale(c)
    return acc


def d_op(q: UniPoly, ys: Sequence[Matrix], x: Matrix) -> Matrix:
    """d_{y_1...y_t}(q(x)) = sum_j c_j S(x^[j-t], y_1, ..., y_t) at the given matrices."""
    return _d_op_groups(q, _value_groups(ys), x)


@lru_cache(maxsize=None)
def partitions(m: int) -> tuple[tuple[int, ...], ...]:
    """All partitions of m into positive parts, each written descending."""
    if m == 0:
        return ((),)

    def rec(rest: int, max_part: int):
        if rest == 0:
            yield ()
            return
        for p in range(min(rest, max_part), 0, -1):
            for tail in rec(rest - p, p):
                yield (p,) + tail

    return tuple(rec(m, m))


def _partition_groups(parts: tuple[int, ...], coeffs: Sequence[Matrix]) -> list[tuple[Matrix, int]]:
    # Equal parts are the same symbol; distinct parts stay distinct symbols
    # even if the coefficient matrices coincide.
    groups = []
    i = 0
    while i < len(parts):
        j = i
        while j < len(parts) and parts[j] == parts[i]:
            j += 1
        groups.append((coeffs[parts[i]], j - i))
        i = j
    return groups


def g_coeff(i: int, l: int, a_coeffs: Sequence[Matrix]) -> Matrix:
    """Coefficient of t^l in (A_0 + A_1 t + ... + A_k t^k)^i.

    l = 0 gives A_0^i; for l >= 1 the sum runs over all partitions of l,
    each contributing S(A_0^[i - r], A_{part_1}, ..., A_{part_r}).
    """
    a0 = a_coeffs[0]
    if l == 0:
        return a0.pow_int(i)
    field, n = a0.field, a0.rows
    acc = Matrix.zero(field, n)
    for parts in partitions(l):
        r = len(parts)
        if r > i or max(parts) >= len(a_coeffs):
            continue  # x-multiplicity i - r < 0 vanishes; missing coefficients are zero
        groups = _partition_groups(parts, a_coeffs)
        if i - r > 0:
            groups = [(a0, i - r)] + groups
        acc = acc + sym_sum_groups(groups)
    return acc


def b_from_q(qs: Sequence[UniPoly], a: MatPoly) -> MatPoly:
    """The commutant element with coefficients B_s built from (q_0, ..., q_k).

    B_0 = q_0(A_0) and each later B_s adds, on top of q_s(A_0), one
    d-operator correction per partition of s - j applied to every earlier
    q_j.  Equals sum_j q_j(A) t^j computed directly in the truncated ring.
    """
    if len(qs) != a.k + 1:
        raise ValueError(f"need {a.k + 1} polynomials, got {len(qs)}")
    field, n, k = a.field, a.n, a.k
    a0 = a.coeffs[0]
    out = []
    for s in range(k + 1):
        b_s = poly_at_matrix(qs[s], a0)
        for j in range(s):
            for parts in partitions(s - j):
                groups = _partition_groups(parts, a.coeffs)
                b_s = b_s + _d_op_groups(qs[j], groups, a0)
        out.append(b_s)
    return MatPoly(field, n, k, out)


def b_from_q_direct(qs: Sequence[UniPoly], a: MatPoly) -> MatPoly:
    """sum_j q_j(A) t^j evaluated directly in the truncated ring."""
    if len(qs) != a.k + 1:
        raise ValueError(f"need {a.k + 1} polynomials, got {len(qs)}")
    acc = MatPoly.zero(a.field, a.n, a.k)
    for j, q in enumerate(qs):
        acc = acc + a.apply_unipoly(q).shift_up(j)
    return acc


def q_from_b(a: MatPoly, b: MatPoly) -> list[UniPoly]:
    """Invert the parametrization: the unique degree <= n-1 tuple with b_from_q(qs, a) = b.

    Works stage by stage: the stage-s residual must equal q_s(A_0), and for
    1-regular A_0 the powers I, A_0, ..., A_0^(n-1) are independent, so q_s
    is pinned.  Raises NotOneRegularError without 1-regularity and
    NotInCommutantError (with the failing stage) when b is not in the
    commutant of (a, t).
    """
    a._check_ring(b)
    field, n, k = a.field, a.n, a.k
    a0 = a.coeffs[0]
    _, deg = minpoly_dim(a0)
    if deg < n:
        raise NotOneRegularError(f"dim F[A_0] = {deg} < n = {n}")
    # Columns: vec(A_0^i) for i < n.
    powers = []
    p = Matrix.identity(field, n)
    for _ in range(n):
        powers.append(p.to_flat())
        p = p * a0
    system = Matrix(field, list(zip(*powers)))
    qs: list[UniPoly] = []
    for s in range(k + 1):
        residual = b.coeffs[s]
        for j in range(s):
            for parts in partitions(s - j):
                groups = _partition_groups(parts, a.coeffs)
                residual = residual - _d_op_groups(qs[j], groups, a0)
        sol = solve_particular(system, residual.to_flat())
        if sol is None:
            raise NotInCommutantError(stage=s)
        qs.append(UniPoly(field, sol))
    return qs
