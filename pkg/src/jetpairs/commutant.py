"""Commutant spaces, the five-way equivalence battery, lifting, filtrations.

Everything here is linear algebra over the shared MatPoly coordinatization
(order-major, then row-major).  The equivalence battery computes five
characterizations of "constant coefficient 1-regular" through genuinely
independent routes (minimal polynomial, power independence, algebra closure,
commutant kernel, polynomial-data round-trip) and treats any disagreement as
a hard failure: the five are provably equivalent, so a mismatch can only be
an implementation bug.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import modlin
from .fields import Field, PrimeField
from .linalg import (
    Matrix,
    SubspaceBasis,
    ad_matrix,
    kernel_basis,
    minpoly_dim,
    solve_particular,
    span_basis,
)
from .symcalc import NotInCommutantError, NotOneRegularError, b_from_q, q_from_b
from .truncmat import MatPoly, commutator
from .unipoly import UniPoly


class EquivalenceViolationError(AssertionError):
    """The five equivalent conditions disagreed: an implementation bug, not data."""


class InfeasibleLiftError(ValueError):
    """The lift equation [A_0, Z] = RHS has no solution."""


@dataclass(frozen=True)
class EquivalenceReport:
    one_regular: bool
    powers_independent: bool
    dim_FAt: int
    commutant_dim: int
    commutant_equals_power_span: bool
    q_param_roundtrip_ok: bool


def is_one_regular(a0: Matrix) -> bool:
    """deg minpoly = n, i.e. dim F[A_0] = n."""
    if not a0.is_square():
        raise ValueError("1-regularity is for square matrices")
    return minpoly_dim(a0)[1] == a0.rows


def ad_system(a: MatPoly) -> Matrix:
    """Matrix of B -> [A, B] on MatPoly coordinates.

    Output coefficient s is sum_{j <= s} [A_{s-j}, B_j], so block (s, j)
    is the ad matrix of A_{s-j} and the system is block lower-triangular.
    """
    f = a.field
    n, k = a.n, a.k
    m = n * n
    size = m * (k + 1)
    zero = f.zero
    data = [[zero] * size for _ in range(size)]
    ads = [ad_matrix(c) for c in a.coeffs]
    for s in range(k + 1):
        for j in range(s + 1):
            block = ads[s - j]
            for i in range(m):
                row = data[s * m + i]
                bi = block.data[i]
                for jj in range(m):
                    row[j * m + jj] = bi[jj]
    return Matrix(f, data)


def commutant_basis(a: MatPoly) -> SubspaceBasis:
    """Row-reduced basis of {B : [A, B] = 0} in MatPoly coordinates."""
    ctx = f"matpoly n={a.n} k={a.k}"
    return kernel_basis(ad_system(a), context=ctx)


def power_span(a: MatPoly) -> SubspaceBasis:
    """Span of the n(k+1) elements A^i t^j (0 <= i < n, 0 <= j <= k)."""
    vecs = []
    power = MatPoly.one(a.field, a.n, a.k)
    for i in range(a.n):
        if i > 0:
            power = power * a
        for j in range(a.k + 1):
            vecs.append(power.shift_up(j).to_vector())
    ambient = a.n * a.n * (a.k + 1)
    return span_basis(vecs, a.field, ambient, context=f"matpoly n={a.n} k={a.k}")


def algebra_dim(generators: Sequence[Matrix]) -> int:
    """Dimension of the unital algebra generated by the given matrices.

    Breadth-first closure of span{I, generators} under right multiplication
    by the generators, re-reduced every round; the dimension grows strictly
    until stable, so the ambient dimension caps the round count.
    """
    if not generators:
        return 1
    field = generators[0].field
    m = generators[0].rows
    for g in generators:
        if not g.is_square() or g.rows != m or g.field != field:
            raise ValueError("generators must be square, same size, same field")
    ambient = m * m
    if isinstance(field, PrimeField) and field.fits_numpy:
        p = field.p
        gens = np.stack([np.array(g.data, dtype=np.int64) for g in generators]) % p
        eye = np.eye(m, dtype=np.int64)
        seed = np.concatenate([eye.reshape(1, -1), gens.reshape(len(generators), -1)], axis=0)
        rows, piv = modlin.rref_mod(seed, p)
        rows = rows[: len(piv)]
        for _ in range(ambient):
            basis = rows.reshape(-1, m, m)
            prods = np.matmul(basis[:, None, :, :], gens[None, :, :, :]) % p
            cand = np.concatenate([rows, prods.reshape(-1, ambient)], axis=0)
            new_rows, new_piv = modlin.rref_mod(cand, p)
            if len(new_piv) == len(piv):
                break
            rows, piv = new_rows[: len(new_piv)], new_piv
        return len(piv)
    span = span_basis(
        [Matrix.identity(field, m).to_flat()] + [g.to_flat() for g in generators],
        field,
        ambient,
    )
    for _ in range(ambient):
        mats = [Matrix.from_flat(field, m, m, v) for v in span.vectors]
        prods = [mat * g for mat in mats for g in generators]
        new_span = span_basis(
            list(span.vectors) + [prod.to_flat() for prod in prods], field, ambient
        )
        if new_span.dim == span.dim:
            break
        span = new_span
    return span.dim


def triple_algebra_dim(a: MatPoly, b: MatPoly) -> int:
    """dim F[A, B, C] for C the Jordan-block realization of t."""
    a._check_ring(b)
    t = MatPoly.t_power(a.field, a.n, a.k, 1) if a.k >= 1 else MatPoly.zero(a.field, a.n, 0)
    return algebra_dim([a.embed_toeplitz(), b.embed_toeplitz(), t.embed_toeplitz()])


def _rand_poly(field: Field, max_deg: int, rng: random.Random) -> UniPoly:
    return UniPoly(field, [field.rand(rng) for _ in range(max_deg + 1)])


def _q_roundtrip_probe(a: MatPoly, cb: SubspaceBasis, rng: random.Random) -> bool:
    """Does the (q_0..q_k) parametrization invert on both a random tuple and
    a random commutant element?  False on any failure."""
    field, n, k = a.field, a.n, a.k
    try:
        qs = [_rand_poly(field, n - 1, rng) for _ in range(k + 1)]
        b = b_from_q(qs, a)
        if q_from_b(a, b) != qs:
            return False
        if cb.dim == 0:
            return True
        weights = [field.rand(rng) for _ in range(cb.dim)]
        vec = [field.zero] * cb.ambient_dim
        for w, row in zip(weights, cb.vectors):
            if field.is_zero(w):
                continue
            vec = [field.add(v, field.mul(w, c)) for v, c in zip(vec, row)]
        b2 = MatPoly.from_vector(field, n, k, vec)
        qs2 = q_from_b(a, b2)
        return b_from_q(qs2, a) == b2
    except (NotOneRegularError, NotInCommutantError):
        return False


def equivalence_battery(a: MatPoly, rng: random.Random | None = None) -> EquivalenceReport:
    """Evaluate all five equivalent conditions independently and check agreement."""
    rng = rng if rng is not None else random.Random(12345)
    n, k = a.n, a.k
    target = n * (k + 1)

    one_regular = is_one_regular(a.coeffs[0])
    ps = power_span(a)
    powers_independent = ps.dim == target
    t_embedded = MatPoly.t_power(a.field, n, k, 1).embed_toeplitz() if k >= 1 else None
    gens = [a.embed_toeplitz()] + ([t_embedded] if t_embedded is not None else [])
    dim_fat = algebra_dim(gens)
    cb = commutant_basis(a)
    commutant_equals = cb.vectors == ps.vectors
    roundtrip = _q_roundtrip_probe(a, cb, rng)

    report = EquivalenceReport(
        one_regular=one_regular,
        powers_independent=powers_independent,
        dim_FAt=dim_fat,
        commutant_dim=cb.dim,
        commutant_equals_power_span=commutant_equals,
        q_param_roundtrip_ok=roundtrip,
    )
    flags = (
        one_regular,
        powers_independent,
        dim_fat == target,
        commutant_equals,
        roundtrip,
    )
    if len(set(flags)) != 1:
        raise EquivalenceViolationError(
            f"equivalent conditions disagree: {flags} for report {report}"
        )
    if one_regular and cb.dim != target:
        raise EquivalenceViolationError(
            f"1-regular commutant dimension {cb.dim} != n(k+1) = {target}"
        )
    return report


def lift_pair(a: MatPoly, b: MatPoly, a_next: Matrix) -> Matrix:
    """Solve for B_{k+1} extending a commuting pair one order up.

    Returns the canonical echelon solution (free variables zero) of
    [A_0, B_next] = -([A_1, B_k] + ... + [A_k, B_1] + [A_next, B_0]);
    raises InfeasibleLiftError when the right side misses the ad image
    (possible only for non-1-regular A_0).
    """
    a._check_ring(b)
    if not commutator(a, b).is_zero():
        raise ValueError("lift requires a commuting pair")
    if a_next.rows != a.n or a_next.cols != a.n:
        raise ValueError("A_next has the wrong shape")
    f = a.field
    rhs = Matrix.zero(f, a.n)
    for i in range(1, a.k + 1):
        ai, bj = a.coeffs[i], b.coeffs[a.k + 1 - i]
        rhs = rhs + (ai * bj - bj * ai)
    rhs = rhs + (a_next * b.coeffs[0] - b.coeffs[0] * a_next)
    sol = solve_particular(ad_matrix(a.coeffs[0]), (-rhs).to_flat())
    if sol is None:
        raise InfeasibleLiftError("right side is not in the image of ad(A_0)")
    return Matrix.from_flat(f, a.n, a.n, sol)


def extend_pair(
    a: MatPoly, b: MatPoly, a_next: Matrix, b_next: Matrix
) -> tuple[MatPoly, MatPoly]:
    """The order-(k+1) pair with the given top coefficients appended."""
    a2 = MatPoly(a.field, a.n, a.k + 1, list(a.coeffs) + [a_next])
    b2 = MatPoly(b.field, b.n, b.k + 1, list(b.coeffs) + [b_next])
    return a2, b2


def ad_image_contains(a0: Matrix, m: Matrix) -> bool:
    """Is m = [a0, Z] solvable for Z?"""
    if a0.rows != m.rows or a0.cols != m.cols or not a0.is_square():
        raise ValueError("shape mismatch")
    return solve_particular(ad_matrix(a0), m.to_flat()) is not None


def filtration_dims(
    gens: Sequence[MatPoly],
    field: Field | None = None,
    n: int | None = None,
    k: int | None = None,
) -> list[int]:
    """[dim E_0/E_1, ..., dim E_k/E_{k+1}] for E the algebra of (gens, t).

    E_i is the subspace of elements with valuation >= i.  With MatPoly
    coordinates ordered valuation-major, the reduced echelon basis makes the
    quotient dimensions pivot counts per order block.  The ring parameters
    are taken from the generators, or must be passed when gens is empty.
    """
    if gens:
        field, n, k = gens[0].field, gens[0].n, gens[0].k
        for g in gens:
            gens[0]._check_ring(g)
    elif field is None or n is None or k is None:
        raise ValueError("empty generator list needs explicit field, n, k")
    elements = list(gens)
    if k >= 1:
        elements.append(MatPoly.t_power(field, n, k, 1))
    ambient = n * n * (k + 1)
    span = span_basis(
        [MatPoly.one(field, n, k).to_vector()] + [g.to_vector() for g in elements],
        field,
        ambient,
    )
    for _ in range(ambient):
        mats = [MatPoly.from_vector(field, n, k, v) for v in span.vectors]
        prods = [mat * g for mat in mats for g in elements]
        new_span = span_basis(
            list(span.vectors) + [prod.to_vector() for prod in prods], field, ambient
        )
        if new_span.dim == span.dim:
            break
        span = new_span
    # Pivot in coordinate block s  <=>  valuation exactly s.
    block = n * n
    counts = [0] * (k + 1)
    for row in span.vectors:
        pivot = next(j for j, c in enumerate(row) if not field.is_zero(c))
        counts[pivot // block] += 1
    return counts
