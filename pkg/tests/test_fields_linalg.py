"""Exact scalar arithmetic and the dense linear-algebra kernel."""

from __future__ import annotations

from fractions import Fraction

import pytest

from jetpairs.fields import QQ, prime_field
from jetpairs.linalg import (
    Matrix,
    base_root_count,
    charpoly,
    det,
    inverse,
    kernel_basis,
    minpoly_dim,
    poly_at_matrix,
    rank,
    rational_roots,
    squarefree_split_info,
    unique_base_root,
)
from jetpairs.sampling import companion, derive_rng, rand_matrix
from jetpairs.unipoly import UniPoly

F = prime_field(32003)
F101 = prime_field(101)


# -- fields -------------------------------------------------------------------


def test_prime_field_requires_prime():
    with pytest.raises(ValueError):
        prime_field(32004)
    with pytest.raises(ValueError):
        prime_field(1)


def test_inverse_of_zero_raises():
    with pytest.raises(ZeroDivisionError):
        F.inv(0)
    with pytest.raises(ZeroDivisionError):
        QQ.inv(Fraction(0))


def test_field_axioms_randomized():
    rng = derive_rng(7, "axioms")
    for field in (F, QQ):
        for _ in range(200):
            a, b, c = field.rand(rng), field.rand(rng), field.rand(rng)
            assert field.add(field.add(a, b), c) == field.add(a, field.add(b, c))
            assert field.mul(field.mul(a, b), c) == field.mul(a, field.mul(b, c))
            assert field.mul(a, field.add(b, c)) == field.add(
                field.mul(a, b), field.mul(a, c)
            )
            assert field.add(a, field.neg(a)) == field.zero
            if not field.is_zero(b):
                assert field.mul(b, field.inv(b)) == field.one


def test_prime_scalars_canonical():
    rng = derive_rng(7, "canon")
    for _ in range(100):
        a, b = F.rand(rng), F.rand(rng)
        for v in (F.add(a, b), F.sub(a, b), F.mul(a, b), F.neg(a)):
            assert 0 <= v < F.p


# -- kernels and rank ---------------------------------------------------------


def test_kernel_zero_matrix():
    assert kernel_basis(Matrix.zero(F, 3)).dim == 3
    assert kernel_basis(Matrix.zero(QQ, 3)).dim == 3


def test_kernel_identity():
    assert kernel_basis(Matrix.identity(F, 3)).dim == 0


def test_kernel_random_rect_remultiplies_to_zero():
    # Oracle: M v = 0 exactly for every emitted vector.
    rng = derive_rng(7, "kernel")
    for _ in range(10):
        m = rand_matrix(F, 5, rng, cols=8)
        ker = kernel_basis(m)
        assert ker.dim == 8 - rank(m)
        for v in ker.vectors:
            assert all(F.is_zero(c) for c in m.mul_vector(v))


def test_rank_identity_and_outer_product():
    assert rank(Matrix.identity(F, 4)) == 4
    rng = derive_rng(7, "outer")
    u = [F.rand_nonzero(rng) for _ in range(5)]
    v = [F.rand_nonzero(rng) for _ in range(5)]
    outer = Matrix(F, [[F.mul(a, b) for b in v] for a in u])
    assert rank(outer) == 1


def test_rank_full_agrees_with_determinant_oracle():
    rng = derive_rng(7, "det")
    for _ in range(10):
        m = rand_matrix(F, 10, rng)
        # Berkowitz determinant is an independent route from the RREF rank.
        assert (rank(m) == 10) == (not F.is_zero(det(m)))


def test_rank_nullity_over_both_fields():
    rng = derive_rng(7, "rkn")
    for field in (F, QQ):
        for _ in range(10):
            m = rand_matrix(field, 4, rng, cols=6)
            assert rank(m) + kernel_basis(m).dim == 6


def test_inverse_roundtrip():
    rng = derive_rng(7, "inv")
    for field in (F, QQ):
        m = Matrix.from_ints(field, [[1, 2, 0], [0, 1, 5], [1, 0, 1]])
        assert m * inverse(m) == Matrix.identity(field, 3)
    with pytest.raises(ValueError):
        inverse(Matrix.zero(F, 2))


# -- characteristic and minimal polynomials -----------------------------------


def test_charpoly_diagonal():
    m = Matrix.from_ints(QQ, [[1, 0], [0, 2]])
    assert charpoly(m) == UniPoly.from_ints(QQ, [2, -3, 1])


def test_charpoly_nilpotent_block():
    j3 = Matrix.from_ints(F, [[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    assert charpoly(j3) == UniPoly.x_power(F, 3)


def test_charpoly_cayley_hamilton_oracle():
    rng = derive_rng(7, "ch")
    for _ in range(10):
        m = rand_matrix(F101, 4, rng)
        assert poly_at_matrix(charpoly(m), m).is_zero()


def test_minpoly_identity_and_unit():
    mp, dim = minpoly_dim(Matrix.identity(F, 3))
    assert dim == 1 and mp == UniPoly.from_ints(F, [-1, 1])
    e12 = Matrix.unit(F, 3, 0, 1)
    mp, dim = minpoly_dim(e12)
    assert dim == 2 and mp == UniPoly.x_power(F, 2)


def test_minpoly_companion_oracle():
    p = UniPoly.from_ints(F, [1, 1, 0, 1])  # x^3 + x + 1
    mp, dim = minpoly_dim(companion(p))
    assert (mp, dim) == (p, 3)


def test_minpoly_divides_charpoly_randomized():
    rng = derive_rng(7, "mpdiv")
    for field in (F, QQ):
        for _ in range(10):
            m = rand_matrix(field, 4, rng)
            mp, _ = minpoly_dim(m)
            _, rem = charpoly(m).divmod_(mp)
            assert rem.is_zero()
            assert poly_at_matrix(mp, m).is_zero()


# -- squarefreeness and base-field roots --------------------------------------


def test_squarefree_x_squared():
    assert squarefree_split_info(UniPoly.x_power(F, 2)) == (False, 1)
    assert squarefree_split_info(UniPoly.x_power(QQ, 2)) == (False, 1)


def test_squarefree_split_quadratic_over_Q():
    p = UniPoly.from_ints(QQ, [2, -3, 1])  # (x-1)(x-2)
    assert squarefree_split_info(p) == (True, 2)
    assert sorted(rational_roots(p)) == [Fraction(1), Fraction(2)]


def _nonresidue(p: int) -> int:
    for c in range(2, p):
        if pow(c, (p - 1) // 2, p) == p - 1:
            return c
    raise AssertionError


def test_squarefree_structured_quintics_vs_bruteforce():
    # Build quintics with known factor structure over F_101 and compare both
    # flags against exhaustive root scanning.
    rng = derive_rng(7, "quintic")
    x = UniPoly.x(F101)
    nonres = _nonresidue(101)
    irreducible_quad = UniPoly.from_ints(F101, [-nonres % 101, 0, 1])  # x^2 - nonresidue
    for _ in range(20):
        roots = [F101.rand(rng) for _ in range(3)]
        repeat = rng.random() < 0.5
        factors = [x - UniPoly.constant(F101, r) for r in roots]
        if repeat:
            factors[1] = factors[0]
        poly = irreducible_quad
        for fac in factors:
            poly = poly * fac
        is_sf, count = squarefree_split_info(poly)
        brute = {r for r in range(101) if F101.is_zero(poly.eval_at(r))}
        assert count == len(brute)
        expected_sf = not repeat and len(set(roots)) == 3
        assert is_sf == expected_sf


def test_unique_base_root():
    lam = 17
    p = UniPoly.from_ints(F, [-lam, 1])
    cube = p * p * p
    assert unique_base_root(cube) == lam
    assert base_root_count(cube) == 1
    two = UniPoly.from_ints(F, [-1, 1]) * UniPoly.from_ints(F, [-2, 1])
    assert unique_base_root(two) is None


def test_word_sized_prime_moduli():
    # Large moduli bypass the numpy fast path but stay exact.
    big = prime_field((1 << 61) - 1)
    rng = derive_rng(7, "big")
    m = rand_matrix(big, 4, rng)
    assert rank(m) + kernel_basis(m).dim == 4
    assert poly_at_matrix(charpoly(m), m).is_zero()
    mp, _ = minpoly_dim(m)
    _, rem = charpoly(m).divmod_(mp)
    assert rem.is_zero()
