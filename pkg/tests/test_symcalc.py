"""Symmetric sums, d-operators, and the polynomial-data commutant maps."""

from __future__ import annotations

import itertools
import math

import pytest

from jetpairs.fields import prime_field
from jetpairs.linalg import Matrix
from jetpairs.sampling import (
    derive_rng,
    rand_matpoly,
    rand_matrix,
    rand_qs,
    rand_regular_matpoly,
)
from jetpairs.symcalc import (
    NotInCommutantError,
    NotOneRegularError,
    SymArgs,
    b_from_q,
    b_from_q_direct,
    d_op,
    g_coeff,
    multiset_arrangements,
    q_from_b,
    sym_sum,
)
from jetpairs.truncmat import MatPoly
from jetpairs.unipoly import UniPoly

F = prime_field(32003)
F101 = prime_field(101)


# -- sym_sum -------------------------------------------------------------------


def test_sym_sum_x2_y_matches_hand_expansion():
    rng = derive_rng(13, "s2y")
    x, y = rand_matrix(F, 3, rng), rand_matrix(F, 3, rng)
    assert sym_sum(SymArgs(x, 2, [y])) == x * x * y + x * y * x + y * x * x


def test_sym_sum_negative_multiplicity_is_zero():
    rng = derive_rng(13, "neg")
    x, y = rand_matrix(F, 2, rng), rand_matrix(F, 2, rng)
    assert sym_sum(SymArgs(x, -1, [y])).is_zero()
    assert sym_sum(SymArgs(x, -3, [])).is_zero()


def test_sym_sum_zero_multiplicity_single_y():
    rng = derive_rng(13, "zero")
    x, y = rand_matrix(F, 2, rng), rand_matrix(F, 2, rng)
    assert sym_sum(SymArgs(x, 0, [y])) == y


def test_sym_sum_permutation_invariance():
    rng = derive_rng(13, "perm")
    x = rand_matrix(F, 2, rng)
    ys = [rand_matrix(F, 2, rng) for _ in range(3)]
    base = sym_sum(SymArgs(x, 2, ys))
    for perm in itertools.permutations(ys):
        assert sym_sum(SymArgs(x, 2, list(perm))) == base


def test_arrangement_count_is_multinomial():
    for counts in [(2, 1), (3, 2, 1), (1, 1, 1, 1), (4,), (2, 2)]:
        total = sum(counts)
        expected = math.factorial(total)
        for c in counts:
            expected //= math.factorial(c)
        assert sum(1 for _ in multiset_arrangements(counts)) == expected


def test_sym_sum_groups_equal_values_in_ys():
    # A repeated matrix in ys is the same symbol repeated: S(y^[2]) = y^2.
    rng = derive_rng(13, "dup")
    x, y = rand_matrix(F, 2, rng), rand_matrix(F, 2, rng)
    assert sym_sum(SymArgs(x, 0, [y, y])) == y * y


# -- d_op ------------------------------------------------------------------------


def test_d_op_square_polynomial():
    rng = derive_rng(13, "dsq")
    x, y = rand_matrix(F, 3, rng), rand_matrix(F, 3, rng)
    q = UniPoly.from_ints(F, [0, 0, 1])  # x^2
    assert d_op(q, [y], x) == x * y + y * x


def test_d_op_constant_is_zero():
    rng = derive_rng(13, "dconst")
    x, y = rand_matrix(F, 2, rng), rand_matrix(F, 2, rng)
    assert d_op(UniPoly.from_ints(F, [7]), [y], x).is_zero()


def _brute_force_d_op(q: UniPoly, ys, x):
    """Oracle: enumerate all words with exactly the listed y-slots, rest x."""
    field, n = x.field, x.rows
    acc = Matrix.zero(field, n)
    tagged = [("y", idx) for idx in range(len(ys))]
    for j in range(q.degree() + 1):
        c = q.coeff(j)
        if field.is_zero(c) or j < len(ys):
            continue
        words = set(itertools.permutations(tagged + [("x",)] * (j - len(ys))))
        total = Matrix.zero(field, n)
        for word in words:
            prod = Matrix.identity(field, n)
            for sym in word:
                prod = prod * (x if sym[0] == "x" else ys[sym[1]])
            total = total + prod
        acc = acc + total.scale(c)
    return acc


def test_d_op_cubic_two_ys_against_bruteforce_oracle():
    rng = derive_rng(13, "dbrute")
    for _ in range(5):
        x = rand_matrix(F101, 3, rng)
        ys = [rand_matrix(F101, 3, rng), rand_matrix(F101, 3, rng)]
        q = UniPoly.from_ints(F101, [0, 0, 0, 1])  # x^3
        assert d_op(q, ys, x) == _brute_force_d_op(q, ys, x)
        q2 = UniPoly(F101, [F101.rand(rng) for _ in range(5)])
        assert d_op(q2, ys, x) == _brute_force_d_op(q2, ys, x)


def test_d_op_symmetric_in_ys():
    rng = derive_rng(13, "dsym")
    x = rand_matrix(F, 2, rng)
    ys = [rand_matrix(F, 2, rng) for _ in range(3)]
    q = UniPoly(F, [F.rand(rng) for _ in range(6)])
    base = d_op(q, ys, x)
    for perm in itertools.permutations(ys):
        assert d_op(q, list(perm), x) == base


# -- g_coeff ---------------------------------------------------------------------


def test_g_coeff_order_zero_is_power():
    rng = derive_rng(13, "g0")
    a = rand_matpoly(F, 3, 2, rng)
    for i in range(4):
        assert g_coeff(i, 0, a.coeffs) == a.coeffs[0].pow_int(i)


def test_g_coeff_first_power_reads_off_coefficients():
    rng = derive_rng(13, "g1")
    a = rand_matpoly(F, 3, 2, rng)
    for l in range(3):
        assert g_coeff(1, l, a.coeffs) == a.coeffs[l]


def test_g_coeff_cube_against_ring_power_oracle():
    rng = derive_rng(13, "g3")
    for _ in range(5):
        a = rand_matpoly(F, 2, 2, rng)
        cube = a * a * a
        for l in range(3):
            assert g_coeff(3, l, a.coeffs) == cube.coeffs[l]


def test_g_coeff_degenerate_equal_coefficients():
    # A_1 == A_2 as values must still count as distinct symbols.
    rng = derive_rng(13, "gdeg")
    m = rand_matrix(F, 2, rng)
    a = MatPoly(F, 2, 3, [rand_matrix(F, 2, rng), m, m, rand_matrix(F, 2, rng)])
    sq = a * a
    for l in range(4):
        assert g_coeff(2, l, a.coeffs) == sq.coeffs[l]


# -- b_from_q / q_from_b -----------------------------------------------------------


def test_b_from_q_zero_and_identity_data():
    rng = derive_rng(13, "bq0")
    a = rand_matpoly(F, 3, 2, rng)
    zeros = [UniPoly.zero(F)] * 3
    assert b_from_q(zeros, a).is_zero()
    qs = [UniPoly.x(F)] + [UniPoly.zero(F)] * 2
    assert b_from_q(qs, a) == a


def test_b_from_q_matches_direct_evaluation():
    rng = derive_rng(13, "bqdir")
    for n, k in [(2, 1), (3, 2), (3, 3), (4, 3)]:
        for _ in range(5):
            a = rand_matpoly(F, n, k, rng)
            qs = rand_qs(F, n, k, rng)
            assert b_from_q(qs, a) == b_from_q_direct(qs, a)


def test_q_from_b_trivial_identity_element():
    rng = derive_rng(13, "qb1")
    a = rand_regular_matpoly(F, 3, 2, rng)
    b = MatPoly.one(F, 3, 2)
    qs = q_from_b(a, b)
    assert qs[0] == UniPoly.one(F)
    assert all(q.is_zero() for q in qs[1:])


def test_q_from_b_roundtrip():
    rng = derive_rng(13, "qbrt")
    for n, k in [(2, 1), (3, 2), (4, 3)]:
        a = rand_regular_matpoly(F, n, k, rng)
        qs = rand_qs(F, n, k, rng)
        assert q_from_b(a, b_from_q(qs, a)) == qs


def test_q_from_b_rejects_non_commutant():
    rng = derive_rng(13, "qbbad")
    a = rand_regular_matpoly(F, 3, 2, rng)
    b = rand_matpoly(F, 3, 2, rng)
    with pytest.raises(NotInCommutantError) as err:
        q_from_b(a, b)
    assert 0 <= err.value.stage <= 2


def test_q_from_b_rejects_non_one_regular():
    rng = derive_rng(13, "qbreg")
    coeffs = [Matrix.zero(F, 3)] + [rand_matrix(F, 3, rng) for _ in range(2)]
    a = MatPoly(F, 3, 2, coeffs)
    with pytest.raises(NotOneRegularError):
        q_from_b(a, MatPoly.zero(F, 3, 2))
