"""The truncated matrix-polynomial ring and its block-Toeplitz embedding."""

from __future__ import annotations

import pytest

from jetpairs.fields import prime_field
from jetpairs.linalg import Matrix
from jetpairs.sampling import derive_rng, rand_matpoly, rand_matrix, rand_u_pair
from jetpairs.truncmat import INF, MatPoly, commutator, poly_combine
from jetpairs.unipoly import UniPoly

F = prime_field(32003)
F101 = prime_field(101)


def test_mul_identity():
    rng = derive_rng(11, "mulid")
    b = rand_matpoly(F, 3, 1, rng)
    assert MatPoly.one(F, 3, 1) * b == b


def test_mul_truncates_t_squared():
    rng = derive_rng(11, "trunc")
    x, y = rand_matrix(F, 2, rng), rand_matrix(F, 2, rng)
    a = MatPoly(F, 2, 1, [Matrix.zero(F, 2), x])
    b = MatPoly(F, 2, 1, [Matrix.zero(F, 2), y])
    assert (a * b).is_zero()


def test_mul_against_embedding_oracle():
    rng = derive_rng(11, "embmul")
    for _ in range(10):
        a = rand_matpoly(F101, 3, 2, rng)
        b = rand_matpoly(F101, 3, 2, rng)
        assert (a * b).embed_toeplitz() == a.embed_toeplitz() * b.embed_toeplitz()


def test_mul_shape_mismatch():
    with pytest.raises(ValueError):
        MatPoly.one(F, 2, 1) * MatPoly.one(F, 2, 2)
    with pytest.raises(ValueError):
        MatPoly.one(F, 2, 1) * MatPoly.one(F, 3, 1)


def test_commutator_trivial_cases():
    rng = derive_rng(11, "comm")
    a = rand_matpoly(F, 3, 2, rng)
    assert commutator(a, a).is_zero()
    e12 = Matrix.unit(F, 2, 0, 1)
    e21 = Matrix.unit(F, 2, 1, 0)
    at = MatPoly(F, 2, 1, [Matrix.zero(F, 2), e12])
    bt = MatPoly(F, 2, 1, [Matrix.zero(F, 2), e21])
    assert commutator(at, bt).is_zero()  # the t^2 term is truncated away
    j3 = Matrix.from_ints(F, [[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    assert commutator(MatPoly.constant(j3, 2), MatPoly.constant(j3 * j3, 2)).is_zero()


def test_commutator_matches_embedding():
    rng = derive_rng(11, "commemb")
    for _ in range(10):
        a = rand_matpoly(F, 2, 2, rng)
        b = rand_matpoly(F, 2, 2, rng)
        ea, eb = a.embed_toeplitz(), b.embed_toeplitz()
        assert commutator(a, b).is_zero() == (ea * eb == eb * ea)


def test_embed_identity_and_t():
    assert MatPoly.one(F, 3, 2).embed_toeplitz() == Matrix.identity(F, 9)
    t = MatPoly.t_power(F, 2, 1, 1)
    expected = Matrix.from_ints(
        F, [[0, 0, 1, 0], [0, 0, 0, 1], [0, 0, 0, 0], [0, 0, 0, 0]]
    )
    assert t.embed_toeplitz() == expected


def test_embed_is_ring_homomorphism():
    rng = derive_rng(11, "hom")
    for n, k in [(2, 1), (3, 2), (4, 3)]:
        a = rand_matpoly(F, n, k, rng)
        b = rand_matpoly(F, n, k, rng)
        assert (a + b).embed_toeplitz() == a.embed_toeplitz() + b.embed_toeplitz()
        assert (a * b).embed_toeplitz() == a.embed_toeplitz() * b.embed_toeplitz()


def test_valuation():
    assert MatPoly.zero(F, 2, 2).valuation() == INF
    rng = derive_rng(11, "val")
    a = MatPoly(F, 2, 2, [Matrix.zero(F, 2), rand_matrix(F, 2, rng), rand_matrix(F, 2, rng)])
    assert a.valuation() == 1


def test_valuation_t_multiplication_oracle():
    rng = derive_rng(11, "valt")
    for _ in range(20):
        a = rand_matpoly(F, 2, 3, rng)
        v = rng.randrange(4)
        a = a.shift_up(v)
        if a.is_zero():
            continue
        val = a.valuation()
        assert val >= v
        k = a.k
        assert a.shift_up(k - val + 1).is_zero()
        assert not a.shift_up(k - val).is_zero()


def test_truncate_identity_and_constant():
    rng = derive_rng(11, "trc")
    a = rand_matpoly(F, 3, 2, rng)
    assert a.truncate(2) == a
    assert a.truncate(0).coeffs == (a.coeffs[0],)
    with pytest.raises(ValueError):
        a.truncate(3)


def test_truncate_is_ring_homomorphism():
    rng = derive_rng(11, "trhom")
    for _ in range(10):
        a = rand_matpoly(F, 2, 3, rng)
        b = rand_matpoly(F, 2, 3, rng)
        assert (a * b).truncate(1) == a.truncate(1) * b.truncate(1)
        assert (a + b).truncate(1) == a.truncate(1) + b.truncate(1)


def test_shift_down_inverts_shift_up():
    rng = derive_rng(11, "shift")
    a = rand_matpoly(F, 2, 3, rng)
    assert a.shift_up(2).shift_down(2) == a.truncate(1).extend(3)
    with pytest.raises(ValueError):
        a.shift_down(1)


def test_valuation_of_product():
    rng = derive_rng(11, "valprod")
    for _ in range(20):
        a = rand_matpoly(F, 2, 3, rng).shift_up(rng.randrange(3))
        b = rand_matpoly(F, 2, 3, rng).shift_up(rng.randrange(3))
        va, vb, vab = a.valuation(), b.valuation(), (a * b).valuation()
        assert vab >= min(4, va + vb)


# -- poly_combine --------------------------------------------------------------


def test_poly_combine_identity_moves():
    rng = derive_rng(11, "pc0")
    a = rand_matpoly(F, 3, 2, rng)
    b = rand_matpoly(F, 3, 2, rng)
    zero = UniPoly.zero(F)
    assert poly_combine(a, b, zero, zero, "shift_a") == a
    assert poly_combine(a, b, zero, zero, "shift_b") == b
    assert poly_combine(a, b, zero, zero, "shear_b") == b
    assert poly_combine(a, b, zero, zero, "scale_a") == a


def test_poly_combine_scale_roundtrip():
    # (1 + t) then its truncated geometric-series inverse is the identity.
    rng = derive_rng(11, "pcgeo")
    a = rand_matpoly(F, 3, 3, rng)
    t = UniPoly.x(F)
    one = UniPoly.one(F)
    scaled = poly_combine(a, a, UniPoly.zero(F), t, "scale_a")
    inv = (one + t).inv_trunc(4) - one
    assert poly_combine(scaled, scaled, UniPoly.zero(F), inv, "scale_a") == a


def test_poly_combine_scale_rejects_unit_violation():
    a = MatPoly.one(F, 2, 1)
    with pytest.raises(ValueError):
        poly_combine(a, a, UniPoly.zero(F), UniPoly.one(F), "scale_a")


def test_poly_combine_preserves_commutation():
    rng = derive_rng(11, "pccomm")
    a, b = rand_u_pair(F, 3, 2, rng)
    t = UniPoly.x(F)
    b2 = poly_combine(a, b, t, UniPoly.zero(F), "shear_b")  # B + tA
    assert commutator(a, b2).is_zero()
    a2 = poly_combine(a, b, t, UniPoly.zero(F), "shift_a")
    assert commutator(a2, b).is_zero()
