"""Symbolic jet-ideal generators, Jacobian ranks, export round-trips."""

from __future__ import annotations

import pytest

from jetpairs.fields import prime_field
from jetpairs.jetideal import (
    JetPoly,
    JetVar,
    evaluate,
    export_ideal,
    generators,
    jacobian_matrix,
    jacobian_tangent_dim,
    jet_variables,
    parse_ideal,
)
from jetpairs.linalg import Matrix, rank
from jetpairs.sampling import derive_rng, rand_matpoly, rand_u_pair
from jetpairs.truncmat import MatPoly, commutator

F = prime_field(32003)


def _gen(gens, n, s, i, j):
    return gens[s * n * n + (i - 1) * n + (j - 1)]


# -- generators ----------------------------------------------------------------


def test_generators_n1_all_zero():
    for k in (0, 1, 3):
        assert all(g.is_zero() for g in generators(1, k))


def test_generators_2x2_classical_commutator():
    gens = generators(2, 0)

    def var(series, i, j):
        return JetVar(series, 0, i, j)

    def poly(pairs):
        return JetPoly({tuple(sorted(m)): c for m, c in pairs})

    expected11 = poly(
        [((var("x", 1, 2), var("y", 2, 1)), 1), ((var("x", 2, 1), var("y", 1, 2)), -1)]
    )
    assert _gen(gens, 2, 0, 1, 1) == expected11
    expected12 = poly(
        [
            ((var("x", 1, 1), var("y", 1, 2)), 1),
            ((var("x", 1, 2), var("y", 2, 2)), 1),
            ((var("x", 1, 2), var("y", 1, 1)), -1),
            ((var("x", 2, 2), var("y", 1, 2)), -1),
        ]
    )
    assert _gen(gens, 2, 0, 1, 2) == expected12


def test_generator_count_and_bilinearity():
    gens = generators(3, 2)
    assert len(gens) == 27
    for g in gens:
        for mono, _ in g.terms.items():
            assert len(mono) == 2
            series = sorted(v.series for v in mono)
            assert series == ["x", "y"]


def test_generator_orders_sum_correctly():
    n, k = 2, 2
    gens = generators(n, k)
    for s in range(k + 1):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                g = _gen(gens, n, s, i, j)
                for mono in g.terms:
                    assert sum(v.order for v in mono) == s


def test_trace_identity_symbolic():
    # Diagonal generators of each order sum to the zero polynomial.
    for n in (2, 3, 4):
        for k in (0, 1, 2, 3):
            gens = generators(n, k)
            for s in range(k + 1):
                total = JetPoly.zero()
                for i in range(1, n + 1):
                    total = total + _gen(gens, n, s, i, i)
                assert total.is_zero()


# -- evaluation ----------------------------------------------------------------


def test_evaluate_zero_partner():
    rng = derive_rng(19, "ev0")
    a = rand_matpoly(F, 3, 1, rng)
    vals = evaluate(generators(3, 1), (a, MatPoly.zero(F, 3, 1)))
    assert all(F.is_zero(v) for v in vals)


def test_evaluate_bridges_commutation():
    rng = derive_rng(19, "ev")
    gens = generators(3, 1)
    for _ in range(10):
        a, b = rand_u_pair(F, 3, 1, rng)
        assert all(F.is_zero(v) for v in evaluate(gens, (a, b)))
        c = rand_matpoly(F, 3, 1, rng)
        expect_zero = commutator(a, c).is_zero()
        assert all(F.is_zero(v) for v in evaluate(gens, (a, c))) == expect_zero


# -- Jacobian -------------------------------------------------------------------


def test_jacobian_matches_symbolic_derivative_oracle():
    rng = derive_rng(19, "jacsym")
    n, k = 2, 1
    gens = generators(n, k)
    variables = jet_variables(n, k)
    for _ in range(3):
        a, b = rand_u_pair(F, n, k, rng)
        from jetpairs.jetideal import point_assignment

        assignment = point_assignment(a, b)
        sym = Matrix(
            F,
            [
                [g.partial(v).evaluate(F, assignment) for v in variables]
                for g in gens
            ],
        )
        assert sym == jacobian_matrix((a, b))


def test_tangent_dim_smooth_base_point():
    rng = derive_rng(19, "tan0")
    a, b = rand_u_pair(F, 2, 0, rng)
    # dim F[A_0, B_0] = 2 at such points, so the base scheme is regular there:
    # rank 2, tangent dimension 6 = n^2 + n.
    assert jacobian_tangent_dim(2, 0, (a, b)) == 6
    assert rank(jacobian_matrix((a, b))) == 2


def test_tangent_dim_u_points():
    rng = derive_rng(19, "tanU")
    a, b = rand_u_pair(F, 3, 1, rng)
    assert jacobian_tangent_dim(3, 1, (a, b)) == 24


def test_tangent_dim_origin():
    z = MatPoly.zero(F, 2, 0)
    assert jacobian_tangent_dim(2, 0, (z, z)) == 8  # bilinear: Jacobian vanishes at 0


def test_tangent_dim_rejects_off_scheme_points():
    rng = derive_rng(19, "tanbad")
    a = rand_matpoly(F, 2, 1, rng)
    b = rand_matpoly(F, 2, 1, rng)
    assert not commutator(a, b).is_zero()
    with pytest.raises(ValueError):
        jacobian_tangent_dim(2, 1, (a, b))


def test_jacobian_rank_equals_first_order_expansion_oracle():
    # Columns of the Jacobian are exactly [dA, B] and [A, dB]: re-derive the
    # rank by assembling those commutators through the MatPoly route.
    rng = derive_rng(19, "jacconc")
    n, k = 2, 1
    a, b = rand_u_pair(F, n, k, rng)
    cols = []
    for s in range(k + 1):
        for i in range(n):
            for j in range(n):
                e = MatPoly.from_coeff_map(F, n, k, {s: Matrix.unit(F, n, i, j)})
                cols.append(commutator(e, b).to_vector())
    for s in range(k + 1):
        for i in range(n):
            for j in range(n):
                e = MatPoly.from_coeff_map(F, n, k, {s: Matrix.unit(F, n, i, j)})
                cols.append(commutator(a, e).to_vector())
    concrete = Matrix(F, list(zip(*cols)))
    assert rank(concrete) == rank(jacobian_matrix((a, b)))


# -- export ---------------------------------------------------------------------


def test_export_n1_lists_zero():
    text = export_ideal(generators(1, 0), 1, 0, 0)
    lines = text.splitlines()
    assert lines[0] == "jetideal n=1 k=0 char=0"
    assert lines[2] == "0"


def test_export_2x2_lists_four_hand_expanded_lines():
    text = export_ideal(generators(2, 0), 2, 0, 32003)
    body = text.splitlines()[2:]
    assert body == [
        "1*x_0_1_2*y_0_2_1 - 1*x_0_2_1*y_0_1_2",
        "1*x_0_1_1*y_0_1_2 - 1*x_0_1_2*y_0_1_1 + 1*x_0_1_2*y_0_2_2 - 1*x_0_2_2*y_0_1_2",
        "-1*x_0_1_1*y_0_2_1 + 1*x_0_2_1*y_0_1_1 - 1*x_0_2_1*y_0_2_2 + 1*x_0_2_2*y_0_2_1",
        "-1*x_0_1_2*y_0_2_1 + 1*x_0_2_1*y_0_1_2",
    ]


def test_export_is_deterministic():
    gens = generators(2, 1)
    assert export_ideal(gens, 2, 1, 32003) == export_ideal(gens, 2, 1, 32003)


def test_export_roundtrip():
    gens = generators(2, 1)
    n, k, char, parsed = parse_ideal(export_ideal(gens, 2, 1, 32003))
    assert (n, k, char) == (2, 1, 32003)
    assert parsed == gens


def test_export_cas_flavors_have_ring_declarations():
    gens = generators(2, 0)
    m2 = export_ideal(gens, 2, 0, 0, "m2-flavored")
    assert m2.startswith("R = QQ[")
    assert "ideal(" in m2
    sing = export_ideal(gens, 2, 0, 32003, "singular-flavored")
    assert sing.startswith("ring R = 32003, (")
    assert "ideal I =" in sing
    with pytest.raises(ValueError):
        export_ideal(gens, 2, 0, 0, "maple")
