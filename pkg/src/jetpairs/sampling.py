"""Seeded deterministic sampling of matrices, pairs, and jet points.

Every sampler takes an explicit random.Random; sweep drivers derive one per
sample with derive_rng(master_seed, tag, index), which seeds from a string
(stable across runs and platforms, unlike hash-based seeding).  Randomized
identity checks over a large prime field are Schwartz-Zippel style: a false
accept needs the random point to hit a proper subvariety.
"""

from __future__ import annotations

import random

from .commutant import commutant_basis
from .fields import Field
from .linalg import Matrix, inverse, minpoly_dim, poly_at_matrix, rank
from .symcalc import b_from_q_direct
from .truncmat import MatPoly
from .unipoly import UniPoly


def derive_rng(seed: int, *tags) -> random.Random:
    return random.Random(f"{seed}|" + "|".join(str(t) for t in tags))


def rand_matrix(field: Field, n: int, rng: random.Random, cols: int | None = None) -> Matrix:
    cols = n if cols is None else cols
    return Matrix(field, [[field.rand(rng) for _ in range(cols)] for _ in range(n)])


def rand_invertible(field: Field, n: int, rng: random.Random, tries: int = 64) -> Matrix:
    for _ in range(tries):
        m = rand_matrix(field, n, rng)
        if rank(m) == n:
            return m
    raise RuntimeError("no invertible sample found (field too small?)")


def rand_monic(field: Field, deg: int, rng: random.Random) -> UniPoly:
    return UniPoly(field, [field.rand(rng) for _ in range(deg)] + [field.one])


def companion(p: UniPoly) -> Matrix:
    """Companion matrix of a monic polynomial (minpoly = charpoly = p)."""
    f = p.field
    n = p.degree()
    if n < 1 or p.leading() != f.one:
        raise ValueError("need a monic polynomial of positive degree")
    data = [[f.zero] * n for _ in range(n)]
    for i in range(1, n):
        data[i][i - 1] = f.one
    for i in range(n):
        data[i][n - 1] = f.neg(p.coeff(i))
    return Matrix(f, data)


def rand_one_regular(field: Field, n: int, rng: random.Random, tries: int = 64) -> Matrix:
    """Random matrix with dim F[M] = n.

    A polynomial in a random companion matrix, conjugated by a random
    invertible matrix; rejection keeps only candidates whose minimal
    polynomial has full degree.
    """
    for _ in range(tries):
        c = companion(rand_monic(field, n, rng))
        q = UniPoly(field, [field.rand(rng) for _ in range(n)])
        h = rand_invertible(field, n, rng)
        candidate = h * poly_at_matrix(q, c) * inverse(h)
        if minpoly_dim(candidate)[1] == n:
            return candidate
    raise RuntimeError("no 1-regular sample found")


def rand_non_one_regular(field: Field, n: int, rng: random.Random) -> Matrix:
    """Random matrix with dim F[M] < n (derogatory), several flavors."""
    flavor = rng.randrange(4)
    if flavor == 0:
        return Matrix.zero(field, n)
    if flavor == 1:
        return Matrix.identity(field, n).scale(field.rand(rng))
    if flavor == 2:
        # Conjugate of a single nilpotent unit: minpoly x^2 < x^n for n >= 3.
        base = Matrix.unit(field, n, 0, 1) if n >= 3 else Matrix.zero(field, n)
        h = rand_invertible(field, n, rng)
        return h * base * inverse(h)
    # Diagonalizable with a repeated eigenvalue: minpoly degree <= n - 1.
    lam = field.rand(rng)
    entries = [lam, lam] + [field.rand(rng) for _ in range(n - 2)]
    h = rand_invertible(field, n, rng)
    return h * Matrix.diagonal(field, entries) * inverse(h)


def rand_matpoly(field: Field, n: int, k: int, rng: random.Random) -> MatPoly:
    return MatPoly(field, n, k, [rand_matrix(field, n, rng) for _ in range(k + 1)])


def rand_qs(field: Field, n: int, k: int, rng: random.Random) -> list[UniPoly]:
    return [UniPoly(field, [field.rand(rng) for _ in range(n)]) for _ in range(k + 1)]


def rand_regular_matpoly(field: Field, n: int, k: int, rng: random.Random) -> MatPoly:
    """Random A(t) whose constant coefficient is 1-regular."""
    coeffs = [rand_one_regular(field, n, rng)]
    coeffs += [rand_matrix(field, n, rng) for _ in range(k)]
    return MatPoly(field, n, k, coeffs)


def rand_u_pair(field: Field, n: int, k: int, rng: random.Random) -> tuple[MatPoly, MatPoly]:
    """Random point of the distinguished open set: A_0 1-regular, B = sum q_j(A) t^j."""
    a = rand_regular_matpoly(field, n, k, rng)
    b = b_from_q_direct(rand_qs(field, n, k, rng), a)
    return a, b


def rand_commutant_element(a: MatPoly, rng: random.Random) -> MatPoly:
    """Random element of {B : [A, B] = 0} (never the zero combination)."""
    f = a.field
    cb = commutant_basis(a)
    weights = [f.rand(rng) for _ in range(cb.dim)]
    if all(f.is_zero(w) for w in weights):
        weights[0] = f.one
    vec = [f.zero] * cb.ambient_dim
    for w, row in zip(weights, cb.vectors):
        if f.is_zero(w):
            continue
        vec = [f.add(v, f.mul(w, c)) for v, c in zip(vec, row)]
    return MatPoly.from_vector(f, a.n, a.k, vec)


def _normalized_shape_a(field: Field, k: int, rng: random.Random) -> MatPoly:
    """Random A with a(t) = 0, b(t) = 1 and all other entries of valuation >= 1."""
    zero = UniPoly.zero(field)
    one = UniPoly.one(field)

    def low() -> UniPoly:
        # Zero constant term, random above.
        return UniPoly(field, [field.zero] + [field.rand(rng) for _ in range(k)])

    entries = [
        [zero, one, low()],
        [low(), low(), low()],
        [low(), low(), low()],
    ]
    return MatPoly.from_entry_polys(field, 3, k, entries)


def rand_normalized_pair(field: Field, k: int, rng: random.Random) -> tuple[MatPoly, MatPoly]:
    """Random commuting 3x3 pair in the normalized rank-1 nilpotent form.

    A has a(t) = 0, b(t) = 1, all other entries random with zero constant
    term (so A_0 = e_{1,2} exactly); B is a random commutant element pushed
    through the two normalizing moves that kill a'(t) and b'(t).
    """
    a = _normalized_shape_a(field, k, rng)
    b = rand_commutant_element(a, rng)
    ident = MatPoly.one(field, 3, k)
    b = b - ident.mul_unipoly(b.entry_poly(0, 0))
    b = b - a.mul_unipoly(b.entry_poly(0, 1))
    return a, b


def rand_rank1_nilpotent_pair(
    field: Field, k: int, rng: random.Random
) -> tuple[MatPoly, MatPoly]:
    """Commuting 3x3 pair forcing the whole deformation pipeline.

    A_0 is a conjugate of e_{1,2}; B is a polynomial in (A, t), so B_0 has a
    single eigenvalue and certification cannot shortcut through the partner.
    """
    a = _normalized_shape_a(field, k, rng)
    b = b_from_q_direct(rand_qs(field, 3, k, rng), a)
    h = rand_invertible(field, 3, rng)
    h_inv = inverse(h)
    return a.conjugate(h, h_inv), b.conjugate(h, h_inv)


def rand_zero_constant_pair(
    field: Field, n: int, k: int, rng: random.Random
) -> tuple[MatPoly, MatPoly]:
    """Commuting pair with both constant coefficients zero: t * (U-point)."""
    a, b = rand_u_pair(field, n, k, rng)
    return a.shift_up(1), b.shift_up(1)
