"""The reducibility machine: block family W, dimension bounds, verdict tables.

All bound formulas are exact integer arithmetic in the block parameters
(a, b, k) with n = 3a + b.  The square roots inside the ceiling thresholds
are handled with integer square roots and explicit adjustment, never floats:
an off-by-one in a ceiling would silently corrupt the verdict table.

The point sampler realizes the constrained block family: the first series
coefficient is the fixed two-step nilpotent, the next is free outside one
forbidden block, the partner series is solved from the commutation system
restricted to its shape-constrained coordinates.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import isqrt

from .commutant import ad_system
from .fields import Field
from .linalg import Matrix, kernel_basis
from .truncmat import MatPoly, commutator


class SampleExhaustedError(RuntimeError):
    """The sampler's retry budget ran out without a verified point."""


@dataclass(frozen=True)
class BlockShape:
    """n = 3a + b split as 4x4 blocks of row/column sizes (a, a, a, b)."""

    a: int
    b: int
    k: int

    def __post_init__(self):
        if self.a < 1 or self.b < 0 or self.k < 1:
            raise ValueError("need a >= 1, b >= 0, k >= 1")

    @property
    def n(self) -> int:
        return 3 * self.a + self.b

    def block_range(self, idx: int) -> range:
        """Row/column range of block idx in 1..4."""
        a, b = self.a, self.b
        starts = [0, a, 2 * a, 3 * a, 3 * a + b]
        return range(starts[idx - 1], starts[idx])


@dataclass(frozen=True)
class ReducibilityReport:
    shape: BlockShape
    dimW_bound: int
    dimCA0: int
    dimV_bound: int
    expected_dim: int
    inequality_value: int
    delta: int
    reducible: bool

    def __post_init__(self):
        n = self.shape.n
        if self.dimV_bound != n * n - self.dimCA0 + self.dimW_bound + 2:
            raise ValueError("inconsistent dimV bound")
        if self.reducible != (self.inequality_value <= 0):
            raise ValueError("verdict inconsistent with inequality value")


def inequality_value(a: int, b: int, k: int) -> int:
    """b^2 + (k+1-2a) b + 3a(k+1) - k - 2; reducible witness iff <= 0."""
    return b * b + (k + 1 - 2 * a) * b + 3 * a * (k + 1) - k - 2


def delta_value(a: int, k: int) -> int:
    """Discriminant of the b-quadratic: 4a^2 - 16(k+1)a + (k+1)^2 + 4(k+2)."""
    return 4 * a * a - 16 * (k + 1) * a + (k + 1) ** 2 + 4 * (k + 2)


def bounds(shape: BlockShape) -> ReducibilityReport:
    """Every closed-form bound for the shape, plus the reducibility verdict."""
    a, b, k = shape.a, shape.b, shape.k
    n = shape.n
    dim_w = 12 * a * a + 10 * a * b + b * b + (k - 1) * n * n + k
    dim_ca0 = 3 * a * a + 2 * a * b + b * b
    dim_v = n * n - dim_ca0 + dim_w + 2
    expected = (k + 1) * (n * n + n)
    ineq = inequality_value(a, b, k)
    # The two comparison forms are the same integer identity.
    assert ineq == expected - dim_v
    return ReducibilityReport(
        shape=shape,
        dimW_bound=dim_w,
        dimCA0=dim_ca0,
        dimV_bound=dim_v,
        expected_dim=expected,
        inequality_value=ineq,
        delta=delta_value(a, k),
        reducible=ineq <= 0,
    )


# ---------------------------------------------------------------------------
# Integer-exact thresholds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Thresholds:
    k: int
    delta_poly: tuple[int, int, int]  # coefficients of Delta_k(a), lowest first
    mu: int
    beta: int
    big_n: int  # every n >= big_n admits a witness

    def delta(self, a: int) -> int:
        c0, c1, c2 = self.delta_poly
        return c0 + c1 * a + c2 * a * a


def _ceil_half_sum(c: int, d: int) -> int:
    """Smallest integer m with m >= (c + sqrt(d)) / 2, for integers c, d >= 0."""
    m = (c + isqrt(d)) // 2
    while 2 * m < c or (2 * m - c) ** 2 < d:
        m += 1
    return m


def thresholds(k: int) -> Thresholds:
    """mu_k, beta_k and N(k), all by integer-exact ceiling logic."""
    if k < 1:
        raise ValueError("need k >= 1")
    mu = _ceil_half_sum(4 * (k + 1), 15 * (k + 1) ** 2 - 4 * (k + 2))
    beta = _ceil_half_sum(4 * (k + 1), 15 * (k + 1) ** 2 - 4 * (k + 1) + 12)
    big_n = (8 * beta - k - 5 + 1) // 2  # ceil((8 beta - k - 5) / 2)
    delta_poly = ((k + 1) ** 2 + 4 * (k + 2), -16 * (k + 1), 4)
    return Thresholds(k=k, delta_poly=delta_poly, mu=mu, beta=beta, big_n=big_n)


def b_interval(k: int, a: int) -> tuple[int, int] | None:
    """Integer b-range [lo, hi] where the witness inequality holds, or None."""
    d = delta_value(a, k)
    if d < 0:
        return None
    c = 2 * a - k - 1
    s = isqrt(d)
    # lo: smallest b with 2b >= c - sqrt(d);  hi: largest b with 2b <= c + sqrt(d).
    lo = (c - s) // 2
    while 2 * lo < c and (c - 2 * lo) ** 2 > d:
        lo += 1
    hi = (c + s) // 2
    while 2 * hi > c and (2 * hi - c) ** 2 > d:
        hi -= 1
    if lo > hi:
        return None
    return lo, hi


def find_witness(n: int, k: int) -> tuple[int, int] | None:
    """First decomposition n = 3a + b (a ascending from mu_k) passing the inequality."""
    mu = thresholds(k).mu
    for a in range(mu, n // 3 + 1):
        b = n - 3 * a
        if b < 0:
            break
        if inequality_value(a, b, k) <= 0:
            return a, b
    return None


def reducible_table(k: int, n_max: int) -> list[tuple[int, tuple[int, int] | None]]:
    """(n, witness-or-None) for every n <= n_max."""
    return [(n, find_witness(n, k)) for n in range(1, n_max + 1)]


# ---------------------------------------------------------------------------
# The block family W: construction and empirical dimension
# ---------------------------------------------------------------------------


def w_a0(shape: BlockShape, field: Field) -> Matrix:
    """The fixed A_0: identity blocks in slots (1,2) and (2,3), zero elsewhere."""
    n = shape.n
    data = [[field.zero] * n for _ in range(n)]
    r1, r2, r3 = shape.block_range(1), shape.block_range(2), shape.block_range(3)
    for i, j in zip(r1, r2):
        data[i][j] = field.one
    for i, j in zip(r2, r3):
        data[i][j] = field.one
    return Matrix(field, data)


def _series1_positions(shape: BlockShape) -> list[tuple[int, int]]:
    """Free entry slots of an order-1 coefficient: everything but block (3,1)."""
    n = shape.n
    blocked = {(i, j) for i in shape.block_range(3) for j in shape.block_range(1)}
    return [(i, j) for i in range(n) for j in range(n) if (i, j) not in blocked]


def _b0_positions(shape: BlockShape) -> list[list[tuple[int, int]]]:
    """Slot lists of the four B_0 parameter blocks, each tied entry-for-entry.

    Block 1 occupies slots (1,2) and (2,3) simultaneously; blocks 2, 3, 4
    occupy (1,3), (1,4), (4,3).
    """
    r1, r2, r3, r4 = (shape.block_range(i) for i in (1, 2, 3, 4))
    param_slots: list[list[tuple[int, int]]] = []
    for u in range(shape.a):
        for v in range(shape.a):
            # entry (u, v) of block B1 sits at positions (1,2) and (2,3)
            param_slots.append([(r1[u], r2[v]), (r2[u], r3[v])])
    for i in r1:
        for j in r3:
            param_slots.append([(i, j)])  # B2 at (1,3)
    for i in r1:
        for j in r4:
            param_slots.append([(i, j)])  # B3 at (1,4)
    for i in r4:
        for j in r3:
            param_slots.append([(i, j)])  # B4 at (4,3)
    return param_slots


def b_param_count(shape: BlockShape) -> int:
    a, b, k = shape.a, shape.b, shape.k
    n = shape.n
    return 2 * a * a + 2 * a * b + (n * n - a * a) + (k - 1) * n * n


def a_param_count(shape: BlockShape) -> int:
    n, a, k = shape.n, shape.a, shape.k
    return (n * n - a * a) + (k - 1) * n * n


def _b_param_embedding(shape: BlockShape, field: Field) -> Matrix:
    """Columns map B-side parameters into full MatPoly coordinates."""
    n, k = shape.n, shape.k
    m = n * n
    total = m * (k + 1)
    cols: list[list] = []

    def coord(s: int, i: int, j: int) -> int:
        return s * m + i * n + j

    for slots in _b0_positions(shape):
        col = [field.zero] * total
        for (i, j) in slots:
            col[coord(0, i, j)] = field.one
        cols.append(col)
    for (i, j) in _series1_positions(shape):
        col = [field.zero] * total
        col[coord(1, i, j)] = field.one
        cols.append(col)
    for s in range(2, k + 1):
        for i in range(n):
            for j in range(n):
                col = [field.zero] * total
                col[coord(s, i, j)] = field.one
                cols.append(col)
    return Matrix(field, list(zip(*cols)))


def _sample_w_a(shape: BlockShape, field: Field, rng: random.Random) -> MatPoly:
    n, k = shape.n, shape.k
    coeffs = [w_a0(shape, field)]
    data = [[field.zero] * n for _ in range(n)]
    for (i, j) in _series1_positions(shape):
        data[i][j] = field.rand(rng)
    coeffs.append(Matrix(field, data))
    for _ in range(2, k + 1):
        coeffs.append(
            Matrix(field, [[field.rand(rng) for _ in range(n)] for _ in range(n)])
        )
    return MatPoly(field, n, k, coeffs)


def _b_solution_space(shape: BlockShape, field: Field, a: MatPoly):
    """Kernel of the commutation system restricted to B's shape coordinates."""
    embed = _b_param_embedding(shape, field)
    system = ad_system(a) * embed
    ker = kernel_basis(system, context=f"W params a={shape.a} b={shape.b} k={shape.k}")
    return embed, ker


def sample_W_point(
    shape: BlockShape, field: Field, rng: random.Random, retries: int = 8
) -> tuple[MatPoly, MatPoly]:
    """A verified commuting pair in the block family W.

    The A side is sampled freely within its shape; the B side is a random
    element of the solution space of the commutation system restricted to
    the shape-constrained coordinates.
    """
    n, k = shape.n, shape.k
    for _ in range(retries):
        a = _sample_w_a(shape, field, rng)
        embed, ker = _b_solution_space(shape, field, a)
        if ker.dim == 0:
            continue  # cannot happen (B = A is always admissible); defensive
        weights = [field.rand(rng) for _ in range(ker.dim)]
        if all(field.is_zero(w) for w in weights):
            weights[0] = field.one
        param = [field.zero] * ker.ambient_dim
        for w, row in zip(weights, ker.vectors):
            if field.is_zero(w):
                continue
            param = [field.add(v, field.mul(w, c)) for v, c in zip(param, row)]
        vec = embed.mul_vector(param)
        b = MatPoly.from_vector(field, n, k, vec)
        if commutator(a, b).is_zero():
            return a, b
    raise SampleExhaustedError(f"no W point after {retries} tries for {shape}")


def empirical_dimW(
    shape: BlockShape, field: Field, trials: int, rng: random.Random
) -> int:
    """A-side parameter count plus the best observed B-side kernel dimension.

    Only the lower bound for dim W is guaranteed, so the max over trials is
    reported as-is; it must be >= the closed-form bound on every shape.
    """
    best = 0
    for _ in range(trials):
        a = _sample_w_a(shape, field, rng)
        _, ker = _b_solution_space(shape, field, a)
        best = max(best, ker.dim)
    return a_param_count(shape) + best
