"""Symbolic generators of the jet commutator ideal and tangent-space ranks.

The order-s generator at position (i, j) is the t^s coefficient of entry
(i, j) of X(t)Y(t) - Y(t)X(t), a bilinear polynomial in the jet variables
x^(s)_{i,j}, y^(s)_{i,j}.  Generator coefficients are plain integers (they
are signed unit counts), mapped into whichever field a point lives over at
evaluation time; this keeps the exported text canonical across fields.

Jacobians are assembled analytically: the differential of the commutator at
(A, B) is (dA, dB) -> [dA, B] + [A, dB], whose matrix columns are direct
commutator evaluations.  Symbolic differentiation of JetPoly exists too,
but only as a cross-check oracle for the tests.

Generator list order is order-major then row-major, matching the MatPoly
coordinate convention, so Jacobian rows line up with commutator coordinates.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

from .fields import Field
from .linalg import Matrix, rank
from .truncmat import MatPoly, commutator


class JetVar(NamedTuple):
    """One jet variable; series is "x" or "y", indices are 1-based."""

    series: str
    order: int
    row: int
    col: int

    def label(self) -> str:
        return f"{self.series}_{self.order}_{self.row}_{self.col}"


Monomial = tuple[JetVar, ...]  # sorted multiset of variables


class JetPoly:
    """Multivariate polynomial in jet variables with integer coefficients.

    Terms are kept in the fixed monomial order (graded lexicographic on the
    (series, order, row, col) tuples), with nonzero coefficients only, so
    equal polynomials compare equal structurally.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: dict[Monomial, int] | None = None):
        clean = {}
        for mono, c in (terms or {}).items():
            if c != 0:
                clean[tuple(sorted(mono))] = c
        self.terms = dict(sorted(clean.items(), key=_monomial_sort_key))

    @classmethod
    def zero(cls) -> "JetPoly":
        return cls({})

    @classmethod
    def variable(cls, v: JetVar) -> "JetPoly":
        return cls({(v,): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "JetPoly") -> "JetPoly":
        out = dict(self.terms)
        for mono, c in other.terms.items():
            out[mono] = out.get(mono, 0) + c
        return JetPoly(out)

    def __sub__(self, other: "JetPoly") -> "JetPoly":
        out = dict(self.terms)
        for mono, c in other.terms.items():
            out[mono] = out.get(mono, 0) - c
        return JetPoly(out)

    def __mul__(self, other: "JetPoly") -> "JetPoly":
        out: dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = tuple(sorted(m1 + m2))
                out[mono] = out.get(mono, 0) + c1 * c2
        return JetPoly(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, JetPoly) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(tuple(self.terms.items()))

    def variables(self) -> set[JetVar]:
        return {v for mono in self.terms for v in mono}

    def partial(self, v: JetVar) -> "JetPoly":
        """Formal partial derivative (the test oracle for the Jacobian)."""
        out: dict[Monomial, int] = {}
        for mono, c in self.terms.items():
            mult = mono.count(v)
            if mult == 0:
                continue
            rest = list(mono)
            rest.remove(v)
            key = tuple(rest)
            out[key] = out.get(key, 0) + c * mult
        return JetPoly(out)

    def evaluate(self, field: Field, assignment: dict[JetVar, object]):
        acc = field.zero
        for mono, c in self.terms.items():
            term = field.from_int(c)
            for v in mono:
                term = field.mul(term, assignment[v])
            acc = field.add(acc, term)
        return acc

    def __repr__(self) -> str:
        return render_poly(self)


def _monomial_sort_key(item):
    mono = item[0]
    return (len(mono), mono)


def jet_variables(n: int, k: int) -> list[JetVar]:
    """All 2 n^2 (k+1) variables: x-series then y-series, order-major."""
    out = []
    for series in ("x", "y"):
        for s in range(k + 1):
            for i in range(1, n + 1):
                for j in range(1, n + 1):
                    out.append(JetVar(series, s, i, j))
    return out


def generators(n: int, k: int) -> list[JetPoly]:
    """The n^2 (k+1) generators, order-major then row-major.

    Entry (s, i, j) is sum over p + q = s and m of
    x^(p)_{i,m} y^(q)_{m,j} - y^(p)_{i,m} x^(q)_{m,j}; every surviving
    monomial is bilinear, one x-variable times one y-variable with orders
    summing to s.
    """
    if n < 1 or k < 0:
        raise ValueError("need n >= 1 and k >= 0")
    gens = []
    for s in range(k + 1):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                terms: dict[Monomial, int] = {}
                for p in range(s + 1):
                    q = s - p
                    for m in range(1, n + 1):
                        mono = tuple(
                            sorted((JetVar("x", p, i, m), JetVar("y", q, m, j)))
                        )
                        terms[mono] = terms.get(mono, 0) + 1
                        mono = tuple(
                            sorted((JetVar("x", q, m, j), JetVar("y", p, i, m)))
                        )
                        terms[mono] = terms.get(mono, 0) - 1
                gens.append(JetPoly(terms))
    return gens


def point_assignment(a: MatPoly, b: MatPoly) -> dict[JetVar, object]:
    out = {}
    for s in range(a.k + 1):
        for i in range(1, a.n + 1):
            for j in range(1, a.n + 1):
                out[JetVar("x", s, i, j)] = a.coeffs[s].data[i - 1][j - 1]
                out[JetVar("y", s, i, j)] = b.coeffs[s].data[i - 1][j - 1]
    return out


def evaluate(gens: Sequence[JetPoly], point: tuple[MatPoly, MatPoly]) -> list:
    """Generator values at a concrete pair; all zero iff the pair commutes."""
    a, b = point
    a._check_ring(b)
    assignment = point_assignment(a, b)
    return [g.evaluate(a.field, assignment) for g in gens]


def jacobian_matrix(point: tuple[MatPoly, MatPoly]) -> Matrix:
    """Differential of the commutator map at the point, on coordinates.

    Columns run over the 2 n^2 (k+1) jet variables (x-block then y-block,
    each in MatPoly coordinate order); column v holds the coordinates of
    [E_v, B] (x-variables) or [A, E_v] (y-variables).
    """
    a, b = point
    a._check_ring(b)
    f = a.field
    n, k = a.n, a.k
    m = n * n * (k + 1)
    cols = []
    for s in range(k + 1):
        for i in range(n):
            for j in range(n):
                e = MatPoly.from_coeff_map(f, n, k, {s: Matrix.unit(f, n, i, j)})
                cols.append(commutator(e, b).to_vector())
    for s in range(k + 1):
        for i in range(n):
            for j in range(n):
                e = MatPoly.from_coeff_map(f, n, k, {s: Matrix.unit(f, n, i, j)})
                cols.append(commutator(a, e).to_vector())
    return Matrix(f, list(zip(*cols)))  # m rows, 2m columns


def jacobian_tangent_dim(n: int, k: int, point: tuple[MatPoly, MatPoly]) -> int:
    """Zariski tangent-space dimension 2 n^2 (k+1) - rank(Jacobian) at a point."""
    a, b = point
    if a.n != n or a.k != k:
        raise ValueError("point shape does not match (n, k)")
    if not commutator(a, b).is_zero():
        raise ValueError("point is not on the commuting-pairs jet scheme")
    jac = jacobian_matrix(point)
    return 2 * n * n * (k + 1) - rank(jac)


# ---------------------------------------------------------------------------
# Export / import
# ---------------------------------------------------------------------------

FLAVORS = ("generic-text", "m2-flavored", "singular-flavored")


def render_poly(g: JetPoly) -> str:
    if g.is_zero():
        return "0"
    parts = []
    for idx, (mono, c) in enumerate(g.terms.items()):
        var_part = "*".join(v.label() for v in mono)
        mag = abs(c)
        body = f"{mag}*{var_part}" if mono else f"{mag}"
        if idx == 0:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f" + {body}" if c > 0 else f" - {body}")
    return "".join(parts)


def export_ideal(
    gens: Sequence[JetPoly], n: int, k: int, char: int, flavor: str = "generic-text"
) -> str:
    """Deterministic text for the ideal; byte-identical for equal inputs."""
    if flavor not in FLAVORS:
        raise ValueError(f"unknown flavor {flavor!r}")
    var_names = [v.label() for v in jet_variables(n, k)]
    lines: list[str] = []
    if flavor == "generic-text":
        lines.append(f"jetideal n={n} k={k} char={char}")
        lines.append(f"vars x_s_i_j y_s_i_j s=0..{k} i,j=1..{n}")
        lines.extend(render_poly(g) for g in gens)
    elif flavor == "m2-flavored":
        ring = "QQ" if char == 0 else f"ZZ/{char}"
        lines.append(f"R = {ring}[{', '.join(var_names)}];")
        body = ",\n  ".join(render_poly(g) for g in gens)
        lines.append(f"I = ideal(\n  {body}\n);")
    else:
        lines.append(f"ring R = {char}, ({', '.join(var_names)}), dp;")
        body = ",\n  ".join(render_poly(g) for g in gens)
        lines.append(f"ideal I =\n  {body};")
    return "\n".join(lines) + "\n"


def parse_ideal(text: str) -> tuple[int, int, int, list[JetPoly]]:
    """Inverse of the generic-text export: (n, k, char, generators)."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = lines[0].split()
    if head[0] != "jetideal":
        raise ValueError("not a generic-text jet ideal export")
    fields = dict(part.split("=") for part in head[1:])
    n, k, char = int(fields["n"]), int(fields["k"]), int(fields["char"])
    gens = [_parse_poly(ln) for ln in lines[2:]]
    return n, k, char, gens


def _parse_var(tok: str) -> JetVar:
    series, s, i, j = tok.split("_")
    return JetVar(series, int(s), int(i), int(j))


def _parse_poly(line: str) -> JetPoly:
    line = line.strip()
    if line == "0":
        return JetPoly.zero()
    normalized = line.replace(" - ", " + -").replace(" + ", "|")
    terms: dict[Monomial, int] = {}
    for chunk in normalized.split("|"):
        chunk = chunk.strip()
        sign = 1
        if chunk.startswith("-"):
            sign = -1
            chunk = chunk[1:]
        factors = chunk.split("*")
        coeff = sign * int(factors[0])
        mono = tuple(sorted(_parse_var(tok) for tok in factors[1:]))
        terms[mono] = terms.get(mono, 0) + coeff
    return JetPoly(terms)
