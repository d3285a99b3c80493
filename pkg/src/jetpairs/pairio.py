"""Plain-text MatPoly records: hand-editable fixtures for explicit matrices.

A record is a header line "matpoly n k char" followed by k+1 blocks of n
rows of n field elements (integers mod p, or fractions like 3/4 over Q).
A pair file is just two consecutive records.
"""

from __future__ import annotations

from fractions import Fraction

from .fields import Field, PrimeField, QQ, prime_field
from .linalg import Matrix
from .truncmat import MatPoly


def field_for_char(char: int) -> Field:
    return QQ if char == 0 else prime_field(char)


def _render_scalar(field: Field, c) -> str:
    return str(c)


def format_matpoly(a: MatPoly) -> str:
    char = a.field.char
    lines = [f"matpoly {a.n} {a.k} {char}"]
    for coeff in a.coeffs:
        for row in coeff.data:
            lines.append(" ".join(_render_scalar(a.field, c) for c in row))
    return "\n".join(lines) + "\n"


def format_pair(a: MatPoly, b: MatPoly) -> str:
    return format_matpoly(a) + format_matpoly(b)


def _parse_scalar(field: Field, tok: str):
    if isinstance(field, PrimeField):
        return int(tok) % field.p
    return Fraction(tok)


def parse_matpoly_lines(lines: list[str], start: int = 0) -> tuple[MatPoly, int]:
    """Parse one record beginning at index start; returns (matpoly, next index)."""
    head = lines[start].split()
    if not head or head[0] != "matpoly":
        raise ValueError(f"expected 'matpoly n k char' header at line {start + 1}")
    n, k, char = int(head[1]), int(head[2]), int(head[3])
    field = field_for_char(char)
    pos = start + 1
    coeffs = []
    for _ in range(k + 1):
        rows = []
        for _ in range(n):
            toks = lines[pos].split()
            if len(toks) != n:
                raise ValueError(f"expected {n} entries at line {pos + 1}")
            rows.append([_parse_scalar(field, t) for t in toks])
            pos += 1
        coeffs.append(Matrix(field, rows))
    return MatPoly(field, n, k, coeffs), pos


def parse_matpoly(text: str) -> MatPoly:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    a, _ = parse_matpoly_lines(lines)
    return a


def parse_pair(text: str) -> tuple[MatPoly, MatPoly]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    a, pos = parse_matpoly_lines(lines)
    b, _ = parse_matpoly_lines(lines, pos)
    if (a.n, a.k) != (b.n, b.k) or a.field != b.field:
        raise ValueError("pair records disagree on n, k, or field")
    return a, b
