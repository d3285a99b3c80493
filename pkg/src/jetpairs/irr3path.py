"""Closure certificates for commuting 3x3 jet pairs.

A certificate is a replayable chain of commutation-preserving moves that
ends at a pair whose constant coefficient is either 1-regular or has two
distinct base-field eigenvalues.  The moves are the standard reductions
(swap, polynomial shifts and shears, unit scaling, conjugation) plus the
deformation move, which carries a sampled scalar: the deformed family
commutes for every scalar value, so membership in the closure at a generic
sample certifies it at the original point.

Dispatch wrinkles worth knowing:
  * anything whose coefficient is a scalar matrix can be stripped off by a
    polynomial shift, which is what makes the both-constants-zero recursion
    bottom out (pairs like (t I, 0) would otherwise cycle);
  * the spectrum analysis stays inside the base field.  If a constant
    coefficient had an irrational spectrum certification would stop with a
    stalled terminal, but for 3x3 such a matrix is already 1-regular, so the
    branch is defensive only.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from .commutant import is_one_regular
from .fields import Field
from .linalg import (
    Matrix,
    base_root_count,
    charpoly,
    inverse,
    kernel_basis,
    rank,
    unique_base_root,
)
from .truncmat import MatPoly, commutator, poly_combine
from .unipoly import UniPoly


class MoveViolationError(RuntimeError):
    """A move broke commutation; certificates must never contain one."""


class CertificateReplayError(RuntimeError):
    """Replay of a certificate failed an invariant."""


@dataclass(frozen=True)
class Move:
    kind: str  # swap | shift_a | shift_b | shear_b | scale_a | conjugate | deform
    poly: UniPoly | None = None
    matrix: Matrix | None = None
    x: MatPoly | None = None
    y: MatPoly | None = None
    lam: object = None
    note: str = ""


@dataclass(frozen=True)
class Terminal:
    kind: str  # in_U | spectrum_split | stalled
    lam: object = None
    reason: str = ""


@dataclass
class ClosureCertificate:
    input_pair: tuple[MatPoly, MatPoly]
    moves: list[Move] = dc_field(default_factory=list)
    terminal: Terminal = Terminal("stalled", reason="unset")


Pair = tuple[MatPoly, MatPoly]


def apply_move(pair: Pair, move: Move) -> Pair:
    """Apply one move; commutation of a commuting input must be preserved."""
    a, b = pair
    was_commuting = commutator(a, b).is_zero()
    if move.kind == "swap":
        out = (b, a)
    elif move.kind == "shift_a":
        out = (poly_combine(a, b, move.poly, UniPoly.zero(a.field), "shift_a"), b)
    elif move.kind == "shift_b":
        out = (a, poly_combine(a, b, move.poly, UniPoly.zero(a.field), "shift_b"))
    elif move.kind == "shear_b":
        out = (a, poly_combine(a, b, move.poly, UniPoly.zero(a.field), "shear_b"))
    elif move.kind == "scale_a":
        out = (poly_combine(a, b, UniPoly.zero(a.field), move.poly, "scale_a"), b)
    elif move.kind == "conjugate":
        h = move.matrix
        h_inv = inverse(h)
        out = (a.conjugate(h, h_inv), b.conjugate(h, h_inv))
    elif move.kind == "deform":
        out = (a + move.x.scale(move.lam), b + move.y.scale(move.lam))
    else:
        raise ValueError(f"unknown move kind {move.kind!r}")
    if was_commuting and not commutator(*out).is_zero():
        raise MoveViolationError(f"move {move.kind} broke commutation")
    return out


def inverse_move(move: Move, k: int) -> Move | None:
    """The undo move at truncation order k, or None for deform.

    Deform is a closure argument, not a bijection, so it has no inverse in
    the move calculus.
    """
    if move.kind == "swap":
        return move
    if move.kind in ("shift_a", "shift_b", "shear_b"):
        return Move(kind=move.kind, poly=-move.poly)
    if move.kind == "scale_a":
        one = UniPoly.one(move.poly.field)
        return Move(kind="scale_a", poly=(move.poly + one).inv_trunc(k + 1) - one)
    if move.kind == "conjugate":
        return Move(kind="conjugate", matrix=inverse(move.matrix))
    return None


# ---------------------------------------------------------------------------
# Normalization to the distinguished rank-1 nilpotent form
# ---------------------------------------------------------------------------


def _e12(field: Field) -> Matrix:
    return Matrix.unit(field, 3, 0, 1)


def is_rank1_nilpotent(m: Matrix) -> bool:
    return m.rows == 3 and not m.is_zero() and (m * m).is_zero()


def jordan_conjugator(a0: Matrix) -> Matrix:
    """Deterministic H with H a0 H^-1 = e_{1,2}, for 3x3 rank-1 nilpotent a0."""
    if not is_rank1_nilpotent(a0):
        raise ValueError("need a nonzero 3x3 matrix with square zero")
    f = a0.field
    v = None
    for j in range(3):
        cand = tuple(a0.data[i][j] for i in range(3))
        if any(not f.is_zero(c) for c in cand):
            v = tuple(f.one if i == j else f.zero for i in range(3))
            u = cand  # a0 @ e_j
            break
    ker = kernel_basis(a0)
    w = None
    for row in ker.vectors:
        if rank(Matrix(f, [list(u), list(row)])) == 2:
            w = row
            break
    cols = [u, v, w]
    p = Matrix(f, list(zip(*cols)))
    return inverse(p)


def _entry(a: MatPoly, i: int, j: int) -> UniPoly:
    return a.entry_poly(i, j)


def is_normalized(pair: Pair) -> bool:
    """a = a' = 0, b = 1, b' = 0 and constant coefficient exactly e_{1,2}."""
    a, b = pair
    f = a.field
    one = UniPoly.one(f)
    return (
        a.n == 3
        and a.coeffs[0] == _e12(f)
        and _entry(a, 0, 0).is_zero()
        and _entry(a, 0, 1) == one
        and _entry(b, 0, 0).is_zero()
        and _entry(b, 0, 1).is_zero()
    )


def normalize(a: MatPoly, b: MatPoly) -> tuple[Pair, list[Move]]:
    """Move a rank-1-nilpotent-constant pair into the distinguished form.

    Emits only the moves actually needed: conjugation into Jordan position,
    shifts killing the two corner entries, the unit scaling that makes the
    (1,2) entry of A exactly 1, and the shear killing the (1,2) entry of B.
    """
    if a.n != 3:
        raise ValueError("normalization is specific to n = 3")
    if not commutator(a, b).is_zero():
        raise ValueError("pair does not commute")
    if not is_rank1_nilpotent(a.coeffs[0]):
        raise ValueError("constant coefficient is not rank-1 nilpotent")
    f = a.field
    pair = (a, b)
    moves: list[Move] = []

    def push(move: Move):
        nonlocal pair
        pair = apply_move(pair, move)
        moves.append(move)

    if pair[0].coeffs[0] != _e12(f):
        push(Move(kind="conjugate", matrix=jordan_conjugator(pair[0].coeffs[0]),
                  note="A_0 -> e_{1,2}"))
    a_poly = _entry(pair[0], 0, 0)
    if not a_poly.is_zero():
        push(Move(kind="shift_a", poly=-a_poly, note="kill a(t)"))
    a2_poly = _entry(pair[1], 0, 0)
    if not a2_poly.is_zero():
        push(Move(kind="shift_b", poly=-a2_poly, note="kill a'(t)"))
    b_poly = _entry(pair[0], 0, 1)
    one = UniPoly.one(f)
    if b_poly != one:
        q = b_poly.inv_trunc(a.k + 1) - one
        push(Move(kind="scale_a", poly=q, note="set b(t) = 1"))
    b2_poly = _entry(pair[1], 0, 1)
    if not b2_poly.is_zero():
        push(Move(kind="shear_b", poly=-b2_poly, note="kill b'(t)"))
    assert is_normalized(pair)
    return pair, moves


def derived_relations_check(pair: Pair) -> bool:
    """The four entry identities forced by commutation in normalized form."""
    a, b = pair
    if not is_normalized(pair):
        raise ValueError("pair is not in normalized form")
    m = a.k + 1

    def tm(p: UniPoly, q: UniPoly) -> UniPoly:
        return p.mul_trunc(q, m)

    c, e, g, h, i = (
        _entry(a, 0, 2),
        _entry(a, 1, 1),
        _entry(a, 2, 0),
        _entry(a, 2, 1),
        _entry(a, 2, 2),
    )
    cp, dp, ep, fp, gp, hp, ip = (
        _entry(b, 0, 2),
        _entry(b, 1, 0),
        _entry(b, 1, 1),
        _entry(b, 1, 2),
        _entry(b, 2, 0),
        _entry(b, 2, 1),
        _entry(b, 2, 2),
    )
    ok_d = dp == tm(cp, g) - tm(c, gp)
    ok_e = ep == tm(cp, h) - tm(c, hp)
    ok_f = fp == tm(cp, i) - tm(c, ip)
    ok_g = gp == (
        tm(i, hp) - tm(ip, h) + tm(cp, tm(h, h)) - tm(c, tm(h, hp)) - tm(e, hp)
    )
    return ok_d and ok_e and ok_f and ok_g


def build_XY(pair: Pair) -> tuple[MatPoly, MatPoly]:
    """The deformation directions attached to a normalized pair.

    X and Y commute and satisfy AY + XB = BX + YA, so (A + lam X, B + lam Y)
    commutes for every scalar lam; both identities are re-verified here.
    """
    a, b = pair
    if not derived_relations_check(pair):
        raise ValueError("derived entry relations fail: pair not normalized/commuting")
    f = a.field
    k = a.k
    m = k + 1
    zero, one = UniPoly.zero(f), UniPoly.one(f)
    c, e, h, i = (
        _entry(a, 0, 2),
        _entry(a, 1, 1),
        _entry(a, 2, 1),
        _entry(a, 2, 2),
    )
    cp = _entry(b, 0, 2)
    x_entries = [
        [zero, zero, zero],
        [(i - e - c.mul_trunc(h, m)).truncate(m), one, zero],
        [-h, zero, one],
    ]
    y_entries = [
        [zero, zero, zero],
        [(-h.mul_trunc(cp, m)).truncate(m), zero, cp],
        [zero, zero, zero],
    ]
    x = MatPoly.from_entry_polys(f, 3, k, x_entries)
    y = MatPoly.from_entry_polys(f, 3, k, y_entries)
    if not commutator(x, y).is_zero():
        raise AssertionError("deformation directions do not commute")
    if not (a * y + x * b - b * x - y * a).is_zero():
        raise AssertionError("mixed deformation identity fails")
    return x, y


def splits_at(a: MatPoly, x: MatPoly, lam) -> bool:
    """Does A_0 + lam X_0 have >= 2 distinct base-field eigenvalues?"""
    a0 = a.coeffs[0] + x.coeffs[0].scale(lam)
    return base_root_count(charpoly(a0)) >= 2


def spectrum_splits(
    a: MatPoly, x: MatPoly, samples: int, rng: random.Random
) -> tuple[bool, object | None]:
    """Sample deformation scalars until the constant-term spectrum splits."""
    f = a.field
    for _ in range(samples):
        lam = f.rand_nonzero(rng)
        if splits_at(a, x, lam):
            return True, lam
    return False, None


# ---------------------------------------------------------------------------
# The full dispatch
# ---------------------------------------------------------------------------


def _scalar_coefficient_poly(a: MatPoly) -> UniPoly:
    """p(t) with one term per nonzero scalar-matrix coefficient of a."""
    f = a.field
    coeffs = [f.zero] * (a.k + 1)
    for s, c in enumerate(a.coeffs):
        if not c.is_zero() and c.is_scalar():
            coeffs[s] = c.data[0][0]
    return UniPoly(f, coeffs)


def _cube_root_shift(a0: Matrix):
    """(lam, True) when charpoly = (x - lam)^n with lam in the base field."""
    f = a0.field
    cp = charpoly(a0)
    lam = unique_base_root(cp)
    if lam is None:
        return None, False
    shifted = UniPoly(f, (f.neg(lam), f.one))  # x - lam
    power = UniPoly.one(f)
    for _ in range(a0.rows):
        power = power * shifted
    return lam, cp == power


def certify_closure(
    a: MatPoly,
    b: MatPoly,
    rng: random.Random,
    lam_budget: int = 16,
    max_depth: int = 40,
) -> ClosureCertificate:
    """Emit a move chain carrying (a, b) to a 1-regular or split-spectrum pair.

    Dispatch: 1-regular constants terminate immediately; split spectra
    terminate; a single rational eigenvalue is shifted away; a rank-1
    nilpotent constant goes through normalization and the X/Y deformation;
    both-constants-zero pairs are reduced by scalar stripping, swaps, and
    the valuation-shift deformation.  Stalled terminals can only arise from
    exhausted budgets or (defensively) irrational spectra.
    """
    if a.n != 3:
        raise ValueError("closure certification is specific to n = 3")
    if not commutator(a, b).is_zero():
        raise ValueError("pair does not commute")
    f = a.field
    cert = ClosureCertificate(input_pair=(a, b))
    pair: Pair = (a, b)
    last_lam = None

    def push(move: Move):
        nonlocal pair
        pair = apply_move(pair, move)
        cert.moves.append(move)

    for _ in range(max_depth):
        cur_a, cur_b = pair
        a0, b0 = cur_a.coeffs[0], cur_b.coeffs[0]
        if is_one_regular(a0):
            cert.terminal = Terminal("in_U")
            return cert
        if base_root_count(charpoly(a0)) >= 2:
            cert.terminal = Terminal("spectrum_split", lam=last_lam)
            return cert
        if is_one_regular(b0) or base_root_count(charpoly(b0)) >= 2:
            push(Move(kind="swap", note="terminal-ready partner"))
            continue
        lam_a, ok_a = _cube_root_shift(a0)
        if not ok_a:
            cert.terminal = Terminal("stalled", reason="irrational spectrum")
            return cert
        if not f.is_zero(lam_a):
            push(Move(kind="shift_a", poly=-UniPoly.constant(f, lam_a),
                      note="remove unique eigenvalue"))
            continue
        lam_b, ok_b = _cube_root_shift(b0)
        if not ok_b:
            cert.terminal = Terminal("stalled", reason="irrational spectrum")
            return cert
        if not f.is_zero(lam_b):
            push(Move(kind="shift_b", poly=-UniPoly.constant(f, lam_b),
                      note="remove unique eigenvalue"))
            continue
        # Constants are now nilpotent.
        if not a0.is_zero():
            # Rank 2 would be 1-regular, so this is the rank-1 case.
            _, norm_moves = normalize(*pair)
            for mv in norm_moves:
                push(mv)
            if not derived_relations_check(pair):
                raise AssertionError("normalized pair fails its derived relations")
            x, y = build_XY(pair)
            found, lam = spectrum_splits(pair[0], x, lam_budget, rng)
            if not found:
                cert.terminal = Terminal("stalled", reason="no splitting scalar found")
                return cert
            push(Move(kind="deform", x=x, y=y, lam=lam, note="rank-1 deformation"))
            last_lam = lam
            continue
        if not b0.is_zero():
            push(Move(kind="swap", note="nonzero constant to front"))
            continue
        # Both constants vanish.
        p_a = _scalar_coefficient_poly(cur_a)
        if not p_a.is_zero():
            push(Move(kind="shift_a", poly=-p_a, note="strip scalar coefficients"))
            continue
        p_b = _scalar_coefficient_poly(cur_b)
        if not p_b.is_zero():
            push(Move(kind="shift_b", poly=-p_b, note="strip scalar coefficients"))
            continue
        if cur_a.is_zero() and cur_b.is_zero():
            probe = MatPoly.constant(
                Matrix.diagonal(f, [f.from_int(i) for i in range(3)]), cur_a.k
            )
            lam = f.rand_nonzero(rng)
            push(Move(kind="deform", x=probe, y=MatPoly.zero(f, 3, cur_a.k),
                      lam=lam, note="scale a regular pair into the origin"))
            last_lam = lam
            continue
        if cur_a.is_zero():
            push(Move(kind="swap", note="nonzero side to front"))
            continue
        r = cur_a.valuation()
        shifted = cur_a.shift_down(int(r))
        theta = f.rand_nonzero(rng)
        push(Move(kind="deform", x=MatPoly.zero(f, 3, cur_a.k), y=shifted,
                  lam=theta, note=f"valuation shift by t^-{int(r)}"))
        last_lam = theta
        push(Move(kind="swap", note="fresh nonzero constant to front"))
    cert.terminal = Terminal("stalled", reason="certification budget exceeded")
    return cert


# ---------------------------------------------------------------------------
# Structured-text serialization (external replay surface)
# ---------------------------------------------------------------------------


def _scalars_to_text(values) -> str:
    return " ".join(str(v) for v in values)


def _poly_line(p: UniPoly, k: int) -> str:
    return _scalars_to_text(p.coeff(i) for i in range(k + 1))


def format_certificate(cert: ClosureCertificate) -> str:
    """One line per move; matrix payloads as row-major coefficient lists."""
    a, b = cert.input_pair
    n, k = a.n, a.k
    lines = [f"certificate n={n} k={k} char={a.field.char}"]
    lines.append("input_a " + _scalars_to_text(a.to_vector()))
    lines.append("input_b " + _scalars_to_text(b.to_vector()))
    for mv in cert.moves:
        if mv.kind == "swap":
            body = ""
        elif mv.kind in ("shift_a", "shift_b", "shear_b", "scale_a"):
            body = " " + _poly_line(mv.poly, k)
        elif mv.kind == "conjugate":
            body = " " + _scalars_to_text(mv.matrix.to_flat())
        elif mv.kind == "deform":
            body = (
                f" {mv.lam} "
                + _scalars_to_text(mv.x.to_vector())
                + " "
                + _scalars_to_text(mv.y.to_vector())
            )
        else:
            raise ValueError(f"unknown move kind {mv.kind!r}")
        note = f" note:{mv.note}" if mv.note else ""
        lines.append(f"move {mv.kind}{body}{note}")
    t = cert.terminal
    if t.kind == "spectrum_split":
        lines.append(f"terminal spectrum_split {'-' if t.lam is None else t.lam}")
    elif t.kind == "stalled":
        lines.append(f"terminal stalled {t.reason}")
    else:
        lines.append("terminal in_U")
    return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> ClosureCertificate:
    from .pairio import field_for_char

    lines = [ln for ln in text.splitlines() if ln.strip()]
    head = dict(part.split("=") for part in lines[0].split()[1:])
    n, k, char = int(head["n"]), int(head["k"]), int(head["char"])
    field = field_for_char(char)

    def scalar(tok: str):
        from fractions import Fraction

        return field.from_int(int(tok)) if field.kind == "prime" else Fraction(tok)

    def matpoly_of(toks):
        return MatPoly.from_vector(field, n, k, [scalar(t) for t in toks])

    a = matpoly_of(lines[1].split()[1:])
    b = matpoly_of(lines[2].split()[1:])
    cert = ClosureCertificate(input_pair=(a, b))
    size = n * n * (k + 1)
    for line in lines[3:]:
        toks = line.split()
        if toks[0] == "terminal":
            if toks[1] == "in_U":
                cert.terminal = Terminal("in_U")
            elif toks[1] == "spectrum_split":
                lam = None if toks[2] == "-" else scalar(toks[2])
                cert.terminal = Terminal("spectrum_split", lam=lam)
            else:
                cert.terminal = Terminal("stalled", reason=" ".join(toks[2:]))
            continue
        kind = toks[1]
        note = ""
        if "note:" in line:
            line, note = line.split(" note:", 1)
            toks = line.split()
        payload = toks[2:]
        if kind == "swap":
            cert.moves.append(Move(kind="swap", note=note))
        elif kind in ("shift_a", "shift_b", "shear_b", "scale_a"):
            cert.moves.append(
                Move(kind=kind, poly=UniPoly(field, [scalar(t) for t in payload]), note=note)
            )
        elif kind == "conjugate":
            cert.moves.append(
                Move(
                    kind="conjugate",
                    matrix=Matrix.from_flat(field, n, n, [scalar(t) for t in payload]),
                    note=note,
                )
            )
        elif kind == "deform":
            lam = scalar(payload[0])
            x = matpoly_of(payload[1 : 1 + size])
            y = matpoly_of(payload[1 + size : 1 + 2 * size])
            cert.moves.append(Move(kind="deform", x=x, y=y, lam=lam, note=note))
        else:
            raise ValueError(f"unknown move kind {kind!r} in certificate text")
    return cert


def replay_certificate(cert: ClosureCertificate) -> Pair:
    """Re-run all moves, checking commutation at every step and the terminal claim."""
    pair = cert.input_pair
    if not commutator(*pair).is_zero():
        raise CertificateReplayError("input pair does not commute")
    for idx, move in enumerate(cert.moves):
        try:
            pair = apply_move(pair, move)
        except MoveViolationError as exc:
            raise CertificateReplayError(f"move {idx} ({move.kind}): {exc}") from exc
        if not commutator(*pair).is_zero():
            raise CertificateReplayError(f"commutation lost after move {idx}")
    a0 = pair[0].coeffs[0]
    if cert.terminal.kind == "in_U":
        if not is_one_regular(a0):
            raise CertificateReplayError("terminal in_U but A_0 is not 1-regular")
    elif cert.terminal.kind == "spectrum_split":
        if base_root_count(charpoly(a0)) < 2:
            raise CertificateReplayError("terminal spectrum_split without a split")
    return pair
