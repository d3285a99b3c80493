"""Batch verification driver: the only human-facing surface.

Every command echoes its configuration, runs a deterministic sweep (seeds
are derived per sample from the master seed), and exits 0 exactly when all
checked properties hold.  Exit codes: 1 property violation, 2 bad input,
3 infeasible precondition.  With --structured, machine-readable "#rec"
lines accompany the text report.  Identical configurations produce
byte-identical output.
"""

from __future__ import annotations

import argparse
import sys

from . import pairio
from .commutant import (
    InfeasibleLiftError,
    EquivalenceViolationError,
    ad_image_contains,
    commutant_basis,
    extend_pair,
    filtration_dims,
    lift_pair,
    equivalence_battery,
    triple_algebra_dim,
)
from .fields import QQ, prime_field
from .irr3path import certify_closure, format_certificate, replay_certificate
from .jetideal import evaluate, export_ideal, generators, jacobian_tangent_dim
from .linalg import Matrix
from .redwitness import (
    BlockShape,
    bounds,
    empirical_dimW,
    reducible_table,
    sample_W_point,
    thresholds,
)
from .sampling import (
    derive_rng,
    rand_matpoly,
    rand_matrix,
    rand_non_one_regular,
    rand_normalized_pair,
    rand_rank1_nilpotent_pair,
    rand_u_pair,
    rand_zero_constant_pair,
)
from .symcalc import b_from_q, b_from_q_direct
from .truncmat import MatPoly, commutator

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_BAD_INPUT = 2
EXIT_INFEASIBLE = 3


class _Reporter:
    def __init__(self, structured: bool):
        self.structured = structured

    def say(self, text: str):
        print(text)

    def rec(self, tag: str, **kv):
        if self.structured:
            body = " ".join(f"{k}={v}" for k, v in kv.items())
            print(f"#rec {tag} {body}")


def _field_from_args(args):
    return QQ if args.rationals else prime_field(args.prime)


# -- verify ------------------------------------------------------------------


def _cmd_verify_equivalence(args, rep: _Reporter) -> int:
    field = _field_from_args(args)
    failures = 0
    regular = derogatory = 0
    for i in range(args.samples):
        rng = derive_rng(args.seed, "equivalence", args.n, args.k, i)
        if i % 2 == 0:
            # Fully random constant coefficient: generically 1-regular.
            a = rand_matpoly(field, args.n, args.k, rng)
        else:
            coeffs = [rand_non_one_regular(field, args.n, rng)]
            coeffs += [rand_matrix(field, args.n, rng) for _ in range(args.k)]
            a = MatPoly(field, args.n, args.k, coeffs)
        try:
            report = equivalence_battery(a, rng)
        except EquivalenceViolationError as exc:
            rep.say(f"sample {i}: VIOLATION {exc}")
            failures += 1
            continue
        if report.one_regular:
            regular += 1
        else:
            derogatory += 1
    rep.say(
        f"equivalence n={args.n} k={args.k} samples={args.samples} "
        f"one_regular={regular} derogatory={derogatory} failures={failures}"
    )
    rep.rec(
        "equivalence", n=args.n, k=args.k, samples=args.samples,
        one_regular=regular, derogatory=derogatory, failures=failures,
    )
    return EXIT_OK if failures == 0 else EXIT_VIOLATION


def _cmd_verify_coeff_formula(args, rep: _Reporter) -> int:
    field = _field_from_args(args)
    from .sampling import rand_qs, rand_regular_matpoly

    bad = 0
    for i in range(args.samples):
        rng = derive_rng(args.seed, "coeff-formula", args.n, args.k, i)
        a = (
            rand_regular_matpoly(field, args.n, args.k, rng)
            if i % 2 == 0
            else rand_matpoly(field, args.n, args.k, rng)
        )
        qs = rand_qs(field, args.n, args.k, rng)
        if b_from_q(qs, a) != b_from_q_direct(qs, a):
            bad += 1
            rep.say(f"sample {i}: coefficient formula disagrees with direct evaluation")
    rep.say(f"coeff-formula n={args.n} k={args.k} samples={args.samples} failures={bad}")
    rep.rec("coeff-formula", n=args.n, k=args.k, samples=args.samples, failures=bad)
    return EXIT_OK if bad == 0 else EXIT_VIOLATION


# -- commutant ----------------------------------------------------------------


def _cmd_commutant(args, rep: _Reporter) -> int:
    field = _field_from_args(args)
    if args.input:
        try:
            a = pairio.parse_matpoly(open(args.input).read())
        except (OSError, ValueError, IndexError) as exc:
            rep.say(f"bad input: {exc}")
            return EXIT_BAD_INPUT
    else:
        rng = derive_rng(args.seed, "commutant", args.n, args.k)
        a = rand_matpoly(field, args.n, args.k, rng)
    cb = commutant_basis(a)
    target = a.n * (a.k + 1)
    rep.say(f"commutant n={a.n} k={a.k} dim={cb.dim} n(k+1)={target}")
    rep.rec("commutant", n=a.n, k=a.k, dim=cb.dim)
    for row in cb.vectors:
        rep.say("basis " + " ".join(str(c) for c in row))
    decoded_ok = all(
        commutator(a, MatPoly.from_vector(a.field, a.n, a.k, v)).is_zero()
        for v in cb.vectors
    )
    rep.say(f"decoded-commutation ok={decoded_ok}")
    return EXIT_OK if decoded_ok else EXIT_VIOLATION


# -- lift ---------------------------------------------------------------------


def _demo_non_liftable(args, rep: _Reporter) -> int:
    field = _field_from_args(args)
    rng = derive_rng(args.seed, "non-liftable")
    x = Matrix.unit(field, 2, 0, 1)
    y = Matrix.unit(field, 2, 1, 0)
    a = MatPoly(field, 2, 1, [Matrix.zero(field, 2), x])
    b = MatPoly(field, 2, 1, [Matrix.zero(field, 2), y])
    p = rand_matrix(field, 2, rng)
    rep.say("non-liftable pair: A = e12 t, B = e21 t (k = 1), random A_2")
    try:
        lift_pair(a, b, p)
    except InfeasibleLiftError:
        rep.say("lift infeasible as predicted: no (A_2, B_2) can extend to order 2")
        rep.rec("lift-demo", infeasible=True)
        return EXIT_OK
    rep.say("UNEXPECTED: lift succeeded on the non-liftable pair")
    return EXIT_VIOLATION


def _cmd_lift(args, rep: _Reporter) -> int:
    if args.demo == "non-liftable":
        return _demo_non_liftable(args, rep)
    field = _field_from_args(args)
    rng = derive_rng(args.seed, "lift", args.n, args.k)
    a, b = rand_u_pair(field, args.n, args.k, rng)
    a_next = rand_matrix(field, args.n, rng)
    try:
        b_next = lift_pair(a, b, a_next)
    except InfeasibleLiftError:
        rep.say("lift infeasible")
        return EXIT_INFEASIBLE
    a2, b2 = extend_pair(a, b, a_next, b_next)
    ok = commutator(a2, b2).is_zero()
    mixed = Matrix.zero(field, a.n)
    for i in range(1, a.k + 1):
        ai, bj = a.coeffs[i], b.coeffs[a.k + 1 - i]
        mixed = mixed + (ai * bj - bj * ai)
    cor27 = ad_image_contains(a.coeffs[0], mixed)
    rep.say(f"lift n={args.n} k={args.k} extended-commutes={ok} ad-image-sum={cor27}")
    rep.rec("lift", n=args.n, k=args.k, ok=ok, cor27=cor27)
    return EXIT_OK if ok and cor27 else EXIT_VIOLATION


# -- jetideal -----------------------------------------------------------------


def _cmd_jetideal_export(args, rep: _Reporter) -> int:
    field = _field_from_args(args)
    gens = generators(args.n, args.k)
    text = export_ideal(gens, args.n, args.k, field.char, args.flavor)
    sys.stdout.write(text)
    return EXIT_OK


def _cmd_jetideal_tangent(args, rep: _Reporter) -> int:
    field = _field_from_args(args)
    target = (args.n * args.n + args.n) * (args.k + 1)
    bad = 0
    for i in range(args.samples):
        rng = derive_rng(args.seed, "tangent", args.n, args.k, i)
        point = rand_u_pair(field, args.n, args.k, rng)
        dim = jacobian_tangent_dim(args.n, args.k, point)
        if dim != target:
            bad += 1
            rep.say(f"sample {i}: tangent dim {dim} != {target}")
    rep.say(
        f"tangent n={args.n} k={args.k} samples={args.samples} "
        f"expected={target} failures={bad}"
    )
    rep.rec("tangent", n=args.n, k=args.k, expected=target, failures=bad)
    return EXIT_OK if bad == 0 else EXIT_VIOLATION


# -- red ----------------------------------------------------------------------


def _cmd_red_table(args, rep: _Reporter) -> int:
    th = thresholds(args.k)
    rep.say(
        f"thresholds k={args.k} mu={th.mu} beta={th.beta} N={th.big_n} "
        f"delta(a)={th.delta_poly[2]}a^2{th.delta_poly[1]:+}a{th.delta_poly[0]:+}"
    )
    first = None
    for n, witness in reducible_table(args.k, args.n_max):
        if witness is None:
            rep.say(f"n={n:4d}  witness=none")
        else:
            a, b = witness
            if first is None:
                first = n
            rep.say(f"n={n:4d}  witness=(a={a}, b={b})  reducible")
        rep.rec("red-table", n=n, witness=witness)
    rep.say(f"first-reducible n={first}")
    return EXIT_OK


def _cmd_red_bounds(args, rep: _Reporter) -> int:
    try:
        shape = BlockShape(args.a, args.b, args.k)
    except ValueError as exc:
        rep.say(f"bad shape: {exc}")
        return EXIT_BAD_INPUT
    r = bounds(shape)
    rep.say(
        f"shape a={shape.a} b={shape.b} k={shape.k} n={shape.n}\n"
        f"dimW_bound={r.dimW_bound} dimC(A_0)={r.dimCA0} dimV_bound={r.dimV_bound}\n"
        f"expected_dim={r.expected_dim} inequality={r.inequality_value} "
        f"delta={r.delta} reducible={r.reducible}"
    )
    rep.rec(
        "red-bounds", a=shape.a, b=shape.b, k=shape.k, n=shape.n,
        dimW=r.dimW_bound, dimV=r.dimV_bound, expected=r.expected_dim,
        ineq=r.inequality_value, reducible=r.reducible,
    )
    return EXIT_OK


def _cmd_red_sample(args, rep: _Reporter) -> int:
    field = _field_from_args(args)
    try:
        shape = BlockShape(args.a, args.b, args.k)
    except ValueError as exc:
        rep.say(f"bad shape: {exc}")
        return EXIT_BAD_INPUT
    rng = derive_rng(args.seed, "wpoint", shape.a, shape.b, shape.k)
    a, b = sample_W_point(shape, field, rng)
    zeros = all(field.is_zero(v) for v in evaluate(generators(shape.n, shape.k), (a, b)))
    rep.say(f"sampled W point for a={shape.a} b={shape.b} k={shape.k} (n={shape.n})")
    rep.say(f"commutes={commutator(a, b).is_zero()} jet-ideal-vanishes={zeros}")
    sys.stdout.write(pairio.format_pair(a, b))
    return EXIT_OK if zeros else EXIT_VIOLATION


def _cmd_red_empirical(args, rep: _Reporter) -> int:
    field = _field_from_args(args)
    try:
        shape = BlockShape(args.a, args.b, args.k)
    except ValueError as exc:
        rep.say(f"bad shape: {exc}")
        return EXIT_BAD_INPUT
    rng = derive_rng(args.seed, "empdim", shape.a, shape.b, shape.k)
    observed = empirical_dimW(shape, field, args.trials, rng)
    bound = bounds(shape).dimW_bound
    ok = observed >= bound
    rep.say(
        f"empirical dim W a={shape.a} b={shape.b} k={shape.k}: observed={observed} "
        f"bound={bound} ok={ok}"
    )
    rep.rec("red-empirical", observed=observed, bound=bound, ok=ok)
    return EXIT_OK if ok else EXIT_VIOLATION


# -- irr3 ---------------------------------------------------------------------


def _irr3_sample(field, k: int, i: int, rng):
    kind = i % 5
    if kind == 0:
        return rand_u_pair(field, 3, k, rng)
    if kind == 1:
        from .linalg import inverse
        from .sampling import rand_invertible

        lam, mu = field.rand(rng), field.rand(rng)
        while mu == lam:
            mu = field.rand(rng)
        h = rand_invertible(field, 3, rng)
        a0 = h * Matrix.diagonal(field, [lam, lam, mu]) * inverse(h)
        a = MatPoly.constant(a0, k)
        b = MatPoly.constant(a0, k)  # commutes; derogatory split-spectrum constant
        return a, b
    if kind == 2:
        return rand_normalized_pair(field, k, rng)
    if kind == 3:
        return rand_rank1_nilpotent_pair(field, k, rng)
    return rand_zero_constant_pair(field, 3, k, rng)


def _cmd_irr3(args, rep: _Reporter) -> int:
    field = _field_from_args(args)
    if args.input:
        try:
            a, b = pairio.parse_pair(open(args.input).read())
        except (OSError, ValueError, IndexError) as exc:
            rep.say(f"bad input: {exc}")
            return EXIT_BAD_INPUT
        rng = derive_rng(args.seed, "irr3-file")
        cert = certify_closure(a, b, rng)
        replay_certificate(cert)
        rep.say(f"terminal {cert.terminal.kind} lam={cert.terminal.lam}")
        rep.say("replay ok")
        sys.stdout.write(format_certificate(cert))
        return EXIT_OK if cert.terminal.kind != "stalled" else EXIT_VIOLATION
    stalled = 0
    terminals = {"in_U": 0, "spectrum_split": 0}
    for i in range(args.samples):
        rng = derive_rng(args.seed, "irr3", args.k, i)
        a, b = _irr3_sample(field, args.k, i, rng)
        cert = certify_closure(a, b, rng)
        replay_certificate(cert)
        if cert.terminal.kind == "stalled":
            stalled += 1
            rep.say(f"sample {i}: stalled ({cert.terminal.reason})")
        else:
            terminals[cert.terminal.kind] += 1
    rep.say(
        f"irr3 k={args.k} samples={args.samples} in_U={terminals['in_U']} "
        f"spectrum_split={terminals['spectrum_split']} stalled={stalled}"
    )
    rep.rec("irr3", k=args.k, samples=args.samples, stalled=stalled)
    return EXIT_OK if stalled == 0 else EXIT_VIOLATION


# -- algdim -------------------------------------------------------------------


def _cmd_algdim(args, rep: _Reporter) -> int:
    field = _field_from_args(args)
    target = args.n * (args.k + 1)
    bad = 0
    for i in range(args.samples):
        rng = derive_rng(args.seed, "algdim", args.n, args.k, i)
        a, b = rand_u_pair(field, args.n, args.k, rng)
        dim = triple_algebra_dim(a, b)
        dims = filtration_dims([a, b])
        if dim != target or dims != [args.n] * (args.k + 1):
            bad += 1
            rep.say(f"sample {i}: dim={dim} filtration={dims}")
    rep.say(
        f"algdim n={args.n} k={args.k} samples={args.samples} "
        f"target={target} failures={bad}"
    )
    rep.rec("algdim", n=args.n, k=args.k, target=target, failures=bad)
    return EXIT_OK if bad == 0 else EXIT_VIOLATION


# -- wiring -------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--prime", type=int, default=32003, help="prime field modulus")
    p.add_argument("--rationals", action="store_true", help="work over Q instead")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--structured", action="store_true", help="emit #rec lines")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jetpairs",
        description="Exact verification of commuting-pair jet computations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("verify", help="randomized identity sweeps")
    pv_sub = pv.add_subparsers(dest="what", required=True)
    p = pv_sub.add_parser("equivalence")
    _add_common(p)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--samples", type=int, default=100)
    p.set_defaults(func=_cmd_verify_equivalence)
    p = pv_sub.add_parser("coeff-formula")
    _add_common(p)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--samples", type=int, default=100)
    p.set_defaults(func=_cmd_verify_coeff_formula)

    p = sub.add_parser("commutant", help="commutant basis and dimension")
    _add_common(p)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--input", help="matpoly file instead of a random sample")
    p.set_defaults(func=_cmd_commutant)

    p = sub.add_parser("lift", help="one-order lifting of commuting pairs")
    _add_common(p)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--demo", choices=["non-liftable"], help="run the non-liftable demo")
    p.set_defaults(func=_cmd_lift)

    pj = sub.add_parser("jetideal", help="symbolic ideal operations")
    pj_sub = pj.add_subparsers(dest="what", required=True)
    p = pj_sub.add_parser("export")
    _add_common(p)
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--k", type=int, default=1)
    p.add_argument(
        "--flavor",
        choices=["generic-text", "m2-flavored", "singular-flavored"],
        default="generic-text",
    )
    p.set_defaults(func=_cmd_jetideal_export)
    p = pj_sub.add_parser("tangent")
    _add_common(p)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--samples", type=int, default=20)
    p.set_defaults(func=_cmd_jetideal_tangent)

    pr = sub.add_parser("red", help="reducibility bounds and witnesses")
    pr_sub = pr.add_subparsers(dest="what", required=True)
    p = pr_sub.add_parser("table")
    _add_common(p)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--n-max", type=int, default=60)
    p.set_defaults(func=_cmd_red_table)
    p = pr_sub.add_parser("bounds")
    _add_common(p)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=_cmd_red_bounds)
    p = pr_sub.add_parser("sample")
    _add_common(p)
    p.add_argument("--a", type=int, default=1)
    p.add_argument("--b", type=int, default=0)
    p.add_argument("--k", type=int, default=1)
    p.set_defaults(func=_cmd_red_sample)
    p = pr_sub.add_parser("empirical-dim")
    _add_common(p)
    p.add_argument("--a", type=int, default=1)
    p.add_argument("--b", type=int, default=0)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--trials", type=int, default=50)
    p.set_defaults(func=_cmd_red_empirical)

    pi = sub.add_parser("irr3", help="n = 3 closure certificates")
    pi_sub = pi.add_subparsers(dest="what", required=True)
    p = pi_sub.add_parser("certify")
    _add_common(p)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--input", help="pair file (two matpoly records)")
    p.set_defaults(func=_cmd_irr3)

    p = sub.add_parser("algdim", help="triple algebra dimension sweeps")
    _add_common(p)
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--samples", type=int, default=50)
    p.set_defaults(func=_cmd_algdim)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    rep = _Reporter(getattr(args, "structured", False))
    try:
        return args.func(args, rep)
    except InfeasibleLiftError as exc:
        rep.say(f"infeasible: {exc}")
        return EXIT_INFEASIBLE
    except (ValueError, OSError) as exc:
        rep.say(f"error: {exc}")
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
