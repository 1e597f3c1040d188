"""Command-line interface: class polynomials, modular polynomials, and the
verification suites, with optional on-disk caching and JSON reports.

Exit codes: 0 success / all checks pass, 1 at least one check failed,
2 invalid parameters, 3 recognition failure after retries.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time

from gmpy2 import mpc, mpfr

from . import cache as cachemod
from .classpoly import class_polynomial, divides_check
from .cmverify import (
    congruence_product_check,
    correspondence_check,
    frobenius_order_check,
    genus_check,
    splitting_completeness_check,
)
from .errors import CMForgeError, NonSquarefree, RecognitionFailure
from .modforms import (
    ModMatrix,
    S_MATRIX,
    eta_multiplier_value,
    eta_value,
)
from .numerics import complex_value, context, sqrt_principal
from .quadratic import Discriminant, class_number_ratio_check, is_valid_discriminant, splitting_type
from .transform import (
    MAX_EXACT_LEVEL,
    kronecker_congruence_check,
    leading_coefficient_check,
    modular_polynomial_J,
    phi_polynomial,
    phi_value,
)

VERIFY_SUITES = (
    "kronecker",
    "frobenius",
    "splitting",
    "genus",
    "divides",
    "product36",
    "congruence-product",
    "correspondence",
    "leading",
    "eta-multiplier",
    "class-number-ratio",
)


def _cache_dir(args):
    if args.cache_dir:
        return args.cache_dir
    return os.environ.get("CMFORGE_CACHE") or None


def cmd_classpoly(args) -> int:
    if not is_valid_discriminant(args.D):
        print(f"error: {args.D} is not a discriminant (need D < 0, D = 0,1 mod 4)",
              file=sys.stderr)
        return 2
    directory = _cache_dir(args)
    entry = cachemod.load_or_none(directory, "classpoly", {"D": args.D})
    if entry is not None:
        poly = entry.payload
    else:
        try:
            result = class_polynomial(args.D, args.prec_bits)
        except RecognitionFailure as exc:
            print(f"error: recognition failed: {exc}", file=sys.stderr)
            return 3
        poly = result.poly
        if directory:
            cachemod.write_entry(
                directory,
                cachemod.CacheEntry(
                    "classpoly",
                    {"D": args.D, "prec_bits": result.precision_used},
                    poly,
                ),
                force=args.force,
            )
    if args.json:
        print(json.dumps({"D": args.D, "coeffs": poly.coeffs}))
    else:
        print(poly.format("X"))
    return 0


def cmd_modpoly(args) -> int:
    if not 1 <= args.s <= MAX_EXACT_LEVEL:
        print(f"error: level {args.s} unsupported (1 <= s <= {MAX_EXACT_LEVEL})",
              file=sys.stderr)
        return 2
    kind = "Phipoly" if args.phi else "Jpoly"
    directory = _cache_dir(args)
    entry = cachemod.load_or_none(directory, kind, {"s": args.s})
    if entry is not None:
        poly = entry.payload
    else:
        builder = phi_polynomial if args.phi else modular_polynomial_J
        try:
            poly = builder(args.s, args.budget)
        except CMForgeError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        if directory:
            cachemod.write_entry(
                directory,
                cachemod.CacheEntry(kind, {"s": args.s}, poly),
                force=args.force,
            )
    if args.json:
        terms = [[i, j, c] for (i, j), c in sorted(poly.terms.items())]
        print(json.dumps({"s": args.s, "phi": bool(args.phi), "terms": terms}))
    else:
        print(poly)
    return 0


# --- verify suites -----------------------------------------------------------

def _report(suite, params, ok, residual, t0):
    return {
        "suite": suite,
        "params": params,
        "pass": bool(ok),
        "residual": residual,
        "seconds": round(time.monotonic() - t0, 4),
    }


def _verify_kronecker(args):
    primes = [args.p] if args.p else [2, 3]
    out = []
    for p in primes:
        t0 = time.monotonic()
        ok = kronecker_congruence_check(p, args.budget)
        out.append(_report("kronecker", {"p": p}, ok, None, t0))
    return out


def _discriminants(limit):
    return [D for D in range(-3, -limit - 1, -1) if D % 4 in (0, 1)]


def _split_primes(D, pmax):
    disc = Discriminant(D)
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47):
        if p > pmax or disc.conductor % p == 0:
            continue
        if splitting_type(D, p) == "split":
            yield p


def _verify_profile_suite(args, name, check):
    out = []
    if args.D is not None and args.p is not None:
        pairs = [(args.D, args.p)]
    else:
        dmax = args.dmax or 200
        pmax = args.pmax or 50
        pairs = [(D, p) for D in _discriminants(dmax) for p in _split_primes(D, pmax)]
    for D, p in pairs:
        t0 = time.monotonic()
        try:
            ok = check(D, p)
        except NonSquarefree:
            continue  # p | disc(H_D): outside the precondition
        out.append(_report(name, {"D": D, "p": p}, ok, None, t0))
    return out


def _verify_genus(args):
    out = []
    ds = [args.D] if args.D is not None else _discriminants(args.dmax or 400)
    for D in ds:
        t0 = time.monotonic()
        out.append(_report("genus", {"D": D}, genus_check(D), None, t0))
    return out


def _verify_divides(args):
    ds = [args.D] if args.D is not None else [-4, -8, -7]
    out = []
    for D in ds:
        t0 = time.monotonic()
        out.append(_report("divides", {"D": D}, divides_check(D), None, t0))
    return out


def _verify_product36(args):
    p = args.p or 5
    bits = args.prec_bits or 192
    t0 = time.monotonic()
    with context(bits):
        tau = complex_value(0, 1, bits)
        prod = mpc(1)
        for nu in range(p):
            prod *= phi_value(_P_rep(p, nu), tau, bits)
        prod *= phi_value(_P_rep(p, p), tau, bits)
        target = mpfr(p) ** 12
        residual = float(abs(prod - target) / target)
    ok = residual < 2.0**-64
    return [_report("product36", {"p": p, "prec_bits": bits}, ok, residual, t0)]


def _P_rep(p, nu):
    from .transform import PrimMatrix

    if nu < p:
        return PrimMatrix(1, nu, 0, p)
    return PrimMatrix(p, 0, 0, 1)


def _verify_congruence_product(args):
    pairs = [(args.D, args.p)] if args.D is not None and args.p is not None else [
        (-4, 5), (-23, 2), (-20, 3)
    ]
    out = []
    for D, p in pairs:
        t0 = time.monotonic()
        ok = congruence_product_check(D, p)
        out.append(_report("congruence-product", {"D": D, "p": p}, ok, None, t0))
    return out


def _verify_correspondence(args):
    triples = (
        [(args.dk, args.f, args.f2)]
        if args.dk is not None
        else [(-4, 1, 2), (-3, 1, 2), (-7, 1, 2)]
    )
    out = []
    for dk, f, f2 in triples:
        t0 = time.monotonic()
        ok = correspondence_check(dk, f or 1, f2 or 2)
        out.append(_report("correspondence", {"d_K": dk, "f": f or 1, "f2": f2 or 2},
                           ok, None, t0))
    return out


def _verify_leading(args):
    levels = [args.s] if args.s else [2, 3]
    out = []
    for s in levels:
        t0 = time.monotonic()
        out.append(_report("leading", {"s": s}, leading_coefficient_check(s), None, t0))
    return out


def _verify_eta_multiplier(args):
    count = args.count or 100
    rnd = random.Random(args.seed if args.seed is not None else 12345)
    bits = args.prec_bits or 128
    t0 = time.monotonic()
    worst = mpfr(0)
    done = 0
    with context(bits + 64):
        while done < count:
            m = ModMatrix.identity()
            for _ in range(rnd.randint(2, 10)):
                m = m * ModMatrix(1, rnd.randint(-3, 3), 0, 1) * S_MATRIX
            if m.gamma == 0:
                continue
            if m.gamma < 0:
                m = -m
            tau = complex_value(rnd.uniform(-0.45, 0.45), rnd.uniform(0.7, 1.5),
                                bits + 64)
            lhs = eta_value(m.apply(tau), bits)
            eps = eta_multiplier_value(m, bits + 64)
            root = sqrt_principal(mpc(0, -1) * (m.gamma * tau + m.delta))
            rhs = eps * root * eta_value(tau, bits)
            worst = max(worst, abs(lhs - rhs) / abs(rhs))
            done += 1
    residual = float(worst)
    ok = worst < mpfr(2) ** -100
    return [_report("eta-multiplier", {"count": count, "prec_bits": bits},
                    ok, residual, t0)]


def _verify_class_number_ratio(args):
    cases = [(-3, 2, 1), (-4, 2, 1), (-7, 2, 1)]
    out = []
    for dk, p, t in cases:
        t0 = time.monotonic()
        ok = class_number_ratio_check(dk, p, t)
        out.append(_report("class-number-ratio", {"d_K": dk, "p": p, "t": t},
                           ok, None, t0))
    return out


def cmd_verify(args) -> int:
    handlers = {
        "kronecker": _verify_kronecker,
        "frobenius": lambda a: _verify_profile_suite(a, "frobenius",
                                                     frobenius_order_check),
        "splitting": lambda a: _verify_profile_suite(a, "splitting",
                                                     splitting_completeness_check),
        "genus": _verify_genus,
        "divides": _verify_divides,
        "product36": _verify_product36,
        "congruence-product": _verify_congruence_product,
        "correspondence": _verify_correspondence,
        "leading": _verify_leading,
        "eta-multiplier": _verify_eta_multiplier,
        "class-number-ratio": _verify_class_number_ratio,
    }
    try:
        reports = handlers[args.suite](args)
    except (CMForgeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for rep in reports:
        if args.json:
            print(json.dumps(rep))
        else:
            tag = "PASS" if rep["pass"] else "FAIL"
            params = " ".join(f"{k}={v}" for k, v in rep["params"].items())
            res = "" if rep["residual"] is None else f" residual={rep['residual']:.3e}"
            print(f"{tag} {rep['suite']} {params}{res} ({rep['seconds']}s)")
    return 0 if all(r["pass"] for r in reports) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cmforge",
        description="class polynomials, modular polynomials and the "
                    "complex-multiplication verification suites",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_class = sub.add_parser("classpoly", help="ring class polynomial H_D")
    p_class.add_argument("-D", type=int, required=True, help="discriminant (< 0)")
    p_class.add_argument("--prec-bits", type=int, default=None)
    p_class.add_argument("--json", action="store_true")
    p_class.add_argument("--cache-dir", default=None)
    p_class.add_argument("--force", action="store_true",
                         help="overwrite cache entries from other versions")
    p_class.set_defaults(func=cmd_classpoly)

    p_mod = sub.add_parser("modpoly", help="transformation polynomial J_s or Phi_s")
    p_mod.add_argument("-s", type=int, required=True, help="level (1..7)")
    p_mod.add_argument("--phi", action="store_true", help="build Phi_s instead of J_s")
    p_mod.add_argument("--budget", type=int, default=None,
                       help="q-series truncation override")
    p_mod.add_argument("--json", action="store_true")
    p_mod.add_argument("--cache-dir", default=None)
    p_mod.add_argument("--force", action="store_true")
    p_mod.set_defaults(func=cmd_modpoly)

    p_ver = sub.add_parser("verify", help="run a verification suite")
    p_ver.add_argument("suite", choices=VERIFY_SUITES)
    p_ver.add_argument("-D", type=int, default=None)
    p_ver.add_argument("-p", type=int, default=None)
    p_ver.add_argument("-s", type=int, default=None)
    p_ver.add_argument("--dmax", type=int, default=None)
    p_ver.add_argument("--pmax", type=int, default=None)
    p_ver.add_argument("--dk", type=int, default=None)
    p_ver.add_argument("-f", type=int, default=None)
    p_ver.add_argument("--f2", type=int, default=None)
    p_ver.add_argument("--count", type=int, default=None)
    p_ver.add_argument("--seed", type=int, default=None)
    p_ver.add_argument("--prec-bits", type=int, default=None)
    p_ver.add_argument("--budget", type=int, default=None)
    p_ver.add_argument("--json", action="store_true")
    p_ver.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
