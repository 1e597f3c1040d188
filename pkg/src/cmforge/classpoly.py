"""Ring class polynomials by high-precision evaluation and recognition.

H_D(X) = prod (X - j(tau_f)) over the reduced forms of discriminant D.  The
complex product is accumulated with a balanced tree, every coefficient is
rounded to the nearest integer with residual < 2^-20, and the whole
computation is repeated 64 bits higher: only identical integer output is
accepted.  A retry ladder doubles the precision on recognition failure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from gmpy2 import mpc, mpfr

from .errors import RecognitionFailure, UnsupportedLevel
from .modforms import j_value
from .numerics import context, recognize_integer
from .polynomials import IntPolynomial
from .quadratic import Discriminant, Form, form_to_tau, reduced_forms
from .transform import MAX_EXACT_LEVEL, modular_polynomial_J

RESIDUAL_TOL_BITS = 20
RETRY_ATTEMPTS = 4


@dataclass(frozen=True)
class ClassPolynomial:
    D: int
    poly: IntPolynomial
    precision_used: int
    max_residual: float

    @property
    def degree(self) -> int:
        return self.poly.degree

    def __str__(self):
        return str(self.poly)


def required_precision(D: int) -> int:
    """Heuristic bit budget: pi sqrt|D| sum(1/a) / ln 2, +33%, +64 guard bits."""
    forms = reduced_forms(D)
    inv_a = sum(1.0 / f.a for f in forms)
    base = math.pi * math.sqrt(abs(D)) * inv_a / math.log(2)
    return math.ceil(base * 4 / 3) + 64


def singular_j_values(D: int, p_bits: int) -> list[tuple[Form, mpc]]:
    """j at the basis quotient of every reduced form of discriminant D."""
    out = []
    for f in reduced_forms(D):
        tau = form_to_tau(f, p_bits + 32)
        out.append((f, j_value(tau, p_bits)))
    return out


def complex_poly_from_roots(roots, p_bits):
    """Coefficients (low -> high) of prod (X - r), balanced-tree accumulated."""
    with context(p_bits):
        polys = [[-mpc(r), mpc(1)] for r in roots]
        while len(polys) > 1:
            nxt = []
            for i in range(0, len(polys) - 1, 2):
                a, b = polys[i], polys[i + 1]
                prod = [mpc(0)] * (len(a) + len(b) - 1)
                for ka, ca in enumerate(a):
                    for kb, cb in enumerate(b):
                        prod[ka + kb] += ca * cb
                nxt.append(prod)
            if len(polys) % 2:
                nxt.append(polys[-1])
            polys = nxt
        return polys[0]


def _recognize_once(D: int, p_bits: int) -> tuple[list[int], float]:
    tol = mpfr(2) ** (-RESIDUAL_TOL_BITS)
    roots = [v for _, v in singular_j_values(D, p_bits)]
    coeffs = complex_poly_from_roots(roots, p_bits)
    ints = []
    max_res = mpfr(0)
    with context(p_bits):
        for c in coeffs:
            n, res = recognize_integer(c.real, tol)
            if abs(c.imag) > tol:
                raise RecognitionFailure(
                    f"imaginary residue {c.imag} in H_{D}", residual=abs(c.imag)
                )
            max_res = max(max_res, res, abs(c.imag))
            ints.append(n)
    return ints, float(max_res)


def class_polynomial(D: int, p_bits: int | None = None) -> ClassPolynomial:
    """Exact monic integer class polynomial of discriminant D.

    Recognition must agree bit-for-bit at p and p+64; on failure the
    precision doubles, up to four attempts.
    """
    Discriminant(D)  # validates
    prec = p_bits if p_bits is not None else required_precision(D)
    last_exc = None
    for _ in range(RETRY_ATTEMPTS):
        try:
            ints, res = _recognize_once(D, prec)
            ints_hi, res_hi = _recognize_once(D, prec + 64)
            if ints == ints_hi:
                poly = IntPolynomial(ints)
                assert poly.coeffs[-1] == 1 and poly.degree == len(reduced_forms(D))
                return ClassPolynomial(D, poly, prec, max(res, res_hi))
            last_exc = RecognitionFailure(
                f"H_{D} unstable between {prec} and {prec + 64} bits"
            )
        except RecognitionFailure as exc:
            last_exc = exc
        prec *= 2
    raise last_exc


def s_R(D: int) -> int:
    """The unique s > 1 with exactly one class of primitive norm-s elements.

    Table: d f^2 in general, 2 for the Gaussian maximal order, and d f^2 / 4
    when -d = 1 (mod 4) with even conductor; here d is the squarefree kernel
    of the field and f the conductor of the order.
    """
    disc = Discriminant(D)
    if D == -4:
        return 2
    d_K = disc.fundamental
    f = disc.conductor
    if d_K % 4 == 1:  # -d = 1 mod 4  (d_K = -d)
        d = -d_K
        if f % 2 == 0:
            return d * f * f // 4
        return d * f * f
    d = -d_K // 4
    return d * f * f


def smallest_primitive_norm(D: int, limit: int = MAX_EXACT_LEVEL) -> int:
    """Least norm in (1, limit] of a primitive element of the order of D.

    Elements are u + v w with w = (D + sqrt D)/2; primitive means gcd(u,v)=1,
    and rational elements (v = 0) are never primitive of norm > 1.
    """
    best = None
    v = 1
    while v * v * abs(D) <= 4 * limit:
        # Nm(u + v w) = (u + vD/2)^2 + v^2 |D| / 4
        center = -v * D / 2
        lo = math.floor(center - math.sqrt(limit) - 1)
        hi = math.ceil(center + math.sqrt(limit) + 1)
        for u in range(lo, hi + 1):
            if math.gcd(u, v) != 1:
                continue
            nm4 = (2 * u + v * D) ** 2 + v * v * abs(D)
            if nm4 % 4 == 0:
                nm = nm4 // 4
                if 1 < nm <= limit and (best is None or nm < best):
                    best = nm
        v += 1
    if best is None:
        raise UnsupportedLevel(
            f"no primitive element of norm <= {limit} in discriminant {D}"
        )
    return best


def divides_check(D: int) -> bool:
    """H_D(X) divides J_s(X, X) exactly, s the least usable primitive norm."""
    s = smallest_primitive_norm(D)
    diag = modular_polynomial_J(s).diagonal()
    h = class_polynomial(D).poly
    return h.divides(diag)
