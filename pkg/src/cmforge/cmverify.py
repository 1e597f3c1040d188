"""Checkable consequences of the main theorem: factor-degree profiles mod p
against class-group orders, the complete-splitting law, genus counts,
conductor correspondence, and the Galois-symmetrized congruence product.

Everything here reduces to exact integer assertions; the only floating work
is j-evaluation, which ends in integer recognition or tolerance-checked
root matching.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import isqrt

import gmpy2
from gmpy2 import mpc, mpfr

from .classpoly import class_polynomial, required_precision, singular_j_values
from .errors import NonSquarefree, RecognitionFailure, UnsupportedLevel
from .modforms import j_value
from .numerics import context, recognize_integer
from .quadratic import (
    ClassGroup,
    ambiguous_count,
    compose,
    element_order,
    form_to_tau,
    prime_form,
    principal_form,
    reduced_forms,
    splitting_type,
)
from .transform import MAX_EXACT_LEVEL, representatives


@dataclass(frozen=True)
class DegreeProfile:
    """Multiset of irreducible factor degrees of H_D modulo p."""

    degrees: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(sorted(self.degrees)))

    @property
    def total(self) -> int:
        return sum(self.degrees)

    def all_ones(self) -> bool:
        return all(d == 1 for d in self.degrees)


# --- dense polynomial arithmetic over F_p -----------------------------------

def _fp_trim(a):
    n = len(a)
    while n and a[n - 1] == 0:
        n -= 1
    return a[:n]


def _fp_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _fp_trim(out)


def _fp_rem(a, b, p):
    a = list(a)
    inv_lead = pow(b[-1], -1, p)
    for k in range(len(a) - 1, len(b) - 2, -1):
        c = a[k] * inv_lead % p
        if c:
            for i, bi in enumerate(b):
                a[k - len(b) + 1 + i] = (a[k - len(b) + 1 + i] - c * bi) % p
    return _fp_trim(a[: len(b) - 1])


def _fp_gcd(a, b, p):
    a, b = _fp_trim(list(a)), _fp_trim(list(b))
    while b:
        a, b = b, _fp_rem(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def _fp_powmod(base, e, mod, p):
    result = [1]
    base = _fp_rem(base, mod, p) if len(base) >= len(mod) else _fp_trim(base)
    while e:
        if e & 1:
            result = _fp_rem(_fp_mul(result, base, p), mod, p)
        e >>= 1
        if e:
            base = _fp_rem(_fp_mul(base, base, p), mod, p)
    return result


def _fp_derivative(a, p):
    return _fp_trim([(k * c) % p for k, c in enumerate(a)][1:])


def degree_profile(H, p: int) -> DegreeProfile:
    """Distinct-degree factorization profile of H modulo p.

    Accepts a ClassPolynomial or a plain IntPolynomial; requires H monic
    mod p and squarefree mod p (otherwise NonSquarefree).
    """
    poly = H.poly if hasattr(H, "poly") else H
    hbar = _fp_trim([c % p for c in poly.coeffs])
    if not hbar or hbar[-1] == 0:
        raise ValueError(f"leading coefficient vanishes mod {p}")
    if len(hbar) - 1 == 0:
        return DegreeProfile(())
    if len(_fp_gcd(hbar, _fp_derivative(hbar, p), p)) > 1:
        raise NonSquarefree(f"polynomial is not squarefree mod {p}")
    work = hbar
    degrees = []
    xq = _fp_powmod([0, 1], p, work, p)  # x^p mod work
    k = 1
    while 2 * k <= len(work) - 1:
        minus_x = list(xq)
        while len(minus_x) < 2:
            minus_x.append(0)
        minus_x[1] = (minus_x[1] - 1) % p
        g = _fp_gcd(work, _fp_trim(minus_x), p)
        if len(g) > 1:
            count = (len(g) - 1) // k
            degrees.extend([k] * count)
            # divide out the degree-k part and continue
            work = _fp_quotient(work, g, p)
            if len(work) - 1 < 1:
                break
            xq = _fp_rem(xq, work, p)
        k += 1
        if 2 * k <= len(work) - 1:
            xq = _fp_powmod(xq, p, work, p)
    if len(work) - 1 > 0:
        degrees.append(len(work) - 1)
    profile = DegreeProfile(tuple(degrees))
    assert profile.total == poly.degree
    return profile


def _fp_quotient(a, b, p):
    a = list(a)
    inv_lead = pow(b[-1], -1, p)
    q = [0] * (len(a) - len(b) + 1)
    for k in range(len(a) - 1, len(b) - 2, -1):
        c = a[k] * inv_lead % p
        q[k - len(b) + 1] = c
        if c:
            for i, bi in enumerate(b):
                a[k - len(b) + 1 + i] = (a[k - len(b) + 1 + i] - c * bi) % p
    return _fp_trim(q)


@lru_cache(maxsize=None)
def _class_poly(D: int):
    return class_polynomial(D)


def frobenius_order_check(D: int, p: int) -> bool:
    """Factor degrees of H_D mod p all equal the order of the class above p."""
    if splitting_type(D, p) != "split":
        raise ValueError(f"{p} is not split in discriminant {D}")
    profile = degree_profile(_class_poly(D), p)
    order = element_order(prime_form(D, p))
    return all(d == order for d in profile.degrees)


def _represented_by_principal(D: int, p: int) -> bool:
    """Does the principal form of discriminant D represent p?"""
    b0 = principal_form(D).b
    ymax = isqrt(4 * p // abs(D)) + 1
    for y in range(-ymax, ymax + 1):
        t2 = 4 * p + D * y * y
        if t2 < 0:
            continue
        t = isqrt(t2)
        if t * t == t2 and (t - b0 * y) % 2 == 0:
            return True
    return False


def splitting_completeness_check(D: int, p: int) -> bool:
    """Profile is all ones exactly when p is represented by the principal form."""
    if splitting_type(D, p) != "split":
        raise ValueError(f"{p} is not split in discriminant {D}")
    profile = degree_profile(_class_poly(D), p)
    return profile.all_ones() == _represented_by_principal(D, p)


def genus_check(D: int) -> bool:
    """Number of genera (index of the principal genus) = ambiguous classes."""
    group = ClassGroup(D)
    genera = group.order // len(group.squares())
    return genera == ambiguous_count(D)


def correspondence_check(d_K: int, f: int, f2: int, p_bits: int | None = None) -> bool:
    """Every class invariant of the smaller order appears exactly once among
    the transforms of each invariant of the larger order.

    For each root j' of H at conductor f2, exactly one of the values
    j(S_nu tau') over the level-(f2/f) representatives must coincide with a
    root of H at conductor f, within 2^-(p-32).
    """
    if f2 % f:
        raise ValueError("conductors must be nested")
    s = f2 // f
    if s == 1:
        return True
    if s > MAX_EXACT_LEVEL:
        raise UnsupportedLevel(f"conductor quotient {s} beyond supported levels")
    D1 = f * f * d_K
    D2 = f2 * f2 * d_K
    if p_bits is None:
        p_bits = max(required_precision(D1), required_precision(D2), 192)
    with context(p_bits):
        tol = mpfr(2) ** (-(p_bits - 32))
        roots_small = [v for _, v in singular_j_values(D1, p_bits)]
        for form, _ in singular_j_values(D2, p_bits):
            tau2 = form_to_tau(form, p_bits + 32)
            hits = 0
            for rep in representatives(s):
                val = j_value(rep.apply(tau2), p_bits)
                dist = min(abs(val - r) for r in roots_small)
                scale = max(mpfr(1), abs(val))
                if dist < tol * scale:
                    hits += 1
                elif dist < scale * mpfr(2) ** (-(p_bits // 4)):
                    raise RecognitionFailure(
                        f"ambiguous root match at distance {dist}"
                    )
            if hits != 1:
                return False
    return True


def congruence_product_check(D: int, p: int, p_bits: int | None = None) -> bool:
    """Galois-symmetrized congruence product: p divides Nm prod over classes
    of (j(k)^p - j(k [p]^-1)).

    The conjugate-partner product is the complex conjugate, so the element
    of the field is recognized from one product: a = 2 Re N, b = 2 Im N /
    sqrt|D|, norm (a^2 + |D| b^2)/4.
    """
    if splitting_type(D, p) != "split":
        raise ValueError(f"{p} is not split in discriminant {D}")
    if p_bits is None:
        p_bits = p * required_precision(D) + 128
    pform_inv = prime_form(D, p).inverse()
    for attempt in range(3):
        try:
            with context(p_bits):
                jmap = {form: value for form, value in singular_j_values(D, p_bits)}
                n_val = mpc(1)
                for form in reduced_forms(D):
                    partner = compose(form, pform_inv)
                    n_val *= jmap[form] ** p - jmap[partner]
                tol = mpfr(2) ** (-40)
                a, res_a = recognize_integer(n_val.real * 2, tol)
                root = gmpy2.sqrt(mpfr(abs(D)))
                b, res_b = recognize_integer(n_val.imag * 2 / root, tol)
            norm4 = a * a + abs(D) * b * b
            assert norm4 % 4 == 0, "product is not an algebraic integer"
            return (norm4 // 4) % p == 0
        except RecognitionFailure:
            p_bits *= 2
    raise RecognitionFailure(f"congruence product for D={D}, p={p} did not stabilize")
