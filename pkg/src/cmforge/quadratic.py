"""Imaginary quadratic orders through binary quadratic forms.

Ideal classes of the order of discriminant D < 0 are represented by reduced
primitive forms (a, b, c) with b^2 - 4ac = D; composition is Dirichlet
composition with reduction after every step.  This is the entire ideal
machinery the rest of the package consumes: no number-field arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

import gmpy2

from .errors import ConductorDivisor, NoSquareRoot
from .numerics import BigComplex, complex_value, context, real


def is_valid_discriminant(D: int) -> bool:
    return D < 0 and D % 4 in (0, 1)


def _is_fundamental(d: int) -> bool:
    if d % 4 == 1:
        return _is_squarefree(-d)
    if d % 4 == 0:
        q = d // 4
        return q % 4 in (2, 3) and _is_squarefree(-q)
    return False


def _is_squarefree(n: int) -> bool:
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class Discriminant:
    """Discriminant D = f^2 * d_K of an imaginary quadratic order."""

    D: int

    def __post_init__(self):
        if not is_valid_discriminant(self.D):
            raise ValueError(f"{self.D} is not a negative discriminant (0,1 mod 4)")

    @property
    def fundamental(self) -> int:
        for f in range(isqrt(abs(self.D)), 0, -1):
            if self.D % (f * f) == 0 and _is_fundamental(self.D // (f * f)):
                return self.D // (f * f)
        raise AssertionError("unreachable: f = 1 always works")

    @property
    def conductor(self) -> int:
        return isqrt(self.D // self.fundamental)


def unit_count(D: int) -> int:
    """Number of units of the order of discriminant D (6, 4 or 2)."""
    if D == -3:
        return 6
    if D == -4:
        return 4
    return 2


@dataclass(frozen=True)
class Form:
    """Primitive positive-definite binary quadratic form a x^2 + b xy + c y^2."""

    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_primitive(self) -> bool:
        return gcd(gcd(self.a, self.b), self.c) == 1

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        if (abs(b) == a or a == c) and b < 0:
            return False
        return True

    def inverse(self) -> "Form":
        return reduce(Form(self.a, -self.b, self.c))

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def __str__(self):
        return f"({self.a}, {self.b}, {self.c})"


def principal_form(D: int) -> Form:
    k = D % 2
    return Form(1, k, (k * k - D) // 4)


def reduce(f: Form) -> Form:
    """The unique reduced form equivalent to f (a > 0, D < 0, primitive)."""
    a, b, c = f.a, f.b, f.c
    if a <= 0 or f.discriminant >= 0:
        raise ValueError("reduction needs a positive-definite form")
    while True:
        if b <= -a or b > a:
            # translate tau -> tau + n so that b lands in (-a, a]
            n = (a - b) // (2 * a)
            c = a * n * n + b * n + c
            b = b + 2 * a * n
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        return Form(a, b, c)


@lru_cache(maxsize=None)
def reduced_forms(D: int) -> tuple[Form, ...]:
    """All reduced primitive forms of discriminant D, principal first."""
    if not is_valid_discriminant(D):
        raise ValueError(f"invalid discriminant {D}")
    found = []
    b = D % 2
    while b * b <= abs(D) // 3:
        m4 = b * b - D
        if m4 % 4 == 0:
            m = m4 // 4
            a = max(b, 1)
            while a * a <= m:
                if m % a == 0:
                    c = m // a
                    if gcd(gcd(a, b), c) == 1:
                        found.append(Form(a, b, c))
                        if 0 < b < a < c:
                            found.append(Form(a, -b, c))
                a += 1
        b += 2
    found.sort(key=lambda f: (f.a != 1 or f.b < 0, f.a, abs(f.b), -f.b))
    assert found[0] == principal_form(D)
    return tuple(found)


def class_number(D: int) -> int:
    return len(reduced_forms(D))


def _transform(f: Form, x: int, z: int, y: int, w: int) -> Form:
    """Action of the unimodular matrix (x z; y w) on the form variables."""
    a = f(x, y)
    c = f(z, w)
    b = 2 * (f.a * x * z + f.c * y * w) + f.b * (x * w + y * z)
    return Form(a, b, c)


def _with_leading_coprime_to(f: Form, n: int) -> Form:
    """An equivalent (not reduced) form whose first coefficient is prime to n."""
    bound = 1
    while True:
        for x in range(-bound, bound + 1):
            for y in range(-bound, bound + 1):
                if gcd(x, y) == 1 and gcd(f(x, y), n) == 1:
                    g, z0, w0 = gmpy2.gcdext(x, y)
                    # complete (x, y) to determinant-1: x*w - z*y = 1
                    return _transform(f, x, -int(w0), y, int(z0))
        bound += 1


def compose(f1: Form, f2: Form) -> Form:
    """Reduced representative of the Gauss product of the two classes."""
    if f1.discriminant != f2.discriminant:
        raise ValueError("composition needs equal discriminants")
    D = f1.discriminant
    g2 = _with_leading_coprime_to(f2, f1.a)
    a1, b1 = f1.a, f1.b
    a2, b2 = g2.a, g2.b
    # Dirichlet composition: gcd(a1, a2) = 1, so there is a B with
    # B = b1 (mod 2 a1) and B = b2 (mod 2 a2)
    t = ((b2 - b1) // 2 * pow(a1, -1, a2)) % a2
    B = b1 + 2 * a1 * t
    a3 = a1 * a2
    c3 = (B * B - D) // (4 * a3)
    return reduce(Form(a3, B, c3))


def power(f: Form, n: int) -> Form:
    result = principal_form(f.discriminant)
    base = reduce(f)
    while n > 0:
        if n & 1:
            result = compose(result, base)
        base = compose(base, base)
        n >>= 1
    return result


def element_order(f: Form) -> int:
    ident = principal_form(f.discriminant)
    g = reduce(f)
    n = 1
    acc = g
    while acc != ident:
        acc = compose(acc, g)
        n += 1
        if n > 4 * isqrt(abs(f.discriminant)) + 16:
            raise AssertionError("runaway order computation")
    return n


def ambiguous_count(D: int) -> int:
    """Number of classes equal to their own inverse."""
    return sum(1 for f in reduced_forms(D) if f == f.inverse())


class ClassGroup:
    """The form class group of discriminant D with its composition law."""

    def __init__(self, D: int):
        self.D = D
        self.forms = reduced_forms(D)

    @property
    def order(self) -> int:
        return len(self.forms)

    @property
    def identity(self) -> Form:
        return self.forms[0]

    def compose(self, f1: Form, f2: Form) -> Form:
        return compose(f1, f2)

    def element_order(self, f: Form) -> int:
        return element_order(f)

    def squares(self) -> set[Form]:
        return {compose(f, f) for f in self.forms}

    def exponent(self) -> int:
        e = 1
        for f in self.forms:
            o = element_order(f)
            e = e * o // gcd(e, o)
        return e


def kronecker_symbol(d: int, p: int) -> int:
    """(d | p) for prime p, including p = 2."""
    if p == 2:
        if d % 2 == 0:
            return 0
        return 1 if d % 8 in (1, 7) else -1
    r = d % p
    if r == 0:
        return 0
    return gmpy2.jacobi(r, p)


def splitting_type(D: int, p: int) -> str:
    """'split', 'inert' or 'ramified' for p in the field of D; needs p coprime
    to the conductor."""
    disc = Discriminant(D)
    if disc.conductor % p == 0:
        raise ConductorDivisor(f"{p} divides the conductor of {D}")
    s = kronecker_symbol(disc.fundamental, p)
    return {1: "split", -1: "inert", 0: "ramified"}[s]


def prime_form(D: int, p: int) -> Form:
    """Reduced form of the class of a prime ideal above p (p not inert)."""
    if splitting_type(D, p) == "inert":
        raise NoSquareRoot(f"{p} is inert in discriminant {D}")
    for b in range(2 * p):
        if (b - D) % 2 == 0 and (b * b - D) % (4 * p) == 0:
            return reduce(Form(p, b, (b * b - D) // (4 * p)))
    raise NoSquareRoot(f"no square root of {D} modulo {4 * p}")


def form_to_tau(f: Form, p_bits: int = 128) -> BigComplex:
    """Basis quotient tau = (-b + i sqrt(|D|)) / (2a) of the form's ideal."""
    D = f.discriminant
    with context(p_bits):
        root = gmpy2.sqrt(real(abs(D), p_bits))
        re = real(Fraction(-f.b, 2 * f.a), p_bits)
        im = root / (2 * f.a)
    return complex_value(re, im, p_bits)


def class_number_ratio_check(d_K: int, p: int, t: int) -> bool:
    """Conductor-tower class number ratio for f = p^t over the maximal order.

    h(p^(2t) d_K) / h(d_K) must equal (e_f / e_1) times p^(t-1)(p+1) for
    inert p, p^t for ramified p, and p^(t-1)(p-1) for split p (the split
    case is the standard conductor formula, included for completeness).
    """
    if not _is_fundamental(d_K):
        raise ValueError(f"{d_K} is not a fundamental discriminant")
    f = p**t
    D = f * f * d_K
    typ = splitting_type(d_K, p)
    base = {
        "split": p ** (t - 1) * (p - 1),
        "inert": p ** (t - 1) * (p + 1),
        "ramified": p**t,
    }[typ]
    expected = Fraction(unit_count(D), unit_count(d_K)) * base
    return Fraction(class_number(D), class_number(d_K)) == expected
