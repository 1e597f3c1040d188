"""Division values of the Weber function, the division polynomial T_N, and
desk-scale ray class groups, invariants and polynomials for the five
class-number-one fields.

Ray class machinery works inside the principal order O = Z[w],
w = (d_K + sqrt(d_K))/2, of a norm-Euclidean imaginary quadratic field
(d_K in {-3, -4, -7, -8, -11}), so ideals stay principal, gcds are
Euclidean, and every recognition target is a rational combination
x + y sqrt(d_K).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import gmpy2
from gmpy2 import mpc, mpfr

from .classpoly import complex_poly_from_roots
from .errors import ClassNumberNotOne, RecognitionFailure
from .modforms import CMPoint, weber_value_basis
from .numerics import complex_value, context, recognize_integer, recognize_rational
from .quadratic import class_number, form_to_tau, unit_count

EUCLIDEAN_FIELDS = (-3, -4, -7, -8, -11)
MAX_DIVISION_LEVEL = 6
MAX_MODULUS_NORM = 50
RATIONAL_DEN_BOUND = 10**6
RATIONAL_TOL_BITS = 24


# --- arithmetic in the principal order --------------------------------------

@dataclass(frozen=True)
class QuadInt:
    """u + v w with w = (d_K + sqrt d_K)/2 in the maximal order of d_K."""

    d: int  # field discriminant
    u: int
    v: int

    def _wsq(self):
        # w^2 = d w - (d^2 - d)/4
        return (self.d * self.d - self.d) // 4

    def __add__(self, o):
        return QuadInt(self.d, self.u + o.u, self.v + o.v)

    def __sub__(self, o):
        return QuadInt(self.d, self.u - o.u, self.v - o.v)

    def __neg__(self):
        return QuadInt(self.d, -self.u, -self.v)

    def __mul__(self, o):
        if isinstance(o, int):
            return QuadInt(self.d, self.u * o, self.v * o)
        c = self._wsq()
        return QuadInt(
            self.d,
            self.u * o.u - self.v * o.v * c,
            self.u * o.v + self.v * o.u + self.v * o.v * self.d,
        )

    __rmul__ = __mul__

    def conjugate(self):
        return QuadInt(self.d, self.u + self.v * self.d, -self.v)

    @property
    def norm(self) -> int:
        return self.u * self.u + self.u * self.v * self.d + self.v * self.v * self._wsq()

    def is_zero(self) -> bool:
        return self.u == 0 and self.v == 0

    def divmod_euclidean(self, o):
        """Norm-Euclidean division: q, r with self = q o + r, Nm r < Nm o.

        Rounds the exact quotient in the orthogonal coordinates s + t sqrt(d)
        (where the classical Euclidean bound (1/2)^2 + |d| (1/4)^2 < 1 holds
        for the five norm-Euclidean fields), not in the skew basis [1, w].
        """
        num = self * o.conjugate()
        nn = o.norm
        # num = s + t sqrt(d) with s = u/nn + v d/(2 nn), t = v/(2 nn)
        s = Fraction(2 * num.u + num.v * self.d, 2 * nn)
        t = Fraction(num.v, 2 * nn)
        qv = _round_nearest(2 * t)
        qu = _round_nearest(s - Fraction(qv * self.d, 2))
        q = QuadInt(self.d, qu, qv)
        r = self - q * o
        assert r.norm < nn, "field is not norm-Euclidean at this input"
        return q, r

    def embed(self, p_bits: int) -> mpc:
        """Complex value u + v (d + i sqrt|d|)/2."""
        with context(p_bits):
            root = gmpy2.sqrt(mpfr(abs(self.d)))
            re = mpfr(self.u) + mpfr(self.v * self.d) / 2
            im = mpfr(self.v) * root / 2
            return mpc(re, im)


def _round_nearest(x: Fraction) -> int:
    # ties round toward +infinity; any nearest rounding meets the bound
    return (2 * x.numerator + x.denominator) // (2 * x.denominator)


def quad_gcd(a: QuadInt, b: QuadInt) -> QuadInt:
    while not b.is_zero():
        _, r = a.divmod_euclidean(b)
        a, b = b, r
    return a


def field_units(d: int) -> list[QuadInt]:
    out = []
    for u in range(-3, 4):
        for v in range(-3, 4):
            q = QuadInt(d, u, v)
            if not q.is_zero() and q.norm == 1:
                out.append(q)
    return out


# --- ray class groups --------------------------------------------------------

@dataclass(frozen=True)
class RayClassGroup:
    """Ray classes modulo m for a class-number-one field.

    Representatives are residues of (O/m)^* modulo the image of the global
    units, each reduced to a canonical residue of O/m.
    """

    d_K: int
    modulus: QuadInt
    representatives: tuple[QuadInt, ...]
    residues: tuple[QuadInt, ...]  # full system for O/m
    unit_images: tuple[QuadInt, ...]

    @property
    def count(self) -> int:
        return len(self.representatives)


def _hnf_basis(c1, c2):
    """Lower-triangular basis ((a, 0), (b, g)) of the lattice Z c1 + Z c2."""
    (a1, b1), (a2, b2) = c1, c2
    if b1 == 0 and b2 == 0:
        raise ValueError("degenerate lattice")
    g, x, y = _ext_gcd(b1, b2)
    e1 = (x * a1 + y * a2, g)
    e2 = ((b2 // g) * a1 - (b1 // g) * a2, 0)
    if e2[0] == 0:
        raise ValueError("degenerate lattice")
    return (abs(e2[0]), e1)


def _ext_gcd(a, b):
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, x, y = _ext_gcd(b, a % b)
    return (g, y, x - (a // b) * y)


def _canonical_residue(x: QuadInt, a: int, e1) -> QuadInt:
    """Reduce x modulo the lattice with basis (a, 0), e1 = (b, g)."""
    b, g = e1
    k = x.v // g if g else 0
    k = (x.v - (x.v % g)) // g
    u = x.u - k * b
    v = x.v % g
    return QuadInt(x.d, u % a, v)


def ray_class_group(d_K: int, m) -> RayClassGroup:
    """Ray classes modulo the principal ideal m of the maximal order of d_K.

    m is a generator: an int n for (n), or a pair (u, v) meaning u + v w.
    """
    if d_K not in EUCLIDEAN_FIELDS or class_number(d_K) != 1:
        raise ClassNumberNotOne(f"ray classes need h = 1, got d_K = {d_K}")
    mu = QuadInt(d_K, m, 0) if isinstance(m, int) else QuadInt(d_K, m[0], m[1])
    if mu.is_zero():
        raise ValueError("modulus must be nonzero")
    if mu.norm > MAX_MODULUS_NORM:
        raise ValueError(f"modulus norm {mu.norm} exceeds the desk-scale cap")
    if mu.norm == 1:
        # degenerate modulus: no division values exist; the ray class
        # polynomial follows the empty-product convention
        zero = QuadInt(d_K, 0, 0)
        return RayClassGroup(d_K, mu, (), (zero,), (zero,))
    # lattice of (mu): columns mu*1 and mu*w in the basis [1, w]
    muw = mu * QuadInt(d_K, 0, 1)
    a, e1 = _hnf_basis((mu.u, mu.v), (muw.u, muw.v))
    residues = tuple(
        _canonical_residue(QuadInt(d_K, x, y), a, e1)
        for y in range(e1[1])
        for x in range(a)
    )
    assert len(residues) == mu.norm
    unit_group = field_units(d_K)
    unit_images = {_canonical_residue(eps, a, e1) for eps in unit_group}
    invertible = [
        r for r in residues if not r.is_zero() and quad_gcd(r, mu).norm == 1
    ]
    seen = set()
    reps = []
    for r in invertible:
        if r in seen:
            continue
        orbit = {_canonical_residue(r * eps, a, e1) for eps in unit_group}
        seen |= orbit
        reps.append(min(orbit, key=lambda q: (q.v, q.u)))
    return RayClassGroup(
        d_K, mu, tuple(sorted(reps, key=lambda q: (q.v, q.u))),
        residues, tuple(sorted(unit_images, key=lambda q: (q.v, q.u))),
    )


def ray_class_invariant(rcg: RayClassGroup, index: int, p_bits: int) -> mpc:
    """Weber value of the ray class: tau_R(1, m r^-1) = tau_R(r/m, O)."""
    r = rcg.representatives[index]
    wp = p_bits + 32
    with context(wp):
        z = r.embed(wp) / rcg.modulus.embed(wp)
        w = QuadInt(rcg.d_K, 0, 1).embed(wp)
        one = complex_value(1, 0, wp)
        return weber_value_basis(z, w, one, unit_count(rcg.d_K), p_bits)


@dataclass(frozen=True)
class RayClassPolynomial:
    d_K: int
    modulus: QuadInt
    coefficients: tuple[tuple[Fraction, Fraction], ...]  # (x, y): x + y sqrt(d_K)
    max_residual: float
    precision_used: int

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1


def ray_class_polynomial(rcg: RayClassGroup, p_bits: int) -> RayClassPolynomial:
    """prod over ray classes of (X - tau(k_m)), coefficients recognized in
    the field: x + y sqrt(d_K) with bounded-denominator rationals x, y."""
    if rcg.count == 0:
        return RayClassPolynomial(
            rcg.d_K, rcg.modulus, ((Fraction(1), Fraction(0)),), 0.0, p_bits
        )
    values = [ray_class_invariant(rcg, k, p_bits) for k in range(rcg.count)]
    coeffs = complex_poly_from_roots(values, p_bits)
    tol = mpfr(2) ** (-RATIONAL_TOL_BITS)
    out = []
    max_res = mpfr(0)
    with context(p_bits):
        root = gmpy2.sqrt(mpfr(abs(rcg.d_K)))
        for c in coeffs:
            xn, xd, res_x = recognize_rational(c.real, RATIONAL_DEN_BOUND, tol)
            yn, yd, res_y = recognize_rational(c.imag / root, RATIONAL_DEN_BOUND, tol)
            out.append((Fraction(xn, xd), Fraction(yn, yd)))
            max_res = max(max_res, res_x, res_y)
    return RayClassPolynomial(
        rcg.d_K, rcg.modulus, tuple(out), float(max_res), p_bits
    )


# --- division values and the division polynomial -----------------------------

def proper_division_pairs(N: int) -> list[tuple[int, int]]:
    return [
        (x1, x2)
        for x1 in range(N)
        for x2 in range(N)
        if gcd(gcd(x1, x2), N) == 1
    ]


def division_point_count(N: int) -> int:
    """N^2 prod over primes l | N of (1 - l^-2)."""
    count = N * N
    n = N
    l = 2
    while l * l <= n:
        if n % l == 0:
            count = count // (l * l) * (l * l - 1)
            while n % l == 0:
                n //= l
        l += 1
    if n > 1:
        count = count // (n * n) * (n * n - 1)
    return count


def division_values(N: int, point: CMPoint, p_bits: int) -> list[mpc]:
    """Weber values at all proper N-division points of the lattice <tau, 1>."""
    if N < 2:
        raise ValueError("division level must be >= 2")
    wp = p_bits + 32
    out = []
    with context(wp):
        # re-derive tau at working precision: the stored one must not cap
        # the retry ladder of the recognition step
        tau = mpc(form_to_tau(point.form, wp))
        one = complex_value(1, 0, wp)
        for x1, x2 in proper_division_pairs(N):
            z = (x1 * tau + x2) / N
            out.append(weber_value_basis(z, tau, one, point.e, p_bits))
    return out


def _prime_power_base(N: int):
    l = 2
    n = N
    while l * l <= n:
        if n % l == 0:
            while n % l == 0:
                n //= l
            return l if n == 1 else None
        l += 1
    return N  # N itself prime


@dataclass(frozen=True)
class DivisionPolynomial:
    level: int
    D: int
    coefficients: tuple[Fraction, ...]  # lowest power first, monic
    max_residual: float
    precision_used: int

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def denominator_lcm(self) -> int:
        den = 1
        for c in self.coefficients:
            den = den * c.denominator // gcd(den, c.denominator)
        return den


def division_polynomial(N: int, point: CMPoint, p_bits: int) -> DivisionPolynomial:
    """T_N(X) = prod (X - tau_R(division point)) with recognized coefficients.

    Needs class number one so the coefficients are rational.  For prime
    powers N = l^k the coefficients times l^e are integers; otherwise they
    are integers outright.
    """
    if class_number(point.D) != 1:
        raise ClassNumberNotOne(
            f"division polynomial needs h(D) = 1, got D = {point.D}"
        )
    if not 2 <= N <= MAX_DIVISION_LEVEL:
        raise ValueError(f"division level limited to {MAX_DIVISION_LEVEL}")
    base = _prime_power_base(N)
    scale = base**point.e if base else 1
    prec = p_bits
    for attempt in range(3):
        try:
            values = division_values(N, point, prec)
            coeffs = complex_poly_from_roots(values, prec)
            tol = mpfr(2) ** (-20)
            out = []
            max_res = mpfr(0)
            with context(prec):
                for c in coeffs[:-1]:
                    n, res = recognize_integer(c.real * scale, tol)
                    if abs(c.imag) * scale > tol:
                        raise RecognitionFailure(
                            f"imaginary residue {c.imag} in T_{N}",
                            residual=abs(c.imag),
                        )
                    out.append(Fraction(n, scale))
                    max_res = max(max_res, res, abs(c.imag) * scale)
            out.append(Fraction(1))
            return DivisionPolynomial(N, point.D, tuple(out), float(max_res), prec)
        except RecognitionFailure:
            prec *= 2
    raise RecognitionFailure(f"T_{N} for D={point.D} did not stabilize")
