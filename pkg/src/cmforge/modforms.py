"""High-precision values of eta, Delta, j, the eta multiplier, the
Weierstrass p-function and the Weber function.

Every evaluator first moves tau into the standard fundamental domain by
explicit modular substitutions, so all q-series run at |q| <= e^(-pi sqrt 3)
and truncation is controlled by a uniform relative rule: summation stops
once the running term drops below 2^-(working precision + 16) of the
partial sum.  Working precision carries 32 guard bits over the requested
p_bits.
"""

from __future__ import annotations

from dataclasses import dataclass

import gmpy2
from gmpy2 import mpc, mpfr

from .errors import PoleAtLatticePoint
from .numerics import BigComplex, complex_value, const_pi, context, sqrt_principal
from .quadratic import Form, form_to_tau, unit_count

GUARD_BITS = 32


@dataclass(frozen=True)
class ModMatrix:
    """Element of the homogeneous modular group (determinant one)."""

    alpha: int
    beta: int
    gamma: int
    delta: int

    def __post_init__(self):
        if self.alpha * self.delta - self.beta * self.gamma != 1:
            raise ValueError("matrix must have determinant 1")

    def __mul__(self, other: "ModMatrix") -> "ModMatrix":
        return ModMatrix(
            self.alpha * other.alpha + self.beta * other.gamma,
            self.alpha * other.beta + self.beta * other.delta,
            self.gamma * other.alpha + self.delta * other.gamma,
            self.gamma * other.beta + self.delta * other.delta,
        )

    def __neg__(self) -> "ModMatrix":
        return ModMatrix(-self.alpha, -self.beta, -self.gamma, -self.delta)

    def apply(self, tau: BigComplex) -> BigComplex:
        from .numerics import precision_of

        with context(precision_of(tau)):
            return (self.alpha * tau + self.beta) / (self.gamma * tau + self.delta)

    @classmethod
    def identity(cls) -> "ModMatrix":
        return cls(1, 0, 0, 1)


IDENTITY = ModMatrix.identity()
S_MATRIX = ModMatrix(0, -1, 1, 0)


@dataclass(frozen=True)
class CMPoint:
    """A CM lattice: discriminant, reduced form, basis quotient, unit count."""

    D: int
    form: Form
    tau: BigComplex
    e: int

    @classmethod
    def from_form(cls, form: Form, p_bits: int = 128) -> "CMPoint":
        D = form.discriminant
        return cls(D, form, form_to_tau(form, p_bits), unit_count(D))


def reduce_to_fundamental(tau: BigComplex, p_bits: int) -> tuple[BigComplex, ModMatrix]:
    """Return (tau', M) with tau' = M(tau) in the standard fundamental domain."""
    with context(p_bits):
        t = mpc(tau)
        if not t.imag > 0:
            raise ValueError("tau must lie in the upper half-plane")
        m = IDENTITY
        for _ in range(8 * p_bits + 64):
            n = int(gmpy2.rint(t.real))
            if n:
                t = t - n
                m = ModMatrix(1, -n, 0, 1) * m
            if gmpy2.norm(t) < 1:
                t = -1 / t
                m = S_MATRIX * m
            else:
                return t, m
        raise AssertionError("fundamental-domain reduction did not terminate")


def _tolerance(p_bits: int) -> mpfr:
    return mpfr(2) ** (-(p_bits + 16))


def _q_from_tau(tau: BigComplex, p_bits: int) -> BigComplex:
    with context(p_bits):
        two_pi_i = mpc(0, 2 * const_pi(p_bits))
        return gmpy2.exp(two_pi_i * tau)


def _pentagonal_sum(q: BigComplex, p_bits: int) -> BigComplex:
    """prod (1 - q^n) evaluated through the pentagonal-number series.

    Termination uses the |q|-power bound of the next term, not the computed
    term itself: pairs of pentagonal summands can cancel accidentally.
    """
    with context(p_bits):
        tol = _tolerance(p_bits)
        absq = abs(q)
        acc = mpc(1)
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            g2 = k * (3 * k + 1) // 2
            term = q**g1 + q**g2
            acc = acc + (term if k % 2 == 0 else -term)
            if 2 * absq**g1 < tol * (abs(acc) + 1):
                return acc
            k += 1


def _eisenstein_sum(q: BigComplex, power: int, factor: int, p_bits: int) -> BigComplex:
    """1 + factor * sum_n sigma_power(n) q^n by the Lambert rearrangement."""
    with context(p_bits):
        tol = _tolerance(p_bits)
        absq = abs(q)
        bound_den = 1 - absq
        acc = mpc(1)
        n = 1
        qn = q
        absqn = absq
        while True:
            term = factor * (n**power) * qn / (1 - qn)
            acc = acc + term
            if abs(factor) * (n**power) * absqn / bound_den < tol * (abs(acc) + 1):
                return acc
            n += 1
            qn = qn * q
            absqn = absqn * absq


def _e4(q, p_bits):
    return _eisenstein_sum(q, 3, 240, p_bits)


def _e6(q, p_bits):
    return _eisenstein_sum(q, 5, -504, p_bits)


def _delta_norm(q, p_bits):
    with context(p_bits):
        return q * _pentagonal_sum(q, p_bits) ** 24


def jacobi_symbol(a: int, n: int) -> int:
    """Jacobi symbol (a | n) for odd positive n."""
    if n <= 0 or n % 2 == 0:
        raise ValueError("Jacobi symbol needs odd positive denominator")
    return int(gmpy2.jacobi(a % n, n))


def eta_multiplier(m: ModMatrix) -> int:
    """Exponent k (mod 24) with eta(M tau) = zeta_24^k sqrt(-i(c tau+d)) eta(tau).

    Closed form through Jacobi symbols, one branch per parity of c; both
    branches are pinned against direct numeric eta ratios and against the
    Dedekind-sum multiplier in the test suite, since multiplier-system sign
    conventions drift between sources.  For c = 0 the transformation is the
    bare translation eta(tau + b) = zeta_24^b eta(tau) and the root factor
    does not apply.
    """
    if m.gamma < 0 or (m.gamma == 0 and m.delta < 0):
        m = -m
    a, b, c, d = m.alpha, m.beta, m.gamma, m.delta
    if c == 0:
        return b % 24
    lam = 0
    c1 = c
    while c1 % 2 == 0:
        c1 //= 2
        lam += 1
    # guard required by the 2-adic split: with c even, a must be odd
    if 3 * (a * a - 1) * lam % 2:
        raise ArithmeticError(
            "eta multiplier: lambda*(3/2)(alpha^2-1) is not an integer"
        )
    if lam == 0:
        exponent = b * d * (1 - c * c) + c * (a + d) + 3 * (1 - c)
        sign = jacobi_symbol(a, c)
    else:
        exponent = b * d * (1 - c * c) + c * (a + d) + 3 * d * (1 + 3 * c)
        sign = jacobi_symbol(c, abs(d))
    if sign < 0:
        exponent += 12
    return exponent % 24


def eta_multiplier_value(m: ModMatrix, p_bits: int = 64) -> BigComplex:
    """The multiplier as a complex 24th root of unity."""
    k = eta_multiplier(m)
    with context(p_bits):
        pi = const_pi(p_bits)
        return gmpy2.exp(mpc(0, pi * k / 12))


def _eta_transform_factor(m: ModMatrix, tau: BigComplex, p_bits: int) -> BigComplex:
    """F with eta(M tau) = F * eta(tau)."""
    if m.gamma < 0 or (m.gamma == 0 and m.delta < 0):
        m = -m
    with context(p_bits):
        eps = eta_multiplier_value(m, p_bits)
        if m.gamma == 0:
            return eps
        root = sqrt_principal(mpc(0, -1) * (m.gamma * tau + m.delta))
        return eps * root


def eta_value(tau: BigComplex, p_bits: int) -> BigComplex:
    """Dedekind eta at tau, error well below 2^-(p_bits - 8)."""
    wp = p_bits + GUARD_BITS
    with context(wp):
        tau = mpc(tau)
        t_red, m = reduce_to_fundamental(tau, wp)
        q = _q_from_tau(t_red, wp)
        q24 = gmpy2.exp(mpc(0, 1) * const_pi(wp) * t_red / 12)
        eta_red = q24 * _pentagonal_sum(q, wp)
        factor = _eta_transform_factor(m, tau, wp)
        result = eta_red / factor
    with context(p_bits):
        return +result


def j_value(tau: BigComplex, p_bits: int) -> BigComplex:
    """Klein j at tau via the normalized Eisenstein and discriminant series."""
    wp = p_bits + GUARD_BITS
    with context(wp):
        t_red, _ = reduce_to_fundamental(mpc(tau), wp)
        q = _q_from_tau(t_red, wp)
        e4 = _e4(q, wp)
        result = e4**3 / _delta_norm(q, wp)
    with context(p_bits):
        return +result


def delta_value(tau: BigComplex, p_bits: int) -> BigComplex:
    """Analytic discriminant including the (2 pi)^12 prefactor."""
    wp = p_bits + GUARD_BITS
    with context(wp):
        eta = eta_value(mpc(tau), wp)
        result = (2 * const_pi(wp)) ** 12 * eta**24
    with context(p_bits):
        return +result


def _lattice_coordinates(z: BigComplex, tau: BigComplex, p_bits: int):
    """Real coordinates (x1, x2) with z = x1 tau + x2."""
    with context(p_bits):
        x1 = z.imag / tau.imag
        x2 = z.real - x1 * tau.real
        return x1, x2


def _weierstrass_bracket(z: BigComplex, tau: BigComplex, p_bits: int) -> BigComplex:
    """The bracket S with p(z; <tau,1>) = -(2 pi)^2 / 12 * S.

    Expects tau in the fundamental domain; translates z into the period
    parallelogram so the Fourier strip condition |Im z| < Im tau holds.
    """
    with context(p_bits):
        x1, x2 = _lattice_coordinates(z, tau, p_bits)
        n1 = int(gmpy2.rint(x1))
        n2 = int(gmpy2.rint(x2))
        zr = z - n1 * tau - n2
        tol = _tolerance(p_bits)
        if abs(zr) < mpfr(2) ** (-(p_bits // 2)):
            raise PoleAtLatticePoint("z lies on the period lattice")
        two_pi_i = mpc(0, 2 * const_pi(p_bits))
        u = gmpy2.exp(two_pi_i * zr)
        q = _q_from_tau(tau, p_bits)
        acc = 1 + 12 * u / (1 - u) ** 2
        absq = abs(q)
        beta = max(abs(u), 1 / abs(u))  # |u^n + u^-n - 2| <= 4 beta^n
        bound_den = 1 - absq
        n = 1
        un, uninv, qn = u, 1 / u, q
        ratio = beta * absq
        ration = ratio
        while True:
            term = 12 * n * (un + uninv - 2) * qn / (1 - qn)
            acc = acc + term
            if 48 * n * ration / bound_den < tol * (abs(acc) + 1):
                return acc
            n += 1
            un, uninv, qn = un * u, uninv / u, qn * q
            ration = ration * ratio


def weierstrass_p(z: BigComplex, tau: BigComplex, p_bits: int) -> BigComplex:
    """Weierstrass p-function for the lattice <tau, 1>."""
    wp = p_bits + GUARD_BITS
    with context(wp):
        z = mpc(z)
        t_red, m = reduce_to_fundamental(mpc(tau), wp)
        scale = m.gamma * mpc(tau) + m.delta  # <tau,1> = scale * <tau',1>
        zr = z / scale
        bracket = _weierstrass_bracket(zr, t_red, wp)
        pi = const_pi(wp)
        result = -((2 * pi) ** 2) / 12 * bracket / scale**2
    with context(p_bits):
        return +result


def weber_value_basis(
    z: BigComplex, omega1: BigComplex, omega2: BigComplex, e: int, p_bits: int
) -> BigComplex:
    """Weber function tau_R(z, (omega1, omega2)) for an order with e units.

    Homogeneous of degree zero, so everything is evaluated on the scaled
    basis (omega1/omega2, 1) after a fundamental-domain reduction.  The
    (2 pi) powers of g^(e) and p^(e/2) cancel exactly; what remains is
      e = 2:  (E4 E6 / Delta_norm) * S
      e = 4:  (E4^2  / Delta_norm) * S^2
      e = 6:  (E6    / Delta_norm) * S^3
    with S the p-function bracket.
    """
    if e not in (2, 4, 6):
        raise ValueError("unit count must be 2, 4 or 6")
    wp = p_bits + GUARD_BITS
    with context(wp):
        omega1, omega2 = mpc(omega1), mpc(omega2)
        tau = omega1 / omega2
        zn = mpc(z) / omega2
        if not tau.imag > 0:
            tau = -tau
            zn = -zn  # same lattice with the orientation fixed
        t_red, m = reduce_to_fundamental(tau, wp)
        scale = m.gamma * tau + m.delta
        zr = zn / scale
        bracket = _weierstrass_bracket(zr, t_red, wp)
        q = _q_from_tau(t_red, wp)
        dn = _delta_norm(q, wp)
        if e == 2:
            result = _e4(q, wp) * _e6(q, wp) / dn * bracket
        elif e == 4:
            result = _e4(q, wp) ** 2 / dn * bracket**2
        else:
            result = _e6(q, wp) / dn * bracket**3
    with context(p_bits):
        return +result


def weber_value(z: BigComplex, point: CMPoint, p_bits: int) -> BigComplex:
    """Weber function of the point's order on the lattice <tau, 1>."""
    one = complex_value(1, 0, p_bits + GUARD_BITS)
    return weber_value_basis(z, point.tau, one, point.e, p_bits)
