"""Arbitrary-precision real/complex kernel and integer recognition.

Values are MPFR/MPC numbers (via gmpy2) with an explicit per-value precision
in bits; every operation here rounds to nearest-even at the requested
precision.  All values are immutable, all functions pure.

The two-precision discipline used by the higher modules lives here as well:
exact recognition is never trusted from a single computation, callers
recompute at ``p_bits + 64`` and demand identical rounded output.
"""

from __future__ import annotations

import gmpy2
from gmpy2 import mpc, mpfr

from .errors import RecognitionFailure

BigReal = mpfr
BigComplex = mpc

MIN_PRECISION = 16


def context(p_bits: int):
    """A gmpy2 context manager computing at p_bits (round-to-nearest-even)."""
    if p_bits < MIN_PRECISION:
        raise ValueError(f"precision must be >= {MIN_PRECISION} bits, got {p_bits}")
    return gmpy2.context(precision=p_bits)


def real(value, p_bits: int) -> BigReal:
    """Round value (int, Fraction, float, str or mpfr) to p_bits."""
    with context(p_bits):
        if hasattr(value, "numerator") and not isinstance(value, int):
            return gmpy2.div(mpfr(value.numerator), mpfr(value.denominator))
        return mpfr(value)


def complex_value(re, im=0, p_bits: int = 64) -> BigComplex:
    """Build a BigComplex with both parts rounded to p_bits."""
    with context(p_bits):
        # the mpc constructor rounds at the active context, so it must run
        # inside one; a bare call would silently truncate to the default
        return mpc(real(re, p_bits), real(im, p_bits))


def precision_of(z) -> int:
    """Working precision of a BigReal/BigComplex in bits."""
    p = z.precision
    if isinstance(p, tuple):
        return min(p)
    return p


def const_pi(p_bits: int) -> BigReal:
    """pi to p_bits (correct to well under 2 ulp)."""
    with context(p_bits):
        return gmpy2.const_pi()


def exp_c(z: BigComplex) -> BigComplex:
    """e**z at z's precision.

    Raises OverflowError if the result leaves the MPFR exponent range.
    """
    with context(precision_of(z)):
        w = gmpy2.exp(z)
    if isinstance(w, mpc):
        bad = gmpy2.is_infinite(w) or gmpy2.is_nan(w)
    else:
        bad = gmpy2.is_infinite(w) or gmpy2.is_nan(w)
    if bad:
        raise OverflowError(f"exp overflows at Re(z) = {mpc(z).real}")
    return w


def sqrt_principal(z: BigComplex) -> BigComplex:
    """Square root with Re > 0, or Re = 0 and Im > 0.

    This is the branch used by the eta transformation identity, where the
    root of -i(c*tau + d) is always taken with positive real part.
    """
    p = precision_of(z) if isinstance(z, (mpc, mpfr)) else 64
    with context(p):
        z = mpc(z)
        if z == 0:
            raise ValueError("sqrt_principal is undefined at 0")
        w = gmpy2.sqrt(z)
        if w.real < 0 or (w.real == 0 and w.imag < 0):
            w = -w
    return w


def recognize_integer(x: BigReal, tol) -> tuple[int, BigReal]:
    """Nearest integer n with |x - n| <= tol, together with the residual.

    tol must be < 1/4 so the answer is unambiguous.  Raises
    RecognitionFailure when no integer is close enough, which by convention
    means the caller's working precision was insufficient.
    """
    p = precision_of(x) if isinstance(x, mpfr) else 64
    with context(max(p, MIN_PRECISION)):
        x = mpfr(x)
        tol = mpfr(tol)
        if not tol < 0.25:
            raise ValueError("tolerance must be < 1/4")
        n = int(gmpy2.rint(x))
        residual = abs(x - n)
    if residual > tol:
        raise RecognitionFailure(
            f"{x} is {residual} away from the nearest integer {n} (tol {tol})",
            residual=residual,
        )
    return n, residual


def recognize_rational(x: BigReal, max_den: int, tol) -> tuple[int, int, BigReal]:
    """Continued-fraction rational reconstruction of x.

    Returns (num, den, residual) with 0 < den <= max_den, den minimal for
    the accepted approximation.  Raises RecognitionFailure when no fraction
    with denominator <= max_den lands within tol.
    """
    p = precision_of(x) if isinstance(x, mpfr) else 64
    with context(max(p, MIN_PRECISION)):
        x = mpfr(x)
        tol = mpfr(tol)
        # convergents of the continued fraction of x
        p0, q0, p1, q1 = 0, 1, 1, 0
        t = x
        for _ in range(precision_of(x) + 8):
            a = int(gmpy2.floor(t))
            p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
            if q1 > max_den:
                break
            if abs(x - mpfr(p1) / q1) <= tol:
                return p1, q1, abs(x - mpfr(p1) / q1)
            frac = t - a
            if frac == 0:
                break
            t = 1 / frac
    raise RecognitionFailure(
        f"no rational with denominator <= {max_den} within {tol} of {x}"
    )
