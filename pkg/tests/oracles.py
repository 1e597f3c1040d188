"""Independent oracles used by the test suite.

Nothing here shares code with the package: series come from naive Fraction
polynomial arithmetic, the Weierstrass function from the defining lattice
sum, the eta multiplier from Dedekind sums, finite-field factorization from
exhaustive trial division, and modular polynomials from floating
interpolation.
"""

from __future__ import annotations

from fractions import Fraction

import gmpy2
from gmpy2 import mpc


# --- naive power series over Q (dense lists, index = exponent) --------------

def poly_mul(a, b, terms):
    out = [Fraction(0)] * terms
    for i, ai in enumerate(a[:terms]):
        if ai:
            for j, bj in enumerate(b[: terms - i]):
                out[i + j] += ai * bj
    return out


def euler_product(terms):
    """prod_(n>=1) (1 - q^n) by literal expansion."""
    out = [Fraction(0)] * terms
    out[0] = Fraction(1)
    for n in range(1, terms):
        nxt = list(out)
        for i in range(terms - n):
            nxt[i + n] -= out[i]
        out = nxt
    return out


def delta_coeffs(terms):
    """q prod (1-q^n)^24 -> coefficients of q^1..q^terms as a list."""
    base = euler_product(terms)
    acc = [Fraction(1)] + [Fraction(0)] * (terms - 1)
    for _ in range(24):
        acc = poly_mul(acc, base, terms)
    return acc  # coefficient of q^(k+1) at index k


def power_series_inverse(u, terms):
    inv = [Fraction(1) / u[0]] + [Fraction(0)] * (terms - 1)
    for k in range(1, terms):
        s = Fraction(0)
        for i in range(1, min(k, len(u) - 1) + 1):
            s += u[i] * inv[k - i]
        inv[k] = -s / u[0]
    return inv


def sigma(power, n):
    return sum(d**power for d in range(1, n + 1) if n % d == 0)


def e4_coeffs(terms):
    return [Fraction(1)] + [Fraction(240 * sigma(3, n)) for n in range(1, terms)]


def j_coeffs(terms):
    """j-series coefficients for exponents -1 .. terms-2."""
    e4 = e4_coeffs(terms)
    e4_3 = poly_mul(poly_mul(e4, e4, terms), e4, terms)
    dl = delta_coeffs(terms)  # starts at q^1; unit part dl shifted
    return poly_mul(e4_3, power_series_inverse(dl, terms), terms)


# --- Dedekind eta multiplier through Dedekind sums ---------------------------

def dedekind_sum(h, k):
    """s(h, k) as an exact Fraction, iterative reciprocity."""
    h %= k
    acc = Fraction(0)
    sign = 1
    while h:
        acc += sign * (Fraction(-1, 4) + (Fraction(h, k) + Fraction(k, h)
                                          + Fraction(1, h * k)) / 12)
        h, k = k % h, h
        sign = -sign
    return acc


def eta_exponent_oracle(a, b, c, d):
    """Exponent e with eta(M tau) = zeta_24^e sqrt(-i(c tau + d)) eta(tau), c>0."""
    val = Fraction(a + d, c) - 12 * dedekind_sum(d % c, c)
    assert val.denominator == 1
    return int(val) % 24


# --- Weierstrass p by the defining lattice sum -------------------------------

def weierstrass_double_sum(z, tau, box=700):
    """Symmetric-box truncation of the defining sum; float precision.

    Odd tail terms cancel over the symmetric box, leaving an O(box^-2)
    truncation error.
    """
    import numpy as np

    z = complex(z)
    tau = complex(tau)
    n1 = np.arange(-box, box + 1)
    n2 = np.arange(-box, box + 1)
    w = n1[:, None] * tau + n2[None, :]
    w[box, box] = 1.0  # placeholder, excluded below
    terms = 1.0 / (z - w) ** 2 - 1.0 / w**2
    terms[box, box] = 0.0
    return 1.0 / z**2 + complex(terms.sum())


def weierstrass_double_sum_extrapolated(z, tau, box=250):
    """Defining double sum with two-step Richardson extrapolation in 1/box^2.

    The box-truncation error expands in even powers of 1/box; three nested
    boxes eliminate the box^-2 and box^-4 terms, reaching float64 noise.
    """
    s1 = weierstrass_double_sum(z, tau, box)
    s2 = weierstrass_double_sum(z, tau, 2 * box)
    s4 = weierstrass_double_sum(z, tau, 4 * box)
    t1 = s2 + (s2 - s1) / 3  # kill box^-2
    t2 = s4 + (s4 - s2) / 3
    return t2 + (t2 - t1) / 15  # kill box^-4


# --- brute-force factor degree profile over F_p ------------------------------

def fp_polys(degree, p):
    """All monic polynomials of the given degree over F_p (coefficient lists)."""
    if degree == 0:
        yield [1]
        return
    base = [0] * degree + [1]
    counter = [0] * degree
    while True:
        yield list(counter) + [1]
        for i in range(degree):
            counter[i] += 1
            if counter[i] < p:
                break
            counter[i] = 0
        else:
            return


def fp_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] = (out[i + j] + ai * bj) % p
    return out


def fp_divides(d, f, p):
    f = list(f)
    inv = pow(d[-1], -1, p)
    while len(f) >= len(d):
        c = f[-1] * inv % p
        for i in range(len(d)):
            f[len(f) - len(d) + i] = (f[len(f) - len(d) + i] - c * d[i]) % p
        f.pop()
        while f and f[-1] == 0 and len(f) >= len(d):
            f.pop()
    return all(c == 0 for c in f)


def fp_is_irreducible(f, p):
    deg = len(f) - 1
    if deg <= 1:
        return deg == 1
    for d in range(1, deg // 2 + 1):
        for g in fp_polys(d, p):
            if fp_divides(g, f, p):
                return False
    return True


def brute_degree_profile(coeffs, p):
    """Factor degrees of the (monic mod p) polynomial by exhaustive division."""
    f = [c % p for c in coeffs]
    while f and f[-1] == 0:
        f.pop()
    inv = pow(f[-1], -1, p)
    f = [c * inv % p for c in f]
    degrees = []
    d = 1
    while len(f) - 1 > 0:
        found = False
        for g in fp_polys(d, p):
            if fp_is_irreducible(g, p) and fp_divides(g, f, p):
                # divide out
                q = []
                rem = list(f)
                invl = pow(g[-1], -1, p)
                for k in range(len(rem) - 1, len(g) - 2, -1):
                    c = rem[k] * invl % p
                    q.append(c)
                    for i in range(len(g)):
                        rem[k - len(g) + 1 + i] = (rem[k - len(g) + 1 + i] - c * g[i]) % p
                q.reverse()
                f = q
                degrees.append(d)
                found = True
                break
        if not found:
            d += 1
    return tuple(sorted(degrees))


# --- floating interpolation oracle for modular polynomials -------------------

def interpolated_modular_polynomial(s, p_bits=256):
    """J_s(X, Y) by numeric interpolation over random tau, rounded to Z.

    The route the exact construction never takes: evaluate the conjugate
    values j(S_nu tau) at psi(s)+1 base points, interpolate each symmetric
    function in Y = j(tau) by Lagrange, and round.
    """
    import sys

    sys.path.insert(0, "src")
    from cmforge.modforms import j_value
    from cmforge.numerics import complex_value, context
    from cmforge.transform import PrimMatrix, representatives

    reps = representatives(s)
    n = len(reps)
    with context(p_bits):
        taus = [complex_value(Fraction(k - 1, 7), Fraction(9, 8) + Fraction(k, 11), p_bits)
                for k in range(n + 1)]
        ys = [j_value(t, p_bits) for t in taus]
        rows = []
        for t in taus:
            vals = [j_value(m.apply(t), p_bits) for m in reps]
            poly = [mpc(1)]  # coefficients of prod (X - v), lowest first
            for v in vals:
                nxt = [mpc(0)] * (len(poly) + 1)
                for i, cc in enumerate(poly):
                    nxt[i + 1] += cc
                    nxt[i] -= v * cc
                poly = nxt
            rows.append(poly[:-1])  # drop the leading 1
        # Lagrange interpolation of each X-coefficient as a polynomial in Y
        terms = {(n, 0): 1}
        for i in range(n):
            pts = [(ys[k], rows[k][i]) for k in range(n + 1)]
            coeffs = _lagrange(pts, p_bits)
            for jdeg, c in enumerate(coeffs):
                r = int(gmpy2.rint(c.real))
                assert abs(c.real - r) < 1e-6 and abs(c.imag) < 1e-6, (
                    f"interpolation residual too large at X^{i} Y^{jdeg}"
                )
                if r:
                    terms[(i, jdeg)] = r
        return terms


def _lagrange(points, p_bits):
    with gmpy2.context(precision=p_bits):
        n = len(points)
        out = [mpc(0)] * n
        for k, (xk, yk) in enumerate(points):
            basis = [mpc(1)]
            denom = mpc(1)
            for m, (xm, _) in enumerate(points):
                if m == k:
                    continue
                nxt = [mpc(0)] * (len(basis) + 1)
                for i, cc in enumerate(basis):
                    nxt[i + 1] += cc
                    nxt[i] -= xm * cc
                basis = nxt
                denom *= xk - xm
            for i in range(len(basis)):
                out[i] += yk * basis[i] / denom
        return out
