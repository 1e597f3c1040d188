"""Exact truncated Laurent series in q^(1/ell) and cyclotomic integers.

A QSeries holds coefficients for exponents n0/ell .. N/ell (inclusive); N is
the guaranteed valid order, and every arithmetic operation recomputes the
valid order of its output from those of the inputs instead of silently
extending.  Coefficients are rational integers, Fractions, or cyclotomic
integers (CycInt); the heavy multiplications all bottom out in
intpoly_mul's Kronecker packing.

Transcendental prefactors never enter exact series.  The dictionary between
the normalized series used here and the classical analytic quantities:

    E4 = 1 + 240 sum sigma_3(n) q^n        g_2 = (2 pi)^4  E4 / 12
    E6 = 1 - 504 sum sigma_5(n) q^n        g_3 = (2 pi)^6  E6 / 216
    Delta_norm = q prod (1 - q^n)^24       Delta = (2 pi)^12 Delta_norm
    j = E4^3 / Delta_norm                  (already weight 0, no prefactor)

eisenstein_series returns the bracket of the classical Fourier expansion,
whose constant is the paper-convention Bernoulli number: the prefactor
(2 pi)^(2m) / (2m)! stays symbolic.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

from .errors import ReductionFailure
from .polynomials import IntPolynomial, intpoly_mul


# --- cyclotomic integers --------------------------------------------------

@lru_cache(maxsize=None)
def cyclotomic_polynomial(s: int) -> tuple[int, ...]:
    """Coefficients of the s-th cyclotomic polynomial, lowest power first."""
    if s < 1:
        raise ValueError("level must be positive")
    if s == 1:
        return (-1, 1)
    # (x^s - 1) / prod of lower-level cyclotomic polynomials, exact division
    num = [-1] + [0] * (s - 1) + [1]
    for d in range(1, s):
        if s % d == 0:
            div = cyclotomic_polynomial(d)
            quot = [0] * (len(num) - len(div) + 1)
            rem = list(num)
            for k in range(len(rem) - 1, len(div) - 2, -1):
                c = rem[k]  # divisors are monic
                if c:
                    quot[k - len(div) + 1] = c
                    for i, dc in enumerate(div):
                        rem[k - len(div) + 1 + i] -= c * dc
            num = quot
    return tuple(num)


@lru_cache(maxsize=None)
def _reduction_table(s: int) -> tuple[tuple[int, ...], ...]:
    """x^k mod Phi_s for k = 0 .. 2*phi(s)-2 as coefficient tuples."""
    phi = len(cyclotomic_polynomial(s)) - 1
    rows = []
    cur = [1] + [0] * (phi - 1)
    for _ in range(2 * phi - 1):
        rows.append(tuple(cur))
        # multiply by x, reduce the overflow coefficient against Phi_s
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            mod = cyclotomic_polynomial(s)
            for i in range(phi):
                cur[i] -= top * mod[i]
    return tuple(rows)


def euler_phi_degree(s: int) -> int:
    return len(cyclotomic_polynomial(s)) - 1


class CycInt:
    """Integer element of Z[zeta_s], stored reduced modulo Phi_s.

    Construction accepts vectors indexed by zeta^0 .. zeta^(s-1); they are
    reduced eagerly, so equality is plain coordinate equality.
    """

    __slots__ = ("level", "vec")

    def __init__(self, level: int, vec):
        phi = euler_phi_degree(level)
        vec = [int(v) for v in vec]
        if len(vec) > phi:
            # schoolbook reduction modulo the (monic) cyclotomic polynomial
            mod = cyclotomic_polynomial(level)
            rem = list(vec)
            for k in range(len(rem) - 1, phi - 1, -1):
                c = rem[k]
                if c:
                    rem[k] = 0
                    for i in range(phi):
                        rem[k - phi + i] -= c * mod[i]
            vec = rem[:phi]
        else:
            vec = vec + [0] * (phi - len(vec))
        self.level = level
        self.vec = tuple(vec)

    @classmethod
    def from_int(cls, level: int, n: int) -> "CycInt":
        return cls(level, [n])

    @classmethod
    @lru_cache(maxsize=None)
    def zeta_power(cls, level: int, k: int) -> "CycInt":
        k %= level
        return cls(level, [0] * k + [1])

    def rational_part(self):
        """The rational integer this element equals, or None."""
        if any(self.vec[1:]):
            return None
        return self.vec[0]

    def is_zero(self) -> bool:
        return not any(self.vec)

    def __add__(self, other):
        other = _as_cyc(other, self.level)
        return CycInt(self.level, [a + b for a, b in zip(self.vec, other.vec)])

    __radd__ = __add__

    def __neg__(self):
        return CycInt(self.level, [-a for a in self.vec])

    def __sub__(self, other):
        return self + (-_as_cyc(other, self.level))

    def __rsub__(self, other):
        return _as_cyc(other, self.level) - self

    def __mul__(self, other):
        if isinstance(other, int):
            return CycInt(self.level, [other * a for a in self.vec])
        other = _as_cyc(other, self.level)
        return CycInt(self.level, _cyc_mul_vec(self.level, list(self.vec), list(other.vec)))

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            return self.rational_part() == other
        return (
            isinstance(other, CycInt)
            and self.level == other.level
            and self.vec == other.vec
        )

    def __hash__(self):
        return hash((self.level, self.vec))

    def __repr__(self):
        return f"CycInt({self.level}, {list(self.vec)!r})"


def _as_cyc(x, level):
    if isinstance(x, CycInt):
        if x.level != level:
            raise ValueError("mixed cyclotomic levels")
        return x
    return CycInt.from_int(level, int(x))


def _cyc_mul_vec(level, a, b):
    phi = euler_phi_degree(level)
    raw = intpoly_mul(a, b)
    table = _reduction_table(level)
    out = [0] * phi
    for k, c in enumerate(raw):
        if c:
            row = table[k]
            for i in range(phi):
                out[i] += c * row[i]
    return out


# --- the series type -------------------------------------------------------

class QSeries:
    """Truncated Laurent series in q^(1/ell) with exact coefficients."""

    __slots__ = ("ell", "n0", "coeffs", "level")

    def __init__(self, ell: int, n0: int, coeffs, level: int = 0):
        if ell < 1:
            raise ValueError("exponent denominator must be >= 1")
        self.ell = ell
        self.n0 = n0
        self.coeffs = list(coeffs)
        self.level = level  # cyclotomic level, 0 for rational coefficients
        if not self.coeffs:
            raise ValueError("a QSeries must carry at least one coefficient")

    @property
    def valid_order(self) -> int:
        """Largest exponent numerator the series is guaranteed through."""
        return self.n0 + len(self.coeffs) - 1

    @property
    def domain(self) -> str:
        if self.level:
            return f"cyclotomic({self.level})"
        if any(isinstance(c, Fraction) and c.denominator != 1 for c in self.coeffs):
            return "rational"
        return "integer"

    def coefficient(self, n: int):
        """Coefficient of q^(n/ell); n must lie inside the valid window."""
        if n < self.n0 or n > self.valid_order:
            raise IndexError(f"exponent {n}/{self.ell} outside valid window")
        return self.coeffs[n - self.n0]

    def lowest_exponent(self):
        for k, c in enumerate(self.coeffs):
            if not _is_zero_coeff(c):
                return self.n0 + k
        return None

    def trimmed(self) -> "QSeries":
        """Drop leading zero coefficients (the valid order is unchanged)."""
        lo = self.lowest_exponent()
        if lo is None or lo == self.n0:
            return self
        return QSeries(self.ell, lo, self.coeffs[lo - self.n0:], self.level)

    def truncate(self, order: int) -> "QSeries":
        if order < self.n0:
            raise ValueError("cannot truncate below the lowest exponent")
        return QSeries(
            self.ell, self.n0, self.coeffs[: order - self.n0 + 1], self.level
        )

    def with_denominator(self, ell2: int) -> "QSeries":
        """Re-express in q^(1/ell2); ell2 must be a multiple of ell."""
        if ell2 % self.ell:
            raise ValueError("new denominator must be a multiple of the old one")
        k = ell2 // self.ell
        if k == 1:
            return self
        zero = CycInt.from_int(self.level, 0) if self.level else 0
        coeffs = [zero] * (k * (len(self.coeffs) - 1) + 1)
        for i, c in enumerate(self.coeffs):
            coeffs[k * i] = c
        return QSeries(ell2, k * self.n0, coeffs, self.level)

    # arithmetic ------------------------------------------------------------

    def _common(self, other):
        if not isinstance(other, QSeries):
            raise TypeError("QSeries arithmetic needs a QSeries operand")
        ell = self.ell * other.ell // gcd(self.ell, other.ell)
        level = self.level or other.level
        if self.level and other.level and self.level != other.level:
            raise ValueError("mixed cyclotomic levels")
        return self.with_denominator(ell), other.with_denominator(ell), level

    def __add__(self, other):
        a, b, level = self._common(other)
        n0 = min(a.n0, b.n0)
        hi = min(a.valid_order, b.valid_order)
        if hi < n0:
            raise ValueError("operands have no overlapping valid window")
        zero = CycInt.from_int(level, 0) if level else 0

        def at(s, n):
            if s.n0 <= n <= s.valid_order:
                return s.coeffs[n - s.n0]
            return zero

        coeffs = []
        for n in range(n0, hi + 1):
            ca, cb = at(a, n), at(b, n)
            if level:
                ca, cb = _as_cyc(ca, level), _as_cyc(cb, level)
            coeffs.append(ca + cb)
        return QSeries(a.ell, n0, coeffs, level)

    def __neg__(self):
        return QSeries(self.ell, self.n0, [-c for c in self.coeffs], self.level)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "QSeries":
        level = self.level
        if isinstance(c, CycInt):
            if level and c.level != level:
                raise ValueError("mixed cyclotomic levels")
            level = c.level
            return QSeries(
                self.ell, self.n0,
                [c * _as_cyc(x, level) for x in self.coeffs], level,
            )
        return QSeries(self.ell, self.n0, [c * x for x in self.coeffs], level)

    def __mul__(self, other):
        a, b, level = self._common(other)
        a, b = a.trimmed(), b.trimmed()
        n0 = a.n0 + b.n0
        hi = min(a.valid_order + b.n0, b.valid_order + a.n0)
        if hi < n0:
            raise ValueError("product has an empty valid window")
        if level:
            coeffs = _mul_cyclotomic(a.coeffs, b.coeffs, level)
        else:
            coeffs = _mul_rational(a.coeffs, b.coeffs)
        return QSeries(a.ell, n0, coeffs[: hi - n0 + 1], level)

    def __pow__(self, n: int):
        if n < 1:
            raise ValueError("only positive powers of a truncated series")
        result = self
        for bit in bin(n)[3:]:
            result = result * result
            if bit == "1":
                result = result * self
        return result

    def __eq__(self, other):
        """Coefficient equality over the common valid window."""
        if not isinstance(other, QSeries):
            return NotImplemented
        a, b, _ = self.trimmed()._common(other.trimmed())
        if a.n0 != b.n0:
            return False
        n = min(len(a.coeffs), len(b.coeffs))
        return all(_coeff_eq(x, y) for x, y in zip(a.coeffs[:n], b.coeffs[:n]))

    def __repr__(self):
        head = ", ".join(
            f"q^{n}/{self.ell}:{c}" for n, c in
            list(zip(range(self.n0, self.valid_order + 1), self.coeffs))[:4]
        )
        return f"QSeries(ell={self.ell}, [{head}, ...], valid_to={self.valid_order})"

    # conversions -----------------------------------------------------------

    def descend(self, ell2: int = 1) -> "QSeries":
        """Re-express in q^(1/ell2) for a divisor ell2 of ell.

        Every nonzero coefficient must sit at an exponent expressible over
        ell2, and cyclotomic coefficients must be rational integers;
        otherwise ReductionFailure.
        """
        if self.ell % ell2:
            raise ValueError("target denominator must divide the current one")
        step = self.ell // ell2
        out = []
        for n in range(self.n0, self.valid_order + 1):
            c = self.coeffs[n - self.n0]
            if n % step:
                if not _is_zero_coeff(c):
                    raise ReductionFailure(
                        f"coefficient at q^{n}/{self.ell} blocks descent to ell={ell2}"
                    )
                continue
            if isinstance(c, CycInt):
                r = c.rational_part()
                if r is None:
                    raise ReductionFailure(
                        f"non-rational cyclotomic coefficient at q^{n}/{self.ell}"
                    )
                c = r
            out.append(c)
        first = self.n0 + (-self.n0) % step  # first exponent divisible by step
        return QSeries(ell2, first // step, out)

    def to_integer_coeffs(self) -> "QSeries":
        """Force all coefficients to rational integers or fail."""
        out = []
        for n in range(self.n0, self.valid_order + 1):
            c = self.coeffs[n - self.n0]
            if isinstance(c, CycInt):
                c = c.rational_part()
                if c is None:
                    raise ReductionFailure("non-rational coefficient")
            elif isinstance(c, Fraction):
                if c.denominator != 1:
                    raise ReductionFailure("non-integer coefficient")
                c = int(c)
            out.append(int(c))
        return QSeries(self.ell, self.n0, out)


def _is_zero_coeff(c):
    if isinstance(c, CycInt):
        return c.is_zero()
    return c == 0


def _coeff_eq(x, y):
    if isinstance(x, CycInt) or isinstance(y, CycInt):
        if isinstance(x, CycInt) and isinstance(y, CycInt):
            return x == y
        cyc, other = (x, y) if isinstance(x, CycInt) else (y, x)
        return cyc.rational_part() == other
    return x == y


def _mul_rational(a, b):
    if any(isinstance(c, Fraction) and c.denominator != 1 for c in a + b):
        da = 1
        for c in a:
            if isinstance(c, Fraction):
                da = da * c.denominator // gcd(da, c.denominator)
        db = 1
        for c in b:
            if isinstance(c, Fraction):
                db = db * c.denominator // gcd(db, c.denominator)
        ia = [int(c * da) for c in a]
        ib = [int(c * db) for c in b]
        return [Fraction(c, da * db) for c in intpoly_mul(ia, ib)]
    return intpoly_mul([int(c) for c in a], [int(c) for c in b])


def _mul_cyclotomic(a, b, level):
    phi = euler_phi_degree(level)
    la, lb = len(a), len(b)

    def components(coeffs, length):
        comps = [None] * phi
        for idx, c in enumerate(coeffs):
            c = _as_cyc(c, level)
            for i, v in enumerate(c.vec):
                if v:
                    if comps[i] is None:
                        comps[i] = [0] * length
                    comps[i][idx] = v
        return comps

    ca = components(a, la)
    cb = components(b, lb)
    n_out = la + lb - 1
    # zeta^i * zeta^j buckets, reduced through the table afterwards
    buckets = [None] * (2 * phi - 1)
    for i, ai in enumerate(ca):
        if ai is None:
            continue
        for j, bj in enumerate(cb):
            if bj is None:
                continue
            prod = intpoly_mul(ai, bj)
            k = i + j
            if buckets[k] is None:
                buckets[k] = [0] * n_out
            tgt = buckets[k]
            for idx, v in enumerate(prod):
                tgt[idx] += v
    table = _reduction_table(level)
    comps = [[0] * n_out for _ in range(phi)]
    for k, bucket in enumerate(buckets):
        if bucket is None:
            continue
        row = table[k]
        for i in range(phi):
            r = row[i]
            if r:
                tgt = comps[i]
                for idx, v in enumerate(bucket):
                    if v:
                        tgt[idx] += r * v
    out = []
    for idx in range(n_out):
        out.append(CycInt(level, [comps[i][idx] for i in range(phi)]))
    return out


# --- named expansions ------------------------------------------------------

def _pentagonal_coeffs(terms: int) -> list[int]:
    """Coefficients of prod_(n>=1) (1 - q^n) through q^(terms-1)."""
    out = [0] * terms
    out[0] = 1
    k = 1
    while True:
        hit = False
        for g in (k * (3 * k - 1) // 2, k * (3 * k + 1) // 2):
            if g < terms:
                out[g] = 1 if k % 2 == 0 else -1
                hit = True
        if not hit:
            break
        k += 1
    return out


def eta_series(terms: int) -> QSeries:
    """q^(1/24) * prod (1 - q^n) via the pentagonal-number expansion.

    Returns `terms` q-level coefficients: exponents 1/24 .. (terms-1) + 1/24.
    """
    if terms < 1:
        raise ValueError("terms must be >= 1")
    pent = _pentagonal_coeffs(terms)
    coeffs = [0] * (24 * (terms - 1) + 1)
    for n, c in enumerate(pent):
        coeffs[24 * n] = c
    return QSeries(24, 1, coeffs)


def _delta_unit_coeffs(terms: int) -> list[int]:
    """prod (1-q^n)^24 through q^(terms-1)."""
    pent = _pentagonal_coeffs(terms)
    p2 = intpoly_mul(pent, pent)[:terms]
    p4 = intpoly_mul(p2, p2)[:terms]
    p8 = intpoly_mul(p4, p4)[:terms]
    p16 = intpoly_mul(p8, p8)[:terms]
    return intpoly_mul(p16, p8)[:terms]


def delta_series(terms: int) -> QSeries:
    """Normalized discriminant series q * prod (1-q^n)^24.

    The transcendental (2*pi)^12 prefactor of the analytic discriminant is
    carried symbolically and never enters exact series work.
    """
    if terms < 1:
        raise ValueError("terms must be >= 1")
    return QSeries(1, 1, _delta_unit_coeffs(terms))


def _intlist_inverse(u: list[int], terms: int) -> list[int]:
    """Inverse of a power series with unit constant term, over Z."""
    u0 = u[0]
    if abs(u0) != 1:
        raise ValueError("series inverse needs constant term +-1")
    inv = [u0] + [0] * (terms - 1)
    for k in range(1, terms):
        acc = 0
        for i in range(1, min(k, len(u) - 1) + 1):
            acc += u[i] * inv[k - i]
        inv[k] = -u0 * acc
    return inv


def bernoulli_paper(m: int) -> Fraction:
    """The paper-convention m-th Bernoulli number: |B_(2m)| in modern terms.

    The sign convention is pinned end-to-end by requiring the Eisenstein
    assembly to reproduce j(i) = 1728; see the eisenstein tests.
    """
    return abs(_bernoulli_modern(2 * m))


@lru_cache(maxsize=None)
def _bernoulli_modern(k: int) -> Fraction:
    if k == 0:
        return Fraction(1)
    if k == 1:
        return Fraction(-1, 2)
    if k % 2:
        return Fraction(0)
    # sum_(j=0..k) C(k+1, j) B_j = 0
    acc = Fraction(0)
    binom = 1
    for j in range(k):
        acc += binom * _bernoulli_modern(j)
        binom = binom * (k + 1 - j) // (j + 1)
    return -acc / (k + 1)


def _divisor_power_sums(power: int, terms: int) -> list[int]:
    """sigma_power(n) for n = 0 .. terms-1 (index 0 unused, set to 0)."""
    sig = [0] * terms
    for d in range(1, terms):
        dp = d**power
        for n in range(d, terms, d):
            sig[n] += dp
    return sig


def eisenstein_series(m: int, terms: int) -> QSeries:
    """Normalized weight-2m Eisenstein bracket: B_m + 4m(-1)^m sum sigma q^n.

    Rational coefficients; the (2*pi)^(2m) / (2m)! prefactor stays symbolic.
    """
    if m < 2:
        raise ValueError("Eisenstein index must be >= 2")
    if terms < 1:
        raise ValueError("terms must be >= 1")
    sig = _divisor_power_sums(2 * m - 1, terms)
    factor = 4 * m * (-1) ** m
    coeffs = [bernoulli_paper(m)] + [Fraction(factor * s) for s in sig[1:terms]]
    return QSeries(1, 0, coeffs)


def e4_coeffs(terms: int) -> list[int]:
    """1 + 240 sum sigma_3(n) q^n (the Eisenstein bracket over its constant)."""
    sig = _divisor_power_sums(3, terms)
    return [1] + [240 * s for s in sig[1:terms]]


def e6_coeffs(terms: int) -> list[int]:
    """1 - 504 sum sigma_5(n) q^n."""
    sig = _divisor_power_sums(5, terms)
    return [1] + [-504 * s for s in sig[1:terms]]


def j_series(terms: int) -> QSeries:
    """q^(-1) + 744 + 196884 q + ... as an exact integer series.

    Computed as E4^3 divided by the normalized discriminant; `terms`
    coefficients covering exponents -1 .. terms-2.
    """
    if terms < 1:
        raise ValueError("terms must be >= 1")
    e4 = e4_coeffs(terms)
    e4_cubed = intpoly_mul(intpoly_mul(e4, e4)[:terms], e4)[:terms]
    inv_unit = _intlist_inverse(_delta_unit_coeffs(terms), terms)
    coeffs = intpoly_mul(e4_cubed, inv_unit)[:terms]
    return QSeries(1, -1, coeffs)


def substitute_conjugate(series: QSeries, a: int, b: int, d: int, level: int) -> QSeries:
    """Apply the triangular substitution omega -> (a*omega + b)/d.

    Exponents map n -> a*n/d and coefficients pick up the root of unity
    zeta_level^(a*b*n); the output lives in q^(1/d) with coefficients in
    Z[zeta_level].  Requires a*d = level and an integer-coefficient input.
    """
    if series.ell != 1:
        raise ValueError("substitution is defined on integer-exponent series")
    if a * d != level:
        raise ValueError("need a*d = level")
    zero = CycInt.from_int(level, 0)
    coeffs = [zero] * (a * (len(series.coeffs) - 1) + 1)
    for idx, c in enumerate(series.coeffs):
        n = series.n0 + idx
        if isinstance(c, Fraction):
            if c.denominator != 1:
                raise ValueError("substitution needs integer coefficients")
            c = int(c)
        if c:
            coeffs[a * idx] = CycInt.zeta_power(level, a * b * n) * c
    return QSeries(d, a * series.n0, coeffs, level)


def series_to_j_polynomial(series: QSeries, jq: QSeries) -> IntPolynomial:
    """Rewrite an entire modular-function series as a polynomial in j.

    Repeatedly kills the most negative exponent -k with (coefficient) * j^k;
    afterwards every coefficient through the valid order must vanish, or the
    truncation budget was too small (ReductionFailure).
    """
    work = series.to_integer_coeffs() if series.level else series
    if work.ell != 1 or jq.ell != 1:
        raise ValueError("reduction works on integer-exponent series")
    if work.valid_order < 0 or jq.valid_order < 0:
        raise ReductionFailure("series window does not reach the constant term")
    poly: dict[int, int] = {}
    jpowers = {1: jq}

    def jpow(k):
        if k not in jpowers:
            jpowers[k] = jpow(k - 1) * jq
        p = jpowers[k]
        if p.valid_order < 0:
            raise ReductionFailure("j-series budget too small for pole order"
                                   f" {k}")
        return p

    while True:
        lo = work.lowest_exponent()
        if lo is None or lo > 0:
            break
        c = work.coefficient(lo)
        if isinstance(c, Fraction):
            if c.denominator != 1:
                raise ReductionFailure("non-integer coefficient in reduction")
            c = int(c)
        if lo == 0:
            poly[0] = poly.get(0, 0) + c
            # a constant is exact: give it the full window so the residual
            # check below still covers every valid order
            const = QSeries(1, 0, [c] + [0] * (work.valid_order - 0))
            work = work - const
            continue
        k = -lo
        poly[k] = poly.get(k, 0) + c
        work = work - jpow(k).scale(c)
    for n in range(work.n0, work.valid_order + 1):
        if not _is_zero_coeff(work.coefficient(n)):
            raise ReductionFailure(
                f"nonzero residual {work.coefficient(n)} at q^{n}; "
                "increase the truncation budget"
            )
    if not poly:
        return IntPolynomial()
    coeffs = [0] * (max(poly) + 1)
    for k, c in poly.items():
        coeffs[k] = c
    return IntPolynomial(coeffs)
