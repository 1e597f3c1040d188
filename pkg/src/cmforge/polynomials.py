"""Exact univariate/bivariate polynomials with arbitrary-precision integers.

IntPolynomial is dense (coefficient list, lowest power first), BiPolynomial
is sparse (dict keyed by (i, j) for X^i Y^j).  Multiplication of integer
coefficient lists goes through Kronecker substitution: pack the lists into
two huge integers, let CPython's big-int multiply do the convolution, then
read the signed digits back out.  At the coefficient sizes produced by the
modular-polynomial construction this is orders of magnitude faster than a
schoolbook loop.
"""

from __future__ import annotations

from fractions import Fraction


def _pack_nonneg(coeffs, width_bytes):
    return int.from_bytes(
        b"".join(c.to_bytes(width_bytes, "little") for c in coeffs), "little"
    )


def intpoly_mul(a: list[int], b: list[int]) -> list[int]:
    """Convolution of two integer coefficient lists (lowest power first)."""
    if not a or not b:
        return []
    ma = max(abs(x) for x in a)
    mb = max(abs(x) for x in b)
    n_out = len(a) + len(b) - 1
    if ma == 0 or mb == 0:
        return [0] * n_out
    if len(a) == 1:
        return [a[0] * x for x in b]
    if len(b) == 1:
        return [b[0] * x for x in a]
    # digit width: room for the largest convolution coefficient plus sign bit
    bits = (ma * mb * min(len(a), len(b))).bit_length() + 2
    width_bytes = (bits + 7) // 8
    bits = 8 * width_bytes
    packed_a = _pack_nonneg([x if x > 0 else 0 for x in a], width_bytes) - _pack_nonneg(
        [-x if x < 0 else 0 for x in a], width_bytes
    )
    packed_b = _pack_nonneg([x if x > 0 else 0 for x in b], width_bytes) - _pack_nonneg(
        [-x if x < 0 else 0 for x in b], width_bytes
    )
    prod = packed_a * packed_b
    # balanced-digit extraction recovers signed coefficients
    out = []
    mask = (1 << bits) - 1
    half = 1 << (bits - 1)
    for _ in range(n_out):
        d = prod & mask
        if d >= half:
            d -= 1 << bits
        out.append(d)
        prod = (prod - d) >> bits
    return out


def _trim(coeffs):
    n = len(coeffs)
    while n > 0 and coeffs[n - 1] == 0:
        n -= 1
    return list(coeffs[:n])


class IntPolynomial:
    """Univariate polynomial over Z, coefficients lowest power first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        self.coeffs = _trim([int(c) for c in coeffs])

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1):
        return cls([0] * degree + [coeff])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: int) -> int:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return 0

    def __eq__(self, other):
        if isinstance(other, int):
            other = IntPolynomial([other])
        return isinstance(other, IntPolynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(self.coeffs))

    def __add__(self, other):
        if isinstance(other, int):
            other = IntPolynomial([other])
        n = max(len(self.coeffs), len(other.coeffs))
        return IntPolynomial(
            [self[k] + other[k] for k in range(n)]
        )

    def __neg__(self):
        return IntPolynomial([-c for c in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, int):
            other = IntPolynomial([other])
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPolynomial([other * c for c in self.coeffs])
        return IntPolynomial(intpoly_mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = IntPolynomial([1])
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def divmod_exact(self, divisor: "IntPolynomial"):
        """Polynomial division over Z; requires the divisor monic or +-1-led.

        Returns (quotient, remainder).  Used for the divisibility checks
        where the divisor is a monic class polynomial.
        """
        lead = divisor.coeffs[-1]
        if abs(lead) != 1:
            raise ValueError("division over Z needs a unit leading coefficient")
        rem = list(self.coeffs)
        dd = divisor.degree
        q = [0] * max(len(rem) - dd, 0)
        for k in range(len(rem) - 1, dd - 1, -1):
            c = rem[k] * lead  # lead is +-1, this divides exactly
            if c:
                q[k - dd] = c
                for i, d in enumerate(divisor.coeffs):
                    rem[k - dd + i] -= c * d
        return IntPolynomial(q), IntPolynomial(rem)

    def divides(self, other: "IntPolynomial") -> bool:
        """True iff self divides other exactly over Z (self monic-unit-led)."""
        _, rem = other.divmod_exact(self)
        return rem.is_zero()

    def mod_small_prime(self, p: int) -> list[int]:
        return [c % p for c in self.coeffs]

    def __str__(self):
        return self.format("X")

    def format(self, var: str) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            if k == 0:
                term = str(abs(c))
            else:
                mag = "" if abs(c) == 1 else f"{abs(c)}*"
                term = f"{mag}{var}" + (f"^{k}" if k > 1 else "")
            if not parts:
                parts.append(("-" if c < 0 else "") + term)
            else:
                parts.append(("- " if c < 0 else "+ ") + term)
        return " ".join(parts)

    def __repr__(self):
        return f"IntPolynomial({self.coeffs!r})"


class BiPolynomial:
    """Polynomial in X and Y over Z, sparse dict keyed by (x_power, y_power)."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for key, c in dict(terms).items():
                if c:
                    self.terms[(int(key[0]), int(key[1]))] = int(c)

    def coefficient(self, i: int, j: int) -> int:
        return self.terms.get((i, j), 0)

    @property
    def degree_x(self) -> int:
        return max((i for i, _ in self.terms), default=-1)

    @property
    def degree_y(self) -> int:
        return max((j for _, j in self.terms), default=-1)

    def x_coefficient(self, i: int) -> IntPolynomial:
        """Coefficient of X^i as a polynomial in Y."""
        out = {}
        for (a, b), c in self.terms.items():
            if a == i:
                out[b] = c
        if not out:
            return IntPolynomial()
        coeffs = [0] * (max(out) + 1)
        for b, c in out.items():
            coeffs[b] = c
        return IntPolynomial(coeffs)

    def diagonal(self) -> IntPolynomial:
        """The univariate polynomial F(X, X)."""
        out = {}
        for (a, b), c in self.terms.items():
            out[a + b] = out.get(a + b, 0) + c
        if not out:
            return IntPolynomial()
        coeffs = [0] * (max(out) + 1)
        for k, c in out.items():
            coeffs[k] = c
        return IntPolynomial(coeffs)

    def is_symmetric(self) -> bool:
        return all(self.coefficient(j, i) == c for (i, j), c in self.terms.items())

    def reduce_mod(self, p: int) -> dict:
        out = {}
        for key, c in self.terms.items():
            r = c % p
            if r:
                out[key] = r
        return out

    def __eq__(self, other):
        return isinstance(other, BiPolynomial) and self.terms == other.terms

    def __call__(self, x, y):
        acc = 0
        for (i, j), c in self.terms.items():
            acc += c * x**i * y**j
        return acc

    def evaluate_y(self, y):
        """Collapse Y to a value; returns {x_power: coefficient}."""
        out = {}
        for (i, j), c in self.terms.items():
            out[i] = out.get(i, 0) + c * y**j
        return out

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (i, j) in sorted(self.terms, key=lambda k: (-k[0], -k[1])):
            c = self.terms[(i, j)]
            factors = []
            if abs(c) != 1 or (i == 0 and j == 0):
                factors.append(str(abs(c)))
            if i:
                factors.append("X" + (f"^{i}" if i > 1 else ""))
            if j:
                factors.append("Y" + (f"^{j}" if j > 1 else ""))
            term = "*".join(factors)
            if not parts:
                parts.append(("-" if c < 0 else "") + term)
            else:
                parts.append(("- " if c < 0 else "+ ") + term)
        return " ".join(parts)

    def __repr__(self):
        return f"BiPolynomial({self.terms!r})"


class RationalPolynomial:
    """Univariate polynomial over Q; thin carrier for division polynomials."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [Fraction(c) for c in coeffs]
        n = len(cs)
        while n > 0 and cs[n - 1] == 0:
            n -= 1
        self.coeffs = cs[:n]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k):
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def __eq__(self, other):
        return isinstance(other, RationalPolynomial) and self.coeffs == other.coeffs

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __repr__(self):
        return f"RationalPolynomial({self.coeffs!r})"
