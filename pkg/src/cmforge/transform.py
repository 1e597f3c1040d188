"""Transformation matrices of determinant s and the exact polynomials
J_s(X, Y) and Phi_s(X, Y).

Construction is pure symmetric-function arithmetic on conjugate q-series:
expand prod_nu (X - f(S_nu omega)) with coefficients in Z[zeta_s][[q^(1/s)]],
observe that every X-coefficient collapses to a rational-integer series in
integer powers of q, and rewrite each one as a polynomial in j.  A floating
interpolation route exists in the tests as the independent oracle; it is
never used here.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from .errors import BudgetTooSmall, ReductionFailure, SquareLevel, UnsupportedLevel
from .modforms import delta_value
from .numerics import BigComplex, context
from .polynomials import BiPolynomial
from .qseries import (
    QSeries,
    _intlist_inverse,
    _delta_unit_coeffs,
    delta_series,
    j_series,
    series_to_j_polynomial,
    substitute_conjugate,
)

MAX_EXACT_LEVEL = 7


@dataclass(frozen=True)
class PrimMatrix:
    """Integer matrix of positive determinant acting on the upper half-plane.

    Representative enumeration only ever produces primitive matrices
    (content one); phi_value also accepts imprimitive ones and applies the
    content-scaling rule.
    """

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.det <= 0:
            raise ValueError("transformation matrices need positive determinant")

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def content(self) -> int:
        return gcd(gcd(self.a, self.b), gcd(self.c, self.d))

    def is_primitive(self) -> bool:
        return self.content == 1

    def primitive_part(self) -> "PrimMatrix":
        r = self.content
        return PrimMatrix(self.a // r, self.b // r, self.c // r, self.d // r)

    def apply(self, tau: BigComplex) -> BigComplex:
        from .numerics import precision_of

        with context(precision_of(tau)):
            return (self.a * tau + self.b) / (self.c * tau + self.d)


def representatives(s: int) -> list[PrimMatrix]:
    """Triangular representatives (a, b; 0, d): ad = s, 0 <= b < d, (a,b,d)=1."""
    if s < 1:
        raise ValueError("level must be positive")
    reps = []
    for a in range(1, s + 1):
        if s % a:
            continue
        d = s // a
        for b in range(d):
            if gcd(gcd(a, b), d) == 1:
                reps.append(PrimMatrix(a, b, 0, d))
    return reps


def psi(s: int) -> int:
    """Number of equivalence classes of primitive determinant-s matrices."""
    return len(representatives(s))


def default_budget(s: int) -> int:
    return (psi(s) + 1) * (s + 1) + 16


def _monic_product(conjugates: list[QSeries]) -> list[QSeries]:
    """Lower coefficients of prod (X - f_nu); the X^n coefficient 1 is implicit."""
    coeffs: list[QSeries] = []
    for f in conjugates:
        k = len(coeffs)
        new = []
        for i in range(k + 1):
            if i == 0:
                new.append(-(f * coeffs[0]) if k else -f)
            elif i < k:
                new.append(coeffs[i - 1] - f * coeffs[i])
            else:
                new.append(coeffs[k - 1] - f)
        coeffs = new
    return coeffs


def _assemble(coeffs: list[QSeries], jq: QSeries, degree: int) -> BiPolynomial:
    terms = {(degree, 0): 1}
    for i, series in enumerate(coeffs):
        try:
            flat = series.descend(1)
            poly = series_to_j_polynomial(flat, jq)
        except ReductionFailure as exc:
            raise BudgetTooSmall(
                f"X^{i} coefficient did not reduce: {exc}"
            ) from exc
        for jdeg, c in enumerate(poly.coeffs):
            if c:
                terms[(i, jdeg)] = c
    return BiPolynomial(terms)


def _check_level(s: int):
    if not 1 <= s <= MAX_EXACT_LEVEL:
        raise UnsupportedLevel(
            f"exact transformation polynomials are limited to s <= {MAX_EXACT_LEVEL}"
        )


@lru_cache(maxsize=None)
def modular_polynomial_J(s: int, budget: int | None = None) -> BiPolynomial:
    """The exact transformation polynomial J_s(X, Y) = prod (X - j(S_nu)).

    Results are memoized; BiPolynomial values are treated as immutable.
    """
    _check_level(s)
    if budget is None:
        budget = default_budget(s)
    if budget < default_budget(s):
        raise BudgetTooSmall(
            f"budget {budget} below the safe bound {default_budget(s)} for s={s}"
        )
    jq = j_series(budget)
    conjugates = [
        substitute_conjugate(jq, m.a, m.b, m.d, s) for m in representatives(s)
    ]
    coeffs = _monic_product(conjugates)
    return _assemble(coeffs, jq, psi(s))


@lru_cache(maxsize=None)
def phi_polynomial(s: int, budget: int | None = None) -> BiPolynomial:
    """The exact principal polynomial Phi_s(X, Y) of the Delta quotients."""
    _check_level(s)
    if budget is None:
        budget = default_budget(s)
    if budget < default_budget(s):
        raise BudgetTooSmall(
            f"budget {budget} below the safe bound {default_budget(s)} for s={s}"
        )
    dn = delta_series(budget)
    inv_dn = QSeries(1, -1, _intlist_inverse(_delta_unit_coeffs(budget), budget))
    conjugates = []
    for m in representatives(s):
        conj = substitute_conjugate(dn, m.a, m.b, m.d, s) * inv_dn
        conjugates.append(conj.scale(m.a**12))
    coeffs = _monic_product(conjugates)
    jq = j_series(budget)
    return _assemble(coeffs, jq, psi(s))


def kronecker_congruence_check(p: int, budget: int | None = None) -> bool:
    """J_p(X, Y) = (X^p - Y)(X - Y^p) modulo p, as exact polynomials."""
    jp = modular_polynomial_J(p, budget)
    target = BiPolynomial(
        {(p + 1, 0): 1, (p, p): -1, (1, 1): -1, (0, p + 1): 1}
    )
    return jp.reduce_mod(p) == target.reduce_mod(p)


def phi_value(S: PrimMatrix, tau: BigComplex, p_bits: int) -> BigComplex:
    """Numeric phi_S(tau) = s^12 Delta(S(tau,1)) / Delta(tau,1).

    Imprimitive S = r S0 scale as phi_S = r^12 phi_S0.
    """
    r = S.content
    s0 = S.primitive_part()
    wp = p_bits + 32
    with context(wp):
        num = delta_value(s0.apply(tau), wp) / (s0.c * tau + s0.d) ** 12
        den = delta_value(tau, wp)
        result = r**12 * s0.det**12 * num / den
    with context(p_bits):
        return +result


def leading_coefficient_check(s: int) -> bool:
    """Leading coefficient of J_s(X, X) is +-1 for non-square s."""
    root = int(s**0.5)
    if root * root == s:
        raise SquareLevel(f"{s} is a perfect square")
    diag = modular_polynomial_J(s).diagonal()
    return abs(diag.coeffs[-1]) == 1


def phi_constant_term(s: int, budget: int | None = None) -> int:
    """Constant coefficient B_0 of Phi_s (a pure integer; p^12 for prime s)."""
    phi = phi_polynomial(s, budget)
    const = phi.x_coefficient(0)
    if const.degree > 0:
        raise ReductionFailure("Phi constant term is not constant in j")
    return const[0]
