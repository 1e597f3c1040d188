import random

import pytest
from gmpy2 import mpc, mpfr

from cmforge.errors import BudgetTooSmall, SquareLevel, UnsupportedLevel
from cmforge.modforms import j_value
from cmforge.numerics import complex_value, context
from cmforge.polynomials import BiPolynomial
from cmforge.transform import (
    PrimMatrix,
    default_budget,
    kronecker_congruence_check,
    leading_coefficient_check,
    modular_polynomial_J,
    phi_constant_term,
    phi_polynomial,
    phi_value,
    psi,
    representatives,
)

from oracles import interpolated_modular_polynomial


def test_representatives_level_1_and_2():
    assert [(m.a, m.b, m.d) for m in representatives(1)] == [(1, 0, 1)]
    assert {(m.a, m.b, m.d) for m in representatives(2)} == {
        (1, 0, 2), (1, 1, 2), (2, 0, 1)
    }


def test_representatives_are_primitive_triangular():
    for s in range(1, 13):
        for m in representatives(s):
            assert m.c == 0 and m.a > 0 and m.a * m.d == s
            assert 0 <= m.b < m.d
            assert m.is_primitive()


def test_psi_values():
    assert psi(1) == 1
    assert psi(2) == 3
    assert psi(3) == 4
    assert psi(4) == 6
    assert psi(6) == 12
    # multiplicativity on coprime levels
    assert psi(6) == psi(2) * psi(3)
    assert psi(10) == psi(2) * psi(5)


def test_J1():
    assert modular_polynomial_J(1) == BiPolynomial({(1, 0): 1, (0, 1): -1})


def test_J2_against_interpolation_oracle():
    assert modular_polynomial_J(2).terms == interpolated_modular_polynomial(2)


def test_J3_against_interpolation_oracle():
    assert modular_polynomial_J(3).terms == interpolated_modular_polynomial(3)


def test_J2_frozen_coefficients():
    j2 = modular_polynomial_J(2)
    assert j2.coefficient(2, 2) == -1
    assert j2.coefficient(1, 1) == 40773375
    assert j2.coefficient(0, 0) == -157464000000000


def test_J_symmetry():
    assert modular_polynomial_J(2).is_symmetric()
    assert modular_polynomial_J(3).is_symmetric()


def test_J_symmetry_higher_levels():
    assert modular_polynomial_J(4).is_symmetric()
    assert modular_polynomial_J(5).is_symmetric()


def test_J_vanishes_at_conjugate_pairs():
    rnd = random.Random(8)
    for s in (2, 3):
        js = modular_polynomial_J(s)
        with context(256):
            tau = complex_value(rnd.uniform(-0.3, 0.3), rnd.uniform(0.9, 1.3), 256)
            jt = j_value(tau, 192)
            conj = [j_value(m.apply(tau), 192) for m in representatives(s)]
            scale = max([mpfr(1), abs(jt)] + [abs(v) for v in conj]) ** (psi(s) + 1)
            for v in conj:
                assert abs(js(v, jt)) < scale * mpfr(2) ** -(192 - 48)


def test_phi_vanishes_at_conjugates():
    rnd = random.Random(18)
    s = 2
    phi = phi_polynomial(s)
    with context(256):
        tau = complex_value(rnd.uniform(-0.3, 0.3), rnd.uniform(0.9, 1.3), 256)
        jt = j_value(tau, 192)
        for m in representatives(s):
            val = phi(phi_value(m, tau, 192), jt)
            scale = max(mpfr(1), abs(jt)) ** (psi(s) + 1)
            assert abs(val) < scale * mpfr(2) ** -(192 - 48)


def test_phi_constant_terms_prime():
    assert phi_constant_term(2) == 2**12
    assert phi_constant_term(3) == 3**12
    assert phi_constant_term(5) == 5**12


def test_phi_constant_term_composite_sign_recorded():
    # Eq-17-style statement: +- product of a^12; the computed sign is what
    # the artifact records
    for s in (4, 6):
        prod = 1
        for m in representatives(s):
            prod *= m.a**12
        assert abs(phi_constant_term(s)) == prod


def test_phi_degree():
    assert phi_polynomial(2).degree_x == psi(2) == 3


def test_kronecker_congruence():
    assert kronecker_congruence_check(2)
    assert kronecker_congruence_check(3)


def test_kronecker_wrong_modulus_fails():
    j2 = modular_polynomial_J(2)
    target = BiPolynomial({(4, 0): 1, (3, 3): -1, (1, 1): -1, (0, 4): 1})
    assert j2.reduce_mod(3) != target.reduce_mod(3)


def test_phi_value_identity_and_scalar():
    with context(200):
        tau = complex_value(0.21, 1.05, 200)
        one = phi_value(PrimMatrix(1, 0, 0, 1), tau, 150)
        assert abs(one - 1) < mpfr(2) ** -120
        for p in (2, 3):
            scaled = phi_value(PrimMatrix(p, 0, 0, p), tau, 150)
            assert abs(scaled - p**12) < p**12 * mpfr(2) ** -120


def test_phi_product_identity_at_i():
    # prod over the p+1 ccanonical representatives equals p^12 identically
    p = 5
    with context(224):
        tau = complex_value(0, 1, 224)
        prod = mpc(1)
        for nu in range(p):
            prod *= phi_value(PrimMatrix(1, nu, 0, p), tau, 192)
        prod *= phi_value(PrimMatrix(p, 0, 0, 1), tau, 192)
        assert abs(prod - 5**12) < 5**12 * mpfr(2) ** -64


def test_leading_coefficient():
    assert leading_coefficient_check(2)
    assert leading_coefficient_check(3)
    with pytest.raises(SquareLevel):
        leading_coefficient_check(4)


def test_unsupported_level():
    with pytest.raises(UnsupportedLevel):
        modular_polynomial_J(8)
    with pytest.raises(UnsupportedLevel):
        phi_polynomial(9)


def test_budget_too_small():
    with pytest.raises(BudgetTooSmall):
        modular_polynomial_J(2, budget=5)


def test_prim_matrix_content():
    m = PrimMatrix(4, 2, 0, 6)
    assert m.content == 2
    assert m.primitive_part() == PrimMatrix(2, 1, 0, 3)
    with pytest.raises(ValueError):
        PrimMatrix(1, 0, 0, -1)


def test_default_budget_formula():
    assert default_budget(2) == (psi(2) + 1) * 3 + 16
