import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cmforge.errors import ConductorDivisor, NoSquareRoot
from cmforge.quadratic import (
    ClassGroup,
    Discriminant,
    Form,
    ambiguous_count,
    class_number,
    class_number_ratio_check,
    compose,
    element_order,
    form_to_tau,
    prime_form,
    principal_form,
    reduce,
    reduced_forms,
    splitting_type,
    unit_count,
)

ALL_D = [D for D in range(-3, -401, -1) if D % 4 in (0, 1)]


def test_discriminant_validation():
    with pytest.raises(ValueError):
        Discriminant(-5)
    with pytest.raises(ValueError):
        Discriminant(4)


def test_fundamental_and_conductor():
    assert (Discriminant(-20).fundamental, Discriminant(-20).conductor) == (-20, 1)
    assert (Discriminant(-12).fundamental, Discriminant(-12).conductor) == (-3, 2)
    assert (Discriminant(-28).fundamental, Discriminant(-28).conductor) == (-7, 2)
    assert (Discriminant(-16).fundamental, Discriminant(-16).conductor) == (-4, 2)
    assert (Discriminant(-108).fundamental, Discriminant(-108).conductor) == (-3, 6)


def test_reduce_examples():
    assert reduce(Form(1, 0, 1)) == Form(1, 0, 1)
    assert reduce(Form(3, 2, 1)) == Form(1, 0, 2)
    assert reduce(Form(2, -1, 3)) == Form(2, -1, 3)


def test_reduce_idempotent_and_invariant():
    rnd = random.Random(5)
    for _ in range(200):
        D = rnd.choice(ALL_D)
        f = rnd.choice(reduced_forms(D))
        assert reduce(f) == f
        # act by a random unimodular matrix and reduce back
        x, z, y, w = 1, 0, 0, 1
        for _ in range(rnd.randint(1, 6)):
            n = rnd.randint(-3, 3)
            x, z, y, w = x + n * y, z + n * w, y, w  # T^n
            x, z, y, w = z, -x, w, -y  # S
        a = f(x, y)
        c = f(z, w)
        b = 2 * (f.a * x * z + f.c * y * w) + f.b * (x * w + y * z)
        g = Form(a, b, c) if a > 0 else Form(c, -b, a)
        if g.a > 0:
            assert reduce(g) == f


def test_reduced_forms_examples():
    assert set(reduced_forms(-3)) == {Form(1, 1, 1)}
    assert set(reduced_forms(-23)) == {Form(1, 1, 6), Form(2, 1, 3), Form(2, -1, 3)}
    assert set(reduced_forms(-20)) == {Form(1, 0, 5), Form(2, 2, 3)}


def test_class_numbers():
    assert class_number(-4) == 1
    assert class_number(-3) == 1
    assert class_number(-23) == 3
    # spot checks against the classical table
    assert class_number(-47) == 5
    assert class_number(-71) == 7
    assert class_number(-163) == 1
    assert class_number(-231) == 12


def test_compose_examples():
    f = Form(2, 1, 3)
    assert compose(principal_form(-23), f) == f
    assert compose(f, Form(2, -1, 3)) == Form(1, 1, 6)
    assert compose(f, f) == Form(2, -1, 3)


def test_group_laws_exhaustive():
    rnd = random.Random(17)
    for D in ALL_D:
        forms = reduced_forms(D)
        ident = principal_form(D)
        for f in forms:
            assert compose(ident, f) == f
            assert compose(f, f.inverse()) == ident
        for _ in range(min(10, len(forms) ** 2)):
            x, y, z = rnd.choice(forms), rnd.choice(forms), rnd.choice(forms)
            assert compose(x, y) in forms
            assert compose(compose(x, y), z) == compose(x, compose(y, z))


def test_element_orders():
    assert element_order(principal_form(-23)) == 1
    assert element_order(Form(2, 1, 3)) == 3
    assert element_order(Form(2, 2, 3)) == 2


def test_lagrange_property():
    for D in (-23, -47, -84, -120, -231):
        h = class_number(D)
        for f in reduced_forms(D):
            assert h % element_order(f) == 0


def test_ambiguous_counts():
    assert ambiguous_count(-23) == 1
    assert ambiguous_count(-20) == 2
    assert ambiguous_count(-84) == 4


def test_ambiguous_equals_group_index():
    for D in ALL_D:
        group = ClassGroup(D)
        assert ambiguous_count(D) * len(group.squares()) == group.order


def test_splitting_types():
    assert splitting_type(-4, 5) == "split"
    assert splitting_type(-4, 3) == "inert"
    assert splitting_type(-4, 2) == "ramified"
    with pytest.raises(ConductorDivisor):
        splitting_type(-12, 2)


def test_prime_form_examples():
    assert prime_form(-23, 2) == Form(2, 1, 3)
    assert prime_form(-4, 5) == Form(1, 0, 1)
    assert prime_form(-4, 2) == Form(1, 0, 1)
    with pytest.raises(NoSquareRoot):
        prime_form(-4, 3)


def test_prime_form_times_inverse_is_principal():
    for D, p in ((-23, 2), (-20, 3), (-84, 5), (-71, 3)):
        pf = prime_form(D, p)
        assert compose(pf, pf.inverse()) == principal_form(D)


def test_form_to_tau():
    import gmpy2

    tau = form_to_tau(Form(1, 0, 1), 96)
    assert tau == gmpy2.mpc(0, 1)
    tau = form_to_tau(Form(2, 1, 3), 96)
    with gmpy2.context(precision=96):
        assert abs(tau.real + 0.25) < 2**-90
        assert abs(tau.imag - gmpy2.sqrt(gmpy2.mpfr(23)) / 4) < 2**-90
        # basis quotient satisfies a tau^2 + b tau + c = 0
        assert abs(2 * tau * tau + tau + 3) < 2**-88


def test_unit_counts():
    assert unit_count(-3) == 6
    assert unit_count(-4) == 4
    assert unit_count(-12) == 2
    assert unit_count(-163) == 2


def test_class_number_ratio_inert():
    assert class_number_ratio_check(-3, 2, 1)
    assert class_number_ratio_check(-7, 3, 1)  # 3 inert in Q(sqrt-7)
    assert class_number_ratio_check(-3, 2, 2)


def test_class_number_ratio_ramified():
    assert class_number_ratio_check(-4, 2, 1)
    assert class_number_ratio_check(-8, 2, 1)
    assert class_number_ratio_check(-3, 3, 1)


def test_class_number_ratio_split():
    assert class_number_ratio_check(-7, 2, 1)
    assert class_number_ratio_check(-4, 5, 1)
    assert class_number_ratio_check(-3, 7, 1)


@given(st.sampled_from(ALL_D), st.integers(-6, 6), st.integers(1, 5))
@settings(max_examples=60, deadline=None)
def test_translation_action_preserves_class(D, n, idx):
    forms = reduced_forms(D)
    f = forms[idx % len(forms)]
    # tau -> tau + n: (a, b, c) -> (a, b + 2an, an^2 + bn + c)
    g = Form(f.a, f.b + 2 * f.a * n, f.a * n * n + f.b * n + f.c)
    assert reduce(g) == f
