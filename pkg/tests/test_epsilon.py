import cmath
from math import gcd
from fractions import Fraction

import pytest
from sympy import primitive_root

from epslocal.characters import canonical_add_char, ff_char, ramified_chars
from epslocal.cyclotomic import CycloElement, complex_embed, sqrt_int
from epslocal.epsilon import (
    ApMonomial,
    EpsilonValue,
    PreconditionError,
    TheoremRecord,
    davenport_hasse_check,
    deligne_twist_check,
    epsilon_factor,
    epsilon_property_check,
    gauss_sum_finite,
    local_gauss_sum,
    quadratic_twist,
    tame_character,
    tame_ratio,
    tame_ratios_local,
    tame_route,
    tate_constant,
    trivial_char,
)
from epslocal.residue import LocalField, base_field, make_finite_field


def _gauss_float(p, j):
    g = primitive_root(p)
    return sum(cmath.exp(2j * cmath.pi * (j * k / (p - 1) + pow(g, k, p) / p)) for k in range(p - 1))


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_gauss_sum_matches_float_sum(p):
    F = make_finite_field(p, 1)
    for j in range(p - 1):
        assert abs(complex_embed(gauss_sum_finite(ff_char(F, j))) - _gauss_float(p, j)) < 1e-9


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17])
def test_quadratic_gauss_sum(p):
    g = gauss_sum_finite(ff_char(make_finite_field(p, 1), (p - 1) // 2))
    s = sqrt_int(p)
    assert g == (s if p % 4 == 1 else s * CycloElement.zeta(4))


def test_trivial_gauss_sum():
    assert gauss_sum_finite(ff_char(make_finite_field(3, 2), 0)) == CycloElement.integer(-1)


def test_gauss_sum_scale():
    F = make_finite_field(7, 1)
    chi = ff_char(F, 1)
    for a in range(1, 7):
        assert gauss_sum_finite(chi, a) == gauss_sum_finite(chi) * chi.inverse().value(a)


def test_gauss_sum_rejects_trivial_psi():
    with pytest.raises(ValueError):
        gauss_sum_finite(ff_char(make_finite_field(5, 1), 1), 5)


def test_davenport_hasse_small():
    for p in (2, 3, 5):
        for j in range(p - 1):
            assert davenport_hasse_check(ff_char(make_finite_field(p, 1), j), 2).equal
    assert davenport_hasse_check(ff_char(make_finite_field(3, 1), 1), 3).equal


def test_epsilon_value_arithmetic():
    a = EpsilonValue(CycloElement.zeta(4), 5, 1)
    assert a * a.inverse() == EpsilonValue(CycloElement.integer(1), 5, 0)
    assert EpsilonValue(CycloElement.integer(5), 5, 2) == EpsilonValue(CycloElement.integer(1), 5, 0)
    assert abs(a.to_complex() - 1j / 5**0.5) < 1e-12


@pytest.mark.parametrize("p", [3, 5, 7])
def test_epsilon_is_unimodular(p):
    F = base_field(p)
    phi = canonical_add_char(F, -1)
    for a in (1, 2):
        for chi in ramified_chars(F, a):
            e = epsilon_factor(chi, phi).exact()
            assert (e * e.conj()).as_rational() == 1


def test_local_gauss_sum_coset_independence():
    F = base_field(5)
    phi = canonical_add_char(F, -1)
    for chi in ramified_chars(F, 2):
        assert local_gauss_sum(chi, phi, check=True) == local_gauss_sum(chi, phi, check=False)


def test_epsilon_q_power():
    F = base_field(5)
    phi = canonical_add_char(F, 0)
    chi = list(ramified_chars(F, 1))[0]
    assert epsilon_factor(chi, phi).q_half_power == 1


def test_property_1():
    F = base_field(5)
    phi = canonical_add_char(F, -1)
    for chi in list(ramified_chars(F, 2))[:4]:
        for a in (3, 7, 15):
            assert epsilon_property_check(1, chi, phi, a=F.elt(Fraction(a))).equal


def test_property_2():
    F = base_field(7)
    phi = canonical_add_char(F, -1)
    theta = trivial_char(F).with_unif(Fraction(1, 3))
    for chi in ramified_chars(F, 1):
        assert epsilon_property_check(2, chi, phi, theta=theta).equal


@pytest.mark.parametrize("t", [2, 5, 10])
def test_property_3(t):
    F = base_field(5)
    phi = canonical_add_char(F, -1)
    for theta in list(ramified_chars(F, 1)) + [trivial_char(F).with_unif(Fraction(1, 4))]:
        assert epsilon_property_check(3, phi=phi, theta=theta, K=LocalField(5, t)).equal


def test_deligne_precondition():
    F = base_field(5)
    phi = canonical_add_char(F, -1)
    alpha = list(ramified_chars(F, 2))[0]
    beta = list(ramified_chars(F, 2))[1]
    with pytest.raises(PreconditionError):
        deligne_twist_check(alpha, beta, phi)


def test_deligne_small():
    F = base_field(5)
    phi = canonical_add_char(F, -1)
    betas = list(ramified_chars(F, 1))
    for alpha in list(ramified_chars(F, 2))[:6]:
        for beta in betas:
            assert deligne_twist_check(alpha, beta, phi).equal


def test_tate_constant_at_half():
    F = base_field(7)
    phi = canonical_add_char(F, -1)
    for chi in list(ramified_chars(F, 2))[:5]:
        chi = chi.with_unif(Fraction(0))
        tc = tate_constant(chi, phi)
        assert tc.exponent == 1
        assert tc.at_half() == epsilon_factor(chi, phi)
    with pytest.raises(ValueError):
        tate_constant(chi, canonical_add_char(F, 0))


def test_ap_monomial():
    m = ApMonomial.of(-1, 5, 1, 3)
    assert (m * m.inverse()) == ApMonomial.of(1, 5)
    assert m ** 2 == ApMonomial.of(1, 5, 2, 6)
    assert ApMonomial.of(5, 5, 0, 0) == ApMonomial.of(1, 5, 0, 2)
    assert str(ApMonomial.of(1, 5, 1, 0)) == "1 * a_5^1"


def test_record_json_sorted():
    r = TheoremRecord("x", {"b": 1, "a": 2}, "1", "1", True, {"n_phi": -1})
    assert r.to_json().startswith('{"closed_form":"1","convention"')


def test_quadratic_twist_p2():
    for t in (-1, 2, -2):
        chi = quadratic_twist(2, t)
        assert chi.order == 2
    with pytest.raises(ValueError):
        quadratic_twist(2, 3)


def _key(x):
    z = complex_embed(x)
    return round(z.real, 9), round(z.imag, 9)


def test_tame_oracles_agree():
    for p, m in [(3, 8), (5, 12), (5, 6), (7, 16)]:
        q1 = p * p - 1
        n = sum(1 for j in range(q1) if q1 // gcd(j, q1) == m)
        finite = [tame_ratio(tame_character(p, m, i)) for i in range(n)]
        assert sorted(map(_key, tame_ratios_local(p, m))) == sorted(map(_key, finite))


def test_tame_route():
    assert tame_route(2, 3)[0] == 1
    assert tame_route(7, 3) == ("gap", "evenodd(2)")
    assert tame_route(5, 3) == (-1, "appstkl m odd, p=1 mod 4")
    assert tame_route(7, 8)[1] == "appstkl m even, p=3 mod 4, (p+1)/m odd"
    assert tame_route(11, 3) == (None, "theorem silent")
