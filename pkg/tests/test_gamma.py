from fractions import Fraction

import pytest

from epslocal.gamma import (
    GammaQuery,
    coprime_factorial,
    coprime_factorial_naive,
    gamma_p,
    gamma_ratio_factorial,
    gamma_ratio_mod_p,
    least_x0,
)


def _gamma_int(n, p, k):
    out = 1
    for j in range(1, n):
        if j % p:
            out *= j
    return ((-1) ** n * out) % p**k


def test_integer_values():
    for p in (3, 5, 7):
        for n in range(0, 30):
            assert gamma_p(n, p, 6).to_int() % p**6 == _gamma_int(n, p, 6)


def test_block_product_matches_naive():
    for p in (3, 5, 7, 11):
        for n in (1, 17, 100, 1234):
            assert coprime_factorial(n, p, 5) == coprime_factorial_naive(n, p, 5)


def test_naive_flag_agrees():
    z = Fraction(2, 3)
    assert gamma_p(z, 5, 6) == gamma_p(z, 5, 6, naive=True)


def test_half():
    for p in (3, 5, 7, 11, 13):
        g = gamma_p(Fraction(1, 2), p, 8)
        assert (g * g).to_int() % p**8 == (-1) ** ((p + 1) // 2) % p**8


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        GammaQuery(Fraction(1, 7), 7)
    with pytest.raises(ValueError):
        GammaQuery(Fraction(1, 3), 2)


def test_least_x0():
    assert least_x0(3, 7) == 6
    for m, p in [(3, 7), (5, 11), (3, 13)]:
        x0 = least_x0(m, p)
        assert (2 * m * x0) % p == 1 and 0 < x0 < p


@pytest.mark.parametrize("m,p", [(3, 7), (3, 13), (5, 11), (3, 19), (7, 29), (5, 31), (15, 31)])
def test_factorial_formula(m, p):
    assert gamma_ratio_factorial(m, p) == gamma_ratio_mod_p(m, p)
