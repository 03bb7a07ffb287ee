from fractions import Fraction

import pytest

from epslocal.cyclotomic import (
    CycloElement,
    complex_embed,
    cyclotomic_polynomial,
    fixed_generator,
    galois_conjugate,
    padic_embed,
    phi,
    sqrt_int,
)
from epslocal.padic import build_extension


def test_cyclotomic_polynomial():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert len(cyclotomic_polynomial(12)) == phi(12) + 1


def test_zeta_relations():
    z = CycloElement.zeta(5)
    one = CycloElement.integer(1)
    assert z**5 == one
    assert sum((z**k for k in range(5)), CycloElement.zero()) == CycloElement.zero()
    assert (z * z.conj()).as_rational() == 1


def test_equality_across_orders():
    z = CycloElement.zeta(5)
    assert z.inflate(15) == z
    assert z.inflate(15).restrict(5) == z
    assert CycloElement.zeta(12, 3) == CycloElement.zeta(4)
    assert CycloElement.root_of_unity(Fraction(1, 4)) == CycloElement.zeta(4)


def test_minimal_order():
    assert CycloElement.zeta(30, 6).minimal_order() == 5
    assert CycloElement.zeta(2).minimal_order() in (1, 2)


def test_sqrt_int():
    for n in (1, 2, 3, 5, 7, 11, 13, 49):
        s = sqrt_int(n)
        assert (s * s).as_rational() == n
        assert complex_embed(s).real > 0
    with pytest.raises(ValueError):
        sqrt_int(-3)
    with pytest.raises(ValueError):
        sqrt_int(6)


def test_galois_conjugate():
    z = CycloElement.zeta(7)
    assert galois_conjugate(z, 3) == z**3
    assert galois_conjugate(z, -1) == z.conj()


def test_complex_embed():
    z = complex_embed(CycloElement.zeta(4))
    assert abs(z - 1j) < 1e-12


def test_power_coords():
    z = CycloElement.zeta(6)
    assert z.power_coords() == (0, 1)
    assert (z * z).power_coords() == (-1, 1)


def test_fixed_generator():
    assert fixed_generator(7) == 3
    assert fixed_generator(5) == 2


def test_padic_embed_is_ring_map():
    R = build_extension(5, 20)
    i = padic_embed(CycloElement.zeta(4), 5, ring=R)
    assert (i * i + R.one()).is_zero
    z = padic_embed(CycloElement.zeta(5), 5, ring=R)
    assert (z - R.zeta_p).is_zero
    a, b = CycloElement.zeta(20, 3), CycloElement.zeta(20, 7) + CycloElement.integer(2)
    lhs = padic_embed(a * b, 5, ring=R)
    rhs = padic_embed(a, 5, ring=R) * padic_embed(b, 5, ring=R)
    assert (lhs - rhs).is_zero
