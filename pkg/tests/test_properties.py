from fractions import Fraction

from hypothesis import assume, given, settings
from hypothesis import strategies as st

from epslocal.characters import canonical_add_char, ff_char, ramified_chars
from epslocal.cyclotomic import CycloElement, complex_embed, galois_conjugate
from epslocal.epsilon import (
    davenport_hasse_check,
    epsilon_factor,
    epsilon_property_check,
    gauss_sum_finite,
    local_gauss_sum,
    trivial_char,
)
from epslocal.gamma import gamma_p
from epslocal.padic import from_rational, vp
from epslocal.residue import LocalField, base_field, make_finite_field, unit_group

odd_primes = st.sampled_from([3, 5, 7, 11, 13])
small_primes = st.sampled_from([2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31])


def cyclo(n):
    return st.lists(st.integers(-5, 5), min_size=n, max_size=n).map(
        lambda cs: sum((CycloElement.zeta(n, k) * c for k, c in enumerate(cs)), CycloElement.zero(n)))


@given(cyclo(12), cyclo(12), cyclo(12))
def test_cyclo_ring_axioms(a, b, c):
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(cyclo(15), st.sampled_from([2, 4, 7, 8, 11, 13, 14]))
def test_galois_is_ring_map(a, s):
    assert galois_conjugate(a * a, s) == galois_conjugate(a, s) ** 2


@given(st.integers(-10**6, 10**6), st.integers(1, 10**6), st.integers(-10**6, 10**6),
       st.integers(1, 10**6), odd_primes)
def test_padic_field_ops(a, b, c, d, p):
    assume(b % p and d % p and c)
    x, y = from_rational(a, b, p, 12), from_rational(c, d, p, 12)
    want = Fraction(a, b) + Fraction(c, d)
    assume(want and vp(want.numerator, p) < 6)
    s = x + y
    assert s.agrees(from_rational(want.numerator, want.denominator, p, 12), 12 - 6)
    assert (x * y).agrees(from_rational(a * c, b * d, p, 12), 6)


@settings(max_examples=40, deadline=None)
@given(odd_primes, st.integers(1, 500), st.integers(1, 3))
def test_gamma_continuity(p, n, k):
    m = n + p**k * 7
    assert gamma_p(n, p, 6).agrees(gamma_p(m, p, 6), min(k, 6))


@settings(max_examples=40, deadline=None)
@given(odd_primes, st.integers(0, 2000))
def test_gamma_functional_equation(p, n):
    g, h = gamma_p(n, p, 6), gamma_p(n + 1, p, 6)
    want = -n * g if n % p else -g
    assert h.agrees(want, 6)


@settings(max_examples=40, deadline=None)
@given(odd_primes, st.integers(1, 60), st.integers(1, 60))
def test_gamma_reflection(p, a, b):
    assume(b % p)
    z = Fraction(a, b)
    ell = (z.numerator * pow(z.denominator, -1, p)) % p or p
    prod = gamma_p(z, p, 6) * gamma_p(1 - z, p, 6)
    assert prod.to_int() % p**6 == (-1) ** ell % p**6


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([(p, r) for p in (2, 3, 5, 7, 11) for r in (1, 2)]), st.integers(1, 10**4))
def test_gauss_modulus_and_sigma(pr, j):
    F = make_finite_field(*pr)
    j %= F.q - 1
    assume(j)
    chi = ff_char(F, j)
    g = gauss_sum_finite(chi)
    assert (g * g.conj()).as_rational() == F.q
    sign = 1 if chi.value(F.neg(1)) == CycloElement.integer(1) else -1
    assert g * gauss_sum_finite(chi.inverse()) == CycloElement.integer(sign * F.q)


@settings(max_examples=25, deadline=None)
@given(small_primes, st.integers(0, 100))
def test_davenport_hasse(p, j):
    assert davenport_hasse_check(ff_char(make_finite_field(p, 1), j % (p - 1) if p > 2 else 0)).equal


@settings(max_examples=15, deadline=None)
@given(st.sampled_from([(3, -1), (3, 3), (5, 2), (5, 10), (2, -1), (2, 6)]), st.integers(0, 10**4))
def test_tau_independent_of_representatives(pt, i):
    K = LocalField(*pt)
    chars = list(ramified_chars(K, 2))
    chi = chars[i % len(chars)]
    phi = canonical_add_char(K, 0)
    assert local_gauss_sum(chi, phi, check=True) == local_gauss_sum(chi, phi, check=False)


@settings(max_examples=20, deadline=None)
@given(odd_primes, st.integers(1, 2), st.integers(0, 10**4), st.integers(-1, 1))
def test_epsilon_unimodular(p, a, i, n):
    F = base_field(p)
    chars = list(ramified_chars(F, a))
    e = epsilon_factor(chars[i % len(chars)], canonical_add_char(F, n))
    assert abs(abs(complex_embed(e.unimodular)) ** 2 - p ** e.q_half_power) < 1e-9


@settings(max_examples=20, deadline=None)
@given(odd_primes, st.integers(0, 10**4), st.integers(0, 11), st.integers(1, 40))
def test_epsilon_properties_1_2(p, i, k, a):
    F = base_field(p)
    assume(a % p)
    chars = list(ramified_chars(F, 2))
    chi = chars[i % len(chars)]
    phi = canonical_add_char(F, -1)
    assert epsilon_property_check(1, chi, phi, a=F.elt(Fraction(a))).equal
    theta = trivial_char(F).with_unif(Fraction(k, 12))
    assert epsilon_property_check(2, chi, phi, theta=theta).equal


@given(st.sampled_from([3, 5, 7]), st.integers(1, 3))
def test_conductor_is_exact(p, a):
    for chi in ramified_chars(base_field(p), a):
        assert chi.conductor == a
        assert chi.trivial_on(a) and not chi.trivial_on(a - 1)


@given(st.sampled_from([(3, 2), (5, 2), (2, 3), (3, 3)]))
def test_unit_group_structure(pa):
    G = unit_group(base_field(pa[0]), pa[1])
    n = 1
    for o in G.orders:
        n *= o
    assert n == len(G.elements)
    assert len({G.dlog(x) for x in G.elements}) == n
