"""Acceptance criteria 1-11.

Tests marked ``criterion`` are the literal checks; a strict xfail means the
check as stated does not hold, and the neighbouring tests assert what does.
``pytest -v tests/test_acceptance.py`` ends with one PASS/FAIL line per criterion.
"""

from fractions import Fraction

import pytest
from click.testing import CliRunner
from sympy import legendre_symbol, primerange
from sympy.ntheory.modular import crt

from epslocal.characters import (
    MultChar,
    admissible_and_minimal,
    canonical_add_char,
    ff_char,
    norm_inflate,
    ramified_chars,
    solve_c,
)
from epslocal.classifier import NewformLocalDatum, classify_local_type
from epslocal.cli import main
from epslocal.cyclotomic import CycloElement, galois_conjugate, padic_embed
from epslocal.epsilon import (
    ApMonomial,
    _tame_p2,
    deligne_twist_check,
    dh_reduced_ratio,
    eps_chi_p,
    eps_variance_principal_series,
    eps_variance_special,
    epsilon_factor,
    gauss_sum_finite,
    gk_ratio,
    padic_compare,
    quadratic_twist,
    supercuspidal_ratio,
    tame_character,
    tame_corollary,
    tame_ratio,
    tame_ratios_local,
    teichmuller_exponent,
)
from epslocal.gamma import HalfPiElement, gross_koblitz_rhs
from epslocal.padic import build_extension
from epslocal.residue import LocalField, base_field, make_finite_field, norm_symbol, unit_group, unramified_t
from epslocal.verify import run_suite

JOBS = 4
_cache = {}


def suite(name, **grid):
    key = (name, tuple(sorted(grid.items())))
    if key not in _cache:
        _cache[key] = run_suite(name, grid or None, JOBS)
    return _cache[key]


def failures(recs):
    return [r for r in recs if r["equal"] is False]


# 1 ---------------------------------------------------------------------------


def _sigma_minus_one(g, q, p):
    s = int(crt([q - 1, p], [(q - 2) % (q - 1), 1])[0])
    return galois_conjugate(g, s % g.N)


@pytest.mark.criterion(1)
@pytest.mark.parametrize("p", list(primerange(2, 32)))
def test_criterion_1_gauss_modulus(p):
    for r in (1, 2):
        F = make_finite_field(p, r)
        minus_one = F.neg(1)
        for j in range(1, F.q - 1):
            chi = ff_char(F, j)
            g = gauss_sum_finite(chi)
            assert g * _sigma_minus_one(g, F.q, p) == chi.value(minus_one) * CycloElement.integer(F.q)


def test_complex_conjugate_pairing_gives_q():
    F = make_finite_field(7, 2)
    for j in range(1, F.q - 1):
        g = gauss_sum_finite(ff_char(F, j))
        assert g * g.conj() == CycloElement.integer(F.q)


# 2 ---------------------------------------------------------------------------


@pytest.mark.criterion(2)
@pytest.mark.parametrize("p,want", [(5, 1), (13, 1), (17, 1), (29, 1),
                                    (3, "i"), (7, "i"), (11, "i"), (19, "i"), (23, "i")])
def test_criterion_2_chip_odd(p, want):
    r = eps_chi_p(p)
    assert r.equal
    i = CycloElement.zeta(4)
    assert r.oracle_value.exact() == (CycloElement.integer(1) if want == 1 else i)


@pytest.mark.criterion(2)
@pytest.mark.xfail(strict=True, reason="no quadratic chi_2 gives 2^(-1/2); values are unimodular")
@pytest.mark.parametrize("t", [-1, 2, -2])
def test_criterion_2_chip_p2(t):
    assert eps_chi_p(2, t).equal


def test_chip_p2_values():
    i = CycloElement.zeta(4)
    got = {t: eps_chi_p(2, t).oracle_value.exact() for t in (-1, 2, -2)}
    assert got == {-1: i, 2: CycloElement.integer(1), -2: i}


# 3 ---------------------------------------------------------------------------


@pytest.mark.criterion(3)
def test_criterion_3_davenport_hasse():
    recs = suite("davenport-hasse")
    assert len(recs) == sum(p - 1 for p in primerange(2, 32))
    assert all(r["equal"] for r in recs)


# 4 ---------------------------------------------------------------------------


def _gk_cases():
    for p in (3, 5, 7, 11, 13):
        for k in range(2, p):
            if (p - 1) % k == 0:
                for r in range(1, k):
                    yield p, k, r


def _gk_agreement(p, k, r, digits=8):
    ring = build_extension(p, (digits + 3) * (p - 1))
    chi = ff_char(make_finite_field(p, 1), (-(r * (p - 1) // k)) % (p - 1))
    lhs = padic_embed(gauss_sum_finite(chi), p, ring=ring)
    rhs = gross_koblitz_rhs(r, k, p, digits + 1, ring=ring)
    return lhs.leading_unit_agreement(rhs), lhs.leading_unit_agreement(-rhs), digits * (p - 1)


@pytest.mark.criterion(4)
@pytest.mark.xfail(strict=True, reason="embedded Gauss sum is minus the stated product")
def test_criterion_4_gross_koblitz():
    assert all(_gk_agreement(*c)[0] >= _gk_agreement(*c)[2] for c in _gk_cases())


def test_gross_koblitz_with_sign():
    for c in _gk_cases():
        plus, minus, need = _gk_agreement(*c)
        assert minus >= need
        assert plus < need


# 5 ---------------------------------------------------------------------------


@pytest.mark.criterion(5)
def test_criterion_5_deligne():
    recs = suite("deligne-twist")
    main_recs = [r for r in recs if r["theorem"] == "deligne-twist"]
    witnesses = [r for r in recs if r["theorem"] == "deligne-witness"]
    assert {r["parameters"]["a_alpha"] for r in main_recs} == {2, 3}
    assert {r["parameters"]["p"] for r in main_recs} == {3, 5, 7}
    assert all(r["equal"] for r in main_recs)
    assert witnesses and all(r["equal"] for r in witnesses)


# 6 ---------------------------------------------------------------------------


@pytest.mark.criterion(6)
@pytest.mark.xfail(strict=True, reason="true power of p is (2-k)/2")
def test_criterion_6_sp():
    assert not failures(suite("sp"))


@pytest.mark.criterion(6)
@pytest.mark.xfail(strict=True, reason="sign chi_p(c) and Gross-Koblitz ratio missing")
def test_criterion_6_psr():
    recs = suite("psr")
    assert any(r["parameters"]["N_p"] == 1 and r["parameters"]["p"] % 4 == 3
               and r["parameters"]["m"] % 2 == 0 for r in recs)
    assert not failures(recs)


def test_sp_corrected_power():
    for r in suite("sp"):
        p, k = r["parameters"]["p"], r["parameters"]["k"]
        if p == 2:
            continue
        eps2 = 1 if p % 4 == 1 else -1
        assert eps_variance_special(p, k).oracle_value == ApMonomial.of(-eps2, p, 1, 2 - k)


def test_psr_sign_is_chi_c():
    for p in (3, 5, 7):
        F = base_field(p)
        phi = canonical_add_char(F, -1)
        chi = quadratic_twist(p)
        for omega in ramified_chars(F, 2):
            if omega.minimal().conductor != 2:
                continue
            r = eps_variance_principal_series(p, 2, omega)
            sign = -1 if chi.angle(solve_c(omega, phi)) else 1
            assert r.oracle_value == r.closed_value * sign


def test_psr_tame_is_gross_koblitz_ratio():
    for p in (5, 7, 13):
        for omega in ramified_chars(base_field(p), 1):
            if omega.unit_order == 2:
                continue
            r = eps_variance_principal_series(p, 2, omega)
            mono = r.closed_value[0] if isinstance(r.closed_value, tuple) else r.closed_value
            ratio = (r.oracle_value / mono).flat()
            s = teichmuller_exponent(omega.inverse())
            s2 = (s + (p - 1) // 2) % (p - 1)
            agree, _ = padic_compare(ratio, gk_ratio(s, s2, p, 8))
            assert agree >= 6 * (p - 1)


# 7 ---------------------------------------------------------------------------


@pytest.mark.criterion(7)
@pytest.mark.xfail(strict=True, reason="eps_p = chi_p'^-1(c), not always 1")
def test_criterion_7a_unramified():
    recs = suite("main-unram")
    assert all(r["equal"] for r in recs)
    assert all(r["note"].endswith("True") for r in recs)


def test_unramified_ratio_is_deligne_sign():
    for p in (3, 5):
        K = LocalField(p, unramified_t(p))
        beta = norm_inflate(quadratic_twist(p), K)
        phi = canonical_add_char(K, 0)
        seen = set()
        for chi in ramified_chars(K, 2):
            if not admissible_and_minimal(K, chi)[0]:
                continue
            want = beta.inverse().value(solve_c(chi, phi))
            assert supercuspidal_ratio(K, chi) == want
            seen.add(want.as_rational())
        assert seen == {1, -1}


@pytest.mark.criterion(7)
@pytest.mark.xfail(strict=True, reason="for even a and (p,K) = -1 the value is -1 for every p")
def test_criterion_7b_ramified_odd():
    recs = [r for r in suite("main-ram") if r["parameters"]["p"] != 2]
    assert {r["parameters"]["p"] for r in recs} == {3, 5, 7, 11}
    assert all(r["equal"] for r in recs)


def test_ramified_odd_is_norm_symbol():
    for r in suite("main-ram"):
        prm = r["parameters"]
        if prm["p"] == 2:
            continue
        want = 1 if prm["a"] % 2 else norm_symbol(prm["p"], LocalField(prm["p"], prm["t"]))
        assert r["oracle"] == str(want)


@pytest.mark.criterion(7)
@pytest.mark.xfail(strict=True, reason="p = 2 ratio is not a function of (t, minimal)")
def test_criterion_7c_p2():
    recs = [r for r in suite("main-ram") if r["parameters"]["p"] == 2]
    assert all(r["equal"] for r in recs)


def test_p2_coverage():
    recs = [r for r in suite("main-ram") if r["parameters"]["p"] == 2]
    pairs = {(r["parameters"]["t"], r["parameters"]["minimal"]) for r in recs}
    assert {t for t, _ in pairs} == {-1, 3, 2, -2, 6, -6}
    assert {r["parameters"]["a"] for r in recs} <= {2, 3, 4}
    assert {r["parameters"]["twist"] for r in recs} == {-1, 2, -2}


# 8 ---------------------------------------------------------------------------


@pytest.mark.criterion(8)
@pytest.mark.xfail(strict=True, reason="even-order Gauss-sum ratio is not 1 in general")
def test_criterion_8_even():
    recs = [r for r in suite("evenodd") if r["closed_form"] == "1"]
    assert recs and all(r["equal"] for r in recs)


@pytest.mark.criterion(8)
@pytest.mark.xfail(strict=True, reason="valuations differ: the ratio is a square of a GK ratio")
def test_criterion_8_gap():
    recs = [r for r in suite("evenodd") if r["theorem"] == "evenodd" and r["closed_form"] != "1"]
    assert {r["parameters"]["p"] for r in recs} == {7, 13, 31}
    assert all(r["equal"] for r in recs)


@pytest.mark.criterion(8)
def test_criterion_8_factorial_corollary():
    recs = suite("corollary-x0")
    assert len(recs) == sum(1 for p in primerange(3, 32) for m in range(3, p, 2) if (p - 1) % m == 0)
    assert all(r["equal"] for r in recs)


def test_gap_is_squared_gk_ratio():
    for p in (7, 13, 19, 31):
        for m in range(3, p, 2):
            if (p - 1) % m:
                continue
            chi = tame_character(p, m)
            dh, psi = dh_reduced_ratio(chi)
            assert dh == tame_ratio(chi)
            s = teichmuller_exponent(psi.inverse())
            g = gk_ratio(s, (s + (p - 1) // 2) % (p - 1), p, 8)
            agree, _ = padic_compare(dh, HalfPiElement(2 * g.half, g.unit * g.unit))
            assert agree >= 6 * (p - 1)


def test_tame_local_matches_finite():
    for p, m in [(3, 4), (3, 8), (5, 4), (5, 12), (5, 3), (7, 3)]:
        n = sum(1 for i in range(p * p - 1) if ff_char(make_finite_field(p, 2), i).order == m)
        finite = [tame_ratio(tame_character(p, m, i)) for i in range(n)]
        local = tame_ratios_local(p, m)
        assert len(local) == len(finite)
        assert sorted(map(_ckey, local)) == sorted(map(_ckey, finite))


def _ckey(x):
    z = x.to_complex()
    return round(z.real, 9), round(z.imag, 9)


# 9 ---------------------------------------------------------------------------


def _appstkl(branch):
    return [r for r in suite("appstkl") if r["note"] == branch]


@pytest.mark.criterion(9)
def test_criterion_9_row_m_odd():
    recs = _appstkl("appstkl m odd, p=1 mod 4")
    assert recs and all(r["equal"] for r in recs)


@pytest.mark.criterion(9)
@pytest.mark.xfail(strict=True, reason="m = 2 mod 4 with m | p+1 gives -1")
def test_criterion_9_row_m_even_p1():
    recs = _appstkl("appstkl m even, p=1 mod 4")
    assert recs and all(r["equal"] for r in recs)


@pytest.mark.criterion(9)
def test_criterion_9_row_m_even_p3():
    recs = _appstkl("appstkl m even, p=3 mod 4, (p+1)/m odd")
    assert recs and all(r["equal"] for r in recs)


@pytest.mark.criterion(9)
@pytest.mark.xfail(strict=True, reason="eps_2 = -1 for the default twist chi_{-1}")
def test_criterion_9_p2():
    recs = _appstkl("appstkl p=2")
    assert len(recs) == 2 and all(r["equal"] for r in recs)


def test_p2_tame_depends_on_twist():
    K = LocalField(2, -3)
    G = unit_group(K, 1)
    phi = canonical_add_char(K, -1)
    for t, want in ((-1, -1), (2, -1), (-2, 1)):
        tw = norm_inflate(quadratic_twist(2, t), K)
        for i in (0, 1):
            assert _tame_p2(3, i, t).oracle_value == CycloElement.integer(want)
            chi = MultChar.from_gen_angles(G, [Fraction(1 + i, 3)], Fraction(0))
            c = deligne_twist_check(tw, chi, phi)
            assert c.equal
            assert (c.rhs / epsilon_factor(chi, phi)).exact() == CycloElement.integer(want)


@pytest.mark.criterion(9)
def test_criterion_9_silent_not_asserted():
    recs = [r for r in suite("appstkl") if r["note"] == "theorem silent"]
    assert recs
    assert all(r["equal"] is None and r["closed_form"] == "theorem silent" for r in recs)


def test_cp0_corollary():
    for p in primerange(3, 51):
        for m in range(3, p + 2):
            if (p + 1) % m == 0:
                r = tame_corollary(p, m)
                assert r.equal and r.closed_value == -legendre_symbol(-1, p)


# 10 --------------------------------------------------------------------------


@pytest.mark.criterion(10)
def test_criterion_10_parity():
    recs = suite("parity")
    claimed = [r for r in recs if r["equal"] is not None]
    assert claimed and all(r["equal"] for r in claimed)
    assert {r["parameters"]["p"] for r in recs} == {2, 3, 5}
    assert max(r["parameters"]["a"] for r in recs if r["parameters"]["p"] == 2) == 4


def _names(rep):
    return [c["name"] for c in rep.candidates]


@pytest.mark.criterion(10)
def test_criterion_10_odd_rows():
    assert classify_local_type(NewformLocalDatum(7, 1, 0)).type == "Steinberg"
    assert classify_local_type(NewformLocalDatum(7, 2, 2)).type == "PrincipalSeries"
    rep = classify_local_type(NewformLocalDatum(7, 4, 0, True))
    assert _names(rep) == ["Q_7(sqrt 3)"]
    rep = classify_local_type(NewformLocalDatum(7, 3, 0, True, epsF=1, epsFtwist=1, Nprime_factors={}))
    assert _names(rep) == ["Q_7(sqrt -7)"]
    rep = classify_local_type(NewformLocalDatum(7, 3, 0, True, epsF=1, epsFtwist=-1, Nprime_factors={}))
    assert _names(rep) == ["Q_7(sqrt -7 zeta_6)"]
    rep = classify_local_type(NewformLocalDatum(13, 3, 0, True, epsF=1, epsFtwist=1, Nprime_factors={}))
    assert len(rep.candidates) == 2
    assert any("cannot be concluded" in s for s in rep.reasoning)


@pytest.mark.criterion(10)
def test_criterion_10_p2_rows():
    def ts(minimal, rel, n2=5):
        tw = {str(t): rel for t in (-1, 2, -2)}
        d = NewformLocalDatum(2, n2, 0, minimal, epsF=1, epsFtwist=tw, Nprime_factors={})
        return {c["t"] for c in classify_local_type(d).candidates if c["ramified"]}

    assert ts(True, 1) == {-1, -2, 2, 3}
    assert ts(True, -1) == {-6, 6}
    assert ts(False, 1, 8) == {-1, -2, 2, -6, 6}
    assert ts(False, -1, 8) == {3}
    rep = classify_local_type(NewformLocalDatum(2, 8, 0, False))
    assert any(not c["ramified"] for c in rep.candidates)
    assert any("cannot be separated" in s for s in rep.reasoning)
    assert classify_local_type(NewformLocalDatum(2, 7, 0, True)).possibly_non_dihedral


# 11 --------------------------------------------------------------------------


@pytest.mark.criterion(11)
@pytest.mark.parametrize("name,extra", [("davenport-hasse", []), ("chip", []),
                                        ("corollary-x0", []), ("appstkl", ["--pmax", "20"])])
def test_criterion_11_determinism(name, extra):
    runner = CliRunner()
    a = runner.invoke(main, ["verify", name, *extra])
    b = runner.invoke(main, ["verify", name, *extra, "--jobs", "2"])
    c = runner.invoke(main, ["verify", name, *extra])
    assert a.exit_code in (0, 1)
    assert a.stdout_bytes == b.stdout_bytes == c.stdout_bytes
