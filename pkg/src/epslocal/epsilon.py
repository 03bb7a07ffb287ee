"""Gauss sums, local epsilon factors and the twist-variance evaluators.

Conventions: phi_p(x) = exp(2 pi i {x}_p) has conductor 0; on K the
additive character is phi o Tr.  For a character chi of conductor a and an
additive character of conductor n,

    eps(chi, phi) = q^(-a/2) chi(c) tau(chi, phi),   v(c) = a + n,
    tau(chi, phi) = sum_{x in U/U^a} chi^-1(x) phi(x/c),

with c the power of the fixed uniformizer.
"""

from __future__ import annotations

import json
from math import gcd
from dataclasses import dataclass, field
from fractions import Fraction

from sympy import legendre_symbol

from .characters import (
    AddChar,
    MultChar,
    admissible_and_minimal,
    canonical_add_char,
    ff_char,
    norm_inflate,
    omega_char,
    ramified_chars,
    solve_c,
)
from .cyclotomic import CycloElement, complex_embed, fixed_generator, padic_embed, sqrt_int
from .gamma import GammaQuery, HalfPiElement, c_p_constant, gamma_p
from .padic import DEFAULT_PRECISION, ExtElement, build_extension
from .residue import (
    FiniteField,
    LocalField,
    base_field,
    make_finite_field,
    make_quad_ext,
    norm_symbol,
    unit_group,
    unramified_t,
)


# ---------------------------------------------------------------------------
# finite fields


def gauss_sum_finite(chi: MultChar, scale: int = 1) -> CycloElement:
    """sum_{x in F_q^x} chi(x) exp(2 pi i Tr(scale x)/p)."""
    F = chi.ring
    if not isinstance(F, FiniteField):
        raise TypeError("gauss_sum_finite needs a character of a finite field")
    if scale % F.q == 0 if F.r == 1 else scale == 0:
        raise ValueError("additive character must be nontrivial")
    angles = [chi.angle_unit(x) + Fraction(F.trace(F.mul(scale, x)), F.p) for x in F.units()]
    return CycloElement.from_angles(angles)


def lift_to_extension(chi: MultChar, r: int) -> MultChar:
    """chi o N from F_p to F_{p^r}."""
    F = chi.ring
    Fr = make_finite_field(F.p, r)
    g = Fr.generator
    a = chi.angle_unit(Fr.norm(g)) if Fr.q > 2 else Fraction(0)
    return ff_char(Fr, int(a * (Fr.q - 1)))


@dataclass
class Comparison:
    lhs: object
    rhs: object
    equal: bool
    note: str = ""


def davenport_hasse_check(chi: MultChar, r: int = 2) -> Comparison:
    """G_r(chi o N) against (-1)^(r-1) G_1(chi)^r, exactly."""
    lhs = gauss_sum_finite(lift_to_extension(chi, r))
    g1 = gauss_sum_finite(chi)
    rhs = g1**r if r % 2 else -(g1**r)
    return Comparison(lhs, rhs, lhs == rhs)


# ---------------------------------------------------------------------------
# local Gauss sums and epsilon factors


def _sqrt_q(q: int) -> CycloElement:
    from sympy import perfect_power

    pp = perfect_power(q)
    if not pp:
        return sqrt_int(q)
    base, k = pp
    if k % 2 == 0:
        return CycloElement.integer(base ** (k // 2))
    return CycloElement.integer(base ** (k // 2)) * sqrt_int(base)


@dataclass
class EpsilonValue:
    """unimodular / q^(q_half_power / 2)."""

    unimodular: CycloElement
    q: int
    q_half_power: int
    context: dict = field(default_factory=dict, compare=False)

    def exact(self) -> CycloElement:
        e = self.q_half_power
        if e == 0:
            return self.unimodular
        s = _sqrt_q(self.q)
        if e > 0:
            return self.unimodular * s**e / self.q**e
        return self.unimodular * s ** (-e)

    def to_complex(self) -> complex:
        return complex_embed(self.unimodular) / self.q ** (self.q_half_power / 2)

    def __eq__(self, other):
        if isinstance(other, EpsilonValue):
            if self.q == other.q and self.q_half_power == other.q_half_power:
                return self.unimodular == other.unimodular
            return self.exact() == other.exact()
        if isinstance(other, CycloElement):
            return self.exact() == other
        return NotImplemented

    def __mul__(self, other: "EpsilonValue") -> "EpsilonValue":
        if self.q != other.q:
            return EpsilonValue(self.exact() * other.exact(), 1, 0)
        return EpsilonValue(self.unimodular * other.unimodular, self.q,
                            self.q_half_power + other.q_half_power)

    def inverse(self) -> "EpsilonValue":
        """|V|^2 = q^e gives (V / q^(e/2))^-1 = conj(V) / q^(e/2)."""
        V, e = self.unimodular, self.q_half_power
        if V * V.conj() == CycloElement.integer(self.q) ** e if e >= 0 else False:
            return EpsilonValue(V.conj(), self.q, e, self.context)
        return EpsilonValue(_inv(self.exact()), 1, 0, self.context)

    def __truediv__(self, other: "EpsilonValue") -> "EpsilonValue":
        return self * other.inverse()

    def __repr__(self):
        return f"EpsilonValue({self.unimodular!r} / {self.q}^({self.q_half_power}/2))"


def _inv(x: CycloElement) -> CycloElement:
    r = x.as_rational()
    if r is not None:
        return CycloElement.rational(1 / r, x.N)
    n = x * x.conj()
    rn = n.as_rational()
    if rn is not None:
        return x.conj().scale(1 / rn)
    raise ValueError("inverse only for elements with rational absolute square")


def _phi_linear(phi: AddChar, w) -> tuple[Fraction, ...]:
    """Angles of x -> phi(w x) on the integral basis vectors."""
    F = phi.field
    basis = [F.elt(1)] + ([F.elt(0, 1)] if F.deg == 2 else [])
    return tuple(phi.angle(F.mul(w, b)) for b in basis)


def local_gauss_sum(chi: MultChar, phi: AddChar, check: bool = True) -> CycloElement:
    """tau(chi, phi) = sum_{x in U/U^a} chi^-1(x) phi(x/c), v(c) = a(chi) + n(phi)."""
    F = chi.field
    if F is None or F != phi.field:
        raise ValueError("chi and phi must live on the same local field")
    a = chi.conductor
    if a == 0:
        raise ValueError("tau is only defined for ramified chi")
    chi = chi.minimal()
    G = chi.group
    n = phi.conductor
    cinv = F.pow(F.uniformizer, -(a + n))
    lin = _phi_linear(phi, cinv)
    angles = [sum((k * t for k, t in zip(x, lin)), -chi.angle_unit(x)) for x in G.elements]
    tau = CycloElement.from_angles(angles)
    if check:
        # second set of coset representatives: x + pi^a, full field arithmetic
        pia = F.pow(F.uniformizer, a)
        alt = []
        for x in G.elements:
            y = F.add(F.elt(*x), pia)
            alt.append(-chi.angle(y) + phi.angle(F.mul(y, cinv)))
        if CycloElement.from_angles(alt) != tau:
            raise AssertionError("local Gauss sum depends on the coset representatives")
    return tau


def epsilon_factor(chi: MultChar, phi: AddChar, check: bool = True) -> EpsilonValue:
    """eps(chi, phi) = q^(-a/2) chi(c) tau(chi, phi); chi(c) for unramified chi."""
    F = chi.field
    a = chi.conductor
    n = phi.conductor
    ctx = {"chi": chi.label, "n_phi": n, "c": f"pi^{a + n}"}
    if a + n != 0 and chi.unif is None:
        raise ValueError("chi(c) needs the value of chi at the uniformizer")
    chic = CycloElement.root_of_unity((a + n) * chi.unif if a + n else Fraction(0))
    if a == 0:
        return EpsilonValue(chic, F.q, 0, ctx)
    tau = local_gauss_sum(chi, phi, check=check)
    return EpsilonValue(chic * tau, F.q, a, ctx)


# ---------------------------------------------------------------------------
# epsilon-factor properties, Deligne's twist formula, Tate constants


def _unif(chi: MultChar) -> MultChar:
    return chi if chi.unif is not None else chi.with_unif(Fraction(0))


def _rescaled(phi: AddChar, a) -> AddChar:
    return phi.twist(a)


def epsilon_property_check(which: int, chi: MultChar | None = None, phi: AddChar | None = None,
                           a=None, theta: MultChar | None = None, K=None) -> Comparison:
    """Both sides of the three basic properties of epsilon factors.

    (1) eps(chi, phi_a) = chi(a) eps(chi, phi), phi_a(x) = phi(a x).  The
        factor |a|^-1 belongs to the measure-dependent epsilon; the note
        records whether the version with it also holds.
    (2) eps(chi theta, phi) = theta(pi)^(a(chi)+n(phi)) eps(chi, phi), theta unramified.
    (3) for theta on Q_p and K quadratic: the virtual zero-dimensional
        representation Ind(theta_K - 1_K) = theta + theta omega_K - 1 - omega_K
        has the epsilon factor of theta_K - 1_K with phi o Tr.
    """
    if which == 1:
        F = chi.field
        chi = _unif(chi)
        lhs = epsilon_factor(chi, _rescaled(phi, a))
        rhs = epsilon_factor(chi, phi)
        rhs = EpsilonValue(rhs.unimodular * chi.value(a), rhs.q, rhs.q_half_power)
        absval = Fraction(F.p) ** (-F.val(a) * F.f)
        with_abs = lhs.exact() == rhs.exact().scale(1 / absval)
        return Comparison(lhs, rhs, lhs == rhs, f"with |a|^-1 factor: {with_abs}")
    if which == 2:
        chi = _unif(chi)
        if not theta.is_trivial_on_units():
            raise ValueError("theta must be unramified")
        lhs = epsilon_factor(chi * theta, phi)
        eps = epsilon_factor(chi, phi)
        k = chi.conductor + phi.conductor
        rhs = EpsilonValue(eps.unimodular * CycloElement.root_of_unity(k * theta.unif), eps.q,
                           eps.q_half_power)
        return Comparison(lhs, rhs, lhs == rhs)
    if which == 3:
        from .characters import _field

        Kf = _field(K)
        theta = _unif(theta)
        w = omega_char(Kf)
        one = MultChar(unit_group(theta.field, 1), [0] * len(unit_group(theta.field, 1).orders), 0)
        phiK = AddChar(Kf, Kf.elt(phi.scale[0]))
        num = epsilon_factor(theta, phi) * epsilon_factor(theta * w, phi)
        den = epsilon_factor(one, phi) * epsilon_factor(w, phi)
        lhs = (num / den).exact()
        tk = norm_inflate(theta, Kf)
        oneK = MultChar(unit_group(Kf, 1), [0] * len(unit_group(Kf, 1).orders), 0)
        rhs = (epsilon_factor(tk, phiK) / epsilon_factor(oneK, phiK)).exact()
        return Comparison(lhs, rhs, lhs == rhs)
    raise ValueError("which must be 1, 2 or 3")


class PreconditionError(ValueError):
    pass


def deligne_twist_check(alpha: MultChar, beta: MultChar, phi: AddChar,
                        enforce: bool = True) -> Comparison:
    """eps(alpha beta, phi) against beta^-1(c) eps(alpha, phi), alpha(1+x) = phi(c x)."""
    alpha, beta = _unif(alpha), _unif(beta)
    if enforce and alpha.conductor < 2 * beta.conductor:
        raise PreconditionError("need a(alpha) >= 2 a(beta)")
    c = solve_c(alpha, phi)
    lhs = epsilon_factor(alpha * beta, phi)
    eps = epsilon_factor(alpha, phi)
    rhs = EpsilonValue(eps.unimodular * beta.inverse().value(c), eps.q, eps.q_half_power)
    return Comparison(lhs, rhs, lhs == rhs, f"c = {tuple(str(x) for x in c)}")


@dataclass
class TateConstant:
    """coefficient * (q^-s)^exponent; the value at s = 1/2 is eps(mu, phi)."""

    coefficient: EpsilonValue
    exponent: int

    def at_half(self) -> EpsilonValue:
        c = self.coefficient
        return EpsilonValue(c.unimodular, c.q, c.q_half_power + self.exponent)


def tate_constant(mu: MultChar, phi: AddChar) -> TateConstant:
    """eps_T(mu, s, phi) = eps(mu |.|^(s-1/2), phi) for n(phi) = -1.

    With v = v(c) = a(mu) + n(phi) this is |c|^(s-1/2) eps(mu, phi)
    = q^(v/2) eps(mu, phi) (q^-s)^v; for ramified mu of level n, v = n.
    """
    if phi.conductor != -1:
        raise ValueError("the Tate constant is normalized for n(phi) = -1")
    eps = epsilon_factor(_unif(mu), phi)
    v = mu.conductor + phi.conductor
    return TateConstant(EpsilonValue(eps.unimodular, eps.q, eps.q_half_power - v), v)


# ---------------------------------------------------------------------------
# values of the form coef * a_p^k * p^(h/2)


def _fmt(e: CycloElement) -> str:
    r = e.as_rational()
    if r is not None:
        return str(r)
    i = CycloElement.zeta(4)
    r = (e * i.conj()).as_rational()
    if r is not None:
        return f"{r}*i"
    z = complex_embed(e)
    return f"<Q(zeta_{e.minimal_order()}) {z.real:.12g}{z.imag:+.12g}j>"


@dataclass(frozen=True, eq=False)
class ApMonomial:
    """coef * a_p^ap * p^(half/2) with coef exact; a_p is kept symbolic."""

    coef: CycloElement
    p: int
    ap: int = 0
    half: int = 0

    @classmethod
    def of(cls, x, p: int, ap: int = 0, half: int = 0) -> "ApMonomial":
        if not isinstance(x, CycloElement):
            x = CycloElement.rational(Fraction(x))
        return cls(x, p, ap, half)

    @classmethod
    def from_epsilon(cls, e: EpsilonValue) -> "ApMonomial":
        return cls(e.unimodular, e.q, 0, -e.q_half_power)

    def normalized(self) -> "ApMonomial":
        k = self.half // 2
        return ApMonomial(self.coef.scale(Fraction(self.p) ** k), self.p, self.ap, self.half - 2 * k)

    def __mul__(self, other):
        if not isinstance(other, ApMonomial):
            other = ApMonomial.of(other, self.p)
        return ApMonomial(self.coef * other.coef, self.p, self.ap + other.ap, self.half + other.half)

    def inverse(self) -> "ApMonomial":
        return ApMonomial(_inv(self.coef), self.p, -self.ap, -self.half)

    def __truediv__(self, other):
        if not isinstance(other, ApMonomial):
            other = ApMonomial.of(other, self.p)
        return self * other.inverse()

    def __pow__(self, n: int):
        base = self if n >= 0 else self.inverse()
        out = ApMonomial.of(1, self.p)
        for _ in range(abs(n)):
            out = out * base
        return out

    def __neg__(self):
        return ApMonomial(-self.coef, self.p, self.ap, self.half)

    def __eq__(self, other):
        if not isinstance(other, ApMonomial):
            return NotImplemented
        if (self.p, self.ap) != (other.p, other.ap):
            return False
        return self.flat() == other.flat()

    def flat(self) -> CycloElement:
        """coef * p^(half/2) as one exact cyclotomic number."""
        m = self.normalized()
        return m.coef * sqrt_int(m.p) if m.half else m.coef

    def __str__(self):
        x = self.flat()
        head = _fmt(x)
        if head.startswith("<"):
            y = _fmt(x * sqrt_int(self.p) / self.p)
            if not y.startswith("<"):
                head = f"{y} * {self.p}^(1/2)"
        if self.ap:
            head += f" * a_{self.p}^{self.ap}"
        return head

    def with_power(self) -> str:
        """The value written with an explicit p^(h/2) factor, coef unscaled."""
        out = _fmt(self.coef)
        if self.ap:
            out += f" * a_{self.p}^{self.ap}"
        if self.half:
            out += f" * {self.p}^({self.half}/2)"
        return out


# ---------------------------------------------------------------------------
# verification records


@dataclass
class TheoremRecord:
    theorem: str
    parameters: dict
    closed_form: str
    oracle: str
    equal: bool | None
    convention: dict
    note: str = ""
    closed_value: object = field(default=None, repr=False, compare=False)
    oracle_value: object = field(default=None, repr=False, compare=False)

    def as_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "parameters": self.parameters,
            "closed_form": self.closed_form,
            "oracle": self.oracle,
            "equal": self.equal,
            "convention": self.convention,
            "note": self.note,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, separators=(",", ":"))


def _convention(p: int, n_phi, **extra) -> dict:
    conv = {"n_phi": n_phi, "generator": fixed_generator(p), "precision": DEFAULT_PRECISION}
    conv.update(extra)
    return conv


# ---------------------------------------------------------------------------
# the quadratic twisting character


P2_TWISTS = (-1, 2, -2)


def quadratic_twist(p: int, t: int | None = None) -> MultChar:
    """chi_p: quadratic on units, conductor p, chi_p(p) = 1.

    At p = 2 no character has conductor 2 and is quadratic on F_2^x; the
    candidates are the local components of Q(i), Q(sqrt 2), Q(sqrt -2),
    selected by t in (-1, 2, -2); each is 1 at 2.
    """
    if p == 2:
        t = -1 if t is None else t
        if t not in P2_TWISTS:
            raise ValueError("t must be one of -1, 2, -2")
        return omega_char(make_quad_ext(2, t).field)
    G = unit_group(base_field(p), 1)
    return MultChar.from_gen_angles(G, [Fraction(1, 2)], Fraction(0))


def trivial_char(F) -> MultChar:
    G = unit_group(F, 1)
    return MultChar(G, [0] * len(G.orders), Fraction(0))


def chi_p_closed_form(p: int) -> EpsilonValue:
    if p == 2:
        return EpsilonValue(CycloElement.integer(1), 2, 1)
    if p % 4 == 1:
        return EpsilonValue(CycloElement.integer(1), p, 0)
    return EpsilonValue(CycloElement.zeta(4), p, 0)


def eps_chi_p(p: int, t: int | None = None) -> TheoremRecord:
    """eps(chi_p, phi) for phi(x) = phi_p(x/p), against the closed values 1, i, 2^-1/2."""
    chi = quadratic_twist(p, t)
    phi = canonical_add_char(base_field(p), -1)
    oracle = epsilon_factor(chi, phi)
    closed = chi_p_closed_form(p)
    params = {"p": p}
    if p == 2:
        params["t"] = -1 if t is None else t
    return TheoremRecord(
        "chip", params, str(ApMonomial.from_epsilon(closed)), str(ApMonomial.from_epsilon(oracle)),
        oracle == closed, _convention(p, -1, character=chi.label),
        closed_value=closed, oracle_value=oracle)


# ---------------------------------------------------------------------------
# special representations


def _eps_twist(chi: MultChar, mu_p: ApMonomial, phi: AddChar) -> ApMonomial:
    """eps(mu chi, phi) for mu unramified with mu(p) = mu_p, straight from the
    definition: (mu chi)(c) = mu(p)^v(c) chi(c), v(c) = a(chi) + n(phi)."""
    chi = _unif(chi)
    eps = ApMonomial.from_epsilon(epsilon_factor(chi, phi))
    return mu_p ** (chi.conductor + phi.conductor) * eps


def special_closed_form(p: int, k: int) -> ApMonomial:
    if p == 2:
        return ApMonomial.of(-1, 2, 1, 1 - k)
    sign = -1 if p % 4 == 1 else 1
    return ApMonomial.of(sign, p, 1, 3 - k)


def eps_variance_special(p: int, k: int, t: int | None = None) -> TheoremRecord:
    """eps_p for mu St, mu(p) = a_p / p^((k-2)/2), and n(phi) = -1.

    Oracle: mu_1 = mu |.|^(1/2), mu_2 = mu |.|^(-1/2); the ratio of
    eps(mu_1 chi_p) eps(mu_2 chi_p) E(mu_1 chi_p, mu_2 chi_p, 1/2) to
    eps(mu_1) eps(mu_2) E(mu_1, mu_2, 1/2), E = 1 when the first
    character is ramified and -mu_2(p) p^(-1/2) otherwise.
    """
    F = base_field(p)
    phi = canonical_add_char(F, -1)
    chi = quadratic_twist(p, t)
    one = trivial_char(F)
    mu = ApMonomial.of(1, p, 1, 2 - k)
    mu1 = mu * ApMonomial.of(1, p, 0, -1)
    mu2 = mu * ApMonomial.of(1, p, 0, 1)

    def E(first: MultChar, mu2_p: ApMonomial, second: MultChar) -> ApMonomial:
        if first.conductor > 0:
            return ApMonomial.of(1, p)
        # the second character is unramified here as well
        val = mu2_p * ApMonomial.of(CycloElement.root_of_unity(_unif(second).unif), p)
        return -val * ApMonomial.of(1, p, 0, -1)

    num = _eps_twist(chi, mu1, phi) * _eps_twist(chi, mu2, phi) * E(chi, mu2, chi)
    den = _eps_twist(one, mu1, phi) * _eps_twist(one, mu2, phi) * E(one, mu2, one)
    oracle = num / den
    closed = special_closed_form(p, k)
    params = {"p": p, "k": k}
    if p == 2:
        params["t"] = -1 if t is None else t
    return TheoremRecord("sp", params, str(closed), str(oracle), oracle == closed,
                         _convention(p, -1), closed_value=closed, oracle_value=oracle)


# ---------------------------------------------------------------------------
# ramified principal series


def _embed(e: CycloElement, p: int, ring) -> ExtElement:
    M = e.minimal_order()
    if ((p - 1) * p) % M:
        raise ValueError(f"value not in Q(zeta_{(p - 1) * p})")
    return padic_embed(e.restrict(M), p, ring=ring)


def _pi_digits(x: ExtElement, y: ExtElement) -> int:
    return x.leading_unit_agreement(y)


def omegap_phi(omega: MultChar, chi: MultChar) -> tuple[AddChar, object]:
    """phi(x) = phi_p(u x / p) with the least unit u making chi(c) = 1, where
    omega(1+x) = phi(c x) on p^r, 2r >= a(omega)."""
    F = omega.field
    G = unit_group(F, max(chi.conductor, 1))
    for u in sorted(G.elements, key=lambda x: int(x[0])):
        phi = AddChar(F, F.elt(Fraction(int(u[0]), F.p)))
        c = solve_c(omega, phi)
        if chi.angle(c) == 0:
            return phi, c
    raise AssertionError("no compatible additive character")


def principal_series_closed_form(p: int, k: int, N_p: int, m: int,
                                 precision: int = DEFAULT_PRECISION):
    """(monomial, c_p) with c_p = 1 or a HalfPiElement."""
    if p == 2:
        return ApMonomial.of(1, 2, 1, -k), 1
    coef = CycloElement.integer(1) if p % 4 == 1 else CycloElement.zeta(4)
    return ApMonomial.of(coef, p, 1, 1 - k), c_p_constant(p, N_p, m, precision)


def eps_variance_principal_series(p: int, k: int, omega: MultChar, t: int | None = None,
                                  precision: int = DEFAULT_PRECISION,
                                  digits: int = 6) -> TheoremRecord:
    """eps_p for pi(mu_1, mu_2), mu_1(p) = a_p / p^((k-1)/2), mu_1 mu_2 = omega_p.

    Oracle: eps(mu_1 chi_p) eps(mu_2 chi_p) / (eps(mu_1) eps(mu_2)) from
    the definition, n(phi) = -1, phi compatible with omega_p as required by
    the theorem (chi_p(c) = 1) when N_p >= 2.
    """
    F = base_field(p)
    omega = _unif(omega).minimal()
    N_p = omega.conductor
    if N_p < 1:
        raise ValueError("omega_p must be ramified")
    m = omega.unit_order
    chi = quadratic_twist(p, t)
    if N_p >= 2:
        phi, _ = omegap_phi(omega, chi)
    else:
        phi = canonical_add_char(F, -1)
    one = trivial_char(F)
    mu1 = ApMonomial.of(1, p, 1, 1 - k)
    mu2 = mu1.inverse()  # omega_p carries its own value at p
    oracle = (_eps_twist(chi, mu1, phi) * _eps_twist(omega * chi, mu2, phi)
              / (_eps_twist(one, mu1, phi) * _eps_twist(omega, mu2, phi)))
    mono, cp = principal_series_closed_form(p, k, N_p, m, precision)
    params = {"p": p, "k": k, "N_p": N_p, "m": m, "omega": omega.label}
    if p == 2:
        params["t"] = -1 if t is None else t
    conv = _convention(p, -1, phi_scale=str(phi.scale[0]))
    if cp == 1:
        note = ""
        if N_p >= 2:
            c1 = solve_c(omega, canonical_add_char(F, -1))
            note = f"chi_p(c) for phi_p(x/p): {1 if chi.angle(c1) == 0 else -1}"
        return TheoremRecord("psr", params, str(mono), str(oracle), oracle == mono, conv, note=note,
                             closed_value=mono, oracle_value=oracle)
    # c_p is p-adic: compare oracle / monomial with it in Q_p(zeta_p)
    closed = f"{mono} * c_p, c_p = (-p)^(-1/2m) Gamma_p(1/2m)/Gamma_p(1/m)"
    R = oracle / mono
    if R.ap != 0:
        return TheoremRecord("psr", params, closed, str(oracle), False, conv,
                             note="oracle depends on a_p differently",
                             closed_value=(mono, cp), oracle_value=oracle)
    agree, how = padic_compare(R.flat(), cp)
    ok = agree >= digits * (p - 1)
    return TheoremRecord("psr", params, closed, str(oracle), ok, conv,
                         note=f"compared {how} in Q_{p}(zeta_{p}): {max(agree, -1)} pi-adic digits agree",
                         closed_value=(mono, cp), oracle_value=oracle)


def padic_compare(x: CycloElement, target: HalfPiElement) -> tuple[int, str]:
    """pi-adic digits on which x and target agree (-1: different valuations).

    Squares are compared when either side has no exact image in Q_p(zeta_p).
    """
    ring = target.ring
    p = ring.p
    if target.half % 2 == 0:
        try:
            return _pi_digits(_embed(x, p, ring), target.exact()), "exact"
        except ValueError:
            pass
    return _pi_digits(_embed(x * x, p, ring), target.square()), "squared"


def gk_ratio(s: int, s2: int, p: int, precision: int = DEFAULT_PRECISION) -> HalfPiElement:
    """G(w^-s2) / G(w^-s) = pi^(s2-s) Gamma_p(s2/(p-1)) / Gamma_p(s/(p-1)), w Teichmuller.

    Valid for 0 < s, s2 < p-1; the Gross-Koblitz sign cancels in the ratio.
    """
    ring = build_extension(p, (precision + 2) * (p - 1))
    a = gamma_p(GammaQuery(Fraction(s2, p - 1), p, precision + 2))
    b = gamma_p(GammaQuery(Fraction(s, p - 1), p, precision + 2))
    return HalfPiElement(2 * (s2 - s), ring.from_padic(a / b))


def teichmuller_exponent(psi: MultChar) -> int:
    """s in [0, p-1) with psi = w^-s on F_p^x (w the Teichmuller character)."""
    F = psi.ring
    if not isinstance(F, FiniteField):
        F = psi.ring
        g = fixed_generator(F.F.p)
        ang = psi.angle_unit(F.reduce((g,)))
        p = F.F.p
    else:
        g, p = fixed_generator(F.p), F.p
        ang = psi.angle_unit(g)
    return int(-ang * (p - 1)) % (p - 1)


# ---------------------------------------------------------------------------
# supercuspidal: K/Q_p quadratic, chi admissible


EPS2_TABLE = {
    # (t, minimal) -> eps_2 as displayed for K = Q_2(sqrt t)
    **{(t, mnl): 1 for t in (-1, 2, -2) for mnl in (True, False)},
    (3, False): -1, (6, True): -1, (-6, True): -1,
    (3, True): 1, (6, False): 1, (-6, False): 1,
}


def supercuspidal_closed_form(K: LocalField, a: int, minimal: bool) -> tuple[int, str]:
    p = K.p
    if not K.ramified:
        if a <= 1:
            raise ValueError("a(chi) = 1 is the tame case")
        return 1, "main(1)"
    if p != 2:
        if a % 2:
            return 1, "main(2) a odd"
        if norm_symbol(p, K) == 1:
            return 1, "main(2) (p,K)=1"
        return int(legendre_symbol(-1, p)), "main(2) (p,K)=-1"
    return EPS2_TABLE[(K.t, minimal)], "main(3)"


def supercuspidal_ratio(K: LocalField, chi: MultChar, t: int | None = None) -> CycloElement:
    """eps(chi chi_p', phi_K) / eps(chi, phi_K), phi_K = phi_p o Tr, chi_p' = chi_p o N."""
    chi = _unif(chi)
    twist = norm_inflate(quadratic_twist(K.p, t), K)
    phi = canonical_add_char(K, 0)
    return (epsilon_factor(chi * twist, phi, check=False)
            / epsilon_factor(chi, phi, check=False)).exact()


def eps_variance_supercuspidal(K, chi: MultChar, minimal: bool | None = None,
                               t: int | None = None) -> TheoremRecord:
    """eps_p for Ind chi, by branch, with the explicit ratio of local epsilon factors."""
    from .characters import _field

    K = _field(K)
    a = chi.conductor
    adm, mnl = admissible_and_minimal(K, chi)
    if not adm:
        raise ValueError("(K, chi) is not admissible")
    if minimal is None:
        minimal = mnl
    closed, branch = supercuspidal_closed_form(K, a, minimal)
    oracle = supercuspidal_ratio(K, chi, t)
    params = {"p": K.p, "t": K.t, "a": a, "minimal": minimal, "chi": _unif(chi).label}
    note = branch
    if K.p == 2:
        params["twist"] = -1 if t is None else t
    if K.ramified and K.p != 2 and a % 2 == 0:
        nrm = K.norm(K.uniformizer)
        val = -1 if quadratic_twist(K.p).angle((nrm,)) else 1
        note += f"; chi_p(N(pi)) = {val}"
    r = oracle.as_rational()
    return TheoremRecord("main", params, str(closed), _fmt(oracle), r == closed,
                         _convention(K.p, 0, n_phi_K=K.d, field=repr(K), uniformizer=str(K.uniformizer)),
                         note=note, closed_value=closed, oracle_value=oracle)


def unramified_tau_check(chi: MultChar) -> Comparison:
    """tau(chi, phi_K) = p^2 phi_K(1/p^2) for K unramified, a(chi) = 2, n(phi) = 0."""
    K = chi.field
    p = K.p
    phi = canonical_add_char(K, 0)
    tau = local_gauss_sum(chi, phi, check=False)
    rhs = phi.value(K.elt(Fraction(1, p * p))).scale(Fraction(p * p))
    return Comparison(tau, rhs, tau == rhs)


# ---------------------------------------------------------------------------
# unramified K, a(chi) = 1: ratios of Gauss sums of F_{p^2}


def tame_character(p: int, m: int, index: int = 0) -> MultChar:
    """The index-th character of F_{p^2}^x of exact order m (by exponent j)."""
    F = make_finite_field(p, 2)
    q1 = F.q - 1
    if q1 % m:
        raise ValueError(f"{m} does not divide p^2 - 1 = {q1}")
    js = [j for j in range(q1) if q1 // gcd(j, q1) == m]
    return ff_char(F, js[index])


def tame_ratio(chi: MultChar) -> CycloElement:
    """eps(chi chi_p', phi_K) / eps(chi, phi_K) for a(chi) = 1, n(phi_K) = -1.

    c = 1, so this is G(chi~^-1 eta) / G(chi~^-1), eta = chi_p o N the
    quadratic character of F_{p^2}.
    """
    F = chi.ring
    eta = ff_char(F, (F.q - 1) // 2)
    inv = chi.inverse()
    num = gauss_sum_finite(inv * eta)
    den = gauss_sum_finite(inv)
    r = den.as_rational()
    if r is not None:
        return num.scale(1 / r)
    return num * den.conj() / F.q


def tame_ratios_local(p: int, m: int) -> list[CycloElement]:
    """The ratios for every order-m chi on the unramified K, from local epsilon factors."""
    K = LocalField(p, unramified_t(p))
    twist = norm_inflate(quadratic_twist(p), K)
    phi = canonical_add_char(K, -1)
    out = []
    for chi in ramified_chars(K, 1):
        if chi.unit_order == m:
            out.append((epsilon_factor(chi * twist, phi) / epsilon_factor(chi, phi)).exact())
    return out


def dh_reduced_ratio(chi: MultChar) -> tuple[CycloElement, MultChar]:
    """For chi~ = psi o N: G_1(psi^-1 leg)^2 / G_1(psi^-1)^2 and psi."""
    F = chi.ring
    p = F.p
    F1 = make_finite_field(p, 1)
    target = chi.angle_unit(F.generator)
    for i in range(p - 1):
        psi = ff_char(F1, i)
        if lift_to_extension(psi, 2).angle_unit(F.generator) == target:
            break
    else:
        raise ValueError("chi~ is not a lift from F_p")
    leg = ff_char(F1, (p - 1) // 2)
    inv = psi.inverse()
    num = gauss_sum_finite(inv * leg)
    den = gauss_sum_finite(inv)
    return (num * den.conj() / p) ** 2, psi


def gap_closed_form(p: int, m: int, precision: int = DEFAULT_PRECISION) -> HalfPiElement:
    """p^(-1/m) {Gamma_p(1/2m) / Gamma_p(1/m)}^2 with p^(1/m) the root -pi^((p-1)/m).

    For odd m, (-1)^(1/m) = -1 makes p^(1/m) = -(-p)^(1/m).
    """
    if m % 2 == 0 or (p - 1) % m:
        raise ValueError("need m odd dividing p - 1")
    ring = build_extension(p, (precision + 2) * (p - 1))
    a = gamma_p(GammaQuery(Fraction(1, 2 * m), p, precision + 2))
    b = gamma_p(GammaQuery(Fraction(1, m), p, precision + 2))
    r = ring.from_padic(a / b)
    return HalfPiElement(-2 * ((p - 1) // m), -(r * r))


def tame_route(p: int, m: int) -> tuple[object, str]:
    """(closed value or None, branch) for an order-m character of F_{p^2}^x."""
    if p == 2:
        return 1, "appstkl p=2"
    if m % 2 == 0:
        if (p + 1) % m == 0:
            if p % 4 == 1:
                return 1, "appstkl m even, p=1 mod 4"
            if ((p + 1) // m) % 2:
                return 1, "appstkl m even, p=3 mod 4, (p+1)/m odd"
        return 1, "evenodd(1)"
    if (p - 1) % m == 0:
        return "gap", "evenodd(2)"
    if (p + 1) % m == 0 and p % 4 == 1:
        return -1, "appstkl m odd, p=1 mod 4"
    return None, "theorem silent"


def eps_variance_tame_unramified(p: int, m: int, index: int = 0,
                                 precision: int = DEFAULT_PRECISION,
                                 digits: int = 6) -> TheoremRecord:
    """eps_p for Ind chi from the unramified K with a(chi) = 1 and chi~ of order m."""
    params = {"p": p, "m": m}
    if p == 2:
        return _tame_p2(m, index)
    chi = tame_character(p, m, index)
    params["chi"] = chi.label
    params["admissible"] = (p - 1) % m != 0
    conv = _convention(p, -1, n_phi_K=-1, residue_field=f"F_{p * p}")
    closed, branch = tame_route(p, m)
    oracle = tame_ratio(chi)
    note = branch
    if closed is None:
        return TheoremRecord("tame", params, "theorem silent", _fmt(oracle), None, conv,
                             note=note, oracle_value=oracle)
    if closed == "gap":
        target = gap_closed_form(p, m, precision)
        dh, psi = dh_reduced_ratio(chi)
        if dh != oracle:
            note += "; Davenport-Hasse reduction differs from the F_{p^2} ratio"
        agree, how = padic_compare(dh, target)
        ok = agree >= digits * (p - 1)
        note += f"; compared {how} in Q_{p}(zeta_{p}): {max(agree, -1)} pi-adic digits agree"
        return TheoremRecord("evenodd", params, "p^(-1/m) {Gamma_p(1/2m)/Gamma_p(1/m)}^2",
                             _fmt(oracle), ok, conv, note=note,
                             closed_value=target, oracle_value=oracle)
    thm = "appstkl" if branch.startswith("appstkl") else "evenodd"
    r = oracle.as_rational()
    return TheoremRecord(thm, params, str(closed), _fmt(oracle), r == closed, conv, note=note,
                         closed_value=closed, oracle_value=oracle)


def _tame_p2(m: int, index: int, t: int | None = None) -> TheoremRecord:
    """p = 2: K = Q_2(sqrt -3), a(chi) = 1, ratio of local epsilon factors."""
    K = LocalField(2, -3)
    G = unit_group(K, 1)
    if 3 % m or m == 1:
        raise ValueError("m must be 3 at p = 2")
    chi = MultChar.from_gen_angles(G, [Fraction(1 + index, 3)], Fraction(0))
    twist = norm_inflate(quadratic_twist(2, t), K)
    phi = canonical_add_char(K, -1)
    oracle = (epsilon_factor(chi * twist, phi) / epsilon_factor(chi, phi)).exact()
    params = {"p": 2, "m": m, "chi": chi.label, "t": -1 if t is None else t}
    r = oracle.as_rational()
    return TheoremRecord("appstkl", params, "1", _fmt(oracle), r == 1,
                         _convention(2, -1, n_phi_K=-1, field=repr(K)), note="appstkl p=2",
                         closed_value=1, oracle_value=oracle)


def tame_corollary(p: int, m: int, index: int = 0) -> TheoremRecord:
    """C_p = 0 (chi~ trivial on F_p^x, so m | p+1): eps_p = -(-1/p)."""
    if (p + 1) % m or m <= 2:
        raise ValueError("C_p = 0 needs m | p+1, m > 2")
    chi = tame_character(p, m, index)
    closed = -int(legendre_symbol(-1, p))
    oracle = tame_ratio(chi)
    return TheoremRecord("cor_cp0", {"p": p, "m": m, "chi": chi.label}, str(closed), _fmt(oracle),
                         oracle.as_rational() == closed, _convention(p, -1, n_phi_K=-1),
                         closed_value=closed, oracle_value=oracle)
