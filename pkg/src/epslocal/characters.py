"""Additive and multiplicative characters of finite and local fields.

Character values are kept as rational angles modulo 1; ``value`` turns an
angle into the exact root of unity exp(2 pi i angle).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from .cyclotomic import CycloElement
from .residue import (
    FiniteField,
    LocalField,
    LocalQuadExt,
    ResidueRing,
    UnitGroup,
    base_field,
    filtration_elements,
    frac_p,
    norm_symbol,
    unit_group,
)


def _field(F):
    return F.field if isinstance(F, LocalQuadExt) else F


# ---------------------------------------------------------------------------
# additive characters


@dataclass(frozen=True)
class AddChar:
    """x -> exp(2 pi i {Tr(scale * x)}_p) on a local field."""

    field: LocalField
    scale: tuple

    def angle(self, x) -> Fraction:
        F = self.field
        return frac_p(F.trace(F.mul(self.scale, x)), F.p)

    def value(self, x) -> CycloElement:
        return CycloElement.root_of_unity(self.angle(x))

    @property
    def conductor(self) -> int:
        """n with the character trivial on p^-n but not on p^(-n-1)."""
        return self.field.d + self.field.val(self.scale)

    def twist(self, c) -> "AddChar":
        """x -> self(c x)."""
        return AddChar(self.field, self.field.mul(self.scale, c))

    def verify_conductor(self) -> bool:
        F, n = self.field, self.conductor
        basis = [F.elt(1)] + ([F.elt(0, 1)] if F.deg == 2 else [])
        lo = F.pow(F.uniformizer, -n)
        hi = F.pow(F.uniformizer, -n - 1)
        trivial = all(self.angle(F.mul(lo, b)) == 0 for b in basis)
        beyond = any(self.angle(F.mul(hi, b)) != 0 for b in basis)
        return trivial and beyond


def canonical_add_char(F, n: int = 0) -> AddChar:
    """phi_p(p^n x) on Q_p, and its composite with the trace on K.

    The Q_p character has conductor n; on K the conductor is (2/f) n + d.
    """
    F = _field(F)
    return AddChar(F, F.elt(Fraction(F.p) ** n))


def ff_add_angle(F: FiniteField, x: int) -> Fraction:
    """Canonical additive character of F_q: exp(2 pi i Tr(x) / p)."""
    return Fraction(F.trace(x), F.p)


# ---------------------------------------------------------------------------
# multiplicative characters


class MultChar:
    """A character of F^x (or of a finite unit group when ``unif`` is None).

    The restriction to units is fixed by ``exponents``: the value on the
    i-th generator of ``group`` is exp(2 pi i e_i / n_i).  ``unif`` is the
    angle of the value at the fixed uniformizer.
    """

    __slots__ = ("group", "exponents", "unif", "_angles", "_w")

    def __init__(self, group: UnitGroup, exponents, unif: Fraction | None = None):
        exps = tuple(int(e) % n for e, n in zip(exponents, group.orders))
        if len(exps) != len(group.orders):
            raise ValueError("exponent vector has the wrong length")
        self.group = group
        self.exponents = exps
        self.unif = None if unif is None else Fraction(unif) % 1
        self._angles = None
        self._w = None

    # -- structure
    @property
    def ring(self):
        return self.group.ring

    @property
    def field(self) -> LocalField | None:
        return None if isinstance(self.ring, FiniteField) else self.ring.F

    @property
    def level(self) -> int:
        return self.group.level

    def __repr__(self):
        return f"MultChar({self.label})"

    @property
    def label(self) -> str:
        R = self.ring
        if isinstance(R, FiniteField):
            head = f"F_{R.q}"
        else:
            F = R.F
            head = f"{F.p}^{R.a}" + ("" if F.deg == 1 else f"[t={F.t}]")
        s = f"{head}:exponents={list(self.exponents)}"
        if self.unif is not None:
            s += f":unif=zeta_{self.unif.denominator}^{self.unif.numerator}"
        return s

    # -- evaluation
    def angle_unit(self, r) -> Fraction:
        """Angle at a group element (canonical residue)."""
        E, w = self._weights()
        return Fraction(sum(a * k for a, k in zip(w, self.group.dlog(r))) % E, E)

    def _weights(self):
        if self._w is None:
            E = self.group.exponent
            self._w = (E, [e * (E // n) for e, n in zip(self.exponents, self.group.orders)])
        return self._w

    def unit_angles(self) -> dict:
        if self._angles is None:
            self._angles = {r: self.angle_unit(r) for r in self.group.elements}
        return self._angles

    def angle(self, x) -> Fraction:
        """Angle at a nonzero field element (finite-field int, or local-field tuple)."""
        R = self.ring
        if isinstance(R, FiniteField):
            if x == 0:
                raise ValueError("character evaluated at 0")
            return self.angle_unit(x)
        F = R.F
        v = F.val(x)
        u = F.mul(x, F.pow(F.uniformizer, -v)) if v else x
        a = self.angle_unit(R.reduce(u))
        if v:
            if self.unif is None:
                raise ValueError("value at the uniformizer is not set")
            a += v * self.unif
        return a % 1

    def value(self, x) -> CycloElement:
        return CycloElement.root_of_unity(self.angle(x))

    # -- algebra
    def _gen_angles(self) -> list[Fraction]:
        return [Fraction(e, n) for e, n in zip(self.exponents, self.group.orders)]

    @classmethod
    def from_gen_angles(cls, group: UnitGroup, angles, unif=None) -> "MultChar":
        exps = []
        for a, n in zip(angles, group.orders):
            k = Fraction(a) * n
            if k.denominator != 1:
                raise ValueError("angles are not those of a character of this group")
            exps.append(int(k))
        return cls(group, exps, unif)

    def lift(self, level: int) -> "MultChar":
        """The same character viewed on (O/p^level)^x, level >= current."""
        if isinstance(self.ring, FiniteField) or level == self.level:
            return self
        if level < self.level:
            return self.descend(level)
        G = unit_group(self.field, level)
        R = self.ring
        angles = [self.angle_unit(R.reduce(G.ring.to_field(g))) for g in G.gens]
        return MultChar.from_gen_angles(G, angles, self.unif)

    def descend(self, level: int) -> "MultChar":
        """Restrict to a smaller level; requires level >= conductor."""
        if level >= self.level:
            return self.lift(level)
        if self.conductor > level:
            raise ValueError("character does not factor through this level")
        G = unit_group(self.field, level)
        F = self.field
        # each generator of G lifts to some unit at the current level
        angles = []
        for g in G.gens:
            angles.append(self.angle_unit(self.ring.reduce(F.elt(*g))))
        return MultChar.from_gen_angles(G, angles, self.unif)

    def minimal(self) -> "MultChar":
        if isinstance(self.ring, FiniteField):
            return self
        return self.descend(self.conductor)

    def __mul__(self, other: "MultChar") -> "MultChar":
        if isinstance(self.ring, FiniteField):
            if other.group is not self.group:
                raise ValueError("characters of different finite fields")
            return MultChar(self.group, [a + b for a, b in zip(self.exponents, other.exponents)])
        if self.field != other.field:
            raise ValueError("characters of different fields")
        lv = max(self.level, other.level)
        a, b = self.lift(lv), other.lift(lv)
        unif = None if a.unif is None or b.unif is None else a.unif + b.unif
        return MultChar(a.group, [x + y for x, y in zip(a.exponents, b.exponents)], unif)

    def __pow__(self, k: int) -> "MultChar":
        unif = None if self.unif is None else self.unif * k
        return MultChar(self.group, [k * e for e in self.exponents], unif)

    def inverse(self) -> "MultChar":
        return self ** -1

    def with_unif(self, unif) -> "MultChar":
        return MultChar(self.group, self.exponents, unif)

    def is_trivial_on_units(self) -> bool:
        return not any(self.exponents)

    @property
    def order(self) -> int:
        o = 1
        for e, n in zip(self.exponents, self.group.orders):
            o = lcm(o, n // gcd(e, n))
        if self.unif is not None:
            o = lcm(o, self.unif.denominator)
        return o

    @property
    def unit_order(self) -> int:
        return self.with_unif(None).order

    @property
    def conductor(self) -> int:
        """Smallest m with the character trivial on U^m."""
        if self.is_trivial_on_units():
            return 0
        if isinstance(self.ring, FiniteField):
            return 1
        G = self.group
        m = G.level
        while m > 1 and all(self.angle_unit(g) == 0 for g in filtration_elements(G, m - 1)):
            m -= 1
        return m

    def trivial_on(self, m: int) -> bool:
        """Is the character trivial on U^m?"""
        if m >= self.level:
            return True
        return all(self.angle_unit(g) == 0 for g in filtration_elements(self.group, m))

    def __eq__(self, other):
        if not isinstance(other, MultChar):
            return NotImplemented
        if isinstance(self.ring, FiniteField) or isinstance(other.ring, FiniteField):
            return self.group is other.group and self.exponents == other.exponents
        if self.field != other.field or self.unif != other.unif:
            return False
        lv = max(self.level, other.level)
        return self.lift(lv).exponents == other.lift(lv).exponents

    def __hash__(self):
        m = self.minimal()
        return hash((m.label,))


def conductor(chi: MultChar) -> int:
    return chi.conductor


def enumerate_mult_chars(G: UnitGroup, unif: Fraction | None = None):
    """All characters of the finite group G, in lexicographic exponent order."""
    for exps in itertools.product(*[range(n) for n in G.orders]):
        yield MultChar(G, exps, unif)


def ff_char(F: FiniteField, j: int) -> MultChar:
    """The character g^k -> exp(2 pi i jk/(q-1)) for the fixed generator g of F_q^x."""
    G = unit_group(F)
    return MultChar(G, [j] if G.orders else [])


def ramified_chars(F, a: int, unif: Fraction = Fraction(0)):
    """Characters of F^x with conductor exactly a (and the given value at the uniformizer)."""
    F = _field(F)
    G = unit_group(F, a)
    for chi in enumerate_mult_chars(G, unif):
        if chi.conductor == a:
            yield chi


# ---------------------------------------------------------------------------
# norm inflation and the quadratic character of K


def norm_inflate(theta: MultChar, K) -> MultChar:
    """theta o N_{K/Q_p}, returned at its conductor."""
    K = _field(K)
    if theta.field is None or theta.field.deg != 1:
        raise ValueError("theta must be a character of Q_p^x")
    b = K.e * theta.level
    G = unit_group(K, b)
    R0 = theta.ring
    angles = []
    for g in G.gens:
        n = K.norm(K.elt(*g))
        angles.append(theta.angle_unit(R0.reduce((n,))))
    unif = None
    if theta.unif is not None:
        unif = theta.angle((K.norm(K.uniformizer),))
    return MultChar.from_gen_angles(G, angles, unif).minimal()


@lru_cache(maxsize=None)
def omega_char(K) -> MultChar:
    """The quadratic character of Q_p^x attached to K by the norm symbol."""
    K = _field(K)
    Qp = base_field(K.p)
    G = unit_group(Qp, max(K.d, 1))
    angles = [Fraction(0) if norm_symbol(g[0], K) == 1 else Fraction(1, 2) for g in G.gens]
    unif = Fraction(0) if norm_symbol(K.p, K) == 1 else Fraction(1, 2)
    return MultChar.from_gen_angles(G, angles, unif).minimal()


def tunnel_check(theta: MultChar, K) -> tuple[int, int]:
    """Both sides of f a(theta_K) + d = a(theta) + a(theta omega_K)."""
    K = _field(K)
    tk = norm_inflate(theta, K)
    w = omega_char(K)
    lhs = K.f * tk.conductor + K.d
    rhs = theta.conductor + (theta * w).conductor
    return lhs, rhs


# ---------------------------------------------------------------------------
# the constant c in chi(1 + x) = phi(c x)


def solve_c(chi: MultChar, phi: AddChar, r: int | None = None):
    """A c in F^x with chi(1+x) = phi(c x) for all x in p^r, 2r >= a(chi).

    v_F(c) = -(a(chi) + n(phi)); the unit part is found by search over
    representatives modulo p^(a-r).
    """
    F = chi.field
    a = chi.conductor
    n = phi.conductor
    if r is None:
        r = -(-a // 2)
    if 2 * r < a:
        raise ValueError("need 2r >= a(chi)")
    pi = F.uniformizer
    v = -(a + n)
    base = F.pow(pi, v)
    if a == 0 or r >= a:
        return base
    chi = chi.lift(max(chi.level, a))
    R = chi.ring
    pir = F.pow(pi, r)
    test = [F.mul(pir, F.elt(*g)) for g in ResidueRing(F, a - r).elements()]
    lhs = [chi.angle_unit(R.reduce(F.add(F.elt(1), x))) for x in test]
    for u in unit_group(F, a - r).elements:
        c = F.mul(base, F.elt(*u))
        if all(phi.angle(F.mul(c, x)) == l for x, l in zip(test, lhs)):
            return c
    raise AssertionError("no c found; check the conductor data")


# ---------------------------------------------------------------------------
# admissibility


def _factors_through_norm_on(chi: MultChar, K: LocalField, m: int) -> bool:
    """Does chi restricted to U_K^m agree with some theta o N?

    theta may be taken of level a0 = max(a(chi), d, 1); such a theta exists
    exactly when chi is constant on the fibres of N mod p^a0 (a character of
    the image subgroup extends to all of (Z/p^a0)^x).
    """
    a = chi.conductor
    a0 = max(a, K.d, 1)
    # N(x + h) = N(x) + Tr(x' h) + N(h) and Tr(pi^c O_K) = p^[(c+d)/2], so
    # N mod p^a0 is defined on classes mod pi^(e a0 - d)
    b = max(a, K.e * a0 - K.d)
    chi_b = chi.lift(b)
    # constant on fibres of N <=> trivial on the norm-one subgroup
    return all(chi_b.angle_unit(g) == 0 for g in _norm_one_generators(chi_b.group, m, a0))


@lru_cache(maxsize=None)
def _norm_one_generators(G: UnitGroup, m: int, a0: int) -> tuple:
    """Generators of {g in U^m : N(g) = 1 mod p^a0}, found greedily."""
    ker = [g for g, key in _norm_keys(G, m, a0) if key == 1]
    span = {G.one}
    gens = []
    for g in ker:
        if g in span:
            continue
        gens.append(g)
        new = set(span)
        frontier = list(span)
        while frontier:
            nxt = []
            for x in frontier:
                y = G.mul(x, g)
                if y not in new:
                    new.add(y)
                    nxt.append(y)
            frontier = nxt
        span = new
    return tuple(gens)


@lru_cache(maxsize=None)
def _norm_keys(G: UnitGroup, m: int, a0: int) -> tuple:
    K = G.ring.F
    mod = K.p**a0
    return tuple((g, K.int_norm(g) % mod) for g in filtration_elements(G, m))


def admissible_and_minimal(K, chi: MultChar) -> tuple[bool, bool]:
    """(admissible, minimal) for a character chi of K^x.

    Admissible: chi does not factor through the norm, and when K is
    ramified neither does its restriction to U_K^1.  Minimal: the
    restriction to U_K^(a(chi)-1) does not factor through the norm.
    """
    K = _field(K)
    a = chi.conductor
    adm = not _factors_through_norm_on(chi, K, 0)
    if adm and K.ramified:
        adm = not _factors_through_norm_on(chi, K, 1)
    minimal = a >= 1 and not _factors_through_norm_on(chi, K, a - 1)
    return adm, minimal
