"""Truncated p-adic numbers and the totally ramified extension Q_p(zeta_p).

Digits are written least significant first (standard p-adic order); the
string form ends in ``O(p^K)`` where K is the absolute precision.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from sympy import isprime

DEFAULT_PRECISION = int(os.environ.get("EPSLOCAL_PRECISION", "20"))


class PrecisionError(ArithmeticError):
    """Raised when a result is not determined at the available precision."""


def vp(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp_rational(x: Fraction, p: int) -> int:
    x = Fraction(x)
    return vp(x.numerator, p) - vp(x.denominator, p)


@dataclass(frozen=True)
class PadicNumber:
    """p^valuation * unit, the unit known modulo p^precision.

    The zero element at finite precision has ``unit == 0`` and its valuation
    is the precision floor: the value is only known to lie in p^valuation Z_p.
    """

    p: int
    valuation: int
    unit: int
    precision: int

    @property
    def is_zero(self) -> bool:
        return self.unit == 0

    @property
    def digits(self) -> list[int]:
        out, u = [], self.unit
        for _ in range(self.precision):
            out.append(u % self.p)
            u //= self.p
        return out

    @property
    def absolute_precision(self) -> int:
        return self.valuation if self.is_zero else self.valuation + self.precision

    @classmethod
    def zero(cls, p: int, floor: int) -> "PadicNumber":
        return cls(p, floor, 0, 0)

    @classmethod
    def from_int(cls, n: int, p: int, precision: int = DEFAULT_PRECISION) -> "PadicNumber":
        return from_rational(n, 1, p, precision)

    def _scaled(self, v: int, absprec: int) -> int:
        """Integer representative of self / p^v modulo p^(absprec - v)."""
        return (self.unit * self.p ** (self.valuation - v)) % self.p ** (absprec - v)

    def _make(self, v: int, n: int, absprec: int) -> "PadicNumber":
        p = self.p
        n %= p ** (absprec - v)
        if n == 0:
            return PadicNumber.zero(p, absprec)
        w = vp(n, p)
        return PadicNumber(p, v + w, n // p**w, absprec - v - w)

    def __add__(self, other):
        other = self._coerce(other)
        absprec = min(self.absolute_precision, other.absolute_precision)
        v = min(self.valuation, other.valuation, absprec)
        if v == absprec:
            return PadicNumber.zero(self.p, absprec)
        a = self._scaled(v, absprec) if not self.is_zero else 0
        b = other._scaled(v, absprec) if not other.is_zero else 0
        return self._make(v, a + b, absprec)

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero:
            return self
        return PadicNumber(self.p, self.valuation, (-self.unit) % self.p**self.precision, self.precision)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if self.is_zero or other.is_zero:
            floor = self.valuation + other.valuation
            return PadicNumber.zero(self.p, floor)
        prec = min(self.precision, other.precision)
        return PadicNumber(self.p, self.valuation + other.valuation,
                           (self.unit * other.unit) % self.p**prec, prec)

    __rmul__ = __mul__

    def inverse(self) -> "PadicNumber":
        if self.is_zero:
            raise ZeroDivisionError("p-adic zero at this precision")
        m = self.p**self.precision
        return PadicNumber(self.p, -self.valuation, pow(self.unit, -1, m), self.precision)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = PadicNumber(self.p, 0, 1, self.precision)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def _coerce(self, other) -> "PadicNumber":
        if isinstance(other, PadicNumber):
            if other.p != self.p:
                raise ValueError("mixing different primes")
            return other
        if isinstance(other, (int, Fraction)):
            x = Fraction(other)
            return from_rational(x.numerator, x.denominator, self.p, self.precision, integral=False)
        return NotImplemented

    def residue(self) -> int:
        """Image in Z/p (requires an integral element)."""
        if self.valuation < 0:
            raise ValueError("not integral")
        return 0 if self.valuation > 0 or self.is_zero else self.unit % self.p

    def to_int(self) -> int:
        """Integer representative modulo p^absolute_precision (integral elements)."""
        if self.valuation < 0:
            raise ValueError("not integral")
        if self.is_zero:
            return 0
        return self.unit * self.p**self.valuation

    def agrees(self, other: "PadicNumber", digits: int) -> bool:
        """True when self - other has valuation >= digits (absolute)."""
        diff = self - other
        return diff.valuation >= digits if diff.is_zero else diff.valuation >= digits

    def __str__(self) -> str:
        if self.is_zero:
            return f"O({self.p}^{self.valuation})"
        terms = []
        for i, d in enumerate(self.digits):
            if d:
                terms.append(f"{d}*{self.p}^{self.valuation + i}")
        return " + ".join(terms + [f"O({self.p}^{self.absolute_precision})"])

    def digit_string(self) -> str:
        """Base-p digits, least significant first, then the O-term."""
        return "p^%d * [%s] + O(%d^%d)" % (
            self.valuation, " ".join(str(d) for d in self.digits), self.p, self.absolute_precision)


def from_rational(num: int, den: int, p: int, precision: int = DEFAULT_PRECISION,
                  integral: bool = True) -> PadicNumber:
    """num/den as an element of Q_p with `precision` significant digits.

    With ``integral`` set (the default) a denominator divisible by p is an
    error, since the caller asked for an element of Z_p.
    """
    if den == 0:
        raise ZeroDivisionError("den == 0")
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    x = Fraction(num, den)
    if integral and x.denominator % p == 0:
        raise ValueError(f"{num}/{den} is not in Z_{p}")
    if x == 0:
        return PadicNumber.zero(p, precision)
    v = vp_rational(x, p)
    y = x / Fraction(p) ** v
    m = p**precision
    unit = (y.numerator * pow(y.denominator, -1, m)) % m
    return PadicNumber(p, v, unit, precision)


def teichmuller_lift(u: int, p: int, precision: int = DEFAULT_PRECISION) -> PadicNumber:
    """The (p-1)-th root of unity in Z_p congruent to u mod p."""
    if u % p == 0:
        raise ValueError("Teichmuller lift of a non-unit")
    m = p**precision
    x = u % m
    while True:
        y = pow(x, p, m)
        if y == x:
            return PadicNumber(p, 0, x, precision)
        x = y


# ---------------------------------------------------------------------------
# Q_p(zeta_p) with uniformizer pi = zeta_p - 1


class PadicExtension:
    """Z_p[pi] with pi = zeta_p - 1, truncated at pi-adic precision ``pi_precision``.

    Integral elements are coefficient vectors in the basis 1, pi, ..., pi^(p-2)
    with entries modulo p^digits; the minimal polynomial of pi is the
    Eisenstein polynomial Phi_p(1 + X).
    """

    def __init__(self, p: int, pi_precision: int | None = None):
        if p == 2:
            raise ValueError("Q_2(zeta_2) = Q_2: the extension degenerates at p = 2")
        if not isprime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.degree = p - 1
        if pi_precision is None:
            pi_precision = DEFAULT_PRECISION * (p - 1)
        self.pi_precision = pi_precision
        # two guard digits absorb the precision lost by exact division by pi
        self.digits = -(-pi_precision // (p - 1)) + 2
        self.modulus = p**self.digits
        # pi^(p-1) = -sum_{j<p-1} C(p, j+1) pi^j
        self.relation = [(-comb(p, j + 1)) % self.modulus for j in range(p - 1)]

    def __repr__(self):
        return f"PadicExtension(p={self.p}, pi_precision={self.pi_precision})"

    def __eq__(self, other):
        return isinstance(other, PadicExtension) and (self.p, self.pi_precision) == (other.p, other.pi_precision)

    def __hash__(self):
        return hash((self.p, self.pi_precision))

    # raw polynomial helpers on coefficient lists
    def _reduce(self, poly: list[int]) -> tuple[int, ...]:
        d, m = self.degree, self.modulus
        poly = [c % m for c in poly]
        for i in range(len(poly) - 1, d - 1, -1):
            c = poly[i]
            if c:
                base = i - d
                for j, r in enumerate(self.relation):
                    poly[base + j] = (poly[base + j] + c * r) % m
            poly[i] = 0
        poly += [0] * max(0, d - len(poly))
        return tuple(poly[:d])

    def _mul(self, a, b) -> tuple[int, ...]:
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return self._reduce(out)

    def _unit_valuation(self, coeffs) -> int | None:
        """pi-adic valuation of an integral element; None if zero mod p^digits."""
        best = None
        for j, c in enumerate(coeffs):
            c %= self.modulus
            if c:
                v = vp(c, self.p) * (self.p - 1) + j
                best = v if best is None else min(best, v)
        return best

    def _div_pi(self, coeffs) -> tuple[int, ...]:
        """Exact division of an integral element divisible by pi."""
        p, m = self.p, self.modulus
        a0 = coeffs[0] % m
        if a0 % p:
            raise ArithmeticError("not divisible by pi")
        b = a0 // p
        # p = -pi * R(pi), R = sum_{j=2}^{p} C(p, j) pi^(j-2)
        out = list(coeffs[1:]) + [0]
        for j in range(2, p + 1):
            out[j - 2] -= b * comb(p, j)
        return self._reduce(out)

    # constructors
    def element(self, coeffs, shift: int = 0, prec: int | None = None) -> "ExtElement":
        coeffs = list(coeffs) + [0] * (self.degree - len(coeffs))
        return ExtElement(self, shift, self._reduce(coeffs), self.pi_precision if prec is None else prec).normalized()

    def zero(self) -> "ExtElement":
        return ExtElement(self, 0, (0,) * self.degree, self.pi_precision)

    def one(self) -> "ExtElement":
        return self.element([1])

    def from_padic(self, x: PadicNumber) -> "ExtElement":
        if x.p != self.p:
            raise ValueError("prime mismatch")
        if x.is_zero:
            return self.zero()
        prec = min(self.pi_precision, x.precision * (self.p - 1))
        unit = ExtElement(self, 0, self._reduce([x.unit]), prec)
        return unit * self.element([self.p]) ** x.valuation

    def from_int(self, n: int) -> "ExtElement":
        return self.element([n])

    def from_rational(self, x: Fraction) -> "ExtElement":
        x = Fraction(x)
        return self.from_padic(from_rational(x.numerator, x.denominator, self.p, self.digits, integral=False))

    @property
    def pi(self) -> "ExtElement":
        return self.element([0, 1])

    @property
    def zeta_p(self) -> "ExtElement":
        return self.one() + self.pi

    @property
    def dwork_pi(self) -> "ExtElement":
        """The root of X^(p-1) = -p congruent to zeta_p - 1 modulo pi^2."""
        return _dwork_pi(self)


@lru_cache(maxsize=None)
def _dwork_pi(ring: PadicExtension) -> "ExtElement":
    p = ring.p
    # c = -p / pi^(p-1) is a unit congruent to 1 mod pi
    c = (ring.from_int(-p) * ring.pi ** (-(p - 1)))
    w = ring.one()
    inv_pm1 = ring.from_int(pow(p - 1, -1, ring.modulus))
    for _ in range(ring.pi_precision.bit_length() + 4):
        w = w - (w ** (p - 1) - c) * inv_pm1 * (w ** (p - 2)).inverse()
    return ring.pi * w


@dataclass(frozen=True)
class ExtElement:
    """pi^shift * u with u an integral element known modulo pi^prec.

    After normalization u is a unit (or the element is zero at precision, in
    which case ``coeffs`` is all zero and ``shift`` is the precision floor).
    """

    ring: PadicExtension
    shift: int
    coeffs: tuple
    prec: int

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def normalized(self) -> "ExtElement":
        v = self.ring._unit_valuation(self.coeffs)
        if v is None or v >= self.prec:
            return ExtElement(self.ring, self.shift + min(self.prec, self.prec if v is None else v),
                              (0,) * self.ring.degree, 0)
        coeffs = self.coeffs
        for _ in range(v):
            coeffs = self.ring._div_pi(coeffs)
        return ExtElement(self.ring, self.shift + v, coeffs, self.prec - v)

    def valuation(self) -> int:
        """pi-adic valuation (the precision floor for a zero element)."""
        return self.shift

    @property
    def absolute_precision(self) -> int:
        return self.shift + self.prec

    def _mul_pi_power(self, k: int) -> tuple:
        coeffs = list(self.coeffs)
        for _ in range(k):
            coeffs = list(self.ring._reduce([0] + coeffs))
        return tuple(coeffs)

    def __add__(self, other):
        other = self._coerce(other)
        if self.is_zero and other.is_zero:
            return ExtElement(self.ring, min(self.shift, other.shift), self.coeffs, 0)
        absprec = min(self.absolute_precision, other.absolute_precision)
        v = min(self.shift if not self.is_zero else absprec,
                other.shift if not other.is_zero else absprec)
        a = self._mul_pi_power(self.shift - v) if not self.is_zero else (0,) * self.ring.degree
        b = other._mul_pi_power(other.shift - v) if not other.is_zero else (0,) * self.ring.degree
        coeffs = self.ring._reduce([x + y for x, y in zip(a, b)])
        return ExtElement(self.ring, v, coeffs, absprec - v).normalized()

    __radd__ = __add__

    def __neg__(self):
        return ExtElement(self.ring, self.shift, self.ring._reduce([-c for c in self.coeffs]), self.prec)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        if self.is_zero or other.is_zero:
            floor = (self.shift + other.shift)
            return ExtElement(self.ring, floor, (0,) * self.ring.degree, 0)
        prec = min(self.prec, other.prec)
        return ExtElement(self.ring, self.shift + other.shift,
                          self.ring._mul(self.coeffs, other.coeffs), prec).normalized()

    __rmul__ = __mul__

    def inverse(self) -> "ExtElement":
        if self.is_zero:
            raise ZeroDivisionError("zero at this precision")
        ring = self.ring
        u = ExtElement(ring, 0, self.coeffs, self.prec)
        y = ring.from_int(pow(self.coeffs[0], -1, ring.modulus))
        two = ring.from_int(2)
        for _ in range(ring.pi_precision.bit_length() + 3):
            y = y * (two - u * y)
        return ExtElement(ring, -self.shift, y.coeffs, self.prec)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def _coerce(self, other) -> "ExtElement":
        if isinstance(other, ExtElement):
            if other.ring.p != self.ring.p:
                raise ValueError("mixing different extensions")
            return other
        if isinstance(other, int):
            return self.ring.from_int(other)
        if isinstance(other, Fraction):
            return self.ring.from_rational(other)
        if isinstance(other, PadicNumber):
            return self.ring.from_padic(other)
        return NotImplemented

    def leading_unit_agreement(self, other: "ExtElement") -> int:
        """Number of pi-adic digits of the leading unit on which self and other agree.

        Returns -1 when the valuations differ.
        """
        a, b = self.normalized(), other.normalized()
        if a.is_zero or b.is_zero or a.shift != b.shift:
            return -1
        diff = a - b
        limit = min(a.prec, b.prec)
        if diff.is_zero:
            return min(limit, diff.shift - a.shift)
        return min(limit, diff.shift - a.shift)

    def agrees(self, other: "ExtElement", pi_digits: int) -> bool:
        return self.leading_unit_agreement(other) >= pi_digits

    def __str__(self):
        if self.is_zero:
            return f"O(pi^{self.shift})"
        return f"pi^{self.shift} * {list(self.coeffs)} + O(pi^{self.absolute_precision})"


def build_extension(p: int, pi_precision: int | None = None) -> PadicExtension:
    return PadicExtension(p, pi_precision)
