"""Morita's p-adic Gamma function and the quantities built from it."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .padic import (
    DEFAULT_PRECISION,
    ExtElement,
    PadicExtension,
    PadicNumber,
    build_extension,
    from_rational,
)


@dataclass(frozen=True)
class GammaQuery:
    z: Fraction
    p: int
    precision: int = DEFAULT_PRECISION

    def __post_init__(self):
        object.__setattr__(self, "z", Fraction(self.z))
        if self.p == 2:
            raise ValueError("Gamma_p is only defined here for odd p")
        if self.z.denominator % self.p == 0:
            raise ValueError(f"{self.z} is not in Z_{self.p}")


def _limit_n(z: Fraction, p: int, digits: int) -> int:
    """Smallest positive integer congruent to z modulo p^digits."""
    m = p**digits
    n = (z.numerator * pow(z.denominator, -1, m)) % m
    return n if n > 0 else m


def _shift_poly(f: list[int], s: int, mod: int) -> list[int]:
    """Coefficients of f(x + s), truncated to len(f)."""
    D = len(f)
    out = [0] * D
    spow = [1] * D
    for i in range(1, D):
        spow[i] = spow[i - 1] * s % mod
    for i, a in enumerate(f):
        if a:
            for j in range(i + 1):
                out[j] = (out[j] + a * comb(i, j) * spow[i - j]) % mod
    return out


def _mul_poly(f: list[int], g: list[int], mod: int) -> list[int]:
    D = len(f)
    out = [0] * D
    for i, a in enumerate(f):
        if a:
            for j in range(D - i):
                out[i + j] = (out[i + j] + a * g[j]) % mod
    return out


@lru_cache(maxsize=None)
def _block_polys(p: int, N: int, top: int) -> tuple:
    """F_k(x) = prod_{0<j<p^k, p∤j} (x + j) mod p^N for k = 1..top.

    Only evaluated at x divisible by p, so degrees >= N can be dropped.
    """
    mod = p**N
    D = N + 1
    f = [1] + [0] * (D - 1)
    for j in range(1, p):
        f = _mul_poly(f, [j, 1] + [0] * (D - 2), mod)
    polys = [None, f]
    for k in range(1, top):
        g = [1] + [0] * (D - 1)
        for c in range(p):
            g = _mul_poly(g, _shift_poly(f, c * p**k, mod), mod)
        f = g
        polys.append(f)
    return tuple(polys)


def _eval(f, x: int, mod: int) -> int:
    acc = 0
    for a in reversed(f):
        acc = (acc * x + a) % mod
    return acc


def coprime_factorial(n: int, p: int, N: int) -> int:
    """prod_{0<j<n, p∤j} j mod p^N, via block polynomials."""
    mod = p**N
    digits = []
    m = n
    while m:
        digits.append(m % p)
        m //= p
    if not digits:
        return 1 % mod
    polys = _block_polys(p, N, max(len(digits) - 1, 1))
    prod, offset = 1, 0
    for k in range(len(digits) - 1, 0, -1):
        for _ in range(digits[k]):
            prod = prod * _eval(polys[k], offset, mod) % mod
            offset += p**k
    for j in range(offset + 1, n):
        prod = prod * j % mod
    return prod


def coprime_factorial_naive(n: int, p: int, N: int) -> int:
    mod = p**N
    prod = 1
    for j in range(1, n):
        if j % p:
            prod = prod * j % mod
    return prod


def gamma_p(q: GammaQuery | Fraction | int, p: int | None = None,
            precision: int | None = None, naive: bool = False) -> PadicNumber:
    """Gamma_p(z) = lim (-1)^n prod_{0<j<n, p∤j} j over positive n -> z."""
    if not isinstance(q, GammaQuery):
        q = GammaQuery(Fraction(q), p, DEFAULT_PRECISION if precision is None else precision)
    p, prec = q.p, q.precision
    n = _limit_n(q.z, p, prec + 2)
    N = prec + 2
    fact = coprime_factorial_naive(n, p, N) if naive else coprime_factorial(n, p, N)
    val = (-fact if n % 2 else fact) % p**prec
    return PadicNumber(p, 0, val, prec)


def gross_koblitz_rhs(r: int, k: int, p: int, precision: int = DEFAULT_PRECISION,
                      ring: PadicExtension | None = None) -> ExtElement:
    """pi^(r(p-1)/k) * Gamma_p(r/k), with pi^(p-1) = -p the Dwork root.

    ``precision`` counts base-p digits; the extension carries (p-1) times as
    many pi-adic digits.
    """
    if (p - 1) % k:
        raise ValueError(f"{k} does not divide {p - 1}")
    if not 0 < r < k:
        raise ValueError("need 0 < r < k")
    if ring is None:
        ring = build_extension(p, (precision + 2) * (p - 1))
    g = gamma_p(GammaQuery(Fraction(r, k), p, precision + 2))
    return ring.dwork_pi ** (r * (p - 1) // k) * ring.from_padic(g)


# ---------------------------------------------------------------------------
# factorial formula for {Gamma_p(1/2m) / Gamma_p(1/m)}^2 mod p


def least_x0(m: int, p: int) -> int:
    """Least positive x with 2 m x = 1 mod p."""
    return pow(2 * m, -1, p)


def _check_odd_order(m: int, p: int):
    if m <= 1 or m % 2 == 0:
        raise ValueError("m must be odd and > 1")
    if (p - 1) % m:
        raise ValueError(f"{m} does not divide {p - 1}")


def _factorial_mod(n: int, p: int) -> int:
    """n! with its p-part removed, mod p (Wilson-block form)."""
    out = 1
    for j in range(1, n + 1):
        jj = j
        while jj % p == 0:
            jj //= p
        out = out * jj % p
    return out


def gamma_ratio_factorial(m: int, p: int) -> int:
    """{(x0-1)!/[(x0-1)/p]! * [(2x0-1)/p]!/(2x0-1)!}^2 mod p."""
    _check_odd_order(m, p)
    x0 = least_x0(m, p)
    num = _factorial_mod(x0 - 1, p) * _factorial_mod((2 * x0 - 1) // p, p)
    den = _factorial_mod((x0 - 1) // p, p) * _factorial_mod(2 * x0 - 1, p)
    r = num * pow(den, -1, p) % p
    return r * r % p


def gamma_ratio_mod_p(m: int, p: int) -> int:
    """{Gamma_p(1/2m) / Gamma_p(1/m)}^2 reduced mod p."""
    _check_odd_order(m, p)
    a = gamma_p(GammaQuery(Fraction(1, 2 * m), p, 2)).residue()
    b = gamma_p(GammaQuery(Fraction(1, m), p, 2)).residue()
    r = a * pow(b, -1, p) % p
    return r * r % p


# ---------------------------------------------------------------------------
# values pi^(h/2) * u with u in Q_p(zeta_p)


@dataclass(frozen=True)
class HalfPiElement:
    """pi^(half/2) * unit with pi the Dwork root; squares live in Q_p(zeta_p)."""

    half: int
    unit: ExtElement

    @property
    def ring(self) -> PadicExtension:
        return self.unit.ring

    @property
    def valuation(self) -> Fraction:
        """p-adic valuation."""
        return Fraction(self.half, 2 * (self.ring.p - 1)) + Fraction(self.unit.valuation(), self.ring.p - 1)

    def square(self) -> ExtElement:
        return self.ring.dwork_pi ** self.half * self.unit * self.unit

    def exact(self) -> ExtElement:
        if self.half % 2:
            raise ValueError("odd half-power of pi is not in Q_p(zeta_p)")
        return self.ring.dwork_pi ** (self.half // 2) * self.unit

    def __mul__(self, other: "HalfPiElement") -> "HalfPiElement":
        return HalfPiElement(self.half + other.half, self.unit * other.unit)


def c_p_constant(p: int, N_p: int, m: int, precision: int = DEFAULT_PRECISION):
    """(-p)^(-1/2m) Gamma_p(1/2m)/Gamma_p(1/m) when p odd, N_p = 1, m even; else 1.

    The first branch is returned as a HalfPiElement: (-p)^(-1/2m) is
    pi^(-(p-1)/2m), a half-integral power of pi when 2m does not divide p-1.
    """
    if m == 0:
        raise ValueError("order m must be positive")
    if p == 2 or N_p != 1 or m % 2:
        return 1
    return c_p_gamma_factor(p, m, precision)


def c_p_gamma_factor(p: int, m: int, precision: int = DEFAULT_PRECISION) -> HalfPiElement:
    """(-p)^(-1/2m) Gamma_p(1/2m)/Gamma_p(1/m) for any m | p-1."""
    if (p - 1) % m:
        raise ValueError(f"{m} does not divide {p - 1}")
    ring = build_extension(p, (precision + 2) * (p - 1))
    a = gamma_p(GammaQuery(Fraction(1, 2 * m), p, precision + 2))
    b = gamma_p(GammaQuery(Fraction(1, m), p, precision + 2))
    return HalfPiElement(-((p - 1) // m), ring.from_padic(a / b))


def padic_from_fraction(x: Fraction, p: int, precision: int = DEFAULT_PRECISION) -> PadicNumber:
    x = Fraction(x)
    return from_rational(x.numerator, x.denominator, p, precision, integral=False)
