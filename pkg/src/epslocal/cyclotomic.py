"""Exact arithmetic in Q(zeta_N).

Elements are stored as integer vectors indexed by the exponent of zeta_N
(the group ring Z[C_N]) over a positive common denominator.  Canonical
coordinates use the tensor product, over the prime powers l^k exactly
dividing N, of the power bases of Z[zeta_{l^k}]; this basis is integral,
reduction into it costs O(N), and equality is coordinate-wise.  For prime
power N it coincides with the power basis modulo Phi_N, and
:meth:`CycloElement.power_coords` gives power-basis coordinates for any N.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

import numpy as np
from sympy import factorint, primitive_root, totient

from .padic import DEFAULT_PRECISION, ExtElement, PadicExtension, teichmuller_lift

_INT64_SAFE = 2**62


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, constant term first.

    Computed by dividing x^n - 1 by Phi_d for every proper divisor d.
    """
    if n < 1:
        raise ValueError("n must be positive")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _exact_div(poly, cyclotomic_polynomial(d))
    return tuple(poly)


def _exact_div(num: list[int], den: tuple[int, ...]) -> list[int]:
    num = list(num)
    dn = len(den) - 1
    out = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i] // den[-1]
        out[i - dn] = c
        if c:
            for j, d in enumerate(den):
                num[i - dn + j] -= c * d
    if any(num[:dn]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def _layout(n: int):
    """CRT axes for Z/n: list of (l, k, l^k) and the index permutation.

    Returns (axes, perm) where perm[i] is the flat position of exponent i in
    the multi-dimensional CRT array with axis sizes l^k.
    """
    fac = sorted(factorint(n).items()) if n > 1 else []
    axes = [(l, k, l**k) for l, k in fac]
    idx = np.arange(n, dtype=np.int64)
    flat = np.zeros(n, dtype=np.int64)
    for l, k, q in axes:
        cof = n // q
        x = (idx * pow(cof, -1, q)) % q
        flat = flat * q + x
    return axes, flat


@lru_cache(maxsize=None)
def _canonical_mask(n: int) -> np.ndarray:
    axes, flat = _layout(n)
    shape = [q for _, _, q in axes] or [1]
    keep = np.ones(shape, dtype=bool)
    for ax, (l, k, q) in enumerate(axes):
        sl = [slice(None)] * len(axes)
        lead = q // l
        sl[ax] = slice((l - 1) * lead, q)
        keep[tuple(sl)] = False
    return keep.reshape(-1)[flat]


def _reduce_vec(vec: np.ndarray, n: int) -> np.ndarray:
    """Canonical representative of a Z[C_n] vector in Z[zeta_n]."""
    axes, flat = _layout(n)
    if not axes:
        return vec.copy()
    shape = [q for _, _, q in axes]
    arr = np.zeros(n, dtype=vec.dtype)
    arr[flat] = vec
    arr = arr.reshape(shape)
    for ax, (l, k, q) in enumerate(axes):
        lead = q // l
        moved = np.moveaxis(arr, ax, 0)
        blocks = moved.reshape((l, lead) + moved.shape[1:])
        last = blocks[l - 1].copy()
        blocks[: l - 1] -= last
        blocks[l - 1] = 0
        arr = np.moveaxis(blocks.reshape(moved.shape), 0, ax)
    return np.ascontiguousarray(arr).reshape(-1)[flat]


class CycloElement:
    """An element of Q(zeta_N): sum_i vec[i] zeta_N^i / den."""

    __slots__ = ("N", "_vec", "den", "_canon")

    def __init__(self, N: int, vec, den: int = 1, *, reduced: bool = False):
        if N < 1:
            raise ValueError("N must be positive")
        vec = np.asarray(vec)
        if vec.shape != (N,):
            raise ValueError(f"expected a vector of length {N}")
        if vec.dtype != object:
            vec = vec.astype(np.int64)
        if den <= 0:
            raise ValueError("den must be positive")
        self.N = N
        self._vec = vec
        self.den = int(den)
        self._canon = None
        if reduced:
            self._canon = self._normalize(vec, self.den)

    # ---- construction -------------------------------------------------
    @classmethod
    def zero(cls, N: int = 1) -> "CycloElement":
        return cls(N, np.zeros(N, dtype=np.int64), reduced=True)

    @classmethod
    def integer(cls, a: int, N: int = 1) -> "CycloElement":
        v = np.zeros(N, dtype=np.int64)
        v[0] = a
        return cls(N, v)

    @classmethod
    def rational(cls, x: Fraction, N: int = 1) -> "CycloElement":
        x = Fraction(x)
        v = np.zeros(N, dtype=np.int64)
        v[0] = x.numerator
        return cls(N, v, x.denominator)

    @classmethod
    def zeta(cls, N: int, k: int = 1) -> "CycloElement":
        v = np.zeros(N, dtype=np.int64)
        v[k % N] = 1
        return cls(N, v)

    @classmethod
    def root_of_unity(cls, angle: Fraction) -> "CycloElement":
        """exp(2 pi i * angle) for a rational angle."""
        angle = Fraction(angle) % 1
        return cls.zeta(angle.denominator, angle.numerator)

    @classmethod
    def from_angles(cls, angles, weights=None) -> "CycloElement":
        """sum_j weights[j] * exp(2 pi i angles[j]) for rational angles."""
        angles = [Fraction(a) % 1 for a in angles]
        if weights is None:
            weights = [1] * len(angles)
        N = 1
        for a in angles:
            N = lcm(N, a.denominator)
        vec = np.zeros(N, dtype=np.int64)
        idx = np.fromiter(((a.numerator * (N // a.denominator)) for a in angles), dtype=np.int64,
                          count=len(angles))
        np.add.at(vec, idx, np.asarray(weights, dtype=np.int64))
        return cls(N, vec)

    # ---- canonical form -----------------------------------------------
    @staticmethod
    def _normalize(vec, den):
        g = den
        nz = vec[vec != 0]
        for c in nz:
            g = gcd(g, int(c))
            if g == 1:
                break
        if not len(nz):
            return vec, 1
        if g > 1:
            vec = vec // g
            den //= g
        return vec, den

    @property
    def canonical(self) -> tuple[np.ndarray, int]:
        if self._canon is None:
            red = _reduce_vec(self._vec, self.N)
            self._canon = self._normalize(red, self.den)
        return self._canon

    @property
    def coords(self) -> tuple[Fraction, ...]:
        """Canonical coordinates (exponents in the tensor basis), as rationals."""
        vec, den = self.canonical
        mask = _canonical_mask(self.N)
        return tuple(Fraction(int(c), den) for c in vec[mask])

    def power_coords(self) -> tuple[Fraction, ...]:
        """Coordinates in the power basis 1, zeta, ..., zeta^(phi(N)-1) mod Phi_N."""
        vec, den = self.canonical
        phi = cyclotomic_polynomial(self.N)
        num = [int(c) for c in vec]
        deg = len(phi) - 1
        for i in range(len(num) - 1, deg - 1, -1):
            c = num[i]
            if c:
                for j, d in enumerate(phi):
                    num[i - deg + j] -= c * d
        num = (num + [0] * deg)[:deg]
        return tuple(Fraction(c, den) for c in num)

    def is_zero(self) -> bool:
        vec, _ = self.canonical
        return not vec.any()

    # ---- ring operations ----------------------------------------------
    def inflate(self, M: int) -> "CycloElement":
        """The same number viewed in Q(zeta_M), N | M."""
        if M == self.N:
            return self
        if M % self.N:
            raise ValueError(f"{self.N} does not divide {M}")
        vec, den = self.canonical
        out = np.zeros(M, dtype=vec.dtype)
        out[np.arange(self.N) * (M // self.N)] = vec
        return CycloElement(M, out, den)

    def _common(self, other):
        if not isinstance(other, CycloElement):
            if isinstance(other, (int, np.integer)):
                other = CycloElement.integer(int(other))
            elif isinstance(other, Fraction):
                other = CycloElement.rational(other)
            else:
                return None, None
        M = lcm(self.N, other.N)
        return self.inflate(M), other.inflate(M)

    def __add__(self, other):
        a, b = self._common(other)
        if a is None:
            return NotImplemented
        den = lcm(a.den, b.den)
        va = _promote(a._vec, den // a.den)
        vb = _promote(b._vec, den // b.den)
        return CycloElement(a.N, va * (den // a.den) + vb * (den // b.den), den)

    __radd__ = __add__

    def __neg__(self):
        return CycloElement(self.N, -self._vec, self.den)

    def __sub__(self, other):
        a, b = self._common(other)
        if a is None:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def _sparse(self):
        raw = self._vec
        nz_raw = np.flatnonzero(raw)
        if self._canon is not None:
            can = self._canon[0] * (self.den // self._canon[1])
            nz_can = np.flatnonzero(can)
            if len(nz_can) < len(nz_raw):
                return nz_can, can[nz_can]
        return nz_raw, raw[nz_raw]

    def __mul__(self, other):
        a, b = self._common(other)
        if a is None:
            return NotImplemented
        N = a.N
        ia, va = a._sparse()
        ib, vb = b._sparse()
        if len(ia) == 0 or len(ib) == 0:
            return CycloElement.zero(N)
        bound = int(np.max(np.abs(va))) * int(np.max(np.abs(vb))) * min(len(ia), len(ib))
        dtype = np.int64 if bound < _INT64_SAFE else object
        out = np.zeros(N, dtype=dtype)
        va = va.astype(dtype)
        vb = vb.astype(dtype)
        if len(ia) > len(ib):
            ia, va, ib, vb = ib, vb, ia, va
        if dtype is object or len(ia) * len(ib) > 4_000_000:
            for i, c in zip(ia, va):
                out[(ib + i) % N] += c * vb
        else:
            idx = ((ia[:, None] + ib[None, :]) % N).ravel()
            vals = (va[:, None] * vb[None, :]).ravel()
            np.add.at(out, idx, vals)
        return CycloElement(N, out, a.den * b.den)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("use inverse_unimodular for negative powers")
        result = CycloElement.integer(1, self.N)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, x: Fraction) -> "CycloElement":
        x = Fraction(x)
        return CycloElement(self.N, self._vec * x.numerator, self.den * x.denominator)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(1 / Fraction(other))
        return NotImplemented

    def conj(self) -> "CycloElement":
        """Complex conjugation, i.e. the automorphism zeta -> zeta^-1."""
        return galois_conjugate(self, -1)

    def inverse_unimodular(self) -> "CycloElement":
        """1/x for x with x * conj(x) a nonzero rational (e.g. epsilon values)."""
        n = self * self.conj()
        r = n.as_rational()
        if r is None or r == 0:
            raise ArithmeticError("x * conj(x) is not a nonzero rational")
        return self.conj().scale(1 / r)

    def as_rational(self) -> Fraction | None:
        vec, den = self.canonical
        if vec[1:].any():
            return None
        return Fraction(int(vec[0]), den)

    # ---- comparison ---------------------------------------------------
    def __eq__(self, other):
        a, b = self._common(other)
        if a is None:
            return NotImplemented
        va, da = a.canonical
        vb, db = b.canonical
        return da == db and np.array_equal(va, vb)

    def __hash__(self):
        # hash of the minimal field representation
        M = self.minimal_order()
        e = self.restrict(M)
        vec, den = e.canonical
        return hash((M, den, tuple(int(c) for c in np.flatnonzero(vec)), tuple(int(c) for c in vec[vec != 0])))

    def minimal_order(self) -> int:
        """Smallest M | N with the element in Q(zeta_M) (up to the 2 | M ambiguity)."""
        best = self.N
        for l in factorint(self.N):
            while best % l == 0:
                cand = best // l
                try:
                    self.restrict(cand)
                except ValueError:
                    break
                best = cand
        return best

    def restrict(self, M: int) -> "CycloElement":
        """View the element in Q(zeta_M) if it lies there (M | N)."""
        if self.N % M:
            raise ValueError("M must divide N")
        if M == self.N:
            return self
        vec, den = self.canonical
        step = self.N // M
        out = np.zeros(M, dtype=vec.dtype)
        out[:] = vec[::step]
        cand = CycloElement(M, out, den)
        if cand.inflate(self.N) != self:
            raise ValueError("element does not lie in the subfield")
        return cand

    def __repr__(self):
        c = self.coords
        nz = {i: str(x) for i, x in enumerate(c) if x}
        return f"CycloElement(N={self.N}, {nz})"

    def to_complex(self, j: int = 1) -> complex:
        return complex_embed(self, j)


def _promote(vec, factor):
    if vec.dtype != object and len(vec) and int(np.max(np.abs(vec))) * factor >= _INT64_SAFE:
        return vec.astype(object)
    return vec


def complex_embed(e: CycloElement, j: int = 1, digits: int = 15) -> complex:
    """Evaluate at zeta_N = exp(2 pi i j / N); double precision (~15 digits)."""
    if gcd(j, e.N) != 1:
        raise ValueError(f"embedding index {j} is not a unit mod {e.N}")
    if digits > 15:
        raise ValueError("only double precision embeddings are provided")
    vec, den = e.canonical
    idx = np.flatnonzero(vec)
    if not len(idx):
        return 0j
    ang = 2 * np.pi * ((idx * j) % e.N) / e.N
    w = np.asarray(vec[idx], dtype=float)
    return complex(np.sum(w * np.exp(1j * ang))) / den


def galois_conjugate(e: CycloElement, s: int) -> CycloElement:
    """Image under zeta_N -> zeta_N^s (gcd(s, N) = 1)."""
    if gcd(s, e.N) != 1:
        raise ValueError(f"{s} is not coprime to {e.N}")
    N = e.N
    vec = e._vec
    out = np.zeros(N, dtype=vec.dtype)
    out[(np.arange(N) * s) % N] = vec
    return CycloElement(N, out, e.den)


def sqrt_int(n: int) -> CycloElement:
    """The positive square root of a prime (or 1, or a prime square) in a cyclotomic field."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return CycloElement.integer(1)
    f = factorint(n)
    if len(f) == 1 and list(f.values())[0] == 2:
        return CycloElement.integer(list(f)[0])
    if len(f) != 1 or list(f.values())[0] != 1:
        raise ValueError("only primes and prime squares are supported")
    p = n
    if p == 2:
        return CycloElement.zeta(8, 1) + CycloElement.zeta(8, 7)
    g = CycloElement.from_angles([Fraction(x * x, p) for x in range(p)])
    if p % 4 == 1:
        return g
    return g * CycloElement.zeta(4, 3)


# ---------------------------------------------------------------------------
# p-adic embedding of Q(zeta_{(p-1)p})


@lru_cache(maxsize=None)
def fixed_generator(p: int) -> int:
    """The module-wide generator of F_p^x: the smallest primitive root."""
    return 1 if p == 2 else int(primitive_root(p))


@lru_cache(maxsize=None)
def _zeta_images(ring: PadicExtension) -> list[ExtElement]:
    p = ring.p
    M = (p - 1) * p
    t = ring.from_padic(teichmuller_lift(fixed_generator(p), p, ring.digits))
    z = ring.zeta_p
    tp = [ring.one()]
    for _ in range(p - 2):
        tp.append(tp[-1] * t)
    zp = [ring.one()]
    for _ in range(p - 1):
        zp.append(zp[-1] * z)
    out = []
    for i in range(M):
        # zeta_M^i = zeta_{p-1}^{i*p*(p^-1 mod p-1)}... via CRT: zeta_M = zeta_{p-1}^a zeta_p^b
        out.append(tp[(i * _crt_a(p)) % (p - 1)] * zp[(i * _crt_b(p)) % p])
    return out


@lru_cache(maxsize=None)
def _crt_a(p: int) -> int:
    # zeta_M = zeta_{p-1}^a * zeta_p^b with a*p + b*(p-1) = 1 (mod M)
    return pow(p, -1, p - 1) if p > 2 else 0


@lru_cache(maxsize=None)
def _crt_b(p: int) -> int:
    return pow(p - 1, -1, p)


def padic_embed(e: CycloElement, p: int, pi_precision: int | None = None,
                ring: PadicExtension | None = None) -> ExtElement:
    """Fixed embedding Q(zeta_{(p-1)p}) -> Q_p(zeta_p).

    zeta_{p-1} goes to the Teichmuller lift of the fixed generator g of F_p^x
    and zeta_p to 1 + pi.
    """
    if p == 2:
        raise ValueError("p-adic embedding needs an odd prime")
    M = (p - 1) * p
    if M % e.N:
        raise ValueError(f"N = {e.N} does not divide (p-1)p = {M}")
    if ring is None:
        ring = PadicExtension(p, pi_precision if pi_precision is not None else DEFAULT_PRECISION * (p - 1))
    images = _zeta_images(ring)
    x = e.inflate(M)
    vec, den = x.canonical
    acc = [0] * ring.degree
    for i in np.flatnonzero(vec):
        c = int(vec[i])
        for j, a in enumerate(images[i]._mul_pi_power(images[i].shift)):
            acc[j] += c * a
    total = ring.element(acc)
    if den != 1:
        total = total * ring.from_rational(Fraction(1, den))
    return total


def phi(n: int) -> int:
    return int(totient(n))
