"""Arithmetic in GF(p) and GF(2^h).

Elements of GF(2^h) are stored as polynomials over GF(2) packed into ints
(bit i is the coefficient of x^i), reduced modulo a fixed irreducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

__all__ = [
    "FieldSpec",
    "FieldElement",
    "gf2h_make",
    "prime_field",
    "galois_field",
    "is_prime",
    "is_irreducible_gf2",
    "prime_power",
]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, h) with q = p**h, or raise ValueError."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = next(d for d in range(2, q + 1) if q % d == 0)
    h, rest = 0, q
    while rest % p == 0:
        rest //= p
        h += 1
    if rest != 1:
        raise ValueError(f"{q} is not a prime power")
    return p, h


def _poly_mod(a: int, m: int) -> int:
    dm = m.bit_length()
    while a.bit_length() >= dm:
        a ^= m << (a.bit_length() - dm)
    return a


def _clmul(a: int, b: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def is_irreducible_gf2(poly: int) -> bool:
    """Irreducibility over GF(2) by trial division with every lower-degree factor."""
    d = poly.bit_length() - 1
    if d < 1:
        return False
    for f in range(2, 1 << (d // 2 + 1)):
        if _poly_mod(poly, f) == 0:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """GF(p) (h = 1) or GF(2^h) with an explicit irreducible modulus."""

    p: int
    h: int = 1
    modulus: int | None = None

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"characteristic {self.p} is not prime")
        if self.h < 1:
            raise ValueError("extension degree must be positive")
        if self.h > 1 or self.modulus is not None:
            if self.p != 2:
                raise ValueError("extension fields are supported in characteristic 2 only")
            if self.modulus is None or self.modulus.bit_length() - 1 != self.h:
                raise ValueError(f"need a degree-{self.h} modulus")
            if not is_irreducible_gf2(self.modulus):
                raise ValueError(f"modulus {bin(self.modulus)} is reducible")

    @property
    def order(self) -> int:
        return self.p**self.h

    @property
    def binary(self) -> bool:
        return self.modulus is not None

    def __call__(self, value: int) -> FieldElement:
        if self.binary:
            return FieldElement(self, _poly_mod(int(value), self.modulus))
        return FieldElement(self, int(value) % self.p)

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    def elements(self) -> list[FieldElement]:
        return [FieldElement(self, v) for v in range(self.order)]

    # Raw operations on canonical representatives; FieldElement wraps these.

    def add(self, a: int, b: int) -> int:
        return a ^ b if self.binary else (a + b) % self.p

    def neg(self, a: int) -> int:
        return a if self.binary else (-a) % self.p

    def mul(self, a: int, b: int) -> int:
        if self.binary:
            return _poly_mod(_clmul(a, b), self.modulus)
        return a * b % self.p

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        if not self.binary:
            return pow(a, -1, self.p)
        return self.pow(a, self.order - 2)

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv(a), -k
        out = 1
        while k:
            if k & 1:
                out = self.mul(out, a)
            a = self.mul(a, a)
            k >>= 1
        return out


@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    value: int

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise ValueError("elements belong to different fields")
            return other.value
        if isinstance(other, int):
            return self.spec(other).value
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        return FieldElement(self.spec, self.spec.add(self.value, b))

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.spec, self.spec.neg(self.value))

    def __sub__(self, other):
        b = self._other(other)
        return FieldElement(self.spec, self.spec.add(self.value, self.spec.neg(b)))

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        b = self._other(other)
        return FieldElement(self.spec, self.spec.mul(self.value, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        return FieldElement(self.spec, self.spec.mul(self.value, self.spec.inv(b)))

    def __pow__(self, k: int):
        return FieldElement(self.spec, self.spec.pow(self.value, k))

    def inverse(self) -> FieldElement:
        return FieldElement(self.spec, self.spec.inv(self.value))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"GF({self.spec.order})({self.value})"


@lru_cache(maxsize=None)
def gf2h_make(h: int) -> FieldSpec:
    """GF(2^h) with the smallest irreducible modulus having nonzero constant term."""
    if not 1 <= h <= 16:
        raise ValueError("extension degree must be in 1..16")
    for m in range(1 << h, 1 << (h + 1)):
        if m & 1 and is_irreducible_gf2(m):
            return FieldSpec(2, h, m)
    raise AssertionError("unreachable: irreducibles exist in every degree")


@lru_cache(maxsize=None)
def prime_field(p: int) -> FieldSpec:
    return FieldSpec(p)


def galois_field(q: int) -> FieldSpec:
    """GF(q) for q prime or a power of two."""
    p, h = prime_power(q)
    if h == 1:
        return prime_field(p)
    if p != 2:
        raise ValueError(f"GF({q}): odd-characteristic extensions are not supported")
    return gf2h_make(h)
