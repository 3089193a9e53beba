"""Exact arithmetic in cyclotomic fields Q(zeta_N).

An element is stored as its residue modulo the N-th cyclotomic polynomial,
i.e. as rational coefficients over the power basis 1, z, ..., z^(phi(N)-1)
with z = exp(2*pi*i/N).  Elements of different conductors are compared and
combined by embedding both into the field of conductor lcm(N1, N2).
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

import mpmath

Rational = Union[int, Fraction]


def _divisors(n: int) -> list[int]:
    small = [d for d in range(1, math.isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


@lru_cache(maxsize=None)
def totient(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


@lru_cache(maxsize=None)
def mobius(n: int) -> int:
    sign, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            sign = -sign
        p += 1
    if m > 1:
        sign = -sign
    return sign


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise ValueError("conductor must be positive")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in _divisors(n):
        if d == n:
            continue
        divisor = cyclotomic_polynomial(d)
        poly = _exact_divide(poly, divisor)
    return tuple(poly)


def _exact_divide(num: list[int], den: tuple[int, ...]) -> list[int]:
    num = list(num)
    dd = len(den) - 1
    quot = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            quot[i - dd] = c
            for j, b in enumerate(den):
                num[i - dd + j] -= c * b
    assert not any(num), "cyclotomic division left a remainder"
    return quot


def _reduce(coeffs: list[Fraction], n: int) -> tuple[Fraction, ...]:
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    a = list(coeffs)
    for i in range(len(a) - 1, deg - 1, -1):
        c = a[i]
        if c:
            base = i - deg
            for j in range(deg):
                if phi[j]:
                    a[base + j] -= c * phi[j]
            a[i] = Fraction(0)
    a = a[:deg]
    a.extend([Fraction(0)] * (deg - len(a)))
    return tuple(a)


class CyclotomicNumber:
    """Immutable element of Q(zeta_N) in reduced power-basis form."""

    __slots__ = ("conductor", "coeffs", "_hash")

    def __init__(self, conductor: int, coeffs: Iterable[Rational] = ()):
        if conductor < 1:
            raise ValueError("conductor must be positive")
        raw = [Fraction(c) for c in coeffs]
        object.__setattr__(self, "conductor", int(conductor))
        object.__setattr__(self, "coeffs", _reduce(raw, conductor))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("CyclotomicNumber is immutable")

    # construction ---------------------------------------------------

    @classmethod
    def _raw(cls, conductor: int, reduced: tuple[Fraction, ...]) -> CyclotomicNumber:
        obj = cls.__new__(cls)
        object.__setattr__(obj, "conductor", conductor)
        object.__setattr__(obj, "coeffs", reduced)
        object.__setattr__(obj, "_hash", None)
        return obj

    @classmethod
    def rational(cls, q: Rational) -> CyclotomicNumber:
        return cls._raw(1, (Fraction(q),))

    @classmethod
    def root_of_unity(cls, n: int, k: int = 1) -> CyclotomicNumber:
        """exp(2*pi*i*k/n)."""
        k %= n
        coeffs = [Fraction(0)] * (k + 1)
        coeffs[k] = Fraction(1)
        return cls(n, coeffs)

    @classmethod
    def from_exponent_counts(cls, n: int, counts: Iterable[Rational]) -> CyclotomicNumber:
        """sum_k counts[k] * zeta_n^k for a length-n count vector."""
        return cls(n, counts)

    @classmethod
    def coerce(cls, x) -> CyclotomicNumber:
        if isinstance(x, CyclotomicNumber):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.rational(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to CyclotomicNumber")

    # embedding ------------------------------------------------------

    def lift(self, conductor: int) -> CyclotomicNumber:
        """Embed into Q(zeta_M) for a multiple M of the current conductor."""
        if conductor == self.conductor:
            return self
        if conductor % self.conductor:
            raise ValueError(f"{conductor} is not a multiple of {self.conductor}")
        step = conductor // self.conductor
        spread = [Fraction(0)] * (step * (len(self.coeffs) - 1) + 1)
        for i, c in enumerate(self.coeffs):
            spread[i * step] = c
        return CyclotomicNumber._raw(conductor, _reduce(spread, conductor))

    def _common(self, other) -> tuple[CyclotomicNumber, CyclotomicNumber]:
        other = CyclotomicNumber.coerce(other)
        if other.conductor == self.conductor:
            return self, other
        if other.is_rational():
            return self, CyclotomicNumber._raw(
                self.conductor, (other.coeffs[0],) + (Fraction(0),) * (len(self.coeffs) - 1)
            )
        if self.is_rational():
            return (
                CyclotomicNumber._raw(
                    other.conductor, (self.coeffs[0],) + (Fraction(0),) * (len(other.coeffs) - 1)
                ),
                other,
            )
        n = math.lcm(self.conductor, other.conductor)
        return self.lift(n), other.lift(n)

    # predicates -----------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    def is_real(self) -> bool:
        return self == self.conj()

    def abs2(self) -> CyclotomicNumber:
        """self * conj(self), a non-negative real element."""
        return self * self.conj()

    def is_unit_modulus(self) -> bool:
        return self.abs2() == 1

    def sign(self) -> int:
        """Exact sign of a real element.

        Zero is decided symbolically; a non-zero value is evaluated at
        increasing precision until its magnitude clears the working error.
        """
        if not self.is_real():
            raise ValueError("sign() needs a real element")
        if self.is_zero():
            return 0
        if self.is_rational():
            q = self.coeffs[0]
            return (q > 0) - (q < 0)
        dps = 40
        while True:
            with mpmath.workdps(dps):
                v = self._mp_value().real
                if abs(v) > mpmath.mpf(10) ** (-(dps // 2)):
                    return 1 if v > 0 else -1
            dps *= 2
            if dps > 5000:
                raise ArithmeticError("sign evaluation did not converge")

    def _mp_value(self):
        n = self.conductor
        total = mpmath.mpc(0)
        for k, c in enumerate(self.coeffs):
            if c:
                total += mpmath.mpf(c.numerator) / c.denominator * mpmath.expjpi(mpmath.mpf(2 * k) / n)
        return total

    # arithmetic -----------------------------------------------------

    def __add__(self, other):
        try:
            a, b = self._common(other)
        except TypeError:
            return NotImplemented
        return CyclotomicNumber._raw(a.conductor, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber._raw(self.conductor, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        try:
            a, b = self._common(other)
        except TypeError:
            return NotImplemented
        return CyclotomicNumber._raw(a.conductor, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber._raw(self.conductor, tuple(x * other for x in self.coeffs))
        try:
            a, b = self._common(other)
        except TypeError:
            return NotImplemented
        if b.is_rational():
            q = b.coeffs[0]
            return CyclotomicNumber._raw(a.conductor, tuple(x * q for x in a.coeffs))
        if a.is_rational():
            q = a.coeffs[0]
            return CyclotomicNumber._raw(a.conductor, tuple(x * q for x in b.coeffs))
        prod = [Fraction(0)] * (len(a.coeffs) + len(b.coeffs) - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        return CyclotomicNumber._raw(a.conductor, _reduce(prod, a.conductor))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber._raw(self.conductor, tuple(x / other for x in self.coeffs))
        other = CyclotomicNumber.coerce(other)
        if other.is_rational():
            return self / other.coeffs[0]
        return self * other.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = CyclotomicNumber.rational(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conj(self) -> CyclotomicNumber:
        n = self.conductor
        if n <= 2:
            return self
        out = [Fraction(0)] * n
        for k, c in enumerate(self.coeffs):
            if c:
                out[(-k) % n] += c
        return CyclotomicNumber._raw(n, _reduce(out, n))

    def galois(self, j: int) -> CyclotomicNumber:
        """Image under zeta -> zeta^j (j coprime to the conductor)."""
        n = self.conductor
        if math.gcd(j, n) != 1:
            raise ValueError("galois exponent must be a unit")
        out = [Fraction(0)] * n
        for k, c in enumerate(self.coeffs):
            if c:
                out[(k * j) % n] += c
        return CyclotomicNumber._raw(n, _reduce(out, n))

    def norm(self) -> Fraction:
        """Field norm down to Q (product of all Galois conjugates)."""
        n = self.conductor
        result = CyclotomicNumber.rational(1)
        for j in range(1, n + 1):
            if math.gcd(j, n) == 1:
                result = result * self.galois(j)
        return result.to_fraction()

    def inverse(self) -> CyclotomicNumber:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        n = self.conductor
        if self.is_rational():
            return CyclotomicNumber.rational(1 / self.coeffs[0])
        others = CyclotomicNumber.rational(1)
        for j in range(2, n + 1):
            if math.gcd(j, n) == 1:
                others = others * self.galois(j)
        return others / (self * others).to_fraction()

    def normalized_trace(self) -> Fraction:
        """Trace to Q divided by the field degree; invariant under lifting."""
        n = self.conductor
        total = Fraction(0)
        for k, c in enumerate(self.coeffs):
            if c:
                m = n // math.gcd(k, n)
                total += c * Fraction(mobius(m), totient(m))
        return total

    # comparison / conversion ----------------------------------------

    def __eq__(self, other):
        if not isinstance(other, (CyclotomicNumber, int, Fraction)):
            return NotImplemented
        a, b = self._common(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(self.normalized_trace()))
        return self._hash

    def __complex__(self):
        n = self.conductor
        return complex(
            sum(float(c) * cmath.exp(2j * math.pi * k / n) for k, c in enumerate(self.coeffs) if c)
        )

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"CyclotomicNumber({self.conductor}, [{', '.join(str(c) for c in self.coeffs)}])"

    def __str__(self):
        if self.is_rational():
            return str(self.coeffs[0])
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "1" if k == 0 else (f"z{self.conductor}" if k == 1 else f"z{self.conductor}^{k}")
            terms.append(f"{c}*{mono}" if k else str(c))
        return " + ".join(terms)

    def to_json(self) -> dict:
        return {"conductor": self.conductor, "coeffs": [format_fraction(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> CyclotomicNumber:
        return cls(int(obj["conductor"]), [parse_fraction(c) for c in obj["coeffs"]])


def format_fraction(q: Rational) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_fraction(text) -> Fraction:
    if isinstance(text, bool):
        raise ValueError("boolean is not a rational")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"expected a 'p/q' string, got {text!r}")
    return Fraction(text.strip())


ZERO = CyclotomicNumber.rational(0)
ONE = CyclotomicNumber.rational(1)
