"""Exact arithmetic in Q(zeta_m).

An element is a coefficient vector of length phi(m) in the power basis
1, zeta, ..., zeta^(phi(m)-1), reduced modulo the m-th cyclotomic polynomial.
Operands with different conductors are lifted to the lcm before combining.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from numbers import Rational

Number = int | Fraction


def _norm(v: Number) -> Number:
    if isinstance(v, Fraction) and v.denominator == 1:
        return int(v.numerator)
    return v


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    """Exact division of integer polynomials (lowest degree first)."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    lead = den[-1]
    for k in range(len(out) - 1, -1, -1):
        c, rem = divmod(num[k + len(den) - 1], lead)
        if rem:
            raise ArithmeticError("inexact polynomial division")
        out[k] = c
        for i, d in enumerate(den):
            num[k + i] -= c * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(m: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_m, lowest degree first."""
    if m < 1:
        raise ValueError("conductor must be positive")
    poly = [-1] + [0] * (m - 1) + [1]
    for d in range(1, m):
        if m % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_polynomial(d)))
    return tuple(poly)


@lru_cache(maxsize=None)
def _power_table(m: int) -> tuple[tuple[int, ...], ...]:
    """Reduced coordinates of zeta_m^k for k = 0..m-1."""
    phi = cyclotomic_polynomial(m)
    d = len(phi) - 1
    rows = []
    cur = [0] * d
    cur[0] = 1
    for _ in range(m):
        rows.append(tuple(cur))
        # multiply by zeta and reduce the overflow with the monic Phi_m
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [c - top * p for c, p in zip(cur, phi[:-1])]
    return tuple(rows)


def degree(m: int) -> int:
    return len(cyclotomic_polynomial(m)) - 1


class CyclotomicNumber:
    """Immutable element of Q(zeta_m)."""

    __slots__ = ("m", "coeffs")

    def __init__(self, m: int, coeffs):
        coeffs = tuple(_norm(Fraction(c)) if not isinstance(c, int) else c for c in coeffs)
        if len(coeffs) != degree(m):
            raise ValueError(f"conductor {m} needs {degree(m)} coefficients, got {len(coeffs)}")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, *_):
        raise AttributeError("CyclotomicNumber is immutable")

    # -- constructors -----------------------------------------------------------

    @classmethod
    def rational(cls, value: Number, m: int = 1) -> "CyclotomicNumber":
        coeffs = [0] * degree(m)
        coeffs[0] = value
        return cls(m, coeffs)

    @classmethod
    def zeta(cls, m: int, k: int = 1) -> "CyclotomicNumber":
        """The root of unity exp(2 pi i k / m)."""
        return cls(m, _power_table(m)[k % m])

    @classmethod
    def _from_powers(cls, m: int, acc: dict[int, Number]) -> "CyclotomicNumber":
        table = _power_table(m)
        out = [0] * degree(m)
        for k, c in acc.items():
            if c:
                for i, t in enumerate(table[k % m]):
                    if t:
                        out[i] += c * t
        return cls(m, out)

    # -- coercion ---------------------------------------------------------------

    def lift(self, L: int) -> "CyclotomicNumber":
        if L == self.m:
            return self
        if L % self.m:
            raise ValueError(f"cannot lift conductor {self.m} to {L}")
        step = L // self.m
        return CyclotomicNumber._from_powers(L, {i * step: c for i, c in enumerate(self.coeffs)})

    @staticmethod
    def _coerce(other) -> "CyclotomicNumber | None":
        if isinstance(other, CyclotomicNumber):
            return other
        if isinstance(other, (int, Fraction)) or isinstance(other, Rational):
            return CyclotomicNumber.rational(Fraction(other))
        return None

    def _common(self, other):
        o = self._coerce(other)
        if o is None:
            return None, None
        L = lcm(self.m, o.m)
        return self.lift(L), o.lift(L)

    # -- arithmetic -------------------------------------------------------------

    def __add__(self, other):
        a, b = self._common(other)
        if a is None:
            return NotImplemented
        return CyclotomicNumber(a.m, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.m, [-x for x in self.coeffs])

    def __sub__(self, other):
        a, b = self._common(other)
        if a is None:
            return NotImplemented
        return CyclotomicNumber(a.m, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber(self.m, [x * other for x in self.coeffs])
        a, b = self._common(other)
        if a is None:
            return NotImplemented
        acc: dict[int, Number] = {}
        for i, x in enumerate(a.coeffs):
            if not x:
                continue
            for j, y in enumerate(b.coeffs):
                if y:
                    acc[i + j] = acc.get(i + j, 0) + x * y
        return CyclotomicNumber._from_powers(a.m, acc)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return CyclotomicNumber(self.m, [Fraction(x) / other for x in self.coeffs])
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_rational():
            return self / o.rational_value()
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def galois(self, a: int) -> "CyclotomicNumber":
        """Image under the automorphism zeta -> zeta^a (gcd(a, m) = 1)."""
        return CyclotomicNumber._from_powers(self.m, {(i * a) % self.m: c for i, c in enumerate(self.coeffs)})

    def inverse(self) -> "CyclotomicNumber":
        if not self:
            raise ZeroDivisionError("inverse of zero")
        # x * prod_{a != 1} sigma_a(x) is the (rational) field norm
        others = CyclotomicNumber.rational(1, self.m)
        for a in range(2, self.m):
            if gcd(a, self.m) == 1:
                others = others * self.galois(a)
        norm = self * others
        return others / norm.rational_value()

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not supported")
        out = CyclotomicNumber.rational(1, self.m)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conj(self) -> "CyclotomicNumber":
        """Complex conjugate, via zeta -> zeta^-1."""
        return CyclotomicNumber._from_powers(self.m, {(-i) % self.m: c for i, c in enumerate(self.coeffs)})

    # -- predicates and conversion ------------------------------------------------

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_value(self) -> Number:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    def __complex__(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.m)
        return complex(sum(float(c) * z**i for i, c in enumerate(self.coeffs)))

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __eq__(self, other) -> bool:
        a, b = self._common(other)
        if a is None:
            return NotImplemented
        return a.coeffs == b.coeffs

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.coeffs[0])
        z = complex(self)
        return hash((round(z.real, 9), round(z.imag, 9)))

    def __repr__(self) -> str:
        return f"CyclotomicNumber({self.m}, {list(self.coeffs)})"

    def __str__(self) -> str:
        if self.is_rational():
            return str(self.coeffs[0])
        parts = []
        for i, c in enumerate(self.coeffs):
            if c:
                parts.append(f"{c}" if i == 0 else f"{c}*z{self.m}^{i}")
        return " + ".join(parts)

    def to_json(self) -> dict:
        return {
            "conductor": self.m,
            "coeffs": [{"num": str(Fraction(c).numerator), "den": str(Fraction(c).denominator)} for c in self.coeffs],
        }


def root_of_unity_exponent(value: complex, m: int, tol: float = 1e-9) -> int | None:
    """k with ``value ~ exp(2 pi i k/m)`` within ``tol``, else None."""
    ang = cmath.phase(value) / (2 * cmath.pi) * m
    k = round(ang) % m
    if abs(value - cmath.exp(2j * cmath.pi * k / m)) <= tol:
        return k
    return None
