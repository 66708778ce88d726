"""Sparse multivariate polynomials with exact coefficients.

Coefficients are ints, Fractions or :class:`CyclotomicNumber`. Terms are kept
in a dict keyed by exponent tuples; zero coefficients are never stored.
"""

from __future__ import annotations

from fractions import Fraction
from math import prod
from typing import Callable, Iterable, Mapping, Sequence

from .cyclotomic import CyclotomicNumber

Exps = tuple[int, ...]


def _clean(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c.numerator)
    if isinstance(c, CyclotomicNumber) and c.is_rational():
        return _clean(Fraction(c.rational_value()))
    return c


class SparsePoly:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exps, object] | None = None):
        self.nvars = nvars
        clean = {}
        for e, c in (terms or {}).items():
            if len(e) != nvars:
                raise ValueError(f"exponent {e} has length {len(e)}, expected {nvars}")
            if c:
                clean[tuple(e)] = _clean(c)
        self.terms: dict[Exps, object] = clean

    # -- constructors ------------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "SparsePoly":
        return cls(nvars)

    @classmethod
    def constant(cls, nvars: int, c) -> "SparsePoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "SparsePoly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def linear(cls, coeffs: Sequence) -> "SparsePoly":
        """sum_i coeffs[i] * x_i."""
        n = len(coeffs)
        return cls(n, {tuple(int(i == j) for j in range(n)): c for i, c in enumerate(coeffs)})

    # -- arithmetic --------------------------------------------------------------

    def _lift(self, other) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            if other.nvars != self.nvars:
                raise ValueError("polynomials live in different rings")
            return other
        return SparsePoly.constant(self.nvars, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out[e] + c if e in out else c
        return SparsePoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, SparsePoly):
            return SparsePoly(self.nvars, {e: c * other for e, c in self.terms.items()})
        other = self._lift(other)
        out: dict[Exps, object] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = c1 * c2
                out[e] = out[e] + v if e in out else v
        return SparsePoly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = SparsePoly.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, SparsePoly):
            other = SparsePoly.constant(self.nvars, other)
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- calculus and evaluation --------------------------------------------------

    def diff(self, i: int, k: int = 1) -> "SparsePoly":
        out = {}
        for e, c in self.terms.items():
            if e[i] >= k:
                f = prod(range(e[i] - k + 1, e[i] + 1))
                e2 = list(e)
                e2[i] -= k
                out[tuple(e2)] = c * f
        return SparsePoly(self.nvars, out)

    def apply_operator(self, symbol: "SparsePoly") -> "SparsePoly":
        """Apply ``symbol`` with x_i read as d/dx_i."""
        out = SparsePoly.zero(self.nvars)
        for e, c in symbol.terms.items():
            q = self
            for i, k in enumerate(e):
                if k:
                    q = q.diff(i, k)
                    if not q:
                        break
            if q:
                out = out + q * c
        return out

    def evaluate(self, point: Sequence):
        total = 0
        for e, c in self.terms.items():
            term = c
            for x, k in zip(point, e):
                if k:
                    term = term * x**k
            total = total + term
        return total

    def substitute(self, images: Sequence["SparsePoly"]) -> "SparsePoly":
        """Replace x_i by ``images[i]`` (all in a common ring)."""
        m = images[0].nvars
        out = SparsePoly.zero(m)
        cache: dict[tuple[int, int], SparsePoly] = {}
        for e, c in self.terms.items():
            term = SparsePoly.constant(m, c)
            for i, k in enumerate(e):
                if k:
                    if (i, k) not in cache:
                        cache[(i, k)] = images[i] ** k
                    term = term * cache[(i, k)]
            out = out + term
        return out

    def map_coeffs(self, fn: Callable) -> "SparsePoly":
        return SparsePoly(self.nvars, {e: fn(c) for e, c in self.terms.items()})

    # -- structure ---------------------------------------------------------------

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self, d: int | None = None) -> bool:
        degs = {sum(e) for e in self.terms}
        if d is not None:
            return degs <= {d}
        return len(degs) <= 1

    def has_rational_coeffs(self) -> bool:
        return all(isinstance(c, (int, Fraction)) for c in self.terms.values())

    def to_rational(self) -> "SparsePoly":
        """Convert cyclotomic coefficients that reduce to rationals (raises otherwise)."""
        out = {}
        for e, c in self.terms.items():
            if isinstance(c, CyclotomicNumber):
                c = c.rational_value()
            out[e] = c
        return SparsePoly(self.nvars, out)

    def sorted_terms(self) -> list[tuple[Exps, object]]:
        """Graded-lexicographic order, highest first."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def format(self, names: Sequence[str] | None = None) -> str:
        if not self.terms:
            return "0"
        names = names or [f"X{i}" for i in range(self.nvars)]
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(f"{names[i]}^{k}" if k > 1 else names[i] for i, k in enumerate(e) if k)
            cs = str(c)
            if isinstance(c, CyclotomicNumber):
                cs = f"({cs})"
            if not mono:
                parts.append(cs)
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    __str__ = format

    def __repr__(self) -> str:
        return f"SparsePoly({self.nvars}, {self.format()})"

    def to_json(self, names: Sequence[str] | None = None) -> dict:
        if not self.has_rational_coeffs():
            raise ValueError("JSON encoding needs rational coefficients")
        names = list(names or [f"X{i}" for i in range(self.nvars)])
        return {
            "vars": names,
            "terms": [
                {"exps": list(e), "num": str(Fraction(c).numerator), "den": str(Fraction(c).denominator)}
                for e, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "SparsePoly":
        n = len(data["vars"])
        return cls(n, {tuple(t["exps"]): Fraction(int(t["num"]), int(t["den"])) for t in data["terms"]})


def product(polys: Iterable[SparsePoly], nvars: int) -> SparsePoly:
    out = SparsePoly.constant(nvars, 1)
    for p in polys:
        out = out * p
    return out
