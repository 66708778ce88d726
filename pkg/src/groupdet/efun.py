"""Generalized Bessel functions and the equation d^n u/dx_1...dx_n + u = lambda.

Coefficient tables (falling factorials, Hilbert/Stirling numbers, the symmetric
functions sigma) are exact integers. Series coefficients are exact rationals;
floating point only enters at the final summation.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Callable, Sequence

import numpy as np

from .errors import (
    GammaPole,
    IncompatibleBoundaryData,
    InvalidArgument,
    QuadratureNonConvergence,
    RangeError,
    ResonantExponents,
    TruncationTooSmall,
    VerificationError,
)
from .functions import field_function
from .poly import SparsePoly

MAX_N = 30
MAX_ODE_N = 20
MAX_TERMS = 500
MAX_DEN_TERMS = 200
COMPAT_TOL = 1e-10
MAX_GAUSS_ORDER = 96


def _check_n(n: int, hi: int = MAX_N, lo: int = 1) -> None:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or not lo <= n <= hi:
        raise RangeError(f"n must be an integer in [{lo}, {hi}], got {n!r}")


def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, (int, np.integer)):
        return Fraction(int(v))
    if isinstance(v, float):
        return Fraction(v).limit_denominator(10**12)
    raise InvalidArgument(f"cannot read {v!r} as a rational number")


@dataclass(frozen=True)
class CoeffTable:
    """Exact integer coefficients; ``values[k - start]`` is the entry with index k."""

    kind: str
    n: int
    values: tuple
    start: int = 0

    def __getitem__(self, k: int):
        i = k - self.start
        if not 0 <= i < len(self.values):
            raise IndexError(f"{self.kind} index {k} out of range")
        return self.values[i]

    def __len__(self) -> int:
        return len(self.values)

    def to_json(self) -> dict:
        return {"kind": self.kind, "n": self.n, "start": self.start, "values": [str(v) for v in self.values]}


# -- falling factorials and Stirling numbers --------------------------------------

@lru_cache(maxsize=None)
def _falling_poly(n: int) -> tuple[int, ...]:
    """Coefficients of x(x-1)...(x-n+1), index = power of x."""
    c = [1]
    for i in range(n):
        c = [(c[k - 1] if k >= 1 else 0) - i * (c[k] if k < len(c) else 0) for k in range(len(c) + 1)]
    return tuple(c)


@lru_cache(maxsize=None)
def _stirling_row(n: int) -> tuple[int, ...]:
    """s_{0,n}..s_{n,n} from s_{k,m+1} = s_{k,m} + m s_{k-1,m}."""
    row = [1]
    for m in range(n):
        row = [(row[k] if k < len(row) else 0) + (m * row[k - 1] if k >= 1 else 0) for k in range(len(row) + 1)]
    return tuple(row)


def _s(k: int, m: int) -> int:
    if k == 0:
        return 1
    if k >= m or k < 0:
        return 0
    return _stirling_row(m)[k]


def falling_factorial_coeffs(n: int) -> CoeffTable:
    """s_{1,n}..s_{n-1,n} with x(x-1)...(x-n+1) = x^n - s_{1,n} x^{n-1} + ..."""
    _check_n(n)
    row = _stirling_row(n)
    brute = _falling_poly(n)
    for k in range(n + 1):
        if brute[n - k] != (-1) ** k * row[k]:
            raise VerificationError(f"falling factorial coefficient {k} of degree {n} disagrees")
    return CoeffTable("stirling_s", n, row[1:n], start=1)


# -- Hilbert coefficients ---------------------------------------------------------

@lru_cache(maxsize=None)
def _hilbert_by_recurrence(n: int) -> tuple[int, ...]:
    row: tuple[int, ...] = (0, 1)
    for m in range(1, n):
        row = tuple(
            j * ((row[j - 1] if j >= 1 else 0) + (row[j] if j < len(row) else 0)) for j in range(m + 2)
        )
    return row


def _hilbert_by_difference(n: int) -> tuple[int, ...]:
    return tuple(sum((-1) ** m * comb(j, m) * (j - m) ** n for m in range(j + 1)) for j in range(n + 1))


@lru_cache(maxsize=None)
def _c_row(n: int) -> tuple[int, ...]:
    """C_{n,0..n} (Stirling numbers of the second kind)."""
    if n == 0:
        return (1,)
    return tuple(a // factorial(j) for j, a in enumerate(_hilbert_by_recurrence(n)))


def _C(n: int, j: int) -> int:
    if n < 0 or j < 0 or j > n:
        return 0
    return _c_row(n)[j]


def stirling_identity_check(n: int) -> int:
    """Check sum_p (-1)^(p-i-q) C_{n,p} binom(p,i) s_{p-i-q,p-i} = binom(n,q) C_{n-q,i}.

    Every pair with q, i >= 0 and q + i <= n is tested; returns the count.
    """
    _check_n(n)
    count = 0
    for q in range(n + 1):
        for i in range(n + 1 - q):
            lhs = sum(
                (-1) ** (p - i - q) * _C(n, p) * comb(p, i) * _s(p - i - q, p - i) for p in range(q + i, n + 1)
            )
            if lhs != comb(n, q) * _C(n - q, i):
                raise VerificationError(f"identity fails at n={n}, q={q}, i={i}")
            count += 1
    return count


def hilbert_c_coeffs(n: int, check_identity: bool = True) -> tuple[CoeffTable, CoeffTable]:
    """(A_{n,0..n}, C_{n,0..n}) with x^n = sum_j A_{n,j} binom(x, j) = sum_j C_{n,j} x^(falling j)."""
    _check_n(n)
    rec = _hilbert_by_recurrence(n)
    diff = _hilbert_by_difference(n)
    if rec != diff:
        raise VerificationError(f"Hilbert coefficients of degree {n}: recurrence and difference formula disagree")
    c = tuple(a // factorial(j) for j, a in enumerate(rec))
    if any(a % factorial(j) for j, a in enumerate(rec)):
        raise VerificationError("A_{n,j} not divisible by j!")
    recon = [0] * (n + 1)
    for j, cj in enumerate(c):
        for k, v in enumerate(_falling_poly(j)):
            recon[k] += cj * v
    if recon != [0] * n + [1]:
        raise VerificationError(f"sum_j C_(n,j) x^(falling j) != x^{n}")
    if check_identity:
        stirling_identity_check(n)
    return CoeffTable("hilbert_A", n, rec), CoeffTable("c_coeff", n, c)


# -- sigma and the ODE coefficients -------------------------------------------------

@lru_cache(maxsize=None)
def _sigma(n: int) -> tuple[int, ...]:
    # prod_i (z + (i n - 1) nu): elementary symmetric functions of (i n - 1)
    e = [1]
    for i in range(n):
        a = i * n - 1
        e = [(e[h] if h < len(e) else 0) + (a * e[h - 1] if h >= 1 else 0) for h in range(len(e) + 1)]
    return tuple(e)


def sigma_coeffs(n: int) -> CoeffTable:
    """sigma_{0..n,n} with prod_{i<n} (z - nu(1 - i n)) = sum_h sigma_h nu^h z^(n-h)."""
    _check_n(n)
    return CoeffTable("sigma", n, _sigma(n))


def _poly_str(coeffs: Sequence[int], var: str = "nu") -> str:
    parts = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if not c:
            continue
        mono = "" if k == 0 else var if k == 1 else f"{var}^{k}"
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append(f"-{mono}")
        else:
            parts.append(f"{c}*{mono}")
    return " + ".join(parts).replace("+ -", "- ") or "0"


@dataclass(frozen=True)
class OdeSpec:
    """A_{1,n} x^n y^(n) + ... + A_{n,n} x y' + (A_{n+1,n} + x^n) y = 0.

    ``A[r-1]`` lists the integer coefficients of A_{r,n} as a polynomial in nu.
    """

    n: int
    A: tuple[tuple[int, ...], ...]
    nu: Fraction | None = None

    def at(self, nu) -> tuple[Fraction, ...]:
        nu = _as_fraction(nu)
        return tuple(sum((c * nu**k for k, c in enumerate(p)), Fraction(0)) for p in self.A)

    def indicial(self, s, nu) -> Fraction:
        """sum_r A_r(nu) s^(falling n+1-r)."""
        total = Fraction(0)
        for r, a in enumerate(self.at(nu), start=1):
            total += a * sum((c * Fraction(s) ** k for k, c in enumerate(_falling_poly(self.n + 1 - r))), Fraction(0))
        return total

    def format(self) -> list[str]:
        return [_poly_str(p) for p in self.A]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "A": [{"r": r, "coeffs": [str(c) for c in p], "text": _poly_str(p)} for r, p in enumerate(self.A, start=1)],
        }


@lru_cache(maxsize=None)
def _ode_A(n: int) -> tuple[tuple[int, ...], ...]:
    sig = _sigma(n)
    out = []
    for r in range(1, n + 1):
        out.append(tuple(sig[k] * _C(n - k, n + 1 - r) for k in range(r)))
    out.append((0,) * n + (sig[n],))
    return tuple(tuple(_trim(p)) for p in out)


def _trim(p: Sequence[int]) -> list[int]:
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _indicial_identity(n: int, A: Sequence[Sequence[int]]) -> bool:
    """sum_r A_r(nu) s^(falling n+1-r) == prod_i (s - nu(1 - i n)) in Z[s, nu]."""
    lhs: dict[tuple[int, int], int] = {}
    for r, p in enumerate(A, start=1):
        for a, sc in enumerate(_falling_poly(n + 1 - r)):
            for b, nc in enumerate(p):
                if sc and nc:
                    lhs[(a, b)] = lhs.get((a, b), 0) + sc * nc
    rhs = {(n - h, h): c for h, c in enumerate(_sigma(n)) if c}
    return {k: v for k, v in lhs.items() if v} == rhs


def ode_coeffs(n: int) -> OdeSpec:
    _check_n(n, MAX_ODE_N)
    A = _ode_A(n)
    if A[0] != (1,):
        raise VerificationError("leading coefficient A_{1,n} is not 1")
    if not _indicial_identity(n, A):
        raise VerificationError(f"indicial polynomial of the order-{n} equation does not factor as expected")
    return OdeSpec(n, A)


# -- series -------------------------------------------------------------------------

SERIES_KINDS = ("E_n", "F_n", "L", "Y_p", "0F")


def _pochhammer(a: Fraction, h: int) -> Fraction:
    out = Fraction(1)
    for i in range(h):
        out *= a + i
    return out


def _is_nonpositive_int(a: Fraction) -> bool:
    return a.denominator == 1 and a <= 0


def _check_resonance(n: int, nu: Fraction) -> None:
    # exponents nu(1 - i n); two of them collide modulo the series step n
    # exactly when k nu is an integer for some 0 < k < n
    for k in range(1, n):
        if (k * nu).denominator == 1:
            raise ResonantExponents(f"exponents differ by an integer multiple of the step: {k}*nu = {k * nu}")


@dataclass(frozen=True)
class RationalSeries:
    """prefactor * sum_h coeffs[h] t^h, with t = (x/n)^n (or the product of the x_i, or w).

    The prefactor is (x/n)^exponent / prod Gamma(a) over ``gamma_args``.
    """

    kind: str
    n: int
    nu: Fraction
    p: int
    M: int
    coeffs: tuple[Fraction, ...]
    exponent: Fraction = Fraction(0)
    gamma_args: tuple[Fraction, ...] = ()
    next_coeff: Fraction = field(default=Fraction(0), repr=False)

    def t_of(self, x):
        if self.kind == "F_n":
            x = np.asarray(x)
            if x.shape[-1] != self.n:
                raise InvalidArgument(f"F_{self.n} needs {self.n} coordinates")
            return np.prod(x, axis=-1)
        if self.kind == "0F":
            return x
        return (np.asarray(x) / self.n) ** self.n

    def prefactor(self, x):
        if self.kind not in ("L", "Y_p"):
            return 1.0
        g = math.prod(math.gamma(float(a)) for a in self.gamma_args)
        return (np.asarray(x, dtype=float) / self.n) ** float(self.exponent) / g

    def terms(self, t) -> np.ndarray:
        """Float terms b_h t^h for h = 0..M+1, built from exact successive ratios."""
        t = np.asarray(t)
        cs = self.coeffs + (self.next_coeff,)
        out = np.empty((len(cs),) + t.shape, dtype=np.result_type(t, float))
        out[0] = float(cs[0])
        for h in range(1, len(cs)):
            ratio = float(cs[h] / cs[h - 1]) if cs[h - 1] else 0.0
            out[h] = out[h - 1] * ratio * t
        return out


@dataclass(frozen=True)
class SeriesValue:
    value: complex | float
    first_omitted: float
    tail_bound: float
    series: RationalSeries = field(repr=False)


def rational_series(kind: str, n: int, nu=0, p: int = 0, M: int = 40) -> RationalSeries:
    if kind not in SERIES_KINDS:
        raise InvalidArgument(f"unknown series kind {kind!r}; known: {', '.join(SERIES_KINDS)}")
    _check_n(n)
    if not isinstance(M, (int, np.integer)) or not 0 <= M <= MAX_TERMS:
        raise RangeError(f"truncation M must lie in [0, {MAX_TERMS}], got {M!r}")
    nu = _as_fraction(nu)
    if kind in ("E_n", "F_n"):
        nu, p = Fraction(0), 0
        J: list[int] = list(range(1, n))
    elif kind == "0F":
        p = 0
        J = list(range(1, n))
    else:
        if kind == "L":
            p = 0
        if not 0 <= p <= n - 1:
            raise RangeError(f"p must lie in [0, {n - 1}], got {p}")
        J = [j for j in range(-p, n - p) if j != 0]
    args = tuple(j * nu + 1 for j in J)
    bad = [a for a in args if _is_nonpositive_int(a)]
    if bad:
        raise GammaPole(f"Gamma argument {bad[0]} is a nonpositive integer")
    if kind == "Y_p":
        _check_resonance(n, nu)
    sign = 1 if kind == "0F" else -1
    cs = []
    for h in range(M + 2):
        den = Fraction(factorial(h))
        for a in args:
            den *= _pochhammer(a, h)
        cs.append(Fraction(sign) ** h / den)
    exponent = nu * (1 - p * n) if kind in ("L", "Y_p") else Fraction(0)
    gam = args if kind in ("L", "Y_p") else ()
    return RationalSeries(kind, n, nu, p, M, tuple(cs[: M + 1]), exponent, gam, cs[M + 1])


def series_eval(kind: str, x, n: int, nu=0, p: int = 0, M: int = 40) -> SeriesValue:
    """Truncated series value at ``x`` (a vector for F_n) with a tail estimate.

    The first omitted term bounds the tail up to a factor 2 once consecutive
    terms shrink by at least half; TruncationTooSmall is raised otherwise.
    """
    s = rational_series(kind, n, nu, p, M)
    if kind in ("L", "Y_p"):
        xv = float(np.real(x))
        if np.iscomplexobj(x) or xv <= 0:
            if s.exponent.denominator != 1 or xv < 0 or s.exponent < 0:
                raise InvalidArgument(f"{kind} is evaluated at real x > 0 only")
        x = xv
    t = s.t_of(x)
    terms = s.terms(t)
    first = float(np.abs(terms[-1]))
    last = float(np.abs(terms[-2]))
    if first > 0.5 * last and first > 0:
        raise TruncationTooSmall(f"terms are not yet decreasing at M={M} (|t| = {abs(t):.3g})")
    pre = s.prefactor(x)
    val = pre * terms[:-1].sum()
    val = complex(val) if np.iscomplexobj(val) else float(val)
    scale = abs(float(pre)) if s.kind in ("L", "Y_p") else 1.0
    return SeriesValue(val, first * scale, 2 * first * scale, s)


def e_n_coefficient(n: int, m: int) -> Fraction:
    """Coefficient of (z/n)^(nm) in E_n."""
    return Fraction((-1) ** m, factorial(m) ** n)


# -- ODE residual ---------------------------------------------------------------------

@dataclass(frozen=True)
class OdeResidual:
    max_residual: float
    residuals: tuple[float, ...]
    points: tuple[float, ...]


def ode_residual(n: int, nu, xs: Sequence[float], M: int = 30, p: int = 0, kind: str = "Y_p") -> OdeResidual:
    """Relative residual of the truncated series solution in the order-n equation.

    Every operator term x^k y^(k) is summed exactly in Q (the common factor
    (x/n)^exponent / prod Gamma drops out of the ratio), so the residual is
    what the truncation leaves, not floating noise.
    """
    spec = ode_coeffs(n)
    s = rational_series(kind, n, nu, p, M)
    A = spec.at(s.nu)
    res = []
    pts = []
    for x in xs:
        if not 0 < x <= 3:
            raise RangeError(f"x must lie in (0, 3], got {x}")
        t = Fraction(repr(float(x))) / n
        t = t**n
        tp = [Fraction(1)]
        for _ in range(M + 1):
            tp.append(tp[-1] * t)
        total = Fraction(0)
        absum = Fraction(0)
        for r, a in enumerate(A, start=1):
            k = n + 1 - r
            fp = _falling_poly(k)
            term = Fraction(0)
            for h, b in enumerate(s.coeffs):
                e = s.exponent + n * h
                ef = sum((c * e**i for i, c in enumerate(fp)), Fraction(0))
                term += b * ef * tp[h]
            term *= a
            total += term
            absum += abs(term)
        xn = n**n * sum((b * tp[h + 1] for h, b in enumerate(s.coeffs)), Fraction(0))
        total += xn
        absum += abs(xn)
        res.append(float(abs(total) / absum) if absum else 0.0)
        pts.append(float(x))
    return OdeResidual(max(res, default=0.0), tuple(res), tuple(pts))


# -- E-function denominators -----------------------------------------------------------

@dataclass(frozen=True)
class DenominatorReport:
    """Denominators of a_k in sum_k a_k z^k / k! for 0F_{n-1}(nu+1, .., (n-1)nu+1; -(z/n)^n)."""

    n: int
    nu: Fraction
    M: int
    base: int
    holds: bool
    first_failure: int | None
    growth: float
    denominators: tuple[int, ...]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "nu": {"num": str(self.nu.numerator), "den": str(self.nu.denominator)},
            "M": self.M,
            "base": str(self.base),
            "holds": self.holds,
            "first_failure": self.first_failure,
            "growth": self.growth,
        }


def efun_coefficient(n: int, nu: Fraction, m: int) -> Fraction:
    """a_{nm} = (nm)! (-1)^m / (n^(nm) m! prod_j (j nu + 1)_m)."""
    den = Fraction(n ** (n * m) * factorial(m))
    for j in range(1, n):
        den *= _pochhammer(j * nu + 1, m)
    return Fraction(factorial(n * m) * (-1) ** m) / den


def efun_denominator_bound(n: int, nu, M: int = 60) -> DenominatorReport:
    """Check den(a_{nm}) | (n^n q^(n-1))^m for m <= M and measure den growth.

    ``growth`` is max_m (1/m) log den(a_0, ..., a_{nm}); a finite value is the
    exponential bound an E-function needs.
    """
    _check_n(n)
    if not isinstance(M, (int, np.integer)) or not 1 <= M <= MAX_DEN_TERMS:
        raise RangeError(f"M must lie in [1, {MAX_DEN_TERMS}], got {M!r}")
    nu = _as_fraction(nu)
    for j in range(1, n):
        if _is_nonpositive_int(j * nu + 1):
            raise GammaPole(f"parameter {j * nu + 1} is a nonpositive integer")
    base = n**n * nu.denominator ** (n - 1)
    dens = []
    first = None
    growth = 0.0
    common = 1
    for m in range(M + 1):
        d = efun_coefficient(n, nu, m).denominator
        dens.append(d)
        common = math.lcm(common, d)
        if m >= 1:
            if first is None and base**m % d:
                first = m
            growth = max(growth, math.log(common) / m)
    return DenominatorReport(n, nu, M, base, first is None, first, growth, tuple(dens))


# -- bracket operator and the boundary value problem -------------------------------------

FieldFn = Callable[[np.ndarray], np.ndarray]


def _rhs_callable(f) -> FieldFn:
    if callable(f):
        return f
    g = field_function(f)
    return lambda x: g(x, None)


def bracket_apply(f, x0: Sequence[float], r: int, x, coords: Sequence[int] | None = None):
    """[f]_r: inclusion-exclusion over subsets S of ``coords`` with |S| <= r.

    Each term is (-1)^|S| f with the coordinates in S frozen at x0.
    ``coords`` defaults to all coordinates.
    """
    fn = _rhs_callable(f)
    x = np.array(x, dtype=float)
    x0 = np.asarray(x0, dtype=float)
    n = x.shape[-1]
    if x0.shape != (n,):
        raise InvalidArgument(f"base point needs {n} coordinates")
    coords = list(range(n)) if coords is None else list(coords)
    if not 0 <= r <= len(coords):
        raise RangeError(f"r must lie in [0, {len(coords)}], got {r}")
    total = np.zeros(x.shape[:-1])
    for size in range(r + 1):
        for S in itertools.combinations(coords, size):
            y = x.copy()
            for i in S:
                y[..., i] = x0[i]
            total = total + (-1) ** size * np.asarray(fn(y), dtype=float)
    return total if total.ndim else float(total)


@dataclass(frozen=True)
class BoundaryData:
    """phi_(h) prescribed on the hyperplane x_h = base_h; phi_(h) ignores x_h."""

    base: tuple[float, ...]
    functions: tuple

    def __post_init__(self):
        if len(self.base) != len(self.functions):
            raise InvalidArgument("need one boundary function per coordinate")

    @property
    def n(self) -> int:
        return len(self.base)

    def phi(self, h: int, x) -> np.ndarray:
        f = self.functions[h]
        g = f if callable(f) else field_function(f)
        y = np.array(x, dtype=float)
        y[..., h] = self.base[h]
        return np.asarray(g(y, h), dtype=float)

    def check_compatibility(self, samples: int = 16, seed: int = 0, tol: float = COMPAT_TOL) -> float:
        """phi_(h) at x_l = base_l must equal phi_(l) at x_h = base_h; returns the worst gap."""
        base = np.asarray(self.base, dtype=float)
        rng = np.random.default_rng(seed)
        pts = np.vstack([base, base + rng.uniform(-1, 1, size=(samples, self.n))])
        worst = 0.0
        for h in range(self.n):
            for l in range(h + 1, self.n):
                y = pts.copy()
                y[:, h] = base[h]
                y[:, l] = base[l]
                gap = float(np.max(np.abs(self.phi(h, y) - self.phi(l, y))))
                worst = max(worst, gap)
                if gap > tol:
                    raise IncompatibleBoundaryData(
                        f"phi_({h + 1}) and phi_({l + 1}) disagree on their common face by {gap:.3e}"
                    )
        return worst


def f_n_eval(n: int, x, tol: float = 1e-18) -> np.ndarray:
    """F_n(x) = sum_m (-1)^m (x_1...x_n)^m / (m!)^n, vectorized over leading axes."""
    t = np.prod(np.asarray(x, dtype=float), axis=-1)
    term = np.ones_like(t)
    total = term.copy()
    for m in range(1, MAX_TERMS):
        term = term * (-t) / float(m) ** n
        total = total + term
        if np.max(np.abs(term), initial=0.0) < tol:
            break
    return total


def f_n_pde_defect(n: int, M: int) -> SparsePoly:
    """d^n F/dx_1..dx_n + F for the truncation of F_n at order M (exact)."""
    _check_n(n, 8, 1)
    F = SparsePoly(n, {(m,) * n: Fraction((-1) ** m, factorial(m) ** n) for m in range(M + 1)})
    D = F
    for i in range(n):
        D = D.diff(i)
    return D + F


@dataclass(frozen=True)
class EigenSolution:
    n: int
    points: np.ndarray
    values: np.ndarray
    bc_error: float
    pde_residual: float
    check_points: np.ndarray
    quad_error: float
    bc_tol: float
    pde_tol: float

    @property
    def passed(self) -> bool:
        return self.bc_error <= self.bc_tol and self.pde_residual <= self.pde_tol


class _Solver:
    def __init__(self, n: int, rhs, data: BoundaryData, tol: float):
        self.n = n
        self.rhs = _rhs_callable(rhs)
        self.data = data
        self.base = np.asarray(data.base, dtype=float)
        self.tol = tol
        self.quad_error = 0.0

    def brackets(self, x: np.ndarray) -> np.ndarray:
        """sum_h [phi_(h)]_{h-1}, the bracket taken over the first h-1 coordinates."""
        total = np.zeros(x.shape[:-1])
        for h in range(self.n):
            total = total + bracket_apply(lambda y, h=h: self.data.phi(h, y), self.base, h, x, coords=range(h))
        return total

    def source(self, a: np.ndarray) -> np.ndarray:
        return np.asarray(self.rhs(a), dtype=float) - self.brackets(a)

    def _gauss(self, X: np.ndarray, d: np.ndarray, order: int) -> np.ndarray:
        """Tensor Gauss-Legendre rule of the given order on [0,1]^n, one outer node at a time."""
        n = self.n
        nodes, weights = np.polynomial.legendre.leggauss(order)
        nodes, weights = (nodes + 1) / 2, weights / 2
        rest = np.stack(np.meshgrid(*([nodes] * (n - 1)), indexing="ij"), axis=-1).reshape(-1, n - 1)
        wrest = np.prod(np.stack(np.meshgrid(*([weights] * (n - 1)), indexing="ij"), axis=-1).reshape(-1, n - 1), axis=1)
        total = np.zeros(len(X))
        for s1, w1 in zip(nodes, weights):
            S = np.column_stack([np.full(len(rest), s1), rest])
            A = self.base + S[:, None, :] * d[None, :, :]
            vals = self.source(A) * f_n_eval(n, X[None, :, :] - A)
            total += w1 * (wrest @ vals)
        return total

    def v(self, X: np.ndarray) -> np.ndarray:
        """Iterated integral of G(alpha) F_n(x - alpha) over the box [base, x], mapped to [0,1]^n.

        The Gauss order is doubled until two successive rules agree to ``tol``.
        """
        X = np.asarray(X, dtype=float)
        d = X - self.base
        jac = np.prod(d, axis=-1)
        order = 12
        prev = self._gauss(X, d, order) * jac
        while order < MAX_GAUSS_ORDER:
            order *= 2
            cur = self._gauss(X, d, order) * jac
            err = float(np.max(np.abs(cur - prev), initial=0.0))
            if err <= self.tol * max(1.0, float(np.max(np.abs(cur), initial=0.0))):
                self.quad_error = max(self.quad_error, err)
                return cur
            prev = cur
        raise QuadratureNonConvergence(f"Gauss rules up to order {order} disagree by {err:.3e}")

    def u(self, X: np.ndarray) -> np.ndarray:
        return self.v(X) + self.brackets(X)


def default_grid(n: int, base: Sequence[float], size: int | None = None) -> np.ndarray:
    size = size or (21 if n == 2 else 5)
    axes = [np.linspace(b, b + 1.0, size) for b in base]
    return np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, n)


def eigen_solve(
    n: int,
    rhs,
    data: BoundaryData,
    grid: np.ndarray | None = None,
    check_points: np.ndarray | None = None,
    seed: int = 42,
    quad_tol: float = 1e-11,
    bc_tol: float = 1e-6,
    pde_tol: float | None = None,
) -> EigenSolution:
    """Solve d^n u/dx_1...dx_n + u = lambda with u = phi_(i) on x_i = base_i.

    u = v + sum_h [phi_(h)]_{h-1}, where v is the iterated integral of the
    reduced source against F_n(x - alpha). The boundary values are compared
    on every face of the grid and the equation is checked by a Richardson
    extrapolated mixed central difference at ``check_points``.
    """
    if n not in (2, 3):
        raise RangeError(f"n must be 2 or 3, got {n}")
    if data.n != n:
        raise InvalidArgument(f"boundary data has {data.n} coordinates, need {n}")
    data.check_compatibility()
    pde_tol = pde_tol if pde_tol is not None else (1e-4 if n == 2 else 5e-3)
    solver = _Solver(n, rhs, data, quad_tol)
    base = solver.base
    X = default_grid(n, data.base) if grid is None else np.asarray(grid, dtype=float).reshape(-1, n)
    U = solver.u(X)

    faces = []
    for i in range(n):
        Y = X.copy()
        Y[:, i] = base[i]
        Y = np.unique(Y, axis=0)
        faces.append(np.max(np.abs(solver.u(Y) - data.phi(i, Y))))
    bc_error = float(max(faces))

    if check_points is None:
        rng = np.random.default_rng(seed)
        lo, hi = X.min(axis=0), X.max(axis=0)
        check_points = lo + (hi - lo) * rng.uniform(0.2, 0.8, size=(4, n))
    C = np.asarray(check_points, dtype=float).reshape(-1, n)
    h = 0.02 if n == 2 else 0.05
    signs = np.array(list(itertools.product((1.0, -1.0), repeat=n)))
    wts = np.prod(signs, axis=1)

    def mixed(step: float) -> np.ndarray:
        P = C[:, None, :] + step * signs[None, :, :]
        vals = solver.u(P.reshape(-1, n)).reshape(len(C), len(signs))
        return vals @ wts / (2 * step) ** n

    D = (4 * mixed(h / 2) - mixed(h)) / 3
    resid = D + solver.u(C) - np.asarray(solver.rhs(C), dtype=float)
    return EigenSolution(
        n, X, U, bc_error, float(np.max(np.abs(resid))), C, solver.quad_error, bc_tol, pde_tol
    )
