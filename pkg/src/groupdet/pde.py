"""Differential operators induced by the group determinant and their kernels.

The symbol Theta(G) is read with X_g -> d/dx_g. Kernel elements are checked
exactly when everything is polynomial and by finite differences otherwise.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .characters import CharacterTable, character_matrix_determinant, character_table
from .cyclotomic import CyclotomicNumber
from .detfact import LinearForm, expand_group_det
from .errors import (
    ChartSingular,
    DomainViolation,
    GammaPole,
    InvalidArgument,
    NotAbelian,
    NotOnVariety,
    QuadratureNonConvergence,
    SeriesDomain,
    SizeTooLarge,
    StencilOverflow,
)
from .functions import univariate
from .group import FiniteGroup
from .poly import SparsePoly, product

EPS = np.finfo(float).eps
MAX_FD_ORDER = 8
VARIETY_TOL = 1e-10


# -- operators ----------------------------------------------------------------

@dataclass(frozen=True)
class OperatorSpec:
    group: FiniteGroup
    symbol: SparsePoly
    factors: tuple[LinearForm, ...] | None = None

    @property
    def order(self) -> int:
        return self.symbol.degree()

    def factors_consistent(self) -> bool:
        if self.factors is None:
            return True
        return product((f.poly() for f in self.factors), self.group.n).to_rational() == self.symbol


def operator_spec(G: FiniteGroup, table: CharacterTable | None = None) -> OperatorSpec:
    symbol = expand_group_det(G)
    factors = None
    if G.is_abelian:
        table = table or character_table(G)
        factors = tuple(LinearForm(table.element_row(i)) for i in range(table.s))
    return OperatorSpec(G, symbol, factors)


def _central_stencil(k: int, h: float) -> list[tuple[float, float]]:
    """k-fold composed central difference: (offset, weight) pairs, half steps for odd k."""
    return [((k / 2 - j) * h, (-1) ** j * math.comb(k, j) / h**k) for j in range(k + 1)]


def _fd_once(func, x0, symbol, h):
    n = x0.size
    stencils = {}
    pts, wts, owner = [], [], []
    terms = list(symbol.terms.items())
    for t, (e, _) in enumerate(terms):
        per_axis = []
        for i, k in enumerate(e):
            if k:
                if k not in stencils:
                    stencils[k] = _central_stencil(k, h)
                per_axis.append([(i, off, w) for off, w in stencils[k]])
        for combo in itertools.product(*per_axis):
            p = x0.copy()
            w = 1.0
            for i, off, wi in combo:
                p[i] += off
                w *= wi
            pts.append(p)
            wts.append(w)
            owner.append(t)
    vals = np.asarray(func(np.array(pts).reshape(-1, n)), dtype=complex)
    if not np.all(np.isfinite(vals)):
        raise StencilOverflow("non-finite function value on the stencil")
    per_term = np.zeros(len(terms), dtype=complex)
    np.add.at(per_term, np.array(owner), np.array(wts) * vals)
    return np.array([complex(c) for _, c in terms]) * per_term


def fd_apply_symbol(
    func: Callable[[np.ndarray], np.ndarray],
    point: Sequence[float],
    symbol: SparsePoly,
    h: float,
    levels: int = 2,
) -> tuple[complex, float]:
    """Apply ``symbol(d/dx)`` to ``func`` at ``point`` by composed central differences.

    The stencil error is even in h; ``levels`` Richardson steps (h, h/2, h/4, ...)
    lift it to O(h^(2 + 2 levels)). Returns the value and a scale (sum of the
    moduli of the per-monomial terms).
    """
    x0 = np.asarray(point, dtype=float)
    if symbol.degree() > MAX_FD_ORDER:
        raise StencilOverflow(f"operator order {symbol.degree()} exceeds {MAX_FD_ORDER}")
    row = [_fd_once(func, x0, symbol, h / 2**j) for j in range(levels + 1)]
    for lev in range(1, levels + 1):
        w = 4**lev
        row = [(w * row[j + 1] - row[j]) / (w - 1) for j in range(len(row) - 1)]
    contrib = row[0]
    return complex(contrib.sum()), float(np.abs(contrib).sum())


def default_step(order: int, scale: float = 1.0, levels: int = 2) -> float:
    """Base step for ``fd_apply_symbol``.

    Truncation is O(h^(2 levels + 2)) and roundoff ~ eps / (h / 2^levels)^order;
    the finest sub-step is put at the balance point.
    """
    return 2**levels * EPS ** (1.0 / (order + 2 * levels + 2)) * max(1.0, scale)


# -- plane waves --------------------------------------------------------------

def _is_exact(v) -> bool:
    return isinstance(v, (int, Fraction, CyclotomicNumber))


@dataclass(frozen=True)
class KernelCheck:
    residual: float
    exact: bool
    theta_at_alpha: complex
    step: float | None = None


def plane_wave_check(
    G: FiniteGroup,
    alpha: Sequence,
    fname: str,
    point: Sequence[float] | None = None,
    h: float | None = None,
    symbol: SparsePoly | None = None,
) -> KernelCheck:
    """Apply Theta(d) to F(sum_g alpha_g x_g).

    Polynomial F with exact alpha gives an exact residual (0 or not); otherwise a
    relative finite-difference residual is returned.
    """
    n = G.n
    if len(alpha) != n:
        raise InvalidArgument(f"alpha needs {n} entries")
    symbol = symbol or expand_group_det(G)
    F = univariate(fname)
    a = np.array([complex(v) for v in alpha])
    theta = complex(symbol.evaluate(list(a)))
    if abs(theta) > VARIETY_TOL * max(1.0, float(np.abs(a).max()) ** n):
        raise NotOnVariety(f"Theta(alpha) = {theta:.3e} is not zero")

    if F.is_polynomial and all(_is_exact(v) for v in alpha):
        wave = SparsePoly.linear(list(alpha)) ** F.degree
        out = wave.apply_operator(symbol)
        exact_theta = symbol.evaluate(list(alpha))
        return KernelCheck(0.0 if not out else 1.0, True, complex(exact_theta))

    x0 = np.asarray(point if point is not None else [0.1 * (i + 1) for i in range(n)], dtype=float)
    # derivatives of F(a . x) grow like |a|^k, so the step shrinks with |a|
    step = h or default_step(symbol.degree(), float(np.abs(x0).max())) / max(1.0, float(np.abs(a).max()))
    val, scale = fd_apply_symbol(lambda X: F(X @ a), x0, symbol, step)
    return KernelCheck(abs(val) / scale if scale else abs(val), False, theta, step)


def _plane_wave_raw(G, alpha, fname, h, symbol) -> float:
    a = np.array([complex(v) for v in alpha])
    F = univariate(fname)
    x0 = np.array([0.1 * (i + 1) for i in range(G.n)])
    val, scale = fd_apply_symbol(lambda X: F(X @ a), x0, symbol, h, levels=0)
    return abs(val) / scale


def plane_wave_fd_order(G: FiniteGroup, alpha: Sequence, fname: str = "exp", h: float = 0.1) -> float:
    """Observed order of the plain (unextrapolated) stencil residual when the step halves."""
    symbol = expand_group_det(G)
    r1 = _plane_wave_raw(G, alpha, fname, h, symbol)
    r2 = _plane_wave_raw(G, alpha, fname, h / 2, symbol)
    if r2 <= 1e-14:
        # the stencil is exact on this wave (e.g. alpha with equal moduli)
        return math.inf
    return math.log2(r1 / r2)


# -- separation of variables (abelian) ------------------------------------------

@dataclass(frozen=True)
class SeparationChart:
    """X_g = sum_chi chi(g) u_chi: ``forward[g][chi] = chi(g)``."""

    forward: np.ndarray
    inverse: np.ndarray
    exact: bool
    det: object

    def identity_defect(self) -> float:
        return float(np.abs(self.forward @ self.inverse - np.eye(len(self.forward))).max())


def separation_chart(G: FiniteGroup, table: CharacterTable | None = None) -> SeparationChart:
    if not G.is_abelian:
        raise NotAbelian("separation of variables needs an abelian group")
    table = table or character_table(G)
    d = character_matrix_determinant(table)
    if not d:
        raise ChartSingular("character matrix is singular")
    V = table.element_matrix().T  # rows g, columns chi
    inv = V.conj().T / G.n
    chart = SeparationChart(V, inv, table.exact, d)
    if chart.identity_defect() > 1e-10:
        raise ChartSingular(f"chart inverse defect {chart.identity_defect():.2e}")
    return chart


def _separated_symbolic(G, table, fnames) -> SparsePoly:
    n = G.n
    # u_chi = (1/n) sum_g conj(chi(g)) x_g
    u = [
        SparsePoly.linear([v.conj() / n for v in table.element_row(i)]) for i in range(table.s)
    ]
    w = SparsePoly.zero(n)
    for i, name in enumerate(fnames):
        F = univariate(name)
        s = SparsePoly.zero(n)
        for j in range(n):
            if j != i:
                s = s + u[j]
        w = w + s ** F.degree
    return w


def separated_solution_residual(
    G: FiniteGroup,
    fnames: Sequence[str],
    point: Sequence[float] | None = None,
    h: float | None = None,
) -> KernelCheck:
    """w = sum_chi g_chi(sum of the u's other than u_chi), pushed through the chart.

    ``fnames[i]`` is the univariate id applied to that sum for the i-th character.
    """
    n = G.n
    if len(fnames) != n:
        raise InvalidArgument(f"need {n} function ids, one per character")
    table = character_table(G)
    chart = separation_chart(G, table)
    symbol = expand_group_det(G)
    fs = [univariate(f) for f in fnames]
    if all(f.is_polynomial for f in fs) and table.exact:
        out = _separated_symbolic(G, table, fnames).apply_operator(symbol)
        return KernelCheck(0.0 if not out else 1.0, True, 0j)

    Vinv = chart.inverse

    def w(X):
        U = X @ Vinv.T
        tot = U.sum(axis=-1)
        return sum(f(tot - U[:, i]) for i, f in enumerate(fs))

    x0 = np.asarray(point if point is not None else [0.1 * (i + 1) for i in range(n)], dtype=float)
    step = h or default_step(n, float(np.abs(x0).max()))
    val, scale = fd_apply_symbol(w, x0, symbol, step)
    return KernelCheck(abs(val) / scale if scale else abs(val), False, 0j, step)


# -- Cayley operator and polarization ------------------------------------------

def matrix_var(f: int, j: int, l: int) -> int:
    """Index of z_{jl} (1-based j, l) in row-major order."""
    return (j - 1) * f + (l - 1)


def matrix_det_poly(f: int) -> SparsePoly:
    out = SparsePoly.zero(f * f)
    for perm in itertools.permutations(range(f)):
        sign = _perm_sign(perm)
        e = [0] * (f * f)
        for j, l in enumerate(perm):
            e[j * f + l] = 1
        out = out + SparsePoly(f * f, {tuple(e): sign})
    return out


def _perm_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = list(perm)
    for i in range(len(seen)):
        while seen[i] != i:
            k = seen[i]
            seen[i], seen[k] = seen[k], seen[i]
            sign = -sign
    return sign


def cayley_omega_apply(q: SparsePoly, f: int) -> SparsePoly:
    """Omega = det(d/dz_{jl}) applied to a polynomial in the f*f entries z_{jl}."""
    if f > 4:
        raise SizeTooLarge(f"matrix size {f} exceeds 4")
    if q.nvars != f * f:
        raise InvalidArgument(f"polynomial has {q.nvars} variables, expected {f * f}")
    return q.apply_operator(matrix_det_poly(f))


def matrix_substitute(q: SparsePoly, A: Sequence[Sequence], f: int) -> SparsePoly:
    """(A * q)(Z) = q(A^t Z)."""
    z = [SparsePoly.variable(f * f, i) for i in range(f * f)]
    images = []
    for j in range(f):
        for l in range(f):
            acc = SparsePoly.zero(f * f)
            for k in range(f):
                if A[k][j]:
                    acc = acc + z[k * f + l] * A[k][j]
            images.append(acc)
    return q.substitute(images)


def cayley_identity_defect(q: SparsePoly, A: Sequence[Sequence], f: int) -> SparsePoly:
    """Omega(A*q) - det(A) (A*Omega(q)); zero when the identity holds."""
    from .linalg import det_bareiss

    dA = det_bareiss([[Fraction(x) for x in r] for r in A], Fraction(0), Fraction(1))
    lhs = cayley_omega_apply(matrix_substitute(q, A, f), f)
    rhs = matrix_substitute(cayley_omega_apply(q, f), A, f) * dA
    return lhs - rhs


def polarization(q: SparsePoly, f: int, j: int, l: int, r: int = 1) -> SparsePoly:
    """Delta_{jl}^r q with Delta_{jl} = sum_h z_{jh} d/dz_{lh}."""
    for _ in range(r):
        acc = SparsePoly.zero(f * f)
        for h in range(1, f + 1):
            acc = acc + SparsePoly.variable(f * f, matrix_var(f, j, h)) * q.diff(matrix_var(f, l, h))
        q = acc
    return q


@dataclass(frozen=True)
class CommutatorCheck:
    ok: bool
    witness: tuple[int, ...] | None = None


def _row_family(f: int, l: int, max_degree: int = 3) -> list[SparsePoly]:
    """Monomials in the entries of row l up to ``max_degree``."""
    out = []
    for e in itertools.product(range(max_degree + 1), repeat=f):
        if 0 < sum(e) <= max_degree:
            exps = [0] * (f * f)
            for h, k in enumerate(e):
                exps[matrix_var(f, l, h + 1)] = k
            out.append(SparsePoly(f * f, {tuple(exps): 1}))
    return out


def polarization_commutator_check(f: int, j: int, l: int, r: int, q: SparsePoly) -> CommutatorCheck:
    """[Omega, Delta_{jl}^r] q = 0 and Delta_{jl}^r p(row l) in ker Omega, exactly."""
    if j == l:
        raise InvalidArgument("polarization indices must differ")
    if not (1 <= j <= f and 1 <= l <= f):
        raise InvalidArgument(f"indices must lie in 1..{f}")
    if f > 3 or r > 3 or r < 1:
        raise InvalidArgument("need f <= 3 and 1 <= r <= 3")
    comm = cayley_omega_apply(polarization(q, f, j, l, r), f) - polarization(cayley_omega_apply(q, f), f, j, l, r)
    if comm:
        return CommutatorCheck(False, next(iter(comm.terms)))
    for p in _row_family(f, l):
        out = cayley_omega_apply(polarization(p, f, j, l, r), f)
        if out:
            return CommutatorCheck(False, next(iter(p.terms)))
    return CommutatorCheck(True)


# -- John transform --------------------------------------------------------------

@dataclass(frozen=True)
class QuadResult:
    value: float
    error_estimate: float


def _quad(fn, a, b, tol=1e-13):
    val, err, info = integrate.quad(fn, a, b, epsabs=tol, epsrel=tol, limit=200, full_output=1)[:3]
    return val, err


def john_transform_numeric(
    lam: Sequence[float],
    alpha: Sequence[float],
    beta: Sequence[float],
    enforce_domain: bool = True,
    tol: float = 1e-9,
) -> QuadResult:
    """int (a1 t + b1)_+^(l1-1) (a2 t + b2)_+^(l2-1) t_+^(l3-1) dt over R.

    Endpoint singularities |t - c|^(E-1) are removed by |t - c| = s^(1/E).
    """
    l1, l2, l3 = (float(x) for x in lam)
    if min(l1, l2, l3) <= 0:
        raise DomainViolation("every lambda_i must be positive")
    if enforce_domain and l1 + l2 + l3 >= 2:
        raise DomainViolation(f"lambda_1 + lambda_2 + lambda_3 = {l1 + l2 + l3} is not < 2")

    # factors (a t + b)_+^(l - 1); t_+ is the factor (1, 0, l3)
    factors = [(1.0, 0.0, l3)]
    for a, b, l in ((alpha[0], beta[0], l1), (alpha[1], beta[1], l2)):
        a, b = float(a), float(b)
        if a == 0 and b <= 0:
            return QuadResult(0.0, 0.0)
        factors.append((a, b, l))
    lo = max(-b / a for a, b, _ in factors if a > 0)
    hi = min((-b / a for a, b, _ in factors if a < 0), default=math.inf)
    if hi <= lo:
        return QuadResult(0.0, 0.0)

    def rest(t, skip):
        out = 1.0
        for i, (a, b, l) in enumerate(factors):
            if i not in skip and l != 1:
                out *= max(a * t + b, 0.0) ** (l - 1)
        return out

    def near(c, sign):
        # prod_i (|a_i| |t - c|)^(l_i - 1) dt = const * ds with |t - c| = s^(1/E)
        skip = [i for i, (a, b, _) in enumerate(factors) if a != 0 and -b / a == c]
        E = 1.0 + sum(factors[i][2] - 1 for i in skip)
        if E <= 0:
            raise DomainViolation(f"integrand is not integrable at t = {c}")
        const = math.prod(abs(factors[i][0]) ** (factors[i][2] - 1) for i in skip) / E
        return (lambda s: const * rest(c + sign * s ** (1 / E), skip)), E

    f_lo, e_lo = near(lo, 1)
    if math.isinf(hi):
        mid = lo + 1.0
        pieces = [_quad(f_lo, 0.0, (mid - lo) ** e_lo), _quad(lambda t: rest(t, []), mid, math.inf)]
    else:
        mid = 0.5 * (lo + hi)
        f_hi, e_hi = near(hi, -1)
        pieces = [_quad(f_lo, 0.0, (mid - lo) ** e_lo), _quad(f_hi, 0.0, (hi - mid) ** e_hi)]

    value = sum(p[0] for p in pieces)
    err = sum(p[1] for p in pieces)
    if not math.isfinite(value) or err > max(tol, tol * abs(value)):
        raise QuadratureNonConvergence(f"quadrature error estimate {err:.2e}")
    return QuadResult(float(value), float(err))


def gauss_hypergeometric(a: float, b: float, c: float, x: float, tol: float = 1e-12, max_terms: int = 5000) -> float:
    """2F1(a, b; c; x) by its power series.

    Terminating series (a or b a non-positive integer) are summed for any x;
    otherwise only |x| < 0.95 is accepted.
    """
    if c <= 0 and float(c).is_integer():
        raise GammaPole(f"c = {c} is a non-positive integer")
    stop = [-int(v) for v in (a, b) if v <= 0 and float(v).is_integer()]
    if stop:
        # a polynomial in x: sum it exactly up to the terminating index
        total, term = 1.0, 1.0
        for k in range(min(stop)):
            term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * x
            total += term
        return total
    if abs(x) >= 0.95:
        raise SeriesDomain(f"|x| = {abs(x)} is outside the series region |x| < 0.95")
    total, term = 1.0, 1.0
    for k in range(max_terms):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1)) * x
        total += term
        if abs(term) <= tol * abs(total) and k > 2:
            return total
    raise SeriesDomain(f"series did not reach {tol} after {max_terms} terms")


def _gamma(x: float) -> float:
    if x <= 0 and float(x).is_integer():
        raise GammaPole(f"Gamma pole at {x}")
    return math.gamma(x)


def john_hypergeometric_closed(lam: Sequence[float], alpha: Sequence[float], beta: Sequence[float]) -> float:
    """Closed form through Gauss 2F1, valid for alpha_i < 0 < beta_i."""
    l1, l2, l3 = (float(v) for v in lam)
    a1, a2 = (float(v) for v in alpha)
    b1, b2 = (float(v) for v in beta)
    if not (a1 < 0 < b1 and a2 < 0 < b2):
        raise DomainViolation("closed form needs alpha_i < 0 < beta_i")
    x = a1 * b2 / (a2 * b1)
    terminating = l1 >= 1 and float(l1).is_integer()
    if x >= 1 and not (terminating and x == 1):
        raise SeriesDomain(f"x = {x} is not < 1")
    pref = _gamma(l2) * _gamma(l3) / _gamma(l2 + l3)
    pref *= b1 ** (l1 - 1) * b2 ** (l2 + l3 - 1) * abs(a2) ** (-l3)
    return pref * gauss_hypergeometric(1 - l1, l3, l2 + l3, x)


def admissible_john_parameters(count: int, seed: int = 42) -> list[tuple]:
    """Seeded (lambda, alpha, beta) with alpha < 0 < beta, sum(lambda) < 2 and x < 0.9."""
    rng = np.random.default_rng(seed)
    out = [((0.5, 0.5, 0.5), (-1.0, -2.0), (3.0, 4.0))]
    while len(out) < count:
        lam = tuple(float(v) for v in rng.uniform(0.2, 0.65, 3))
        alpha = tuple(float(v) for v in -rng.uniform(0.5, 3.0, 2))
        beta = tuple(float(v) for v in rng.uniform(0.5, 3.0, 2))
        x = alpha[0] * beta[1] / (alpha[1] * beta[0])
        if x < 0.9:
            out.append((lam, alpha, beta))
    return out


# -- Omega_9 ------------------------------------------------------------------------

SCHWARTZ_5 = {
    "gauss": lambda y: np.exp(-np.sum(y * y, axis=0)),
    "x1gauss": lambda y: y[0] * np.exp(-np.sum(y * y, axis=0)),
    "x2x4gauss": lambda y: y[1] * y[3] * np.exp(-np.sum(y * y, axis=0)),
}

DEFAULT_OMEGA9_POINT = (1.0, 0.0, 0.3, 0.2, 1.0, 0.0, 0.1, -0.2, 0.5)


def _omega9_phi(f, params: np.ndarray, box: float = 7.0, tol: float = 1e-12) -> np.ndarray:
    """phi at every row of ``params`` (k x 9), one shared adaptive 2D quadrature.

    The integrand carries exp(-x2^2 - x3^2), so the box [-7, 7]^2 loses < 1e-21.
    """
    A, B, Cc = params[:, 0:3], params[:, 3:6], params[:, 6:9]

    def inner(x2):
        def g(x3):
            y = A * x2 + B * x3 + Cc  # (k, 3)
            ys = np.stack([y[:, 0], y[:, 1], y[:, 2], np.full(len(y), x2), np.full(len(y), x3)])
            return f(ys)

        val, err = integrate.quad_vec(g, -box, box, epsabs=tol, epsrel=tol)
        return val

    val, err = integrate.quad_vec(inner, -box, box, epsabs=tol, epsrel=tol)
    if not np.all(np.isfinite(val)) or err > 1e-9:
        raise QuadratureNonConvergence(f"phi quadrature error {err:.2e}")
    return val


@dataclass(frozen=True)
class Omega9Result:
    residual: float
    value: float
    largest_term: float


def omega9_kernel_residual(fname: str = "gauss", point: Sequence[float] = DEFAULT_OMEGA9_POINT, h: float = 0.02) -> Omega9Result:
    """Omega_9 phi at ``point`` = (alpha_1..3, beta_1..3, gamma_1..3), relative to the largest term.

    Each of the six determinant terms is a third mixed partial in one alpha, one
    beta and one gamma variable, estimated with the 8-point central stencil.
    """
    try:
        f = SCHWARTZ_5[fname]
    except KeyError:
        raise InvalidArgument(f"unknown integrand {fname!r}; known: {', '.join(SCHWARTZ_5)}") from None
    p0 = np.asarray(point, dtype=float)
    if p0.shape != (9,):
        raise InvalidArgument("point needs 9 coordinates")
    perms = list(itertools.permutations(range(3)))
    corners = list(itertools.product((1, -1), repeat=3))
    pts = []
    for perm in perms:
        idx = (perm[0], 3 + perm[1], 6 + perm[2])
        for signs in corners:
            p = p0.copy()
            for i, s in zip(idx, signs):
                p[i] += s * h
            pts.append(p)
    vals = _omega9_phi(f, np.array(pts)).reshape(len(perms), len(corners))
    weights = np.array([a * b * c for a, b, c in corners]) / (8 * h**3)
    terms = [_perm_sign(perm) * float(vals[k] @ weights) for k, perm in enumerate(perms)]
    value = float(sum(terms))
    largest = float(max(abs(t) for t in terms))
    return Omega9Result(abs(value) / largest if largest else abs(value), value, largest)
