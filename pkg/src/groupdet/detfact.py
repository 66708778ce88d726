"""The group determinant: Leibniz expansion, abelian linear factors, isotypic blocks."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .characters import CharacterTable, character_table
from .errors import BlockLeakage, FactorizationMismatch, NotAbelian, OrderTooLarge, ProjectorRankMismatch
from .group import FiniteGroup
from .linalg import det_bareiss
from .poly import SparsePoly, product

MAX_SYMBOLIC_ORDER = 8
RANK_TOL = 1e-10
LEAK_TOL = 1e-8


@dataclass(frozen=True)
class FrobeniusMatrix:
    """``M[g][h] = a[g * h^-1]`` for a coefficient vector ``a`` indexed by group elements."""

    group: FiniteGroup
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != self.group.n:
            raise ValueError(f"need {self.group.n} coefficients, got {len(self.coeffs)}")

    @cached_property
    def rows(self) -> list[list]:
        G = self.group
        return [[self.coeffs[G.quotient_index(g, h)] for h in range(G.n)] for g in range(G.n)]

    def array(self) -> np.ndarray:
        return np.array([[complex(v) for v in r] for r in self.rows], dtype=complex)

    def det(self):
        """Exact for rational coefficients, floating otherwise."""
        if all(isinstance(c, (int, Fraction)) for c in self.coeffs):
            return det_bareiss([[Fraction(v) for v in r] for r in self.rows], Fraction(0), Fraction(1))
        return complex(np.linalg.det(self.array()))


def _heap_permutations(n: int):
    """Yield (perm, sign) for all permutations of range(n), sign updated per swap."""
    a = list(range(n))
    c = [0] * n
    sign = 1
    yield a, sign
    i = 1
    while i < n:
        if c[i] < i:
            j = 0 if i % 2 == 0 else c[i]
            a[j], a[i] = a[i], a[j]
            sign = -sign
            yield a, sign
            c[i] += 1
            i = 1
        else:
            c[i] = 0
            i += 1


def expand_group_det(G: FiniteGroup) -> SparsePoly:
    """det(X_{g h^-1}) as an integer polynomial in X_0..X_{n-1}."""
    n = G.n
    if n > MAX_SYMBOLIC_ORDER:
        raise OrderTooLarge(f"symbolic expansion needs n <= {MAX_SYMBOLIC_ORDER}, got {n}")
    q = [[G.quotient_index(g, h) for h in range(n)] for g in range(n)]
    acc: dict[tuple[int, ...], int] = {}
    for perm, sign in _heap_permutations(n):
        e = [0] * n
        for g in range(n):
            e[q[g][perm[g]]] += 1
        key = tuple(e)
        acc[key] = acc.get(key, 0) + sign
    return SparsePoly(n, acc)


@dataclass(frozen=True)
class LinearForm:
    coeffs: tuple

    def poly(self) -> SparsePoly:
        return SparsePoly.linear(self.coeffs)

    def evaluate(self, x: Sequence):
        return sum((c * v for c, v in zip(self.coeffs, x)), 0)

    def evaluate_complex(self, x: Sequence) -> complex:
        return complex(sum(complex(c) * complex(v) for c, v in zip(self.coeffs, x)))


@dataclass(frozen=True)
class DedekindResult:
    forms: tuple[LinearForm, ...]
    product: SparsePoly
    expansion: SparsePoly
    verified: bool


def dedekind_factorization(G: FiniteGroup, table: CharacterTable | None = None) -> DedekindResult:
    """Linear factors sum_g chi(g) X_g and an exact check of their product."""
    if not G.is_abelian:
        raise NotAbelian(f"group of order {G.n} is not abelian")
    if G.n > MAX_SYMBOLIC_ORDER:
        raise OrderTooLarge(f"symbolic expansion needs n <= {MAX_SYMBOLIC_ORDER}, got {G.n}")
    table = table or character_table(G)
    forms = tuple(LinearForm(table.element_row(i)) for i in range(table.s))
    prod_poly = product((f.poly() for f in forms), G.n)
    try:
        prod_poly = prod_poly.to_rational()
    except ValueError:
        raise FactorizationMismatch("product of linear factors has irrational coefficients") from None
    expansion = expand_group_det(G)
    if prod_poly != expansion:
        raise FactorizationMismatch("product of linear factors differs from the Leibniz expansion")
    return DedekindResult(forms, prod_poly, expansion, True)


def circulant_eval(coeffs: Sequence[complex]) -> complex:
    """prod over n-th roots w of sum_k w^k c_k, via one FFT."""
    c = np.asarray(coeffs, dtype=complex)
    if c.ndim != 1 or c.size == 0:
        raise ValueError("need a non-empty coefficient vector")
    return complex(np.prod(np.fft.fft(c)))


def regular_representation(G: FiniteGroup) -> np.ndarray:
    """L[s] with L[s][g][h] = 1 iff g = s*h."""
    L = np.zeros((G.n, G.n, G.n))
    for s in range(G.n):
        for h in range(G.n):
            L[s, G.mul(s, h), h] = 1.0
    return L


def _orthonormal_range(P: np.ndarray, tol: float = RANK_TOL) -> np.ndarray:
    """Columns of P picked by largest residual norm, orthonormalized."""
    basis: list[np.ndarray] = []
    cols = [P[:, j].astype(complex) for j in range(P.shape[1])]
    while True:
        best, best_norm = None, tol
        for v in cols:
            r = v - sum((np.vdot(q, v) * q for q in basis), np.zeros_like(v))
            nr = np.linalg.norm(r)
            if nr > best_norm:
                best, best_norm = r, nr
        if best is None:
            break
        # one reorthogonalization pass keeps the basis clean
        best = best - sum((np.vdot(q, best) * q for q in basis), np.zeros_like(best))
        basis.append(best / np.linalg.norm(best))
    return np.array(basis).T if basis else np.zeros((P.shape[0], 0), dtype=complex)


@dataclass(frozen=True)
class IsotypicBlock:
    degree: int
    size: int
    det: complex


def isotypic_projectors(G: FiniteGroup, table: CharacterTable) -> list[np.ndarray]:
    L = regular_representation(G)
    X = table.element_matrix()
    return [table.degrees[i] / G.n * np.tensordot(np.conj(X[i]), L, axes=1) for i in range(table.s)]


def isotypic_block_dets(
    G: FiniteGroup, coeffs: Sequence[complex], table: CharacterTable | None = None
) -> list[IsotypicBlock]:
    """Determinants of the Frobenius matrix restricted to each isotypic component."""
    table = table or character_table(G)
    a = np.asarray([complex(c) for c in coeffs])
    M = FrobeniusMatrix(G, tuple(a)).array()
    bases = []
    for i, P in enumerate(isotypic_projectors(G, table)):
        Q = _orthonormal_range(P)
        f = table.degrees[i]
        if Q.shape[1] != f * f:
            raise ProjectorRankMismatch(f"projector {i} has rank {Q.shape[1]}, expected {f * f}")
        bases.append(Q)
    B = np.hstack(bases)
    T = B.conj().T @ M @ B
    blocks = []
    offset = 0
    mask = np.ones_like(T, dtype=bool)
    for i, Q in enumerate(bases):
        k = Q.shape[1]
        blk = T[offset : offset + k, offset : offset + k]
        mask[offset : offset + k, offset : offset + k] = False
        blocks.append(IsotypicBlock(table.degrees[i], k, complex(np.linalg.det(blk))))
        offset += k
    scale = max(1.0, float(np.abs(T).max()))
    leak = float(np.abs(T[mask]).max()) if mask.any() else 0.0
    if leak > LEAK_TOL * scale:
        raise BlockLeakage(f"off-block entry of size {leak:.3e}")
    return blocks


def s3_phi_eval(x: Sequence) -> tuple:
    """The three S_3 factors for X_1..X_6 ordered (1), (123), (132), (23), (13), (12)."""
    x1, x2, x3, x4, x5, x6 = x
    p1 = x1 + x2 + x3 + x4 + x5 + x6
    p2 = x1 + x2 + x3 - x4 - x5 - x6
    p3 = (
        x1 * x1 + x2 * x2 + x3 * x3 - x4 * x4 - x5 * x5 - x6 * x6
        - x1 * x2 - x1 * x3 - x2 * x3 + x4 * x5 + x4 * x6 + x5 * x6
    )
    return p1, p2, p3


def euler_defect(theta: SparsePoly) -> SparsePoly:
    """sum_g X_g dTheta/dX_g - deg * Theta (zero for a homogeneous Theta)."""
    n = theta.nvars
    acc = SparsePoly.zero(n)
    for g in range(n):
        acc = acc + SparsePoly.variable(n, g) * theta.diff(g)
    return acc - theta * theta.degree()


def symbol_from_forms(forms: Sequence[LinearForm], nvars: int) -> SparsePoly:
    """Exact product of linear forms, reduced to rational coefficients."""
    return product((f.poly() for f in forms), nvars).to_rational()
