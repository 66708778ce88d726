"""Invertible Frobenius matrices as a group, and its Lie algebra.

M(a)[g][h] = a[g h^-1], so M(a) M(b) = M(a * b) with the convolution
(a * b)_t = sum_{uv=t} a_u b_v. The Lie algebra is spanned by the
permutation matrices A_k, (A_k)_{p,q} = 1 iff S_q = S_p S_k.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .characters import CharacterTable, character_table
from .detfact import MAX_SYMBOLIC_ORDER, FrobeniusMatrix, expand_group_det
from .errors import GroupDetError, InvalidArgument, MissingCharacterTable, OrderTooLarge, SingularFrobenius
from .group import FiniteGroup, conjugacy_classes
from .linalg import matmul, nullspace, rank_exact
from .poly import SparsePoly

SINGULAR_TOL = 1e-12


def _check_len(G: FiniteGroup, v: Sequence, name: str) -> None:
    if len(v) != G.n:
        raise InvalidArgument(f"{name} needs {G.n} entries, got {len(v)}")


def _exact(v: Sequence) -> bool:
    return all(isinstance(x, (int, Fraction)) for x in v)


def convolve(G: FiniteGroup, a: Sequence, b: Sequence) -> tuple:
    """c_t = sum over u v = t of a_u b_v."""
    _check_len(G, a, "a")
    _check_len(G, b, "b")
    c = [0] * G.n
    for u in range(G.n):
        if not a[u]:
            continue
        for v in range(G.n):
            c[G.mul(u, v)] += a[u] * b[v]
    return tuple(c)


def delta_e(G: FiniteGroup) -> tuple[int, ...]:
    return (1,) + (0,) * (G.n - 1)


@lru_cache(maxsize=64)
def _gradient(G: FiniteGroup) -> tuple[SparsePoly, tuple[SparsePoly, ...]]:
    theta = expand_group_det(G)
    return theta, tuple(theta.diff(w) for w in range(G.n))


def frobenius_inverse(G: FiniteGroup, a: Sequence) -> tuple:
    """U with M(a) M(U) = I, from U_v = (1/(n D)) dD/dX_{v^-1} at X = a.

    Exact (Fractions) for rational input, floating otherwise.
    """
    _check_len(G, a, "a")
    if G.n > MAX_SYMBOLIC_ORDER:
        raise OrderTooLarge(f"needs the expanded determinant, n <= {MAX_SYMBOLIC_ORDER}, got {G.n}")
    theta, grad = _gradient(G)
    if _exact(a):
        a = [Fraction(x) for x in a]
        D = theta.evaluate(a)
        if D == 0:
            raise SingularFrobenius("Frobenius determinant vanishes")
        return tuple(Fraction(grad[G.inverse[v]].evaluate(a)) / (G.n * D) for v in range(G.n))
    a = [complex(x) for x in a]
    D = complex(theta.evaluate(a))
    scale = max(1.0, max(abs(x) for x in a)) ** G.n
    if abs(D) <= SINGULAR_TOL * scale:
        raise SingularFrobenius(f"Frobenius determinant {D:.3e} is numerically zero")
    U = [complex(grad[G.inverse[v]].evaluate(a)) / (G.n * D) for v in range(G.n)]
    if all(isinstance(x, complex) and x.imag == 0 for x in a):
        return tuple(u.real for u in U)
    return tuple(U)


def inverse_defect(G: FiniteGroup, a: Sequence, U: Sequence) -> float:
    """max |M(a) M(U) - I| (0 exactly for rational input)."""
    P = matmul(FrobeniusMatrix(G, tuple(a)).rows, FrobeniusMatrix(G, tuple(U)).rows)
    return max(abs(P[i][j] - (i == j)) for i in range(G.n) for j in range(G.n))


# -- the Lie algebra ------------------------------------------------------------------


@dataclass(frozen=True)
class LieGenerators:
    group: FiniteGroup
    matrices: tuple[np.ndarray, ...]  # matrices[k] is A_{k+1}, attached to element k

    def index_of_product(self, k: int, l: int) -> int:
        """Generator attached to S_k S_l."""
        return self.group.mul(k, l)


def lie_generators(G: FiniteGroup) -> LieGenerators:
    mats = []
    for k in range(G.n):
        A = np.zeros((G.n, G.n), dtype=np.int64)
        for p in range(G.n):
            A[p, G.mul(p, k)] = 1
        A.setflags(write=False)
        mats.append(A)
    return LieGenerators(G, tuple(mats))


def vector_field_bracket(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Bracket of the linear vector fields z -> A z and z -> B z: BA - AB."""
    return B @ A - A @ B


@dataclass(frozen=True)
class BracketCheck:
    ok: bool
    pairs: int
    failures: tuple[tuple[int, int], ...]
    matrix_commutator_ok: bool  # [A_k, A_l] = A_{kl} - A_{lk} as matrices

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "pairs": self.pairs,
            "failures": [list(f) for f in self.failures],
            "matrix_commutator_ok": self.matrix_commutator_ok,
        }


def bracket_identity_check(G: FiniteGroup) -> BracketCheck:
    """[A_k, A_l] = A_{S_l S_k} - A_{S_k S_l} for every pair, exactly.

    The bracket is that of the associated vector fields; the plain matrix
    commutator satisfies the same identity with the opposite sign, which is
    recorded too.
    """
    gens = lie_generators(G)
    A = gens.matrices
    failures = []
    comm_ok = True
    for k, l in itertools.product(range(G.n), repeat=2):
        rhs = A[G.mul(l, k)] - A[G.mul(k, l)]
        if not np.array_equal(vector_field_bracket(A[k], A[l]), rhs):
            failures.append((k, l))
        if not np.array_equal(A[k] @ A[l] - A[l] @ A[k], -rhs):
            comm_ok = False
    return BracketCheck(not failures, G.n * G.n, tuple(failures), comm_ok)


@dataclass(frozen=True)
class LieStructure:
    r: int
    derived_dim: int
    center_basis: tuple[tuple[Fraction, ...], ...]
    derived_basis: tuple[tuple[int, ...], ...]
    class_count: int
    sum_rank: int
    center_commutes: bool

    @property
    def direct_sum(self) -> bool:
        n = len(self.center_basis[0]) if self.center_basis else self.r + self.derived_dim
        return self.sum_rank == n and self.r + self.derived_dim == n

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "derived_dim": self.derived_dim,
            "class_count": self.class_count,
            "direct_sum": self.direct_sum,
            "center_commutes": self.center_commutes,
        }


def center_derived_dims(G: FiniteGroup) -> LieStructure:
    """Center {sum e_s A_s : e_q = e_{t^-1 q t}} and the span of A_q - A_{t^-1 q t}.

    Vectors are coordinates in the basis A_1..A_n; all ranks are exact.
    """
    n = G.n
    diffs = []
    for q, t in itertools.product(range(n), repeat=2):
        c = G.conjugate(q, t)
        if c != q:
            row = [0] * n
            row[q] += 1
            row[c] -= 1
            diffs.append(tuple(row))
    diffs = sorted(set(diffs))
    center = nullspace(diffs, n) if diffs else [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    derived_rank = rank_exact(diffs) if diffs else 0
    # reduce the derived spanning set to a basis
    basis: list[tuple[int, ...]] = []
    for d in diffs:
        if rank_exact(basis + [d]) > len(basis):
            basis.append(d)
    sum_rank = rank_exact([list(v) for v in center] + [list(b) for b in basis])
    A = lie_generators(G).matrices
    commutes = True
    for v in center:
        Z = sum((A[s] * v[s] for s in range(n) if v[s]), np.zeros((n, n), dtype=object))
        for T in A:
            if not np.array_equal(Z.dot(T) - T.dot(Z), np.zeros((n, n), dtype=object)):
                commutes = False
    return LieStructure(
        len(center),
        derived_rank,
        tuple(tuple(v) for v in center),
        tuple(basis),
        conjugacy_classes(G).r,
        sum_rank,
        commutes,
    )


@dataclass(frozen=True)
class UnitDims:
    ok: bool
    degrees: tuple[int, ...]
    total: int


def unit_dims_check(G: FiniteGroup, table: CharacterTable | None = None) -> UnitDims:
    """sum of squared character degrees equals |G| (block sizes of the group algebra)."""
    if table is None:
        try:
            table = character_table(G)
        except GroupDetError as e:
            raise MissingCharacterTable(f"no character table: {e}") from e
    degs = tuple(sorted(table.degrees))
    total = sum(d * d for d in degs)
    return UnitDims(total == G.n, degs, total)
