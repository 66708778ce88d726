"""Almost-Frobenius structure on the complement of the coordinate hyperplanes.

On V = C^n minus {z_i = 0} the product is (X . Y)_i = X_i Y_i / z_i, the
metric is g(u, v) = sum u_i v_i and rho_i is the projection onto e_i.
The Euler field E = z is the identity and Phi = sum z_i^2 log(z_i) / 2
is a potential: its third derivatives are g(e_i . e_j, e_k).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import InvalidArgument, NonPositiveCoordinate, OnHyperplane
from .linalg import rank_exact

# 4th-order central stencils as (offset, weight) with h factored out
_D1 = ((-2, 1 / 12), (-1, -8 / 12), (1, 8 / 12), (2, -1 / 12))
_D2 = ((-2, -1 / 12), (-1, 16 / 12), (0, -30 / 12), (1, 16 / 12), (2, -1 / 12))
_D3 = ((-3, 1 / 8), (-2, -1), (-1, 13 / 8), (1, -13 / 8), (2, 1), (3, -1 / 8))
_STENCILS = {1: _D1, 2: _D2, 3: _D3}

POTENTIAL_TOL = 1e-7
DEFAULT_STEP = 1e-2


def _point(z) -> np.ndarray:
    z = np.asarray(z)
    if z.ndim != 1 or z.size == 0:
        raise InvalidArgument("a point is a non-empty vector")
    if np.any(z == 0):
        raise OnHyperplane(f"coordinate {int(np.flatnonzero(z == 0)[0])} vanishes")
    return z


def frob_product(z, X, Y) -> np.ndarray:
    """(X . Y)_i = X_i Y_i / z_i."""
    z = _point(z)
    X, Y = np.asarray(X), np.asarray(Y)
    if X.shape != z.shape or Y.shape != z.shape:
        raise InvalidArgument("tangent vectors must match the point's dimension")
    return X * Y / z


def frob_product_exact(z: Sequence, X: Sequence, Y: Sequence) -> tuple[Fraction, ...]:
    """The product summed as sum_i omega_i(X) rho_i(Y) with omega_i = dz_i / z_i, in Q."""
    z = [Fraction(v) for v in z]
    if any(v == 0 for v in z):
        raise OnHyperplane("a coordinate vanishes")
    n = len(z)
    out = [Fraction(0)] * n
    for i in range(n):
        w = Fraction(X[i]) / z[i]
        rho_y = [Fraction(Y[j]) if j == i else Fraction(0) for j in range(n)]
        out = [o + w * r for o, r in zip(out, rho_y)]
    return tuple(out)


def metric(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v)), 0)


def _rho(n: int, i: int) -> list[list[int]]:
    return [[int(p == q == i) for q in range(n)] for p in range(n)]


def _mm(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


def _msub(A, B):
    return [[a - b for a, b in zip(r, s)] for r, s in zip(A, B)]


def _madd(A, B):
    return [[a + b for a, b in zip(r, s)] for r, s in zip(A, B)]


@dataclass(frozen=True)
class StructureReport:
    n: int
    identity_sum: bool
    orthogonal: bool
    dunkl: bool
    self_adjoint: bool
    restriction_ranks: tuple[int, ...]
    euler_identity: bool
    commutative: bool
    associative: bool

    @property
    def ok(self) -> bool:
        return (
            self.identity_sum
            and self.orthogonal
            and self.dunkl
            and self.self_adjoint
            and all(r == self.n - 1 for r in self.restriction_ranks)
            and self.euler_identity
            and self.commutative
            and self.associative
        )

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "identity_sum": self.identity_sum,
            "orthogonal": self.orthogonal,
            "dunkl": self.dunkl,
            "self_adjoint": self.self_adjoint,
            "restriction_ranks": list(self.restriction_ranks),
            "euler_identity": self.euler_identity,
            "commutative": self.commutative,
            "associative": self.associative,
            "ok": self.ok,
        }


def structure_checks(z: Sequence, seed: int = 42, samples: int = 8) -> StructureReport:
    """Exact certificates for the rho_i, the metric and the product at ``z``.

    Float coordinates are read exactly as binary fractions.
    """
    zq = [Fraction(v) for v in np.asarray(z, dtype=object).tolist()] if not np.iscomplexobj(z) else None
    if zq is None:
        raise InvalidArgument("exact structure checks need real coordinates")
    if any(v == 0 for v in zq):
        raise OnHyperplane("a coordinate vanishes")
    n = len(zq)
    rho = [_rho(n, i) for i in range(n)]
    eye = [[int(p == q) for q in range(n)] for p in range(n)]
    zero = [[0] * n for _ in range(n)]
    total = zero
    for R in rho:
        total = _madd(total, R)
    identity_sum = total == eye
    orthogonal = all(_mm(rho[i], rho[j]) == zero for i in range(n) for j in range(n) if i != j)
    dunkl = True
    for i, j in itertools.combinations(range(n), 2):
        S = _madd(rho[i], rho[j])
        if _msub(_mm(S, rho[i]), _mm(rho[i], S)) != zero:
            dunkl = False
    basis = [[int(p == q) for q in range(n)] for p in range(n)]
    apply = lambda R, v: [sum(R[p][q] * v[q] for q in range(n)) for p in range(n)]
    self_adjoint = all(
        metric(apply(R, u), v) == metric(u, apply(R, v)) for R in rho for u in basis for v in basis
    )
    ranks = []
    for i in range(n):
        H = [b for k, b in enumerate(basis) if k != i]
        gram = [[metric(u, v) for v in H] for u in H]
        ranks.append(rank_exact(gram) if gram else 0)
    rng = np.random.default_rng(seed)
    rand = lambda: [Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 6))) for _ in range(n)]
    euler = comm = assoc = True
    for _ in range(samples):
        X, Y, Z = rand(), rand(), rand()
        euler &= frob_product_exact(zq, zq, Y) == tuple(Y)
        comm &= frob_product_exact(zq, X, Y) == frob_product_exact(zq, Y, X)
        assoc &= frob_product_exact(zq, frob_product_exact(zq, X, Y), Z) == frob_product_exact(
            zq, X, frob_product_exact(zq, Y, Z)
        )
    return StructureReport(n, identity_sum, orthogonal, dunkl, self_adjoint, tuple(ranks), euler, comm, assoc)


# -- potential ---------------------------------------------------------------------------


def potential(z: np.ndarray) -> np.ndarray:
    """Phi = sum_i z_i^2 log(z_i) / 2 over the last axis."""
    return 0.5 * np.sum(z * z * np.log(z), axis=-1)


def _phi1(t: float) -> float:
    return 0.5 * t * t * np.log(t)


def _third_fd(z: np.ndarray, idx: tuple[int, int, int], h: float) -> float:
    # every stencil's weights sum to zero, so Phi(z + s) - Phi(z) can stand in
    # for Phi(z + s); only the shifted coordinates contribute to that difference
    counts: dict[int, int] = {}
    for i in idx:
        counts[i] = counts.get(i, 0) + 1
    axes = list(counts.items())
    total = 0.0
    for combo in itertools.product(*(_STENCILS[k] for _, k in axes)):
        w = 1.0
        diff = 0.0
        for (axis, _), (off, wt) in zip(axes, combo):
            w *= wt
            diff += _phi1(z[axis] + off * h) - _phi1(z[axis])
        total += w * diff
    return total / h**3


def third_derivative(z: Sequence[float], idx: tuple[int, int, int], h: float = DEFAULT_STEP) -> float:
    """d^3 Phi / dz_i dz_j dz_k by 4th-order central differences plus one Richardson level."""
    z = np.asarray(z, dtype=float)
    return (16 * _third_fd(z, idx, h / 2) - _third_fd(z, idx, h)) / 15


def structure_tensor(z: Sequence, i: int, j: int, k: int):
    """T(e_i, e_j, e_k) = g(e_i . e_j, e_k)."""
    n = len(z)
    e = np.eye(n)
    return float(metric(frob_product(np.asarray(z, dtype=float), e[i], e[j]), e[k]))


@dataclass(frozen=True)
class PotentialReport:
    max_deviation: float
    worst: tuple[int, int, int]
    step: float

    @property
    def ok(self) -> bool:
        return self.max_deviation < POTENTIAL_TOL


def potential_check(z: Sequence[float], h: float = DEFAULT_STEP) -> PotentialReport:
    """Compare every third derivative of Phi with T(e_i, e_j, e_k) = delta_ijk / z_i."""
    if np.iscomplexobj(z):
        raise NonPositiveCoordinate("the potential uses the real logarithm")
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0):
        raise NonPositiveCoordinate(f"coordinate {int(np.flatnonzero(z <= 0)[0])} is not positive")
    if np.any(z <= 3 * h):
        raise NonPositiveCoordinate(f"the difference stencil leaves the positive orthant (step {h})")
    n = z.size
    worst, dev = (0, 0, 0), 0.0
    # both sides are symmetric in (i, j, k)
    for idx in itertools.combinations_with_replacement(range(n), 3):
        d = abs(third_derivative(z, idx, h) - structure_tensor(z, *idx))
        if d > dev:
            worst, dev = idx, d
    return PotentialReport(dev, worst, h)


def scaling_deviation(z: Sequence[float], X: Sequence[float], Y: Sequence[float], t: float) -> float:
    """max |(X . Y)(e^t z) - e^-t (X . Y)(z)| relative to |X . Y|."""
    z = np.asarray(z, dtype=float)
    a = frob_product(np.exp(t) * z, X, Y)
    b = np.exp(-t) * frob_product(z, X, Y)
    return float(np.max(np.abs(a - b)) / max(1e-300, float(np.max(np.abs(b)))))


def certificate(n: int, seed: int = 42) -> dict:
    """All checks at one seeded point with all z_i in [0.5, 3]."""
    if not 1 <= n <= 10:
        raise InvalidArgument(f"n must lie in [1, 10], got {n}")
    rng = np.random.default_rng(seed)
    z = rng.uniform(0.5, 3.0, size=n)
    X, Y, Z = (rng.standard_normal(n) for _ in range(3))
    identity = float(np.max(np.abs(frob_product(z, z, Y) - Y)))
    comm = float(np.max(np.abs(frob_product(z, X, Y) - frob_product(z, Y, X))))
    assoc = float(np.max(np.abs(frob_product(z, frob_product(z, X, Y), Z) - frob_product(z, X, frob_product(z, Y, Z)))))
    pot = potential_check(z)
    return {
        "point": [float(v) for v in z],
        "identity_deviation": identity,
        "commutativity_deviation": comm,
        "associativity_deviation": assoc,
        "structure": structure_checks(z, seed=seed).to_json(),
        "potential": {"max_deviation": pot.max_deviation, "worst": list(pot.worst), "ok": pot.ok},
        "scaling_deviation": scaling_deviation(z, X, Y, 0.7),
    }
