"""Character tables: exact for abelian groups, floating via the class algebra otherwise."""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cyclotomic import CyclotomicNumber, root_of_unity_exponent
from .errors import BadFormat, DegenerateEigenspaces, NotAbelian, ToleranceViolation
from .group import ConjugacyClasses, FiniteGroup, conjugacy_classes

TOL = 1e-9
DEFAULT_SEED = 42


@dataclass(frozen=True)
class CharacterTable:
    """Irreducible characters of ``group``.

    ``values[i][k]`` is chi_i on class ``classes.classes[k]``. Entries are
    :class:`CyclotomicNumber` when ``exact`` is set, complex otherwise.
    """

    group: FiniteGroup
    classes: ConjugacyClasses
    degrees: tuple[int, ...]
    values: tuple[tuple, ...]
    exact: bool
    tolerance: float = 0.0

    @property
    def s(self) -> int:
        return len(self.degrees)

    def value(self, i: int, g: int):
        return self.values[i][self.classes.class_of[g]]

    def element_row(self, i: int) -> tuple:
        """chi_i evaluated on every group element, in index order."""
        return tuple(self.value(i, g) for g in range(self.group.n))

    def complex_values(self) -> np.ndarray:
        return np.array([[complex(v) for v in row] for row in self.values], dtype=complex)

    def element_matrix(self) -> np.ndarray:
        """The s x n complex matrix (chi_i(g))."""
        V = self.complex_values()
        return V[:, list(self.classes.class_of)]

    def orthogonality_defect(self) -> float:
        """max |sum_g chi_i(g) conj(chi_j(g)) - n delta_ij| (exact tables give 0)."""
        if self.exact:
            n = self.group.n
            worst = 0.0
            for i in range(self.s):
                ri = self.element_row(i)
                for j in range(self.s):
                    rj = self.element_row(j)
                    acc = sum((a * b.conj() for a, b in zip(ri, rj)), CyclotomicNumber.rational(0))
                    target = n if i == j else 0
                    if acc != target:
                        worst = max(worst, abs(complex(acc) - target))
            return worst
        X = self.element_matrix()
        gram = X @ X.conj().T
        return float(np.max(np.abs(gram - self.group.n * np.eye(self.s))))

    def to_json(self) -> dict:
        def enc(v):
            z = complex(v)
            return {"re": z.real, "im": z.imag}

        return {
            "classes": [list(c) for c in self.classes.classes],
            "degrees": list(self.degrees),
            "values": [[enc(v) for v in row] for row in self.values],
            "exact": self.exact,
        }


def _value_key(z: complex) -> tuple[float, float]:
    # argument in [0, 2pi) then decreasing modulus; roots of unity sort by exponent
    a = math.atan2(z.imag, z.real)
    if abs(a) < 1e-9 or abs(z) < 1e-9:
        a = 0.0
    elif a < 0:
        a += 2 * math.pi
    return (round(a, 8), round(-abs(z), 8))


def _row_key(degree: int, row) -> tuple:
    return (degree, tuple(_value_key(complex(v)) for v in row))


def class_structure_matrices(G: FiniteGroup, cc: ConjugacyClasses) -> np.ndarray:
    """``M[j][i][k]`` = number of (x, y) in K_j x K_i with x*y = z_k, z_k fixed in K_k."""
    r = cc.r
    M = np.zeros((r, r, r))
    for j, Kj in enumerate(cc.classes):
        for i, Ki in enumerate(cc.classes):
            for x in Kj:
                for y in Ki:
                    k = cc.class_of[G.mul(x, y)]
                    M[j, i, k] += 1
    # each product landing in K_k was counted |K_k| times, once per target element
    sizes = np.array(cc.sizes, dtype=float)
    return M / sizes[None, None, :]


def character_table_numeric(
    G: FiniteGroup, seed: int = DEFAULT_SEED, tol: float = TOL, max_tries: int = 20
) -> CharacterTable:
    """Floating character table from the simultaneous eigenvectors of the class-sum matrices."""
    if G.n > 64:
        raise BadFormat(f"order {G.n} exceeds the supported maximum 64")
    cc = conjugacy_classes(G)
    r = cc.r
    sizes = np.array(cc.sizes, dtype=float)
    M = class_structure_matrices(G, cc)
    rng = np.random.default_rng(seed)

    for _ in range(max_tries):
        weights = rng.integers(1, 1000, size=r) / rng.integers(1, 100, size=r)
        A = np.tensordot(weights, M, axes=1)
        # w (class-sum eigenvalue vector) satisfies A w = lambda w
        evals, evecs = np.linalg.eig(A)
        gaps = np.abs(evals[:, None] - evals[None, :])
        np.fill_diagonal(gaps, np.inf)
        if r == 1 or gaps.min() > 1e-6 * max(1.0, np.abs(evals).max()):
            break
    else:
        raise DegenerateEigenspaces(f"no separating class-sum combination after {max_tries} tries")

    degrees, rows = [], []
    for c in range(r):
        w = evecs[:, c]
        if abs(w[0]) < 1e-12:
            raise DegenerateEigenspaces("eigenvector vanishes on the identity class")
        w = w / w[0]
        # chi(g_k) = f * w_k / |K_k| and sum_k |K_k| |chi(g_k)|^2 = n fix f
        f2 = G.n / float(np.sum(np.abs(w) ** 2 / sizes))
        f = int(round(math.sqrt(f2)))
        if f < 1 or abs(math.sqrt(f2) - f) > 1e-6:
            raise ToleranceViolation(f"degree estimate {math.sqrt(f2)} is not an integer")
        degrees.append(f)
        rows.append(tuple(complex(v) for v in f * w / sizes))

    if sum(f * f for f in degrees) != G.n:
        raise ToleranceViolation(f"sum of squared degrees {sum(f * f for f in degrees)} != {G.n}")
    order = sorted(range(r), key=lambda c: _row_key(degrees[c], rows[c]))
    table = CharacterTable(
        G, cc, tuple(degrees[c] for c in order), tuple(rows[c] for c in order), exact=False, tolerance=tol
    )
    defect = table.orthogonality_defect()
    if defect > tol * G.n:
        raise ToleranceViolation(f"orthogonality defect {defect:.3e} exceeds {tol * G.n:.1e}")
    return table


def abelian_characters(G: FiniteGroup, seed: int = DEFAULT_SEED) -> CharacterTable:
    """Exact linear characters with values in Q(zeta_m), m the exponent of ``G``."""
    if not G.is_abelian:
        raise NotAbelian(f"group of order {G.n} is not abelian")
    numeric = character_table_numeric(G, seed=seed)
    m = G.exponent
    cc = numeric.classes
    rows = []
    for row in numeric.values:
        exps = []
        for k, z in enumerate(row):
            e = root_of_unity_exponent(z, m, TOL)
            if e is None:
                raise ToleranceViolation(f"value {z} on class {k} is not within {TOL} of an {m}-th root of unity")
            exps.append(e)
        by_elem = [exps[cc.class_of[g]] for g in range(G.n)]
        for g in range(G.n):
            for h in range(G.n):
                if by_elem[G.mul(g, h)] != (by_elem[g] + by_elem[h]) % m:
                    raise ToleranceViolation(f"snapped character is not multiplicative at ({g}, {h})")
        rows.append(tuple(CyclotomicNumber.zeta(m, e) for e in exps))
    order = sorted(range(len(rows)), key=lambda c: _row_key(1, rows[c]))
    return CharacterTable(G, cc, (1,) * G.n, tuple(rows[c] for c in order), exact=True)


def character_table(G: FiniteGroup, seed: int = DEFAULT_SEED) -> CharacterTable:
    """Exact table for abelian groups, floating table otherwise."""
    if G.is_abelian:
        return abelian_characters(G, seed=seed)
    return character_table_numeric(G, seed=seed)


def parse_character_table(G: FiniteGroup, text: str | dict, tol: float = TOL) -> CharacterTable:
    """Ingest a user-supplied table ``{"classes", "degrees", "values"}`` and validate it."""
    data = json.loads(text) if isinstance(text, str) else text
    try:
        classes = [tuple(int(x) for x in c) for c in data["classes"]]
        degrees = tuple(int(f) for f in data["degrees"])
        values = tuple(tuple(complex(v["re"], v["im"]) for v in row) for row in data["values"])
    except (KeyError, TypeError, ValueError) as exc:
        raise BadFormat(f"malformed character table: {exc}") from None
    cc = conjugacy_classes(G)
    if sorted(classes) != sorted(cc.classes):
        raise BadFormat("supplied classes are not the conjugacy classes of the group")
    # reorder columns to the canonical class order
    perm = [classes.index(c) for c in cc.classes]
    values = tuple(tuple(row[p] for p in perm) for row in values)
    if len(degrees) != cc.r or len(values) != cc.r:
        raise BadFormat(f"expected {cc.r} characters")
    for f, row in zip(degrees, values):
        if abs(row[0] - f) > tol:
            raise ToleranceViolation(f"character value at identity {row[0]} != degree {f}")
    table = CharacterTable(G, cc, degrees, values, exact=False, tolerance=tol)
    if sum(f * f for f in degrees) != G.n:
        raise ToleranceViolation("sum of squared degrees differs from the group order")
    if table.orthogonality_defect() > tol * G.n:
        raise ToleranceViolation("supplied table is not orthogonal")
    return table


def load_character_table(G: FiniteGroup, path: str | Path) -> CharacterTable:
    return parse_character_table(G, Path(path).read_text())


def character_matrix_determinant(table: CharacterTable):
    """Determinant of the square (chi_i(K_k)) matrix; exact for abelian tables."""
    from .linalg import det_bareiss

    if not table.exact:
        return complex(np.linalg.det(table.complex_values()))
    rows = [list(table.element_row(i)) for i in range(table.s)]
    return det_bareiss(rows, zero=CyclotomicNumber.rational(0), one=CyclotomicNumber.rational(1))
