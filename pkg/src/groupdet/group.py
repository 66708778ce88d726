"""Finite groups given by Cayley tables.

A group of order ``n`` is stored as an ``n x n`` table of element indices with
``table[i][j]`` the index of ``S_i * S_j``. Index 0 must be the identity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from math import lcm
from pathlib import Path
from typing import Sequence

from .errors import BadFormat, NoIdentity, NonAssociative, NonLatinSquare

MAX_ORDER = 64


@dataclass(frozen=True)
class FiniteGroup:
    n: int
    names: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    @cached_property
    def inverse(self) -> tuple[int, ...]:
        return tuple(row.index(0) for row in self.table)

    @cached_property
    def is_abelian(self) -> bool:
        t = self.table
        return all(t[i][j] == t[j][i] for i in range(self.n) for j in range(i))

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != 0:
            x = self.table[x][g]
            k += 1
        return k

    @cached_property
    def exponent(self) -> int:
        return lcm(*(self.element_order(g) for g in range(self.n)))

    def quotient_index(self, g: int, h: int) -> int:
        """Index of ``g * h^-1``."""
        return self.table[g][self.inverse[h]]

    def conjugate(self, q: int, t: int) -> int:
        """Index of ``t^-1 * q * t``."""
        return self.table[self.table[self.inverse[t]][q]][t]

    def to_json(self) -> dict:
        return {"n": self.n, "names": list(self.names), "table": [list(r) for r in self.table]}


def validate_table(table: Sequence[Sequence[int]]) -> None:
    """Raise the first structural violation found in ``table``."""
    n = len(table)
    if n == 0:
        raise BadFormat("empty table")
    for i, row in enumerate(table):
        if len(row) != n:
            raise BadFormat(f"row {i} has length {len(row)}, expected {n}")
        for j, v in enumerate(row):
            if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v < n:
                raise BadFormat(f"entry ({i},{j}) = {v!r} is not an index in 0..{n - 1}")
    full = set(range(n))
    for i, row in enumerate(table):
        if set(row) != full:
            dup = next(v for v in row if row.count(v) > 1)
            raise NonLatinSquare(f"row {i} repeats element {dup}")
    for j in range(n):
        col = [table[i][j] for i in range(n)]
        if set(col) != full:
            dup = next(v for v in col if col.count(v) > 1)
            raise NonLatinSquare(f"column {j} repeats element {dup}")
    for j in range(n):
        if table[0][j] != j:
            raise NoIdentity(f"table[0][{j}] = {table[0][j]}, index 0 is not a left identity")
        if table[j][0] != j:
            raise NoIdentity(f"table[{j}][0] = {table[j][0]}, index 0 is not a right identity")
    for i in range(n):
        ti = table[i]
        for j in range(n):
            tij = ti[j]
            tj = table[j]
            ttij = table[tij]
            for k in range(n):
                if ttij[k] != ti[tj[k]]:
                    raise NonAssociative(f"(S_{i} S_{j}) S_{k} != S_{i} (S_{j} S_{k})")
    # Latin square plus identity gives one-sided inverses; check two-sidedness.
    for i in range(n):
        inv = table[i].index(0)
        if table[inv][i] != 0:
            raise NonAssociative(f"element {i} has no two-sided inverse")


def make_group(table: Sequence[Sequence[int]], names: Sequence[str] | None = None) -> FiniteGroup:
    validate_table(table)
    n = len(table)
    if names is None:
        names = [f"g{i}" for i in range(n)]
    if len(names) != n:
        raise BadFormat(f"{len(names)} names for a group of order {n}")
    return FiniteGroup(n, tuple(str(s) for s in names), tuple(tuple(int(v) for v in r) for r in table))


def parse_group(text: str | bytes | dict) -> FiniteGroup:
    """Parse the JSON group-file format ``{"n", "names", "table"}``."""
    if isinstance(text, dict):
        data = text
    else:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise BadFormat(f"invalid JSON: {exc}") from None
    if not isinstance(data, dict) or "table" not in data:
        raise BadFormat("expected an object with a 'table' field")
    table = data["table"]
    if not isinstance(table, list) or not all(isinstance(r, list) for r in table):
        raise BadFormat("'table' must be a list of lists")
    n = data.get("n", len(table))
    if n != len(table):
        raise BadFormat(f"n = {n} but the table has {len(table)} rows")
    return make_group(table, data.get("names"))


def load_group(path: str | Path) -> FiniteGroup:
    return parse_group(Path(path).read_text())


# -- conjugacy classes ----------------------------------------------------------

@dataclass(frozen=True)
class ConjugacyClasses:
    classes: tuple[tuple[int, ...], ...]
    class_of: tuple[int, ...] = field(repr=False)

    @property
    def r(self) -> int:
        """Number of classes (also written ``s`` for the character count)."""
        return len(self.classes)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.classes)

    @property
    def representatives(self) -> tuple[int, ...]:
        return tuple(c[0] for c in self.classes)


def conjugacy_classes(G: FiniteGroup) -> ConjugacyClasses:
    seen = [False] * G.n
    orbits = []
    for g in range(G.n):
        if seen[g]:
            continue
        orbit = sorted({G.conjugate(g, t) for t in range(G.n)})
        for x in orbit:
            seen[x] = True
        orbits.append(tuple(orbit))
    orbits.sort(key=lambda c: (len(c), c[0]))
    class_of = [0] * G.n
    for k, c in enumerate(orbits):
        for x in c:
            class_of[x] = k
    return ConjugacyClasses(tuple(orbits), tuple(class_of))


# -- constructors for the bundled corpus ----------------------------------------

def from_permutations(perms: Sequence[Sequence[int]], names: Sequence[str]) -> FiniteGroup:
    """Group of permutations (images lists) under ``(a*b)(x) = a(b(x))``."""
    perms = [tuple(p) for p in perms]
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[tuple(a[b[x]] for x in range(len(a)))] for b in perms] for a in perms]
    return make_group(table, names)


def cyclic(n: int) -> FiniteGroup:
    return make_group([[(i + j) % n for j in range(n)] for i in range(n)], [str(i) for i in range(n)])


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    """Elements ordered with the first factor varying fastest."""
    pairs = [(g, h) for h in range(H.n) for g in range(G.n)]
    index = {p: i for i, p in enumerate(pairs)}
    table = [[index[(G.mul(a, c), H.mul(b, d))] for (c, d) in pairs] for (a, b) in pairs]
    names = [f"({G.names[g]},{H.names[h]})" for g, h in pairs]
    return make_group(table, names)


def klein() -> FiniteGroup:
    """Z/2 x Z/2 enumerated (0,0), (1,0), (0,1), (1,1)."""
    return direct_product(cyclic(2), cyclic(2))


def symmetric3() -> FiniteGroup:
    """S_3 enumerated (1), (123), (132), (23), (13), (12) on points 1, 2, 3."""
    perms = [(0, 1, 2), (1, 2, 0), (2, 0, 1), (0, 2, 1), (2, 1, 0), (1, 0, 2)]
    return from_permutations(perms, ["()", "(123)", "(132)", "(23)", "(13)", "(12)"])


def dihedral4() -> FiniteGroup:
    """Symmetries of the square: rotations r^k then reflections r^k s."""
    rot = lambda k: tuple((x + k) % 4 for x in range(4))
    refl = lambda k: tuple((k - x) % 4 for x in range(4))
    perms = [rot(k) for k in range(4)] + [refl(k) for k in range(4)]
    names = ["e", "r", "r2", "r3", "s", "rs", "r2s", "r3s"]
    return from_permutations(perms, names)


def quaternion8() -> FiniteGroup:
    # Unit quaternions as (sign, axis) with axis in 1, i, j, k.
    basis = ["1", "i", "j", "k"]
    prod = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }
    elems = [(1, b) for b in basis] + [(-1, b) for b in basis]
    index = {e: i for i, e in enumerate(elems)}
    table = []
    for sa, a in elems:
        row = []
        for sb, b in elems:
            s, c = prod[(a, b)]
            row.append(index[(sa * sb * s, c)])
        table.append(row)
    names = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"]
    return make_group(table, names)


BUILDERS = {
    "z1": lambda: cyclic(1),
    "z2": lambda: cyclic(2),
    "z3": lambda: cyclic(3),
    "z4": lambda: cyclic(4),
    "z6": lambda: cyclic(6),
    "klein": klein,
    "s3": symmetric3,
    "d4": dihedral4,
    "q8": quaternion8,
}

BUNDLED = ("z2", "z3", "z4", "z6", "klein", "s3", "d4", "q8")

_DATA = Path(__file__).with_name("data")


def bundled(name: str) -> FiniteGroup:
    """Load one of the bundled group files by short name."""
    path = _DATA / f"{name}.json"
    if not path.exists():
        raise BadFormat(f"no bundled group named {name!r}; choose from {', '.join(BUNDLED)}")
    return load_group(path)


def resolve_group(spec: str | Path) -> FiniteGroup:
    """Accept either a path to a group file or a bundled short name."""
    p = Path(spec)
    if p.suffix == ".json" and p.exists():
        return load_group(p)
    if str(spec) in BUILDERS:
        return bundled(str(spec)) if str(spec) in BUNDLED else BUILDERS[str(spec)]()
    if p.exists():
        return load_group(p)
    if p.suffix == ".json" and p.stem in BUNDLED:
        return bundled(p.stem)
    raise BadFormat(f"group file {spec} not found")
