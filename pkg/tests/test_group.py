import cmath
import itertools
import json
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from groupdet.characters import (
    abelian_characters,
    character_matrix_determinant,
    character_table,
    character_table_numeric,
    parse_character_table,
)
from groupdet.cyclotomic import CyclotomicNumber, cyclotomic_polynomial, degree
from groupdet.errors import BadFormat, NonAssociative, NonLatinSquare, NoIdentity, NotAbelian
from groupdet.group import BUNDLED, bundled, conjugacy_classes, cyclic, direct_product, parse_group, resolve_group


def brute_classes(G):
    """Orbits of g -> t^-1 g t straight from the table, no shared helpers."""
    inv = [next(j for j in range(G.n) if G.table[i][j] == 0) for i in range(G.n)]
    out = set()
    for g in range(G.n):
        out.add(frozenset(G.table[G.table[inv[t]][g]][t] for t in range(G.n)))
    return out


# -- parsing ---------------------------------------------------------------------------

def test_z2_parses():
    G = parse_group('{"n": 2, "names": ["e", "a"], "table": [[0, 1], [1, 0]]}')
    assert G.n == 2 and G.exponent == 2 and G.is_abelian


def test_s3_order_six_nonabelian():
    G = bundled("s3")
    assert G.n == 6 and not G.is_abelian
    assert G.names == ("()", "(123)", "(132)", "(23)", "(13)", "(12)")
    assert G.exponent == 6


@pytest.mark.parametrize(
    "table, err",
    [
        ([[0, 1], [0, 1]], NonLatinSquare),
        ([[1, 0], [0, 1]], NoIdentity),
        ([[0, 1, 2], [1, 0, 2]], BadFormat),
    ],
)
def test_bad_tables(table, err):
    with pytest.raises(err):
        parse_group({"table": table})


def test_non_associative_latin_square():
    # a loop of order 5 with identity 0 that is not a group
    table = [
        [0, 1, 2, 3, 4],
        [1, 0, 3, 4, 2],
        [2, 4, 0, 1, 3],
        [3, 2, 4, 0, 1],
        [4, 3, 1, 2, 0],
    ]
    with pytest.raises(NonAssociative):
        parse_group({"table": table})


def test_bad_json():
    with pytest.raises(BadFormat):
        parse_group("{not json")
    with pytest.raises(BadFormat):
        parse_group('{"n": 3, "table": [[0]]}')


def test_resolve_group_names_and_paths(tmp_path):
    p = tmp_path / "g.json"
    p.write_text(json.dumps(bundled("z3").to_json()))
    assert resolve_group(p) == bundled("z3")
    assert resolve_group("klein").n == 4
    assert resolve_group("q8.json").n == 8
    with pytest.raises(BadFormat):
        resolve_group("nope")


@pytest.mark.parametrize("name", BUNDLED)
def test_bundled_groups_valid(name):
    G = bundled(name)
    n = G.n
    for i, j, k in itertools.product(range(n), repeat=3):
        assert G.table[G.table[i][j]][k] == G.table[i][G.table[j][k]]
    for i in range(n):
        assert sorted(G.table[i]) == list(range(n))
        assert sorted(G.table[j][i] for j in range(n)) == list(range(n))


# -- conjugacy classes -----------------------------------------------------------------

def test_classes_z4():
    cc = conjugacy_classes(bundled("z4"))
    assert cc.r == 4 and cc.sizes == (1, 1, 1, 1)


def test_classes_s3():
    cc = conjugacy_classes(bundled("s3"))
    assert cc.classes == ((0,), (1, 2), (3, 4, 5))


def test_classes_q8():
    assert conjugacy_classes(bundled("q8")).r == 5


@pytest.mark.parametrize("name", BUNDLED)
def test_classes_match_brute_force(name):
    G = bundled(name)
    cc = conjugacy_classes(G)
    assert {frozenset(c) for c in cc.classes} == brute_classes(G)
    assert sum(cc.sizes) == G.n
    assert all(G.n % s == 0 for s in cc.sizes)
    assert cc.classes[0] == (0,)


@given(st.integers(1, 7), st.integers(1, 4))
def test_direct_products_are_abelian_groups(a, b):
    G = direct_product(cyclic(a), cyclic(b))
    cc = conjugacy_classes(G)
    assert G.is_abelian and cc.r == G.n == a * b


# -- cyclotomic numbers ----------------------------------------------------------------

def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)
    assert [degree(m) for m in (1, 2, 3, 5, 8, 9, 12)] == [1, 1, 2, 4, 4, 6, 4]


def test_roots_of_unity_relations():
    for m in (3, 4, 5, 6, 8, 12):
        z = CyclotomicNumber.zeta(m)
        assert z**m == CyclotomicNumber.rational(1, m)
        total = sum((CyclotomicNumber.zeta(m, k) for k in range(m)), CyclotomicNumber.rational(0, m))
        assert total == CyclotomicNumber.rational(0, m) and not total
        assert abs(complex(z) - cmath.exp(2j * cmath.pi / m)) < 1e-14


def test_conjugate_and_rational_detection():
    z = CyclotomicNumber.zeta(3)
    prod = z * z.conj()
    assert prod.is_rational() and prod.rational_value() == 1
    assert (z + z.conj()).rational_value() == -1
    assert not z.is_rational()


cyc = st.builds(
    lambda m, cs: CyclotomicNumber(m, [Fraction(c, 3) for c in cs[: degree(m)]]),
    st.sampled_from([3, 4, 5, 8, 12]),
    st.lists(st.integers(-5, 5), min_size=4, max_size=4),
)


@given(cyc, cyc, cyc)
def test_cyclotomic_field_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert (a * b).conj() == a.conj() * b.conj()
    assert abs(complex(a * b) - complex(a) * complex(b)) < 1e-9
    if a:
        assert a * a.inverse() == CyclotomicNumber.rational(1, a.m)


# -- character tables -------------------------------------------------------------------

def as_complex_rows(table):
    return np.array([[complex(v) for v in table.element_row(i)] for i in range(table.s)])


def test_z4_table_printed_rows():
    rows = {tuple(np.round(r, 12)) for r in as_complex_rows(abelian_characters(bundled("z4")))}
    want = {(1, 1, 1, 1), (1, 1j, -1, -1j), (1, -1, 1, -1), (1, -1j, -1, 1j)}
    assert rows == {tuple(complex(v) for v in r) for r in want}


def test_klein_table_signs():
    rows = {tuple(int(round(v.real)) for v in r) for r in as_complex_rows(abelian_characters(bundled("klein")))}
    assert rows == {(1, 1, 1, 1), (1, 1, -1, -1), (1, -1, 1, -1), (1, -1, -1, 1)}


def test_z2_table():
    t = abelian_characters(bundled("z2"))
    assert [tuple(complex(v) for v in t.element_row(i)) for i in range(2)] == [(1, 1), (1, -1)]


def test_abelian_needs_abelian():
    with pytest.raises(NotAbelian):
        abelian_characters(bundled("s3"))


def test_abelian_values_are_exact_and_multiplicative():
    for name in ("z2", "z3", "z4", "z6", "klein"):
        G = bundled(name)
        t = abelian_characters(G)
        assert t.exact
        for i in range(t.s):
            row = t.element_row(i)
            for g, h in itertools.product(range(G.n), repeat=2):
                assert row[G.mul(g, h)] == row[g] * row[h]


@pytest.mark.parametrize("name, degrees", [("s3", (1, 1, 2)), ("d4", (1, 1, 1, 1, 2)), ("q8", (1, 1, 1, 1, 2)), ("z3", (1, 1, 1))])
def test_numeric_degrees(name, degrees):
    t = character_table_numeric(bundled(name))
    assert tuple(sorted(t.degrees)) == degrees
    assert t.orthogonality_defect() < 1e-9


def test_z3_numeric_values_are_cube_roots():
    vals = character_table_numeric(bundled("z3")).complex_values()
    assert np.allclose(np.abs(vals), 1) and np.allclose(vals**3, 1)


@pytest.mark.parametrize("name", ["z2", "z3", "z4", "z6", "klein"])
def test_numeric_agrees_with_exact(name):
    G = bundled(name)
    exact = as_complex_rows(abelian_characters(G))
    num = as_complex_rows(character_table_numeric(G))
    # same set of rows: every exact row has exactly one numeric partner
    dist = np.abs(exact[:, None, :] - num[None, :, :]).max(axis=-1)
    assert sorted(np.argmin(dist, axis=1)) == list(range(G.n))
    assert dist.min(axis=1).max() < 1e-9


@pytest.mark.parametrize("name", BUNDLED)
def test_table_invariants(name):
    G = bundled(name)
    t = character_table(G)
    assert sum(f * f for f in t.degrees) == G.n
    assert t.s == conjugacy_classes(G).r
    X = t.element_matrix()
    assert np.allclose(X @ X.conj().T, G.n * np.eye(t.s), atol=1e-9)
    assert np.allclose(X[:, 0], t.degrees)


@pytest.mark.parametrize("name", ["z2", "z3", "z4", "z6", "klein"])
def test_character_matrix_invertible_exactly(name):
    d = character_matrix_determinant(abelian_characters(bundled(name)))
    assert isinstance(d, CyclotomicNumber) and d


def test_tables_are_deterministic():
    text = json.dumps(bundled("z6").to_json())
    a = abelian_characters(parse_group(text)).to_json()
    b = abelian_characters(parse_group(text)).to_json()
    assert a == b
    assert character_table_numeric(bundled("q8")).to_json() == character_table_numeric(bundled("q8")).to_json()


def test_ingest_character_table_round_trip():
    G = bundled("s3")
    t = character_table_numeric(G)
    data = {
        "classes": [list(c) for c in t.classes.classes],
        "degrees": list(t.degrees),
        "values": [[{"re": complex(v).real, "im": complex(v).imag} for v in row] for row in t.values],
    }
    back = parse_character_table(G, json.dumps(data))
    assert back.degrees == t.degrees
    data["degrees"] = [1, 1, 1]
    with pytest.raises(Exception):
        parse_character_table(G, data)
