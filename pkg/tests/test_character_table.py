import importlib
import itertools
import json

import pytest

from gerbegw.character_table import central_character, character_table, dixon_prime, table_from_json
from gerbegw.errors import VerificationFailure
from gerbegw.exact_arith import ONE, Cyclotomic, csum, root_of_unity
from gerbegw.finite_group import BUILTIN_NAMES, build_group, from_elements

GROUPS = BUILTIN_NAMES + ("C5", "C3xC3", "Heis5")


def rows(T):
    return [[str(v) for v in ir.values] for ir in T.irreps]


def test_c2():
    assert rows(character_table(build_group("C2"))) == [["1", "1"], ["1", "-1"]]


def test_s3():
    T = character_table(build_group("S3"))
    assert [ir.dim for ir in T.irreps] == [1, 1, 2]
    # classes of S3 here: identity, transpositions, 3-cycles
    assert [c.size for c in T.classes] == [1, 3, 2]
    assert rows(T)[2] == ["2", "0", "-1"]


def test_q8():
    T = character_table(build_group("Q8"))
    assert sorted(ir.dim for ir in T.irreps) == [1, 1, 1, 1, 2]
    assert rows(T)[-1] == ["2", "-2", "0", "0", "0"]


def test_central_character_examples():
    G = build_group("Q8")
    T = character_table(G)
    two = [i for i, ir in enumerate(T.irreps) if ir.dim == 2][0]
    assert central_character(T, two, 1) == -1
    for i, ir in enumerate(T.irreps):
        assert central_character(T, i, 0) == 1
        if ir.dim == 1:
            assert central_character(T, i, 1) == ir.values[G.class_of(1)]


def test_dixon_prime():
    assert dixon_prime(8, 4) == 13
    assert dixon_prime(6, 6) == 7
    p = dixon_prime(27, 3)
    assert p % 3 == 1 and p > 2 * 6


@pytest.mark.parametrize("name", GROUPS)
def test_orthogonality_and_degrees(name):
    G = build_group(name)
    T = character_table(G)
    r = len(T.classes)
    assert len(T.irreps) == r
    assert sum(ir.dim ** 2 for ir in T.irreps) == G.order
    assert all(G.order % ir.dim == 0 for ir in T.irreps)
    for i, j in itertools.product(range(r), repeat=2):
        s = csum(T.irreps[i].values[k] * T.irreps[j].values[k].conjugate() * T.classes[k].size for k in range(r))
        assert s == (G.order if i == j else 0)


@pytest.mark.parametrize("name", GROUPS)
def test_regular_character(name):
    G = build_group(name)
    T = character_table(G)
    for k in range(len(T.classes)):
        s = csum(ir.dim * ir.values[k] for ir in T.irreps)
        assert s == (G.order if k == 0 else 0)


@pytest.mark.parametrize("name", ["S3", "S4", "A4"])
def test_permutation_character_decomposes(name):
    gens = {"S3": 3, "S4": 4, "A4": 4}[name]
    G = build_group(name)
    T = character_table(G)
    # builtin permutation groups list elements as tuples in lexicographic order
    perms = sorted(p for p in itertools.permutations(range(gens))
                   if name != "A4" or sum(p[i] > p[j] for i in range(gens) for j in range(i + 1, gens)) % 2 == 0)
    fixed = [sum(p[i] == i for i in range(gens)) for p in perms]
    for ir in T.irreps:
        m = csum(fixed[c.representative] * ir.values[k].conjugate() * c.size for k, c in enumerate(T.classes))
        m = m.to_rational() / G.order
        assert m.denominator == 1 and m >= 0
    trivial = T.irreps[0]
    assert all(v == 1 for v in trivial.values)


def test_c3xc3_matches_product_of_linear_characters():
    # characters of Z/3 x Z/3 are (a, b) -> w^(ia + jb)
    elts = [(a, b) for a in range(3) for b in range(3)]
    G = from_elements(elts, lambda x, y: ((x[0] + y[0]) % 3, (x[1] + y[1]) % 3))
    T = character_table(G)
    expected = sorted(tuple(root_of_unity(3, (i * a + j * b) % 3).sort_key() for a, b in elts)
                      for i in range(3) for j in range(3))
    got = sorted(tuple(ir.values[G.class_of(g)].sort_key() for g in range(9)) for ir in T.irreps)
    assert got == expected


def test_d4_against_matrix_representation():
    # D4 = <r, s> acting on the plane; the 2-dim character is the trace
    G = build_group("D4")
    T = character_table(G)
    two = [ir for ir in T.irreps if ir.dim == 2]
    assert len(two) == 1
    # traces: identity 2, central rotation -2, every other class 0
    assert sorted(str(v) for v in two[0].values) == ["-2", "0", "0", "0", "2"]


@pytest.mark.parametrize("name", ["Q8", "S4", "Heis3"])
def test_determinism(name):
    a = json.dumps(character_table(build_group(name)).to_json(), sort_keys=True)
    importlib.import_module("gerbegw.character_table")._CACHE.clear()
    b = json.dumps(character_table(build_group(name)).to_json(), sort_keys=True)
    assert a == b


def test_cross_check_mode():
    G = build_group("S3")
    data = character_table(G).to_json()
    assert rows(table_from_json(json.loads(json.dumps(data)))) == rows(character_table(G))
    bad = json.loads(json.dumps(data))
    bad["irreps"][2]["values"][2] = Cyclotomic.from_rational(1).to_json()
    with pytest.raises(VerificationFailure):
        table_from_json(bad)


def test_real_character_norms():
    T = character_table(build_group("Heis3"))
    for ir in T.irreps:
        for v in ir.values:
            n = v * v.conjugate()
            assert n.is_rational() and n.to_rational() >= 0
    assert any(not v.is_rational() for ir in T.irreps for v in ir.values)
    assert ONE == T.irreps[0].values[0]
