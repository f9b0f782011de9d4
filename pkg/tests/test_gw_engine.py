import itertools
import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, strategies as st

from gerbegw.character_table import central_character, character_table
from gerbegw.counting import SurfaceGroupInstance, omega
from gerbegw.errors import InvalidInput
from gerbegw.exact_arith import ONE, ZERO
from gerbegw.finite_group import build_group, direct_product
from gerbegw.gw_engine import (BandedData, GWQuery, cohft_axioms_check, exponent_tuples, gw_bg, lambda_cohft,
                               stable_range, transform_I, transform_J, verify_decomposition, verify_product)
from gerbegw.psi_integrals import psi_integral
from gerbegw.selftest import pushed_center_cocycle, random_central_element, sample_algebras
from gerbegw.twisted_algebra import TwistedAlgebra

ALGEBRAS = sample_algebras()
IDS = [name for name, _ in ALGEBRAS]


def twisted_v4():
    c = pushed_center_cocycle("Q8")
    return TwistedAlgebra(c.group, c)


def test_exponent_tuples():
    for g, n in [(0, 3), (0, 5), (1, 2), (2, 3)]:
        tuples = list(exponent_tuples(g, n))
        total = 3 * g - 3 + n
        assert len(tuples) == len(set(tuples)) == comb(total + n - 1, n - 1)
        assert all(sum(t) == total and len(t) == n for t in tuples)
    assert list(exponent_tuples(0, 1)) == []


def test_stable_range():
    assert stable_range(1, 3) == [(0, 3), (1, 1), (1, 2), (1, 3)]
    assert stable_range(2, 4, max_weight=4) == [(0, 3), (0, 4), (1, 1), (1, 2)]


def test_query_validation():
    A = TwistedAlgebra(build_group("S3"))
    e = A.identity
    with pytest.raises(InvalidInput, match="unstable"):
        gw_bg(GWQuery(A, 0, [e, e]))
    with pytest.raises(InvalidInput):
        GWQuery(A, 1, [e], [1, 2])
    with pytest.raises(InvalidInput):
        GWQuery(A, 1, [twisted_v4().identity])
    with pytest.raises(InvalidInput):
        gw_bg(GWQuery(A, 1, [A.basis(1)], [1]))


def test_untwisted_matches_count_times_psi():
    for name in ["S3", "Q8", "D4", "C2xC2"]:
        G = build_group(name)
        A = TwistedAlgebra(G)
        basis = A.center_basis()
        for g, n in stable_range(2, 3):
            for idx in itertools.product(range(len(basis)), repeat=n):
                count = omega(SurfaceGroupInstance(G, g, idx))
                for a in itertools.islice(exponent_tuples(g, n), 3):
                    v = gw_bg(GWQuery(A, g, [basis[i] for i in idx], a))
                    assert v == count * psi_integral(g, a)


def test_twisted_v4_values():
    A = twisted_v4()
    e = A.identity
    # one idempotent of dim 2: nu = (2/4)^2 = 1/4, so Lambda_g(1,..,1) = 4^(g-1)
    for g, n in stable_range(3, 3):
        assert lambda_cohft(A, g, [e] * n) == Fraction(4) ** (g - 1)
    assert gw_bg(GWQuery(A, 1, [e], [1])) == Fraction(1, 24)


@given(st.sampled_from(range(len(ALGEBRAS))), st.data())
def test_multilinearity(idx, data):
    _, A = ALGEBRAS[idx]
    rng = random.Random(data.draw(st.integers(0, 10 ** 6)))
    g = data.draw(st.integers(0, 2))
    n = data.draw(st.integers(max(1, 3 - 2 * g), 3))
    ins = [random_central_element(A, rng) for _ in range(n)]
    extra = random_central_element(A, rng)
    s = data.draw(st.fractions(-3, 3, max_denominator=4))
    j = data.draw(st.integers(0, n - 1))
    a = next(exponent_tuples(g, n))
    mixed = ins[:j] + [ins[j] + extra * s] + ins[j + 1:]
    other = ins[:j] + [extra] + ins[j + 1:]
    q = lambda xs: gw_bg(GWQuery(A, g, xs, a))  # noqa: E731
    assert q(mixed) == q(ins) + q(other) * s


@pytest.mark.parametrize("name,A", ALGEBRAS, ids=IDS)
def test_basis_independence(name, A):
    basis = A.center_basis()
    idem = A.idempotents()
    for g, n in [(0, 3), (1, 1), (1, 2)]:
        for idx in itertools.product(range(len(basis)), repeat=n):
            direct = lambda_cohft(A, g, [basis[i] for i in idx])
            exps = [A.expand_in_idempotents(basis[i]) for i in idx]
            via = ZERO
            for rhos in itertools.product(range(len(idem)), repeat=n):
                coeff = ONE
                for e, r in zip(exps, rhos):
                    coeff = coeff * e[r]
                if not coeff.is_zero():
                    via = via + coeff * lambda_cohft(A, g, [idem[r] for r in rhos])
            assert direct == via


@pytest.mark.parametrize("name,A", ALGEBRAS, ids=IDS)
def test_idempotent_values(name, A):
    idem = A.idempotents()
    for g in range(3):
        for n in (1, 2, 3):
            for rhos in itertools.product(range(len(idem)), repeat=n):
                v = lambda_cohft(A, g, [idem[r] for r in rhos])
                expected = A.nu(rhos[0]) ** (1 - g) if len(set(rhos)) == 1 else 0
                assert v == expected


@pytest.mark.parametrize("name", ["Q8", "C2xC2 twisted via Q8", "S3 with a coboundary twist"])
def test_cohft_axioms(name):
    A = dict(ALGEBRAS)[name]
    rep = cohft_axioms_check(A, 2, 3)
    assert rep.ok and rep.checks > 0
    if A.is_untwisted:
        assert rep.notes["weights_are_centralizer_orders"]


# -- I and J ------------------------------------------------------------------

def test_identity_goes_to_identity_in_every_sector():
    data = BandedData(build_group("Q8"))
    e = data.base.identity
    for l in data.characters:
        assert data.transform_I(l, e) == data.sector(l).identity


def test_q8_i_class():
    G = build_group("Q8")
    data = BandedData(G)
    d = data.base.center_basis()[G.class_of(2)]
    k = data.projection[2]
    assert data.transform_I((0,), d) == data.sector((0,)).element({k: 2})
    # the two lifts i and -i cancel against the sign character
    assert data.transform_I((1,), d).is_zero()


@pytest.mark.parametrize("name", ["Q8", "D4", "Heis3", "C2xC4"])
def test_idempotents_land_in_their_sector(name):
    G = build_group(name)
    data = BandedData(G)
    T = character_table(G)
    for i, f in enumerate(data.base.idempotents()):
        hits = [l for l in data.characters if not data.transform_I(l, f).is_zero()]
        assert len(hits) == 1
        l = hits[0]
        for z in data.Z.elements:
            assert data.lam(l, z) == central_character(T, i, z)
        image = data.transform_I(l, f)
        assert sum(1 for x in data.sector(l).idempotents() if x == image) == 1


@pytest.mark.parametrize("name", ["Q8", "D4", "Heis3", "C2xC4", "C6"])
def test_round_trips(name):
    G = build_group(name)
    data = BandedData(G)
    rng = random.Random(7)
    zero = {l: data.sector(l).zero for l in data.characters}
    assert data.transform_J(zero).is_zero()
    for _ in range(10):
        d = random_central_element(data.base, rng)
        assert data.transform_J(data.transform_I_all(d)) == d
        betas = {l: random_central_element(data.sector(l), rng) for l in data.characters}
        back = data.transform_I_all(data.transform_J(betas))
        assert back == betas


def test_single_sector_input_has_coset_support():
    G = build_group("Q8")
    data = BandedData(G)
    A = data.sector((1,))
    betas = {l: (A.identity if l == (1,) else data.sector(l).zero) for l in data.characters}
    out = data.transform_J(betas)
    assert sorted(out.coeffs) == sorted(data.Z.elements)
    assert out[0] == Fraction(1, 2) and out[1] == Fraction(-1, 2)


def test_module_level_wrappers():
    G = build_group("D4")
    data = BandedData(G)
    d = data.base.center_basis()[1]
    l = data.characters[-1]
    out = transform_I(G, None, None, None, l, d)
    assert out == data.transform_I(l, d)
    assert transform_J(G, None, data.section, data.nu, {l: out}) == data.transform_J({l: out})
    with pytest.raises(InvalidInput):
        transform_I(G, None, list(reversed(data.section)), None, l, d)
    with pytest.raises(InvalidInput):
        data.transform_I(l, data.base.basis(1))


def test_banded_over_subgroup_of_center():
    G = build_group("C2xC4")
    data = BandedData(G, [0, 2])
    assert data.Z.order == 2 and data.K.order == 4
    d = data.base.basis(3)
    assert data.transform_J(data.transform_I_all(d)) == d


# -- decomposition and products -------------------------------------------------

@pytest.mark.parametrize("name", ["Q8", "D4", "Heis3", "C4", "S3"])
def test_decomposition_small(name):
    rep = verify_decomposition(build_group(name), 1, 3, keep_rows=True)
    assert rep.ok
    assert rep.row_count == len(rep.rows) > 0
    for row in rep.rows:
        assert row["lhs"] == row["rhs_abelian"] == row["rhs_full"]


def test_decomposition_respects_weight_budget():
    rep = verify_decomposition(build_group("Q8"), 2, 4, max_weight=4, keep_rows=True)
    assert rep.ok and all(2 * r["g"] + r["n"] <= 4 for r in rep.rows)


def test_product_trivial_second_factor():
    rep = verify_product(build_group("S3"), None, build_group("C1"), None, 2, 2)
    assert rep.ok and rep.notes["mixed_idempotent_tuples"] == 0


def test_product_with_twisted_factor():
    c2 = pushed_center_cocycle("Q8")
    rep = verify_product(build_group("C2"), None, c2.group, c2, 2, 3)
    assert rep.ok and rep.checks > 0


def test_product_mixed_idempotents_vanish():
    c1 = pushed_center_cocycle("Q8")
    rep = verify_product(c1.group, c1, build_group("C2"), None, 1, 3)
    assert rep.ok and rep.notes["mixed_idempotent_tuples"] > 0


def test_product_of_untwisted_groups_is_the_product_group():
    G, H = build_group("S3"), build_group("C2")
    P = TwistedAlgebra(direct_product(G, H))
    A, B = TwistedAlgebra(G), TwistedAlgebra(H)
    # product formula against the character table of the product group
    for g in (0, 1):
        ins = [P.identity] * 3
        assert lambda_cohft(P, g, ins) == lambda_cohft(A, g, [A.identity] * 3) * lambda_cohft(
            B, g, [B.identity] * 3)
