"""Gromov-Witten invariants of classifying stacks twisted by a cocycle.

The invariants form a semisimple cohomological field theory: on the idempotent
``f_rho`` of the twisted group algebra the degree-zero part is
``nu_rho^(1-g)`` with ``nu_rho = (dim rho / |K|)^2``, and descendants
multiply by the corresponding psi integral.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .character_table import character_table
from .cocycles import U1Cocycle, character_value, extract_extension, product_cocycle, push_by_character
from .errors import InvalidInput, VerificationFailure
from .exact_arith import ONE, ZERO, Cyclotomic, csum, root_of_unity, solve
from .finite_group import CentralSubgroupData, FiniteGroup, direct_product
from .psi_integrals import psi_integral
from .twisted_algebra import AlgebraElement, TwistedAlgebra


# -- basic invariants -------------------------------------------------------

@dataclass(frozen=True)
class GWQuery:
    algebra: TwistedAlgebra
    genus: int
    insertions: tuple[AlgebraElement, ...]
    exponents: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "insertions", tuple(self.insertions))
        exps = self.exponents if self.exponents is not None else (0,) * len(self.insertions)
        object.__setattr__(self, "exponents", tuple(int(a) for a in exps))
        if len(self.exponents) != len(self.insertions):
            raise InvalidInput("one descendant exponent per insertion is required")
        if self.genus < 0 or any(a < 0 for a in self.exponents):
            raise InvalidInput("genus and exponents must be nonnegative")
        for d in self.insertions:
            if d.algebra != self.algebra:
                raise InvalidInput("insertion belongs to a different algebra")


def _expansion(A: TwistedAlgebra, delta: AlgebraElement) -> tuple[Cyclotomic, ...]:
    cache = A.__dict__.setdefault("_expansion_cache", {})
    key = tuple(sorted(delta.coeffs.items()))
    hit = cache.get(key)
    if hit is None:
        hit = A.expand_in_idempotents(delta, check_central=True)
        cache[key] = hit
    return hit


def lambda_cohft(algebra: TwistedAlgebra, g: int, insertions: Sequence[AlgebraElement]) -> Cyclotomic:
    """``sum_rho prod_j e_rho(delta_j) * nu_rho^(1-g)``."""
    if not insertions:
        raise InvalidInput("at least one insertion is required")
    if g < 0:
        raise InvalidInput("genus must be nonnegative")
    exps = [_expansion(algebra, d) for d in insertions]
    terms = []
    for i, rho in enumerate(algebra.twisted_irreps()):
        v = ONE
        for e in exps:
            v = v * e[i]
            if v.is_zero():
                break
        if not v.is_zero():
            terms.append(v * algebra.nu(rho) ** (1 - g))
    return csum(terms)


def gw_bg(query: GWQuery) -> Cyclotomic:
    n = len(query.insertions)
    if n == 0 or 2 * query.genus - 2 + n <= 0:
        raise InvalidInput(f"unstable: (g, n) = ({query.genus}, {n})")
    psi = psi_integral(query.genus, query.exponents)
    if psi == 0:
        # still validates the insertions
        for d in query.insertions:
            _expansion(query.algebra, d)
        return ZERO
    return lambda_cohft(query.algebra, query.genus, query.insertions) * psi


def exponent_tuples(g: int, n: int) -> Iterator[tuple[int, ...]]:
    """All descendant tuples meeting the dimension gate ``sum a_i = 3g - 3 + n``."""
    total = 3 * g - 3 + n
    if total < 0:
        return
    for cuts in itertools.combinations(range(total + n - 1), n - 1):
        prev = -1
        out = []
        for c in cuts + (total + n - 1,):
            out.append(c - prev - 1)
            prev = c
        yield tuple(out)


def stable_range(max_g: int, max_n: int, max_weight: int | None = None) -> list[tuple[int, int]]:
    out = []
    for g in range(max_g + 1):
        for n in range(1, max_n + 1):
            if 2 * g - 2 + n > 0 and (max_weight is None or 2 * g + n <= max_weight):
                out.append((g, n))
    return out


# -- CohFT axioms ------------------------------------------------------------

@dataclass
class CheckReport:
    name: str
    checks: int = 0
    failures: list[dict] = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, ok: bool, detail: dict) -> None:
        self.checks += 1
        if not ok:
            self.failures.append(detail)

    def to_json(self) -> dict:
        return {"check": self.name, "ok": self.ok, "checks": self.checks,
                "failures": self.failures[:20], "notes": self.notes}


def _inverse_gram(A: TwistedAlgebra, basis: Sequence[AlgebraElement]) -> list[list[Cyclotomic]]:
    r = len(basis)
    gram = [[A.pairing(a, b) for b in basis] for a in basis]
    cols = [solve(gram, [ONE if i == j else ZERO for i in range(r)]) for j in range(r)]
    return [[cols[j][i] for j in range(r)] for i in range(r)]


def cohft_axioms_check(algebra: TwistedAlgebra, max_g: int, max_n: int) -> CheckReport:
    """Forgetting tails, cutting loops and cutting edges on all center-basis tuples."""
    A = algebra
    basis = A.center_basis()
    r = len(basis)
    eta = _inverse_gram(A, basis)
    rep = CheckReport("cohft_axioms")
    classes = A.c_regular_classes()
    # report the diagonal weights of the inverse metric against centralizer orders
    K = A.group
    weights = {}
    for a, cl in enumerate(classes):
        b = next(i for i, c2 in enumerate(classes) if K.inv[cl.representative] in c2.members)
        weights[cl.representative] = str(eta[a][b])
    rep.notes["inverse_metric_weights"] = weights
    rep.notes["weights_are_centralizer_orders"] = all(
        eta[a][b] == (K.centralizer_order(classes[a].representative)
                      if K.inv[classes[a].representative] in classes[b].members else 0)
        for a in range(r) for b in range(r))
    lam_cache: dict = {}

    def lam(g, idx):
        key = (g, tuple(sorted(idx)))
        if key not in lam_cache:
            lam_cache[key] = lambda_cohft(A, g, [basis[i] for i in idx])
        return lam_cache[key]

    ident = next(i for i, cl in enumerate(classes) if cl.representative == 0)
    for g in range(max_g + 1):
        for n in range(1, max_n + 1):
            if 2 * g - 2 + n <= 0:
                continue
            for idx in itertools.product(range(r), repeat=n):
                target = lam(g, idx)
                # forgetting tails
                v = lam(g, idx + (ident,))
                rep.record(v == target, {"axiom": "forgetting_tails", "g": g, "insertions": list(idx)})
                # cutting loops
                if g >= 1:
                    v = csum(eta[a][b] * lam(g - 1, idx + (a, b)) for a in range(r) for b in range(r)
                             if not eta[a][b].is_zero())
                    rep.record(v == target, {"axiom": "cutting_loops", "g": g, "insertions": list(idx),
                                             "lhs": str(v), "rhs": str(target)})
                # cutting edges
                for g1 in range(g + 1):
                    for mask in range(1 << n):
                        I = tuple(idx[i] for i in range(n) if mask >> i & 1)
                        J = tuple(idx[i] for i in range(n) if not mask >> i & 1)
                        if 2 * g1 - 1 + len(I) <= 0 or 2 * (g - g1) - 1 + len(J) <= 0:
                            continue
                        v = csum(eta[a][b] * lam(g1, I + (a,)) * lam(g - g1, J + (b,))
                                 for a in range(r) for b in range(r) if not eta[a][b].is_zero())
                        rep.record(v == target, {"axiom": "cutting_edges", "g": [g1, g - g1],
                                                 "insertions": [list(I), list(J)]})
    return rep


# -- banded gerbes: I and J ----------------------------------------------------

class BandedData:
    """A group ``G`` viewed as a gerbe banded by a central subgroup ``Z`` over ``K = G/Z``."""

    def __init__(self, G: FiniteGroup, Z: CentralSubgroupData | Iterable[int] | None = None):
        if Z is None:
            Z = G.center()
        ext = extract_extension(G, Z)
        self.G = G
        self.extension = ext
        self.Z = ext.central
        self.K = ext.quotient
        self.section = ext.section
        self.projection = ext.projection
        self.nu = ext.cocycle
        self.coords = ext.coords
        self.characters = tuple(itertools.product(*(range(m) for m in self.nu.orders)))
        self.base = TwistedAlgebra(G)
        self._sectors: dict = {}
        self._lam: dict = {}
        # z * s(k) for every (z, k)
        self._zs = {(z, k): G.mul[z][self.section[k]] for z in self.Z.elements for k in range(self.K.order)}

    def lam(self, l: Sequence[int], z: int) -> Cyclotomic:
        key = (tuple(l), z)
        v = self._lam.get(key)
        if v is None:
            e, M = character_value(self.nu.orders, l, self.coords[z])
            v = root_of_unity(M, e)
            self._lam[key] = v
        return v

    def sector(self, l: Sequence[int]) -> TwistedAlgebra:
        l = tuple(l)
        A = self._sectors.get(l)
        if A is None:
            A = TwistedAlgebra(self.K, push_by_character(self.nu, l))
            self._sectors[l] = A
        return A

    def transform_I(self, l: Sequence[int], delta: AlgebraElement) -> AlgebraElement:
        """Coefficient at ``k`` is ``sum_z delta(z s(k)) lambda(z)``."""
        if delta.algebra != self.base:
            raise InvalidInput("input must live in the untwisted algebra of G")
        if not self.base.is_central(delta):
            raise InvalidInput("input is not central")
        A = self.sector(l)
        coeffs = {}
        for k in range(self.K.order):
            terms = [delta[self._zs[(z, k)]] * self.lam(l, z) for z in self.Z.elements
                     if self._zs[(z, k)] in delta.coeffs]
            if terms:
                coeffs[k] = csum(terms)
        out = AlgebraElement(A, coeffs)
        if not A.is_central(out):
            raise VerificationFailure("transformed element is not central in the twisted algebra")
        return out

    def transform_I_all(self, delta: AlgebraElement) -> dict:
        return {l: self.transform_I(l, delta) for l in self.characters}

    def transform_J(self, betas: Mapping[tuple, AlgebraElement]) -> AlgebraElement:
        """``J(beta)(z s(k)) = (1/|Z|) sum_lambda beta_lambda(k) lambda(z^-1)``."""
        coeffs: dict[int, list] = {}
        zinv = self.G.inv
        for l, beta in betas.items():
            l = tuple(l)
            A = self.sector(l)
            if beta.algebra != A:
                raise InvalidInput(f"sector input for {l} lives in the wrong algebra")
            if not A.is_central(beta):
                raise InvalidInput(f"sector input for {l} is not central")
            for k, v in beta.coeffs.items():
                for z in self.Z.elements:
                    coeffs.setdefault(self._zs[(z, k)], []).append(v * self.lam(l, zinv[z]))
        out = AlgebraElement(self.base, {g: csum(vs) / self.Z.order for g, vs in coeffs.items()})
        if not self.base.is_central(out):
            raise VerificationFailure("reconstructed element is not central")
        return out


def transform_I(G: FiniteGroup, Z, section, nu, lam: Sequence[int], delta: AlgebraElement,
                data: BandedData | None = None) -> AlgebraElement:
    data = _banded(G, Z, section, nu, data)
    return data.transform_I(lam, delta)


def transform_J(G: FiniteGroup, Z, section, nu, betas: Mapping, data: BandedData | None = None) -> AlgebraElement:
    data = _banded(G, Z, section, nu, data)
    return data.transform_J(betas)


def _banded(G, Z, section, nu, data):
    if data is None:
        data = BandedData(G, Z)
    if section is not None and tuple(section) != data.section:
        raise InvalidInput("only the minimal-index section is supported")
    if nu is not None and nu != data.nu:
        raise InvalidInput("cocycle does not match the extension data")
    return data


# -- decomposition -----------------------------------------------------------------

@dataclass
class DecompositionReport:
    group: str
    center_order: int
    quotient_order: int
    cocycle_orders: tuple[int, ...]
    rows: list[dict] = field(default_factory=list)
    row_count: int = 0
    failures: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and self.row_count > 0

    def summary(self) -> dict:
        return {"summary": True, "group": self.group, "center_order": self.center_order,
                "quotient_order": self.quotient_order, "cocycle_orders": list(self.cocycle_orders),
                "rows": self.row_count, "failures": len(self.failures), "ok": self.ok}


def _full_route_coefficients(G: FiniteGroup, delta: AlgebraElement) -> list[Cyclotomic]:
    """``e_rho(delta) = (1/dim) sum_g delta(g) chi_rho(g)`` straight from the character table."""
    T = character_table(G)
    return [csum(v * T.value(i, g) for g, v in delta.coeffs.items()) / ir.dim for i, ir in enumerate(T.irreps)]


def verify_decomposition(G: FiniteGroup, max_g: int, max_n: int, max_weight: int | None = None,
                         keep_rows: bool = False, Z=None) -> DecompositionReport:
    """Compare the three evaluations of every class-sum invariant of ``BG``.

    LHS is the invariant over the untwisted algebra of ``G``; the abelian route
    sums twisted invariants of ``K = G/Z`` over characters of ``Z``; the full
    route sums over irreducible characters of ``G``.
    """
    data = BandedData(G, Z)
    base = data.base
    basis = base.center_basis()
    T = character_table(G)
    full = [_full_route_coefficients(G, d) for d in basis]
    sector_exp = {}
    for l in data.characters:
        A = data.sector(l)
        sector_exp[l] = [_expansion(A, data.transform_I(l, d)) for d in basis]
    rep = DecompositionReport(G.name or f"order {G.order}", data.Z.order, data.K.order, data.nu.orders)
    r = len(basis)
    for g, n in stable_range(max_g, max_n, max_weight):
        wfull = [Fraction(ir.dim, G.order) ** (2 - 2 * g) for ir in T.irreps]
        wz = Fraction(1, data.Z.order) ** (2 - 2 * g)
        exps = list(exponent_tuples(g, n))
        psis = [psi_integral(g, a) for a in exps]
        for idx in itertools.product(range(r), repeat=n):
            lam_lhs = lambda_cohft(base, g, [basis[i] for i in idx])
            # abelian route: sum over characters of Z of twisted invariants of K
            ab_terms = []
            for l in data.characters:
                A = data.sector(l)
                for b, beta in enumerate(A.twisted_irreps()):
                    v = ONE
                    for i in idx:
                        v = v * sector_exp[l][i][b]
                        if v.is_zero():
                            break
                    if not v.is_zero():
                        ab_terms.append(v * A.nu(beta) ** (1 - g) * wz)
            lam_ab = csum(ab_terms)
            full_terms = []
            for j in range(len(T.irreps)):
                v = ONE
                for i in idx:
                    v = v * full[i][j]
                    if v.is_zero():
                        break
                if not v.is_zero():
                    full_terms.append(v * wfull[j])
            lam_full = csum(full_terms)
            for a, psi in zip(exps, psis):
                lhs, rab, rfull = lam_lhs * psi, lam_ab * psi, lam_full * psi
                ok = lhs == rab == rfull
                rep.row_count += 1
                row = None
                if keep_rows or not ok:
                    row = {"g": g, "n": n, "insertions": list(idx),
                           "exponents": list(a), "lhs": str(lhs), "rhs_abelian": str(rab),
                           "rhs_full": str(rfull), "equal": ok}
                if keep_rows:
                    rep.rows.append(row)
                if not ok:
                    rep.failures.append(row)
    return rep


# -- product theorem -----------------------------------------------------------------

def tensor_element(P: TwistedAlgebra, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """``a (x) b`` in the algebra of ``K1 x K2`` (index ``g*|K2| + h``)."""
    m = b.algebra.group.order
    return AlgebraElement(P, {g * m + h: x * y for g, x in a.coeffs.items() for h, y in b.coeffs.items()})


def verify_product(K1: FiniteGroup, c1: U1Cocycle | None, K2: FiniteGroup, c2: U1Cocycle | None,
                   max_g: int, max_n: int, max_weight: int | None = None) -> CheckReport:
    """Invariants of ``K1 x K2`` with the product cocycle against those of ``K1`` alone."""
    c1 = c1 if c1 is not None else U1Cocycle.trivial(K1)
    c2 = c2 if c2 is not None else U1Cocycle.trivial(K2)
    A1, A2 = TwistedAlgebra(K1, c1), TwistedAlgebra(K2, c2)
    Pg = direct_product(K1, K2)
    P = TwistedAlgebra(Pg, product_cocycle(c1, c2, Pg))
    b1 = A1.center_basis()
    b2 = A2.center_basis()
    idem2 = A2.idempotents()
    irr2 = A2.twisted_irreps()
    rep = CheckReport("product")
    mixed_zero = 0
    for g, n in stable_range(max_g, max_n, max_weight):
        exps = list(exponent_tuples(g, n))
        for idx in itertools.product(range(len(b1)), repeat=n):
            base_lam = lambda_cohft(A1, g, [b1[i] for i in idx])
            for rhos in itertools.product(range(len(irr2)), repeat=n):
                ins = [tensor_element(P, b1[i], idem2[p]) for i, p in zip(idx, rhos)]
                lhs_lam = lambda_cohft(P, g, ins)
                if len(set(rhos)) == 1:
                    expect = base_lam * Fraction(irr2[rhos[0]].dim, K2.order) ** (2 - 2 * g)
                else:
                    expect = ZERO
                    mixed_zero += 1
                for a in exps:
                    psi = psi_integral(g, a)
                    rep.record(lhs_lam * psi == expect * psi,
                               {"form": "idempotent", "g": g, "insertions": list(idx), "rho": list(rhos),
                                "exponents": list(a), "lhs": str(lhs_lam * psi), "rhs": str(expect * psi)})
            for hs in itertools.product(range(len(b2)), repeat=n):
                ins = [tensor_element(P, b1[i], b2[h]) for i, h in zip(idx, hs)]
                lhs_lam = lambda_cohft(P, g, ins)
                expect = base_lam * lambda_cohft(A2, g, [b2[h] for h in hs])
                for a in exps:
                    psi = psi_integral(g, a)
                    rep.record(lhs_lam * psi == expect * psi,
                               {"form": "class_sum", "g": g, "insertions": list(idx), "classes": list(hs),
                                "exponents": list(a)})
    rep.notes["mixed_idempotent_tuples"] = mixed_zero
    return rep
