"""Normalized 2-cocycles with trivial action.

Two coefficient flavours are supported:

* :class:`TwoCocycleA` takes values in a finite abelian group stored as a
  product of cyclic groups ``Z/m_1 x ... x Z/m_r`` (additive residues).
* :class:`U1Cocycle` takes values in the roots of unity ``mu_m``; the entry
  ``e`` stands for ``zeta_m ** e``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd
from typing import Mapping, Sequence

from .errors import InvalidInput, VerificationFailure
from .exact_arith import Cyclotomic, lcm, prime_factors, root_of_unity
from .finite_group import (CentralSubgroupData, FiniteGroup, central_quotient,
                           direct_product, from_elements, group_from_json)


def _lcm_all(ms: Sequence[int]) -> int:
    out = 1
    for m in ms:
        out = lcm(out, m)
    return out


class TwoCocycleA:
    """Cocycle ``K x K -> Z/m_1 x ... x Z/m_r`` stored as residue tuples."""

    def __init__(self, group: FiniteGroup, orders: Sequence[int], values):
        self.group = group
        self.orders = tuple(int(m) for m in orders)
        if any(m < 1 for m in self.orders):
            raise InvalidInput("cyclic orders must be positive")
        n = group.order
        rows = []
        for row in values:
            out = []
            for v in row:
                v = (v,) if isinstance(v, int) else tuple(v)
                if len(v) != len(self.orders):
                    raise InvalidInput("cocycle entry has the wrong number of components")
                out.append(tuple(x % m for x, m in zip(v, self.orders)))
            rows.append(tuple(out))
        if len(rows) != n or any(len(r) != n for r in rows):
            raise InvalidInput("cocycle table must be |K| x |K|")
        self.values = tuple(rows)

    def __call__(self, k1: int, k2: int) -> tuple[int, ...]:
        return self.values[k1][k2]

    def __eq__(self, other):
        return (isinstance(other, TwoCocycleA) and self.group == other.group
                and self.orders == other.orders and self.values == other.values)

    def __hash__(self):
        return hash((self.orders, self.values))

    @property
    def coefficient_order(self) -> int:
        out = 1
        for m in self.orders:
            out *= m
        return out

    def add(self, a, b):
        return tuple((x + y) % m for x, y, m in zip(a, b, self.orders))

    def neg(self, a):
        return tuple((-x) % m for x, m in zip(a, self.orders))

    @property
    def zero(self):
        return tuple(0 for _ in self.orders)

    def times_coboundary(self, phi: Sequence[Sequence[int]]) -> "TwoCocycleA":
        """``nu * delta(phi)`` for a 1-cochain ``phi: K -> A``."""
        G = self.group
        phi = [tuple(p) if not isinstance(p, int) else (p,) for p in phi]
        vals = [[self.add(self.values[a][b], self.add(self.add(phi[a], phi[b]), self.neg(phi[G.mul[a][b]])))
                 for b in range(G.order)] for a in range(G.order)]
        return TwoCocycleA(G, self.orders, vals)

    def to_json(self) -> dict:
        single = len(self.orders) == 1
        return {
            "group": self.group.to_json(),
            "coeff": {"cyclic": list(self.orders)},
            "exponents": [[v[0] if single else list(v) for v in row] for row in self.values],
        }


class U1Cocycle:
    """Cocycle with values ``zeta_m ** exponents[k1][k2]``."""

    def __init__(self, group: FiniteGroup, modulus: int, exponents):
        self.group = group
        self.modulus = int(modulus)
        if self.modulus < 1:
            raise InvalidInput("modulus must be positive")
        n = group.order
        rows = tuple(tuple(int(x) % self.modulus for x in row) for row in exponents)
        if len(rows) != n or any(len(r) != n for r in rows):
            raise InvalidInput("cocycle table must be |K| x |K|")
        self.exponents = rows

    @classmethod
    def trivial(cls, group: FiniteGroup) -> "U1Cocycle":
        return cls(group, 1, [[0] * group.order for _ in range(group.order)])

    def __call__(self, k1: int, k2: int) -> Cyclotomic:
        return root_of_unity(self.modulus, self.exponents[k1][k2])

    def is_trivial(self) -> bool:
        return all(x == 0 for row in self.exponents for x in row)

    def reduced(self) -> "U1Cocycle":
        """Same values with the smallest possible modulus."""
        g = self.modulus
        for row in self.exponents:
            for x in row:
                g = gcd(g, x)
        m = self.modulus // g if g else 1
        return U1Cocycle(self.group, m, [[x // (self.modulus // m) for x in row] for row in self.exponents])

    def rescaled(self, modulus: int) -> tuple[tuple[int, ...], ...]:
        """Exponent table over ``modulus`` (a multiple of the own modulus)."""
        if modulus % self.modulus:
            raise InvalidInput("target modulus must be a multiple")
        f = modulus // self.modulus
        return tuple(tuple(x * f for x in row) for row in self.exponents)

    def __eq__(self, other):
        if not isinstance(other, U1Cocycle) or self.group != other.group:
            return False
        L = lcm(self.modulus, other.modulus)
        return self.rescaled(L) == other.rescaled(L)

    def __hash__(self):
        r = self.reduced()
        return hash((r.modulus, r.exponents))

    def times_coboundary(self, phi: Sequence[int], modulus: int | None = None) -> "U1Cocycle":
        """``c * delta(phi)`` where ``phi`` gives exponents over ``modulus``."""
        M = lcm(self.modulus, modulus or self.modulus)
        f = M // (modulus or self.modulus)
        G = self.group
        base = self.rescaled(M)
        vals = [[base[a][b] + f * (phi[a] + phi[b] - phi[G.mul[a][b]]) for b in range(G.order)]
                for a in range(G.order)]
        return U1Cocycle(G, M, vals).reduced()

    def to_json(self) -> dict:
        return {"group": self.group.to_json(), "coeff": {"u1": self.modulus},
                "exponents": [list(r) for r in self.exponents]}


def cocycle_from_json(data: Mapping, group: FiniteGroup | None = None):
    G = group if group is not None else group_from_json(data["group"])
    coeff = data["coeff"]
    if "u1" in coeff:
        c = U1Cocycle(G, int(coeff["u1"]), data["exponents"])
    elif "cyclic" in coeff:
        c = TwoCocycleA(G, coeff["cyclic"], data["exponents"])
    else:
        raise InvalidInput("coefficient must be 'cyclic' or 'u1'")
    return ingest(c)


# -- validation ---------------------------------------------------------

@dataclass
class CocycleReport:
    violations: list[tuple[int, int, int]] = field(default_factory=list)
    normalized: bool = True

    @property
    def is_cocycle(self) -> bool:
        return not self.violations

    @property
    def ok(self) -> bool:
        return self.is_cocycle and self.normalized

    def to_json(self) -> dict:
        return {"is_cocycle": self.is_cocycle, "normalized": self.normalized,
                "violations": [list(t) for t in self.violations]}


def _additive(nu):
    """Return (orders, entry function giving residue tuples) for either flavour."""
    if isinstance(nu, TwoCocycleA):
        return nu.orders, nu
    return (nu.modulus,), lambda a, b: (nu.exponents[a][b],)


def validate_cocycle(nu, max_violations: int | None = None) -> CocycleReport:
    """List every triple violating the cocycle identity, and check normalization."""
    G = nu.group
    orders, val = _additive(nu)
    mul = G.mul
    rep = CocycleReport()
    n = G.order
    for a, b, c in itertools.product(range(n), repeat=3):
        lhs, rhs1 = val(a, b), val(mul[a][b], c)
        x, y = val(b, c), val(a, mul[b][c])
        if any((p + q - r - s) % m for p, q, r, s, m in zip(lhs, rhs1, x, y, orders)):
            rep.violations.append((a, b, c))
            if max_violations is not None and len(rep.violations) >= max_violations:
                break
    rep.normalized = all(not any(val(0, k)) and not any(val(k, 0)) for k in range(n))
    return rep


def normalize(nu):
    """Shift a valid cocycle by the constant coboundary so that entries at the identity vanish."""
    orders, val = _additive(nu)
    base = val(0, 0)
    if not any(base):
        return nu
    n = nu.group.order
    if isinstance(nu, TwoCocycleA):
        vals = [[tuple((x - y) % m for x, y, m in zip(val(a, b), base, orders)) for b in range(n)]
                for a in range(n)]
        return TwoCocycleA(nu.group, nu.orders, vals)
    return U1Cocycle(nu.group, nu.modulus, [[x - base[0] for x in row] for row in nu.exponents])


def ingest(nu):
    """Validate and normalize an externally supplied cocycle."""
    rep = validate_cocycle(nu, max_violations=1)
    if not rep.is_cocycle:
        raise InvalidInput(f"cocycle identity fails at {rep.violations[0]}")
    return normalize(nu)


# -- abelian groups -----------------------------------------------------

def abelian_decomposition(G: FiniteGroup, elements: Sequence[int] | None = None):
    """Write an abelian (sub)group as a direct product of cyclic groups.

    Returns ``(orders, generators, coords)`` where ``coords`` maps each element to
    its residue tuple with respect to the generators.
    """
    elts = sorted(set(range(G.order) if elements is None else elements))
    for a in elts:
        for b in elts:
            if G.mul[a][b] != G.mul[b][a]:
                raise InvalidInput("subgroup is not abelian")
    order_of = {g: G.element_order(g) for g in elts}

    def span(gens, ords):
        out = {}
        for exps in itertools.product(*(range(o) for o in ords)):
            x = 0
            for g, e in zip(gens, exps):
                x = G.mul[x][G.power(g, e)]
            if x in out:
                return None
            out[x] = exps
        return out

    gens: list[int] = []
    ords: list[int] = []
    current = {0: ()}
    candidates = sorted((g for g in elts if g != 0), key=lambda g: (-order_of[g], g))
    while len(current) < len(elts):
        for g in candidates:
            if g in current:
                continue
            trial = span(gens + [g], ords + [order_of[g]])
            if trial is not None:
                gens.append(g)
                ords.append(order_of[g])
                current = trial
                break
        else:
            break
    if len(current) != len(elts) or set(current) != set(elts):
        # greedy choice got stuck; exhaustive search over generator tuples
        found = _exhaustive_basis(G, elts, order_of, span)
        if found is None:
            raise VerificationFailure("failed to decompose abelian group")
        gens, ords, current = found
    return tuple(ords), tuple(gens), dict(current)


def _exhaustive_basis(G, elts, order_of, span):
    nontriv = [g for g in elts if g != 0]
    for r in range(1, len(nontriv) + 1):
        for combo in itertools.combinations(nontriv, r):
            ords = [order_of[g] for g in combo]
            prod = 1
            for o in ords:
                prod *= o
            if prod != len(elts):
                continue
            sp = span(list(combo), ords)
            if sp is not None and set(sp) == set(elts):
                return list(combo), ords, sp
    return None


def cyclic_product(orders: Sequence[int]) -> FiniteGroup:
    """``Z/m_1 x ... x Z/m_r`` with mixed-radix element indices."""
    orders = tuple(orders)
    elts = list(itertools.product(*(range(m) for m in orders))) if orders else [()]
    return from_elements(elts, lambda a, b: tuple((x + y) % m for x, y, m in zip(a, b, orders)),
                         name="x".join(f"C{m}" for m in orders) or "C1",
                         source={"kind": "builtin", "name": "x".join(f"C{m}" for m in orders) or "C1"}
                         if len(orders) <= 2 else None)


# -- extensions ---------------------------------------------------------

@dataclass(frozen=True)
class CentralExtensionData:
    total: FiniteGroup
    central: CentralSubgroupData
    quotient: FiniteGroup
    projection: tuple[int, ...]
    section: tuple[int, ...]
    cocycle: TwoCocycleA
    coords: Mapping[int, tuple[int, ...]]

    def element(self, a: Sequence[int], k: int) -> int:
        """Total-group element ``a * s(k)`` for residue tuple ``a``."""
        return self.total.mul[self._from_coords[tuple(a)]][self.section[k]]

    @property
    def _from_coords(self) -> dict:
        return {v: g for g, v in self.coords.items()}


def _abelian_iso(A: FiniteGroup, orders: Sequence[int]) -> dict:
    """Residue tuple -> element of A realizing ``A = Z/m_1 x ... x Z/m_r``."""
    if not A.is_abelian:
        raise InvalidInput("coefficient group must be abelian")
    pools = [[g for g in range(A.order) if A.element_order(g) == m] for m in orders]
    for gens in itertools.product(*pools):
        img = {}
        for exps in itertools.product(*(range(m) for m in orders)):
            x = 0
            for g, e in zip(gens, exps):
                x = A.mul[x][A.power(g, e)]
            img[exps] = x
        if len(set(img.values())) == A.order == len(img):
            return img
    raise InvalidInput("coefficient group does not match the cocycle's cyclic orders")


def build_extension(A: FiniteGroup | None, K: FiniteGroup, nu: TwoCocycleA) -> CentralExtensionData:
    """Central extension with product ``(a1 + a2 + nu(k1,k2), k1 k2)``.

    The pair ``(a, k)`` sits at index ``k * |A| + a``; the section is ``k -> (0, k)``.
    """
    if nu.group != K:
        raise InvalidInput("cocycle lives on a different group")
    rep = validate_cocycle(nu, max_violations=1)
    if not rep.is_cocycle:
        raise InvalidInput(f"cocycle identity fails at {rep.violations[0]}")
    if not rep.normalized:
        raise InvalidInput("cocycle must be normalized")
    orders = nu.orders
    default_a = A is None
    if A is None:
        A = cyclic_product(orders)
        res_to_a = {A.labels[i]: i for i in range(A.order)}
    else:
        res_to_a = _abelian_iso(A, orders)
    a_to_res = {v: k for k, v in res_to_a.items()}
    na = A.order
    n = na * K.order
    table = [[0] * n for _ in range(n)]
    for k1 in range(K.order):
        for a1 in range(na):
            r1 = a_to_res[a1]
            for k2 in range(K.order):
                k12 = K.mul[k1][k2]
                shift = nu(k1, k2)
                base = k12 * na
                for a2 in range(na):
                    r = tuple((x + y + z) % m for x, y, z, m in zip(r1, a_to_res[a2], shift, orders))
                    table[k1 * na + a1][k2 * na + a2] = base + res_to_a[r]
    src = {"kind": "extension", "cocycle": nu.to_json()} if default_a else None
    total = FiniteGroup(table, source=src)
    central = CentralSubgroupData(total, tuple(range(na)))
    projection = tuple(g // na for g in range(n))
    section = tuple(k * na for k in range(K.order))
    coords = {a: a_to_res[a] for a in range(na)}
    return CentralExtensionData(total, central, K, projection, section, nu, coords)


def extract_extension(G: FiniteGroup, A: CentralSubgroupData | Sequence[int]) -> CentralExtensionData:
    if not isinstance(A, CentralSubgroupData):
        A = CentralSubgroupData(G, tuple(A))
    K, proj, sec = central_quotient(G, A)
    orders, _, coords = abelian_decomposition(G, A.elements)
    vals = [[coords[G.m(sec[a], sec[b], G.inv[sec[K.mul[a][b]]])] for b in range(K.order)]
            for a in range(K.order)]
    nu = TwoCocycleA(K, orders, vals)
    return CentralExtensionData(G, A, K, proj, sec, nu, coords)


def extract_cocycle(G: FiniteGroup, A: CentralSubgroupData | Sequence[int]):
    """``(K, nu)`` with ``nu(k1,k2) = s(k1) s(k2) s(k1 k2)^-1`` for the minimal-index section."""
    ext = extract_extension(G, A)
    return ext.quotient, ext.cocycle


# -- coboundaries -------------------------------------------------------

def _solve_prime_power(rows: list[dict], rhs: list[int], ncols: int, p: int, k: int):
    """Solve a sparse linear system over Z/p^k; None if inconsistent."""
    mod = p ** k

    def val(x):
        x %= mod
        if x == 0:
            return k
        v = 0
        while x % p == 0:
            x //= p
            v += 1
        return v

    rows = [({c: v % mod for c, v in r.items() if v % mod}, b % mod) for r, b in zip(rows, rhs)]
    pivots = []  # (row dict, rhs, column, valuation)
    active = rows
    while True:
        best = None
        for i, (r, b) in enumerate(active):
            for c, v in r.items():
                w = val(v)
                if best is None or (w, c, i) < best:
                    best = (w, c, i)
        if best is None:
            break
        w, c, i = best
        r, b = active[i]
        unit = (r[c] // p ** w) % mod
        uinv = pow(unit, -1, mod) if mod > 1 else 0
        r = {cc: (v * uinv) % mod for cc, v in r.items()}
        b = (b * uinv) % mod
        rest = []
        for j, (r2, b2) in enumerate(active):
            if j == i:
                continue
            if c in r2:
                f = r2[c] // p ** w
                r2 = dict(r2)
                for cc, v in r.items():
                    nv = (r2.get(cc, 0) - f * v) % mod
                    if nv:
                        r2[cc] = nv
                    else:
                        r2.pop(cc, None)
                b2 = (b2 - f * b) % mod
            rest.append((r2, b2))
        pivots.append((r, b, c, w))
        active = rest
    for r, b in active:
        if b % mod:
            return None
    x = [0] * ncols
    for r, b, c, w in reversed(pivots):
        s = (b - sum(v * x[cc] for cc, v in r.items() if cc != c)) % mod
        if s % p ** w:
            return None
        x[c] = (s // p ** w) % mod
    return x


def solve_mod(rows: list[dict], rhs: list[int], ncols: int, m: int):
    """Solve a sparse linear system over Z/m via CRT; None if inconsistent."""
    if m == 1:
        return [0] * ncols
    parts = []
    for p in prime_factors(m):
        k = 0
        q = m
        while q % p == 0:
            q //= p
            k += 1
        sol = _solve_prime_power(rows, rhs, ncols, p, k)
        if sol is None:
            return None
        parts.append((p ** k, sol))
    x = [0] * ncols
    for c in range(ncols):
        acc, mod = 0, 1
        for pk, sol in parts:
            # combine acc mod `mod` with sol[c] mod pk
            t = ((sol[c] - acc) * pow(mod, -1, pk)) % pk
            acc += mod * t
            mod *= pk
        x[c] = acc % m
    return x


def _coboundary_system(K: FiniteGroup, entry):
    rows, rhs = [], []
    seen = set()
    for a in range(K.order):
        for b in range(K.order):
            r = {}
            for c, s in ((a, 1), (b, 1), (K.mul[a][b], -1)):
                r[c] = r.get(c, 0) + s
            r = {c: v for c, v in r.items() if v}
            key = (tuple(sorted(r.items())), entry(a, b))
            if key in seen:
                continue
            seen.add(key)
            rows.append(r)
            rhs.append(entry(a, b))
    return rows, rhs


@dataclass(frozen=True)
class CoboundaryWitness:
    """``phi`` with ``nu = delta(phi)``; for U(1) cocycles the exponents are over ``modulus``."""

    phi: tuple
    modulus: int | None = None


def is_coboundary(nu):
    """Return ``(True, witness)`` if ``nu = delta(phi)`` for some 1-cochain, else ``(False, None)``."""
    K = nu.group
    if isinstance(nu, TwoCocycleA):
        comps = []
        for i, m in enumerate(nu.orders):
            rows, rhs = _coboundary_system(K, lambda a, b, i=i: nu.values[a][b][i])
            sol = solve_mod(rows, rhs, K.order, m)
            if sol is None:
                return False, None
            comps.append(sol)
        phi = tuple(tuple(c[k] for c in comps) for k in range(K.order))
        return True, CoboundaryWitness(phi)
    # phi may need finer roots of unity than the cocycle's own modulus
    M = lcm(nu.modulus, K.exponent) * K.order
    scaled = nu.rescaled(M)
    rows, rhs = _coboundary_system(K, lambda a, b: scaled[a][b])
    sol = solve_mod(rows, rhs, K.order, M)
    if sol is None:
        return False, None
    return True, CoboundaryWitness(tuple(sol), M)


def coboundary_of(K: FiniteGroup, phi: Sequence[int], modulus: int) -> U1Cocycle:
    """``delta(phi)`` for ``phi`` valued in ``mu_modulus``."""
    return U1Cocycle(K, modulus, [[phi[a] + phi[b] - phi[K.mul[a][b]] for b in range(K.order)]
                                  for a in range(K.order)])


# -- operations on cocycles ---------------------------------------------

def character_exponents(orders: Sequence[int], images: Sequence) -> tuple[int, ...]:
    """Convert images of the cyclic generators (Cyclotomic roots of unity) to exponents."""
    out = []
    for m, z in zip(orders, images):
        if isinstance(z, int):
            out.append(z % m)
            continue
        z = Cyclotomic.coerce(z)
        hits = [e for e in range(m) if root_of_unity(m, e) == z]
        if not hits:
            raise InvalidInput(f"{z} is not an {m}-th root of unity; not a character")
        out.append(hits[0])
    if len(out) != len(orders):
        raise InvalidInput("character needs one image per cyclic factor")
    return tuple(out)


def character_value(orders: Sequence[int], lam: Sequence[int], a: Sequence[int]) -> tuple[int, int]:
    """``lambda(a)`` as ``(exponent, modulus)`` meaning ``zeta_modulus ** exponent``."""
    M = _lcm_all(orders)
    return sum(l * x * (M // m) for l, x, m in zip(lam, a, orders)) % M, M


def push_by_character(nu: TwoCocycleA, lam: Sequence) -> U1Cocycle:
    """``lambda o nu`` with modulus equal to the order of lambda's image."""
    lam = character_exponents(nu.orders, lam)
    M = _lcm_all(nu.orders)
    g = M
    for l, m in zip(lam, nu.orders):
        g = gcd(g, l * (M // m))
    order = M // g
    table = [[character_value(nu.orders, lam, v)[0] // g for v in row] for row in nu.values]
    return U1Cocycle(nu.group, order, table)


def product_cocycle(c1: U1Cocycle, c2: U1Cocycle, product: FiniteGroup | None = None) -> U1Cocycle:
    """Cocycle ``c1(g1,g2) c2(h1,h2)`` on ``K1 x K2`` (index ``g*|K2| + h``)."""
    K1, K2 = c1.group, c2.group
    P = product if product is not None else direct_product(K1, K2)
    L = lcm(c1.modulus, c2.modulus)
    e1, e2 = c1.rescaled(L), c2.rescaled(L)
    m = K2.order
    table = [[e1[x // m][y // m] + e2[x % m][y % m] for y in range(P.order)] for x in range(P.order)]
    return U1Cocycle(P, L, table)


def holonomy_cyclic(tau, q: int):
    """``tau(q,q) tau(q,q^2) ... tau(q,q^(d-1))`` for ``q`` of order ``d``.

    Residue tuple for :class:`TwoCocycleA`, a root of unity for :class:`U1Cocycle`.
    """
    K = tau.group
    d = K.element_order(q)
    orders, val = _additive(tau)
    total = [0] * len(orders)
    x = q
    for _ in range(1, d):
        total = [(t + v) % m for t, v, m in zip(total, val(q, x), orders)]
        x = K.mul[x][q]
    if isinstance(tau, TwoCocycleA):
        return tuple(total)
    return root_of_unity(tau.modulus, total[0])


def commutation_exponent(c: U1Cocycle, g: int, h: int) -> int:
    """Exponent of ``c(g,h) / c(h,g)`` over ``c.modulus``."""
    return (c.exponents[g][h] - c.exponents[h][g]) % c.modulus


__all__ = [
    "TwoCocycleA", "U1Cocycle", "CocycleReport", "CentralExtensionData", "CoboundaryWitness",
    "validate_cocycle", "normalize", "ingest", "build_extension", "extract_cocycle", "extract_extension",
    "is_coboundary", "push_by_character", "product_cocycle", "holonomy_cyclic", "abelian_decomposition",
    "cocycle_from_json", "cyclic_product", "character_exponents", "character_value", "coboundary_of",
    "commutation_exponent", "solve_mod",
]
