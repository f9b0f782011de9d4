"""Finite groups as dense multiplication tables.

Elements are the indices ``0 .. order-1`` with the identity at index 0.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .errors import CapExceeded, InvalidInput

DEFAULT_ORDER_CAP = 2000


@dataclass(frozen=True)
class ConjClass:
    representative: int
    members: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.members)


@dataclass(frozen=True)
class CentralSubgroupData:
    group: "FiniteGroup"
    elements: tuple[int, ...]

    def __post_init__(self):
        G = self.group
        s = set(self.elements)
        if 0 not in s:
            raise InvalidInput("subgroup must contain the identity")
        for a in self.elements:
            if G.inv[a] not in s:
                raise InvalidInput("subset is not closed under inverses")
            for b in self.elements:
                if G.mul[a][b] not in s:
                    raise InvalidInput("subset is not closed under multiplication")
            if not G.is_central(a):
                raise InvalidInput(f"element {a} is not central")
        object.__setattr__(self, "elements", tuple(sorted(s)))

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g: int) -> bool:
        return g in self._set

    @cached_property
    def _set(self) -> frozenset:
        return frozenset(self.elements)

    def as_group(self) -> "FiniteGroup":
        return self.group.subgroup(self.elements)


class FiniteGroup:
    """A validated finite group given by its multiplication table."""

    def __init__(self, table: Sequence[Sequence[int]], name: str | None = None,
                 labels: Sequence[Hashable] | None = None, source: Mapping | None = None,
                 order_cap: int = DEFAULT_ORDER_CAP):
        n = len(table)
        if n == 0:
            raise InvalidInput("empty table")
        if n > order_cap:
            raise CapExceeded(f"group order {n} exceeds cap {order_cap}")
        mul = tuple(tuple(int(x) for x in row) for row in table)
        if any(len(row) != n for row in mul):
            raise InvalidInput("multiplication table must be square")
        full = set(range(n))
        for row in mul:
            if set(row) != full:
                raise InvalidInput("table rows must be permutations of the elements")
        for j in range(n):
            if {mul[i][j] for i in range(n)} != full:
                raise InvalidInput("table columns must be permutations of the elements")
        if mul[0] != tuple(range(n)) or any(mul[i][0] != i for i in range(n)):
            raise InvalidInput("index 0 must be a two-sided identity")
        inv = [0] * n
        for i in range(n):
            j = mul[i].index(0)
            if mul[j][i] != 0:
                raise InvalidInput(f"element {i} has no two-sided inverse")
            inv[i] = j
        self.mul = mul
        self.inv = tuple(inv)
        self.order = n
        self.name = name
        self.labels = tuple(labels) if labels is not None else None
        self.source = dict(source) if source is not None else {"kind": "table", "table": [list(r) for r in mul]}
        self._check_associative()

    # -- validation ---------------------------------------------------
    def _check_associative(self):
        mul = self.mul
        n = self.order
        # Light's test: associativity for generators s suffices
        for s in self.generators:
            ms = mul[s]
            for x in range(n):
                xs = mul[x][s]
                row_xs = mul[xs]
                row_x = mul[x]
                for y in range(n):
                    if row_xs[y] != row_x[ms[y]]:
                        raise InvalidInput(f"table is not associative at ({x},{s},{y})")

    @cached_property
    def generators(self) -> tuple[int, ...]:
        """A greedy generating set: repeatedly add the least element not yet generated."""
        gens: list[int] = []
        covered = {0}
        for g in range(1, self.order):
            if g not in covered:
                gens.append(g)
                covered = set(self._closure(gens))
        return tuple(gens)

    def _closure(self, gens: Iterable[int]) -> list[int]:
        gens = list(gens)
        seen = [0]
        seen_set = {0}
        i = 0
        while i < len(seen):
            x = seen[i]
            i += 1
            for s in gens:
                y = self.mul[x][s]
                if y not in seen_set:
                    seen_set.add(y)
                    seen.append(y)
        return seen

    # -- basic queries ------------------------------------------------
    def __len__(self):
        return self.order

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and self.mul == other.mul

    def __hash__(self):
        return hash(self.mul)

    def __repr__(self):
        return f"FiniteGroup({self.name or 'order ' + str(self.order)})"

    def m(self, *elts: int) -> int:
        """Product of the given elements, left to right."""
        r = 0
        for e in elts:
            r = self.mul[r][e]
        return r

    def power(self, g: int, k: int) -> int:
        if k < 0:
            g, k = self.inv[g], -k
        r = 0
        for _ in range(k % self.element_order(g) if self.order > 0 else k):
            r = self.mul[r][g]
        return r

    def conj(self, x: int, g: int) -> int:
        """``x g x^-1``."""
        return self.mul[self.mul[x][g]][self.inv[x]]

    def commutator(self, a: int, b: int) -> int:
        """``a b a^-1 b^-1``."""
        return self.m(a, b, self.inv[a], self.inv[b])

    def is_central(self, g: int) -> bool:
        return all(self.mul[g][h] == self.mul[h][g] for h in range(self.order))

    @cached_property
    def is_abelian(self) -> bool:
        return all(self.mul[a][b] == self.mul[b][a] for a in self.generators for b in self.generators)

    @cached_property
    def _orders(self) -> tuple[int, ...]:
        out = []
        for g in range(self.order):
            k, x = 1, g
            while x != 0:
                x = self.mul[x][g]
                k += 1
            out.append(k)
        return tuple(out)

    def element_order(self, g: int) -> int:
        return self._orders[g]

    @cached_property
    def exponent(self) -> int:
        e = 1
        for k in self._orders:
            e = e * k // gcd(e, k)
        return e

    @cached_property
    def _classes(self) -> tuple[tuple[ConjClass, ...], tuple[int, ...]]:
        n = self.order
        class_of = [-1] * n
        classes = []
        for g in range(n):
            if class_of[g] >= 0:
                continue
            members = sorted({self.conj(x, g) for x in range(n)})
            for h in members:
                class_of[h] = len(classes)
            classes.append(ConjClass(g, tuple(members)))
        return tuple(classes), tuple(class_of)

    def conjugacy_classes(self) -> tuple[ConjClass, ...]:
        return self._classes[0]

    def class_of(self, g: int) -> int:
        """Index of the conjugacy class containing g."""
        return self._classes[1][g]

    @cached_property
    def class_inverse(self) -> tuple[int, ...]:
        """Index of the class of g^-1 for each class index."""
        return tuple(self.class_of(self.inv[c.representative]) for c in self.conjugacy_classes())

    def centralizer(self, g: int) -> tuple[int, ...]:
        return tuple(h for h in range(self.order) if self.mul[g][h] == self.mul[h][g])

    def centralizer_order(self, g: int) -> int:
        return self.order // len(self.conjugacy_classes()[self.class_of(g)].members)

    @cached_property
    def _center(self) -> CentralSubgroupData:
        return CentralSubgroupData(self, tuple(g for g in range(self.order) if self.is_central(g)))

    def center(self) -> CentralSubgroupData:
        return self._center

    def power_map(self, j: int) -> tuple[int, ...]:
        """Class index of g^j for each class index."""
        return tuple(self.class_of(self.power(c.representative, j)) for c in self.conjugacy_classes())

    def subgroup(self, elements: Iterable[int], name: str | None = None) -> "FiniteGroup":
        """The subgroup on the given elements, reindexed in increasing element order."""
        elts = sorted(set(elements))
        if not elts or elts[0] != 0:
            raise InvalidInput("subgroup must contain the identity")
        pos = {g: i for i, g in enumerate(elts)}
        try:
            table = [[pos[self.mul[a][b]] for b in elts] for a in elts]
        except KeyError:
            raise InvalidInput("subset is not closed under multiplication") from None
        return FiniteGroup(table, name=name)

    def to_json(self) -> dict:
        return dict(self.source)


# -- quotients and products ---------------------------------------------

def conjugacy_classes(G: FiniteGroup) -> tuple[ConjClass, ...]:
    return G.conjugacy_classes()


def centralizer(G: FiniteGroup, g: int) -> tuple[int, ...]:
    return G.centralizer(g)


def center(G: FiniteGroup) -> CentralSubgroupData:
    return G.center()


def central_subgroup(G: FiniteGroup, elements: Iterable[int]) -> CentralSubgroupData:
    return CentralSubgroupData(G, tuple(elements))


def central_quotient(G: FiniteGroup, A: CentralSubgroupData | Iterable[int]):
    """Return ``(K, projection, section)`` for ``K = G / A``.

    Cosets are ordered by their minimal element, which is also the section value.
    """
    if not isinstance(A, CentralSubgroupData):
        A = CentralSubgroupData(G, tuple(A))
    if A.group != G:
        raise InvalidInput("central subgroup belongs to a different group")
    proj = [-1] * G.order
    section = []
    for g in range(G.order):
        if proj[g] < 0:
            for a in A.elements:
                proj[G.mul[g][a]] = len(section)
            section.append(g)
    table = [[proj[G.mul[s][t]] for t in section] for s in section]
    K = FiniteGroup(table, name=f"{G.name}/A" if G.name else None)
    return K, tuple(proj), tuple(section)


def direct_product(G: FiniteGroup, H: FiniteGroup, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Componentwise product with element ``(g, h)`` at index ``g*|H| + h``."""
    n, m = G.order, H.order
    if n * m > order_cap:
        raise CapExceeded(f"product order {n * m} exceeds cap {order_cap}")
    table = [[G.mul[g1][g2] * m + H.mul[h1][h2] for g2 in range(n) for h2 in range(m)]
             for g1 in range(n) for h1 in range(m)]
    name = f"{G.name}x{H.name}" if G.name and H.name else None
    src = {"kind": "product", "factors": [G.to_json(), H.to_json()]}
    return FiniteGroup(table, name=name, source=src, order_cap=order_cap)


# -- construction -------------------------------------------------------

def from_elements(elements: Sequence[Hashable], op: Callable, name: str | None = None,
                  source: Mapping | None = None) -> FiniteGroup:
    """Tabulate a group from an explicit element list (identity first) and a product."""
    pos = {e: i for i, e in enumerate(elements)}
    if len(pos) != len(elements):
        raise InvalidInput("duplicate elements")
    try:
        table = [[pos[op(a, b)] for b in elements] for a in elements]
    except KeyError:
        raise InvalidInput("element list is not closed under the product") from None
    return FiniteGroup(table, name=name, labels=elements, source=source)


def _perm_mul(x: tuple, y: tuple) -> tuple:
    # apply x first, then y
    return tuple(y[i] for i in x)


def from_permutations(generators: Sequence[Sequence[int]], order_cap: int = DEFAULT_ORDER_CAP,
                      name: str | None = None) -> FiniteGroup:
    gens = [tuple(int(i) for i in g) for g in generators]
    if not gens:
        gens = [()]
    deg = len(gens[0])
    for g in gens:
        if len(g) != deg or sorted(g) != list(range(deg)):
            raise InvalidInput("generators must be permutations of a common set 0..d-1")
    ident = tuple(range(deg))
    elements = [ident]
    seen = {ident}
    i = 0
    while i < len(elements):
        x = elements[i]
        i += 1
        for s in gens:
            y = _perm_mul(x, s)
            if y not in seen:
                seen.add(y)
                elements.append(y)
                if len(elements) > order_cap:
                    raise CapExceeded(f"permutation closure exceeds cap {order_cap}")
    src = {"kind": "permutations", "generators": [list(g) for g in gens]}
    return from_elements(elements, _perm_mul, name=name, source=src)


def _cyclic(n: int) -> list:
    return list(range(n))


def _builtin(name: str) -> FiniteGroup:
    key = name.replace(" ", "").replace("×", "x").replace("(", "").replace(")", "")
    src = {"kind": "builtin", "name": name}
    m = re.fullmatch(r"C(\d+)", key)
    if m:
        n = int(m.group(1))
        if n < 1:
            raise InvalidInput("cyclic order must be positive")
        return from_elements(_cyclic(n), lambda a, b: (a + b) % n, name=f"C{n}", source=src)
    m = re.fullmatch(r"C(\d+)xC(\d+)", key)
    if m:
        a_, b_ = int(m.group(1)), int(m.group(2))
        if a_ < 1 or b_ < 1:
            raise InvalidInput("cyclic order must be positive")
        elts = [(i, j) for i in range(a_) for j in range(b_)]
        return from_elements(elts, lambda x, y: ((x[0] + y[0]) % a_, (x[1] + y[1]) % b_),
                             name=f"C{a_}xC{b_}", source=src)
    if key == "D4":
        # r^k s^e stored as (k, e); s r s = r^-1
        elts = [(k, e) for e in range(2) for k in range(4)]
        return from_elements(elts, lambda x, y: ((x[0] + (-1) ** x[1] * y[0]) % 4, (x[1] + y[1]) % 2),
                             name="D4", source=src)
    if key == "Q8":
        return from_elements(_Q8_ELEMENTS, _quat_mul, name="Q8", source=src)
    if key == "S3":
        return from_elements(list(itertools.permutations(range(3))), _perm_mul, name="S3", source=src)
    if key == "S4":
        return from_elements(list(itertools.permutations(range(4))), _perm_mul, name="S4", source=src)
    if key == "A4":
        elts = [p for p in itertools.permutations(range(4)) if _sign(p) == 1]
        return from_elements(elts, _perm_mul, name="A4", source=src)
    m = re.fullmatch(r"Heis(\d+)", key)
    if m:
        p = int(m.group(1))
        if p < 2 or any(p % q == 0 for q in range(2, p)):
            raise InvalidInput("Heis(p) needs a prime p")
        elts = [(a, b, c) for a in range(p) for b in range(p) for c in range(p)]
        return from_elements(
            elts, lambda x, y: ((x[0] + y[0]) % p, (x[1] + y[1]) % p, (x[2] + y[2] + x[0] * y[1]) % p),
            name=f"Heis{p}", source=src)
    raise InvalidInput(f"unknown builtin group {name!r}")


BUILTIN_NAMES = ("C1", "C2", "C3", "C4", "C6", "C2xC2", "C2xC4", "D4", "Q8", "S3", "S4", "A4", "Heis3")


def _sign(p: Sequence[int]) -> int:
    s = 1
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


# quaternion units as (sign, axis) with axis 0=1, 1=i, 2=j, 3=k
_Q8_ELEMENTS = [(s, a) for a in range(4) for s in (1, -1)]
_QUAT = {
    (1, 1): (-1, 0), (2, 2): (-1, 0), (3, 3): (-1, 0),
    (1, 2): (1, 3), (2, 3): (1, 1), (3, 1): (1, 2),
    (2, 1): (-1, 3), (3, 2): (-1, 1), (1, 3): (-1, 2),
}


def _quat_mul(x, y):
    if x[1] == 0:
        return (x[0] * y[0], y[1])
    if y[1] == 0:
        return (x[0] * y[0], x[1])
    s, a = _QUAT[(x[1], y[1])]
    return (x[0] * y[0] * s, a)


def build_group(source, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Build a group from a builtin name, a table, permutation generators or a JSON object."""
    if isinstance(source, FiniteGroup):
        return source
    if isinstance(source, str):
        s = source[len("builtin:"):] if source.startswith("builtin:") else source
        G = _builtin(s)
        if G.order > order_cap:
            raise CapExceeded(f"group order {G.order} exceeds cap {order_cap}")
        return G
    if isinstance(source, Mapping):
        return group_from_json(source, order_cap=order_cap)
    if isinstance(source, Sequence):
        rows = list(source)
        if rows and all(isinstance(r, Sequence) for r in rows):
            if len(rows) == len(rows[0]) and all(len(r) == len(rows) for r in rows):
                return FiniteGroup(rows, order_cap=order_cap)
            return from_permutations(rows, order_cap=order_cap)
    raise InvalidInput("unrecognized group source")


def group_from_json(data: Mapping, order_cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    kind = data.get("kind")
    if kind == "builtin":
        return build_group(str(data["name"]), order_cap=order_cap)
    if kind == "table":
        return FiniteGroup(data["table"], name=data.get("name"), source=data, order_cap=order_cap)
    if kind == "permutations":
        return from_permutations(data["generators"], order_cap=order_cap)
    if kind == "product":
        factors = [group_from_json(f, order_cap) for f in data["factors"]]
        if len(factors) < 2:
            raise InvalidInput("product needs at least two factors")
        G = factors[0]
        for H in factors[1:]:
            G = direct_product(G, H, order_cap)
        G.source = dict(data)
        return G
    if kind == "extension":
        from .cocycles import build_extension, cocycle_from_json
        nu = cocycle_from_json(data["cocycle"])
        G = build_extension(None, nu.group, nu).total
        G.source = dict(data)
        return G
    raise InvalidInput(f"unknown group kind {kind!r}")


def is_isomorphic(G: FiniteGroup, H: FiniteGroup) -> bool:
    """Brute-force isomorphism test for small groups via generator images."""
    if G.order != H.order or sorted(G._orders) != sorted(H._orders):
        return False
    gens = G.generators
    words = {0: ()}
    frontier = [0]
    # express every element of G as a word in the generators
    while frontier:
        nxt = []
        for x in frontier:
            for i, s in enumerate(gens):
                y = G.mul[x][s]
                if y not in words:
                    words[y] = words[x] + (i,)
                    nxt.append(y)
        frontier = nxt
    cands = [[h for h in range(H.order) if H.element_order(h) == G.element_order(s)] for s in gens]
    for imgs in itertools.product(*cands):
        phi = [0] * G.order
        for g, w in words.items():
            phi[g] = H.m(*(imgs[i] for i in w))
        if len(set(phi)) != G.order:
            continue
        if all(phi[G.mul[a][b]] == H.mul[phi[a]][phi[b]] for a in range(G.order) for b in gens):
            return True
    return False
