"""Counting homomorphisms from surface groups, with brute-force oracles.

``omega`` counts tuples ``(a_1, b_1, ..., a_g, b_g, s_1, ..., s_n)`` with
``s_j`` in prescribed conjugacy classes and
``[a_1,b_1] ... [a_g,b_g] = c * s_1 ... s_n``, divided by ``|G|``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .character_table import character_table, central_character
from .cocycles import CentralExtensionData
from .errors import CapExceeded, InvalidInput, VerificationFailure
from .exact_arith import csum
from .finite_group import FiniteGroup

DEFAULT_ENUMERATION_CAP = 10 ** 8


@dataclass(frozen=True)
class SurfaceGroupInstance:
    group: FiniteGroup
    genus: int
    classes: tuple[int, ...]
    central: int = 0

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(int(c) for c in self.classes))
        G = self.group
        if self.genus < 0:
            raise InvalidInput("genus must be nonnegative")
        if not self.classes:
            raise InvalidInput("at least one marked point is required")
        r = len(G.conjugacy_classes())
        if any(not 0 <= c < r for c in self.classes):
            raise InvalidInput("class index out of range")
        if not 0 <= self.central < G.order or not G.is_central(self.central):
            raise InvalidInput(f"twist {self.central} is not central")


def omega(inst: SurfaceGroupInstance) -> Fraction:
    """Character formula for the normalized count."""
    G = inst.group
    T = character_table(G)
    n = len(inst.classes)
    exp = 2 - 2 * inst.genus - n
    denom = 1
    for c in inst.classes:
        denom *= G.order // G.conjugacy_classes()[c].size
    terms = []
    for i, ir in enumerate(T.irreps):
        t = Fraction(ir.dim, G.order) ** exp
        v = central_character(T, i, inst.central) if inst.central else 1
        for c in inst.classes:
            v = v * ir.values[c]
        terms.append(v * t)
    total = csum(terms)
    if not total.is_rational():
        raise VerificationFailure("character sum is not rational")
    return total.to_rational() / denom


@lru_cache(maxsize=64)
def _commutator_distribution(G: FiniteGroup, g: int) -> tuple[int, ...]:
    """``N[x] = #{(a_1..b_g) : prod [a_i,b_i] = x}`` by enumerating all 2g-tuples."""
    counts = [0] * G.order
    n = G.order
    comm = [[G.commutator(a, b) for b in range(n)] for a in range(n)]
    for tup in itertools.product(range(n), repeat=2 * g):
        x = 0
        for i in range(g):
            x = G.mul[x][comm[tup[2 * i]][tup[2 * i + 1]]]
        counts[x] += 1
    return tuple(counts)


def omega_brute_force(inst: SurfaceGroupInstance, cap: int = DEFAULT_ENUMERATION_CAP) -> Fraction:
    """Count solutions to the defining relation by enumeration."""
    G = inst.group
    n = len(inst.classes)
    if G.order ** (2 * inst.genus + n) > cap:
        raise CapExceeded(f"|G|^(2g+n) = {G.order ** (2 * inst.genus + n)} exceeds the enumeration cap; "
                          "use the character formula")
    N = _commutator_distribution(G, inst.genus)
    members = [G.conjugacy_classes()[c].members for c in inst.classes]
    total = 0
    for sig in itertools.product(*members):
        x = inst.central
        for s in sig:
            x = G.mul[x][s]
        total += N[x]
    return Fraction(total, G.order)


# -- fiber classes -------------------------------------------------------

@dataclass
class FiberClassData:
    extension: CentralExtensionData
    total_class: int
    image_class: tuple[int, ...]
    parts: tuple[tuple[int, ...], ...]
    product_form: bool

    def to_json(self) -> dict:
        return {"total_class": self.total_class, "image_class": list(self.image_class),
                "parts": [list(p) for p in self.parts], "product_form": self.product_form}


def fiber_classes(ext: CentralExtensionData, total_class: int) -> FiberClassData:
    """Split a class of the total group into its central parts over the image class.

    ``parts`` lists the central elements ``a`` with ``a * s(q0)`` in the class,
    where ``q0`` is the image of the class representative.  The parts over every
    other point of the image class are translates of these; ``product_form``
    records whether they coincide with the parts over ``q0``.
    """
    Gt = ext.total
    classes = Gt.conjugacy_classes()
    if not 0 <= total_class < len(classes):
        raise InvalidInput("class index out of range")
    cl = classes[total_class]
    members = set(cl.members)
    image = tuple(sorted({ext.projection[x] for x in cl.members}))
    K = ext.quotient
    if set(image) != set(K.conjugacy_classes()[K.class_of(image[0])].members):
        raise VerificationFailure("image of a class is not a class")
    q0 = ext.projection[cl.representative]
    A = ext.central.elements

    def fiber(q):
        return tuple(sorted(a for a in A if Gt.mul[a][ext.section[q]] in members))

    parts0 = fiber(q0)
    tiled = set()
    for q in image:
        f = fiber(q)
        if len(f) != len(parts0):
            raise VerificationFailure("fibers of a class have different sizes")
        tiled.update(Gt.mul[a][ext.section[q]] for a in f)
    if tiled != members or len(parts0) * len(image) != len(members):
        raise VerificationFailure("central parts do not tile the class")
    product_form = all(fiber(q) == parts0 for q in image)
    return FiberClassData(ext, total_class, image, tuple((a,) for a in parts0), product_form)


# -- degree formula -------------------------------------------------------

def _selection_classes(G: FiniteGroup, sel: Iterable[int]) -> tuple[int, ...]:
    out = tuple(sorted(set(int(c) for c in sel)))
    r = len(G.conjugacy_classes())
    if not out or any(not 0 <= c < r for c in out):
        raise InvalidInput("each selection must be a nonempty set of class indices")
    return out


def degree(G: FiniteGroup, g: int, selections: Sequence[Iterable[int]], c: int = 0) -> Fraction:
    """Sum of ``omega`` over all class choices, evaluated as one character sum."""
    if not selections:
        raise InvalidInput("at least one marked point is required")
    if not G.is_central(c):
        raise InvalidInput(f"twist {c} is not central")
    sels = [_selection_classes(G, s) for s in selections]
    T = character_table(G)
    wv = T.weighted_values
    exp = 2 - 2 * g - len(sels)
    terms = []
    for i, ir in enumerate(T.irreps):
        v = central_character(T, i, c) if c else 1
        for sel in sels:
            v = v * csum(wv[i][k] for k in sel)
            if not v:
                break
        terms.append(v * Fraction(ir.dim, G.order) ** exp)
    total = csum(terms)
    if not total.is_rational():
        raise VerificationFailure("degree is not rational")
    return total.to_rational()


def degree_by_omega(G: FiniteGroup, g: int, selections: Sequence[Iterable[int]], c: int = 0) -> Fraction:
    sels = [_selection_classes(G, s) for s in selections]
    return sum((omega(SurfaceGroupInstance(G, g, choice, c)) for choice in itertools.product(*sels)),
               Fraction(0))


def degree_abelian(G: FiniteGroup, g: int, selections: Sequence[Iterable[int]], c: int = 0) -> Fraction:
    """Closed form for abelian groups: ``|G|^(2g-1) * #{g_i in l_i : g_1...g_n c = 1}``."""
    if not G.is_abelian:
        raise InvalidInput("closed form needs an abelian group")
    sels = [_selection_classes(G, s) for s in selections]
    classes = G.conjugacy_classes()
    count = 0
    for choice in itertools.product(*sels):
        x = c
        for k in choice:
            x = G.mul[x][classes[k].representative]
        count += x == 0
    return Fraction(G.order) ** (2 * g - 1) * count


# -- gluing --------------------------------------------------------------

@dataclass
class GluingReport:
    checks: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c["ok"] for c in self.checks)

    def to_json(self) -> dict:
        return {"ok": self.ok, "checks": self.checks}


def gluing_identity_check(G: FiniteGroup, g: int, classes: Sequence[int]) -> GluingReport:
    """Check the loop-cutting identity and every separating split of ``Omega_g(classes)``."""
    if g < 1:
        raise InvalidInput("loop gluing needs genus at least 1")
    classes = tuple(classes)
    if not classes:
        raise InvalidInput("at least one marked point is required")
    conj = G.conjugacy_classes()
    inv = G.class_inverse
    rep = GluingReport()
    target = omega(SurfaceGroupInstance(G, g, classes))
    loop = sum((Fraction(G.order, conj[z].size) * omega(SurfaceGroupInstance(G, g - 1, classes + (z, inv[z])))
                for z in range(len(conj))), Fraction(0))
    rep.checks.append({"kind": "loop", "genus": g, "classes": list(classes),
                       "lhs": str(loop), "rhs": str(target), "ok": loop == target})
    n = len(classes)
    seen = set()
    for g1 in range(g + 1):
        for mask in range(1 << n):
            I = tuple(classes[i] for i in range(n) if mask >> i & 1)
            J = tuple(classes[i] for i in range(n) if not mask >> i & 1)
            key = (g1, tuple(sorted(I)), tuple(sorted(J)))
            if key in seen:
                continue
            seen.add(key)
            split = Fraction(0)
            for z in range(len(conj)):
                a = omega(SurfaceGroupInstance(G, g1, I + (z,)))
                if a:
                    split += Fraction(G.order, conj[z].size) * a * omega(SurfaceGroupInstance(G, g - g1, J + (inv[z],)))
            rep.checks.append({"kind": "separating", "genus": [g1, g - g1], "classes": [list(I), list(J)],
                               "lhs": str(split), "rhs": str(target), "ok": split == target})
    return rep

