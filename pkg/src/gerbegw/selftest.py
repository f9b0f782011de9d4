"""The acceptance matrix, shared by the test suite and the ``selftest`` command."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .character_table import character_table, verify_table
from .cocycles import U1Cocycle, coboundary_of, extract_cocycle, push_by_character
from .counting import (SurfaceGroupInstance, degree, degree_abelian, gluing_identity_check, omega,
                       omega_brute_force)
from .errors import GerbeError
from .exact_arith import Cyclotomic, root_of_unity
from .finite_group import BUILTIN_NAMES, build_group
from .gw_engine import BandedData, cohft_axioms_check, verify_decomposition, verify_product
from .psi_integrals import psi_integral
from .twisted_algebra import TwistedAlgebra

TEST_GROUPS = ("C2", "C3", "C4", "C2xC2", "C6", "S3", "D4", "Q8", "A4")
ABELIAN_GROUPS = ("C2", "C3", "C4", "C2xC2", "C6")


@dataclass
class CriterionResult:
    number: int
    name: str
    ok: bool
    checks: int = 0
    details: list = field(default_factory=list)

    def line(self) -> str:
        return f"criterion {self.number} [{self.name}]: {'PASS' if self.ok else 'FAIL'} ({self.checks} checks)"

    def to_json(self) -> dict:
        return {"criterion": self.number, "name": self.name, "ok": self.ok, "checks": self.checks,
                "details": self.details[:10]}


class _Tally:
    def __init__(self):
        self.checks = 0
        self.details: list = []

    def check(self, ok: bool, detail) -> None:
        self.checks += 1
        if not ok:
            self.details.append(detail)


def pushed_center_cocycle(name: str, lam=None) -> U1Cocycle:
    """Cocycle on ``G/Z(G)`` obtained by pushing the extension class through a character of ``Z(G)``."""
    G = build_group(name)
    K, nu = extract_cocycle(G, G.center())
    return push_by_character(nu, lam if lam is not None else [1] * len(nu.orders))


def sample_algebras() -> list[tuple[str, TwistedAlgebra]]:
    out = [(f"{n}", TwistedAlgebra(build_group(n))) for n in TEST_GROUPS]
    for src in ("Q8", "D4"):
        c = pushed_center_cocycle(src)
        out.append((f"C2xC2 twisted via {src}", TwistedAlgebra(c.group, c)))
    for l in (1, 2):
        c = pushed_center_cocycle("Heis3", [l])
        out.append((f"C3xC3 twisted via Heis3 ({l})", TwistedAlgebra(c.group, c)))
    S3 = build_group("S3")
    phi = [0, 1, 3, 2, 5, 4]
    out.append(("S3 with a coboundary twist", TwistedAlgebra(S3, coboundary_of(S3, phi, 6))))
    return out


# -- criteria ----------------------------------------------------------------

def criterion_1() -> CriterionResult:
    t = _Tally()
    for name in TEST_GROUPS:
        G = build_group(name)
        r = len(G.conjugacy_classes())
        for g, n in [(0, 3), (0, 4), (1, 1), (1, 2), (2, 1)]:
            for cls in itertools.product(range(r), repeat=n):
                for c in G.center().elements:
                    inst = SurfaceGroupInstance(G, g, cls, c)
                    a, b = omega(inst), omega_brute_force(inst)
                    t.check(a == b, {"group": name, "g": g, "classes": cls, "c": c, "formula": str(a), "brute": str(b)})
    return CriterionResult(1, "counting formula equals enumeration", not t.details, t.checks, t.details)


def criterion_2() -> CriterionResult:
    t = _Tally()
    for name in TEST_GROUPS:
        G = build_group(name)
        t.check(omega(SurfaceGroupInstance(G, 0, (0,))) == Fraction(1, G.order), {"group": name, "case": "(1)"})
        for i, cl in enumerate(G.conjugacy_classes()):
            v = omega(SurfaceGroupInstance(G, 0, (i, G.class_inverse[i])))
            t.check(v == Fraction(cl.size, G.order), {"group": name, "class": i, "value": str(v)})
    return CriterionResult(2, "genus-zero special cases", not t.details, t.checks, t.details)


def psi_specs(max_dim: int):
    """All stable ``(g, sorted exponents)`` with ``3g - 3 + n <= max_dim`` meeting the dimension gate."""
    for g in range(max_dim // 3 + 2):
        for n in range(1, max_dim + 4 - 3 * g):
            if 2 * g - 2 + n <= 0:
                continue
            d = 3 * g - 3 + n
            if d < 0 or d > max_dim:
                continue
            for exps in _partitions_into(d, n):
                yield g, exps


def _partitions_into(total: int, parts: int, maximum: int | None = None):
    """Nonincreasing tuples of ``parts`` nonnegative integers summing to ``total``."""
    if maximum is None:
        maximum = total
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(min(total, maximum), -1, -1):
        if first * parts < total:
            break
        for rest in _partitions_into(total - first, parts - 1, first):
            yield (first,) + rest


def criterion_3(max_dim: int = 12) -> CriterionResult:
    t = _Tally()
    for (g, a), want in [((0, (0, 0, 0)), Fraction(1)), ((1, (1,)), Fraction(1, 24)),
                         ((1, (0, 2)), Fraction(1, 24)), ((2, (4,)), Fraction(1, 1152))]:
        v = psi_integral(g, a)
        t.check(v == want, {"spec": [g, list(a)], "value": str(v)})
    for g, exps in psi_specs(max_dim):
        n = len(exps)
        value = psi_integral(g, exps)
        if 2 * g - 2 + (n - 1) > 0:
            if 0 in exps:
                # string equation, with exps = (tau_0) + rest
                rest = list(exps)
                rest.remove(0)
                rhs = sum((psi_integral(g, rest[:j] + [rest[j] - 1] + rest[j + 1:])
                           for j in range(len(rest)) if rest[j] >= 1), Fraction(0))
                t.check(value == rhs, {"equation": "string", "spec": [g, list(exps)]})
            if 1 in exps:
                rest = list(exps)
                rest.remove(1)
                rhs = (2 * g - 2 + len(rest)) * psi_integral(g, rest)
                t.check(value == rhs, {"equation": "dilaton", "spec": [g, list(exps)]})
        for i in sorted({exps.index(a) for a in exps}):
            t.check(psi_integral(g, exps, distinguished=i) == value,
                    {"equation": "overdetermination", "spec": [g, list(exps)], "index": i})
    return CriterionResult(3, "psi integrals", not t.details, t.checks, t.details)


def criterion_4() -> CriterionResult:
    t = _Tally()
    for name in BUILTIN_NAMES + ("S4",):
        G = build_group(name)
        T = character_table(G)
        try:
            verify_table(T)
            ok = True
        except GerbeError:
            ok = False
        t.check(ok and sum(ir.dim ** 2 for ir in T.irreps) == G.order, {"group": name})
    T = character_table(build_group("Q8"))
    t.check(sorted(ir.dim for ir in T.irreps) == [1, 1, 1, 1, 2], {"group": "Q8", "dims": "mismatch"})
    two = [ir for ir in T.irreps if ir.dim == 2]
    t.check(len(two) == 1 and list(two[0].values) == [2, -2, 0, 0, 0], {"group": "Q8", "row": "mismatch"})
    return CriterionResult(4, "character tables", not t.details, t.checks, t.details)


def criterion_5() -> CriterionResult:
    t = _Tally()
    c = pushed_center_cocycle("Q8")
    A = TwistedAlgebra(c.group, c)
    irr = A.twisted_irreps()
    t.check(len(A.c_regular_classes()) == 1, {"twisted C2xC2": "regular classes"})
    t.check(len(irr) == 1 and irr[0].dim == 2, {"twisted C2xC2": "irreps"})
    t.check(sum(r.dim ** 2 for r in irr) == 4, {"twisted C2xC2": "sum of squares"})
    for label, B in sample_algebras():
        f = B.idempotents()
        irr = B.twisted_irreps()
        total = B.zero
        for i, fi in enumerate(f):
            total = total + fi
            for j, fj in enumerate(f):
                t.check(B.multiply(fi, fj) == (fi if i == j else B.zero), {"algebra": label, "product": [i, j]})
                want = B.nu(irr[i]) if i == j else 0
                t.check(B.pairing(fi, fj) == want, {"algebra": label, "pairing": [i, j]})
        t.check(total == B.identity, {"algebra": label, "sum": "not identity"})
    return CriterionResult(5, "twisted algebra idempotents and pairing", not t.details, t.checks, t.details)


def criterion_6() -> CriterionResult:
    t = _Tally()
    for label, A in sample_algebras():
        rep = cohft_axioms_check(A, 2, 3)
        t.checks += rep.checks
        if not rep.ok:
            t.details.append({"algebra": label, "failures": rep.failures[:3]})
    for name in TEST_GROUPS:
        G = build_group(name)
        r = len(G.conjugacy_classes())
        for g in (1, 2):
            for n in (1, 2):
                for cls in itertools.product(range(r), repeat=n):
                    rep = gluing_identity_check(G, g, cls)
                    t.checks += len(rep.checks)
                    if not rep.ok:
                        t.details.append({"group": name, "g": g, "classes": cls})
    return CriterionResult(6, "cohft axioms and gluing", not t.details, t.checks, t.details)


def criterion_7() -> CriterionResult:
    t = _Tally()
    for name in ("Q8", "D4"):
        rep = verify_decomposition(build_group(name), max_g=2, max_n=6, max_weight=6)
        t.checks += rep.row_count
        if not rep.ok:
            t.details.append({"group": name, "failures": rep.failures[:3]})
    return CriterionResult(7, "decomposition theorem", not t.details, t.checks, t.details)


def criterion_8() -> CriterionResult:
    t = _Tally()
    c2 = pushed_center_cocycle("Q8")
    K2 = c2.group
    for name in ("C2", "S3"):
        K1 = build_group(name)
        for rep in (verify_product(K1, None, K2, c2, 2, 3), verify_product(K2, c2, K1, None, 2, 3)):
            t.checks += rep.checks
            if not rep.ok:
                t.details.append({"group": name, "failures": rep.failures[:3]})
    return CriterionResult(8, "product theorem", not t.details, t.checks, t.details)


def _nonempty_subsets(r: int):
    for mask in range(1, 1 << r):
        yield tuple(i for i in range(r) if mask >> i & 1)


def random_central_element(A: TwistedAlgebra, rng: random.Random):
    out = A.zero
    for e in A.center_basis():
        coeff = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
        if rng.random() < 0.3:
            coeff = Cyclotomic.coerce(coeff) * root_of_unity(A.group.exponent, rng.randrange(A.group.exponent))
        out = out + e * coeff
    return out


def criterion_9(seed: int = 20240517) -> CriterionResult:
    t = _Tally()
    for name in ABELIAN_GROUPS:
        G = build_group(name)
        r = len(G.conjugacy_classes())
        subsets = list(_nonempty_subsets(r))
        for g in (0, 1, 2):
            for n in ((1, 2, 3) if G.order <= 4 else (1, 2)):
                for sels in itertools.product(subsets, repeat=n):
                    for c in range(G.order):
                        a, b = degree(G, g, sels, c), degree_abelian(G, g, sels, c)
                        t.check(a == b, {"group": name, "g": g, "selections": sels, "c": c})
    rng = random.Random(seed)
    for name in TEST_GROUPS:
        data = BandedData(build_group(name))
        for _ in range(100):
            delta = random_central_element(data.base, rng)
            sectors = data.transform_I_all(delta)
            back = data.transform_J(sectors)
            t.check(back == delta, {"group": name, "round_trip": "J(I(x)) != x"})
            again = data.transform_I_all(back)
            t.check(all(again[l] == sectors[l] for l in sectors), {"group": name, "round_trip": "I(J(y)) != y"})
    return CriterionResult(9, "degree formula and transform round trip", not t.details, t.checks, t.details)


CRITERIA: dict[int, Callable[[], CriterionResult]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9,
}


def run_all(selected=None):
    for k in sorted(CRITERIA):
        if selected is None or k in selected:
            yield CRITERIA[k]()
