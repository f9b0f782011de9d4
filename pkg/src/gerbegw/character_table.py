"""Exact character tables via Dixon's modular method.

Class sums act on the centre of the group algebra; their simultaneous
eigenvectors modulo a suitable prime ``p`` give the central characters, and
each value is lifted back to ``Q(zeta_e)`` from its eigenvalue multiplicities.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import isqrt
from threading import Lock
from typing import Mapping

from .errors import InvalidInput, VerificationFailure
from .exact_arith import ONE, Cyclotomic, csum
from .finite_group import ConjClass, FiniteGroup, build_group


@dataclass(frozen=True)
class Irrep:
    dim: int
    values: tuple[Cyclotomic, ...]


@dataclass(frozen=True)
class CharacterTable:
    group: FiniteGroup
    classes: tuple[ConjClass, ...]
    irreps: tuple[Irrep, ...]

    def value(self, i: int, g: int) -> Cyclotomic:
        """Value of irrep ``i`` at group element ``g``."""
        return self.irreps[i].values[self.group.class_of(g)]

    def __len__(self):
        return len(self.irreps)

    @cached_property
    def _central_cache(self) -> dict:
        return {}

    @cached_property
    def weighted_values(self) -> tuple[tuple[Cyclotomic, ...], ...]:
        """``chi_i(C_k) * |C_k| / |G|`` for every irrep ``i`` and class ``k``."""
        n = self.group.order
        return tuple(tuple(v * Fraction(c.size, n) for v, c in zip(ir.values, self.classes))
                     for ir in self.irreps)

    def to_json(self) -> dict:
        return {
            "group": self.group.to_json(),
            "classes": [list(c.members) for c in self.classes],
            "irreps": [{"dim": r.dim, "values": [v.to_json() for v in r.values]} for r in self.irreps],
        }


# -- modular linear algebra ---------------------------------------------

def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % q for q in range(2, isqrt(n) + 1))


def dixon_prime(order: int, exponent: int) -> int:
    """Smallest prime p = 1 mod exponent with p > 2 * ceil(sqrt(order))."""
    bound = 2 * (isqrt(order - 1) + 1 if order > 1 else 1)
    p = exponent + 1
    while p <= bound or not _is_prime(p):
        p += exponent
    return p


def _primitive_root(p: int) -> int:
    factors = [q for q in range(2, p) if (p - 1) % q == 0 and _is_prime(q)]
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    return 1


def _nullspace_mod(mat: list[list[int]], p: int) -> list[list[int]]:
    """Basis (as vectors) of the right nullspace of ``mat`` over GF(p)."""
    rows = [list(r) for r in mat]
    ncols = len(rows[0]) if rows else 0
    pivcols = []
    rank = 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col] % p), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = pow(rows[rank][col], -1, p)
        rows[rank] = [(x * inv) % p for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][col] % p:
                f = rows[r][col]
                rows[r] = [(x - f * y) % p for x, y in zip(rows[r], rows[rank])]
        pivcols.append(col)
        rank += 1
    free = [c for c in range(ncols) if c not in pivcols]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for i, pc in enumerate(pivcols):
            v[pc] = (-rows[i][fc]) % p
        basis.append(v)
    return basis


def _matmul_cols(M: list[list[int]], B: list[list[int]], p: int) -> list[list[int]]:
    """M times the matrix whose columns are the vectors in B; result as column vectors."""
    return [[sum(M[k][l] * v[l] for l in range(len(v))) % p for k in range(len(M))] for v in B]


def structure_constants(G: FiniteGroup) -> list[list[list[int]]]:
    """``a[j][k][l] = #{x in C_j : x^-1 z_l in C_k}`` for class representatives z_l."""
    classes = G.conjugacy_classes()
    r = len(classes)
    a = [[[0] * r for _ in range(r)] for _ in range(r)]
    for l, cl in enumerate(classes):
        z = cl.representative
        for x in range(G.order):
            a[G.class_of(x)][G.class_of(G.mul[G.inv[x]][z])][l] += 1
    return a


def _split(G: FiniteGroup, p: int) -> list[list[int]]:
    """Simultaneous eigenvectors mod p of the class matrices, normalized at the identity class."""
    a = structure_constants(G)
    r = len(a)
    spaces = [[[int(i == j) for i in range(r)] for j in range(r)]]
    for j in range(1, r):
        if all(len(s) == 1 for s in spaces):
            break
        M = a[j]
        new_spaces = []
        for B in spaces:
            if len(B) == 1:
                new_spaces.append(B)
                continue
            MB = _matmul_cols(M, B, p)
            found = []
            total = 0
            for lam in range(p):
                # (M - lam) B as an r x d matrix
                mat = [[(MB[c][k] - lam * B[c][k]) % p for c in range(len(B))] for k in range(r)]
                ns = _nullspace_mod(mat, p)
                if ns:
                    vecs = [[sum(y[c] * B[c][k] for c in range(len(B))) % p for k in range(r)] for y in ns]
                    found.append(vecs)
                    total += len(vecs)
                    if total == len(B):
                        break
            if total != len(B):
                raise VerificationFailure("class matrix does not split modulo the chosen prime")
            new_spaces.extend(found)
        spaces = new_spaces
    if any(len(s) != 1 for s in spaces):
        raise VerificationFailure("eigenspaces failed to separate")
    out = []
    for (v,) in spaces:
        if v[0] % p == 0:
            raise VerificationFailure("eigenvector vanishes at the identity class")
        inv = pow(v[0], -1, p)
        out.append([(x * inv) % p for x in v])
    return out


# -- table construction -------------------------------------------------

_CACHE: dict = {}
_CACHE_LOCK = Lock()


def character_table(G: FiniteGroup) -> CharacterTable:
    """Exact character table of ``G`` with irreps in a fixed deterministic order."""
    key = G.mul
    with _CACHE_LOCK:
        hit = _CACHE.get(key)
    if hit is not None:
        return hit if hit.group is G else CharacterTable(G, G.conjugacy_classes(), hit.irreps)
    T = _compute_table(G)
    verify_table(T)
    with _CACHE_LOCK:
        _CACHE[key] = T
    return T


def _compute_table(G: FiniteGroup) -> CharacterTable:
    classes = G.conjugacy_classes()
    r = len(classes)
    n = G.order
    e = G.exponent
    p = dixon_prime(n, e)
    sizes = [c.size for c in classes]
    inv_class = G.class_inverse
    z = pow(_primitive_root(p), (p - 1) // e, p)
    power_maps = [G.power_map(j) for j in range(e)]
    e_inv = pow(e, -1, p)
    irreps = []
    for w in _split(G, p):
        s = sum(w[l] * w[inv_class[l]] * pow(sizes[l], -1, p) for l in range(r)) % p
        d2 = (n * pow(s, -1, p)) % p
        dims = [d for d in range(1, isqrt(n) + 1) if (d * d - d2) % p == 0]
        if len(dims) != 1:
            raise VerificationFailure("could not recover an irreducible degree")
        d = dims[0]
        chi_p = [(d * w[l] * pow(sizes[l], -1, p)) % p for l in range(r)]
        values = []
        for l in range(r):
            mult = {}
            for k in range(e):
                m = sum(chi_p[power_maps[j][l]] * pow(z, (-j * k) % e, p) for j in range(e)) * e_inv % p
                if m > d:
                    raise VerificationFailure("eigenvalue multiplicity out of range")
                if m:
                    mult[k] = m
            values.append(Cyclotomic.from_exponents(e, mult))
        irreps.append(Irrep(d, tuple(values)))
    irreps.sort(key=lambda ir: (ir.dim, tuple(v.sort_key() for v in ir.values)))
    return CharacterTable(G, classes, tuple(irreps))


def verify_table(T: CharacterTable) -> None:
    """Raise VerificationFailure unless all table invariants hold exactly."""
    G = T.group
    classes = T.classes
    sizes = [c.size for c in classes]
    r = len(classes)
    if len(T.irreps) != r:
        raise VerificationFailure("number of irreps differs from number of classes")
    if sum(ir.dim ** 2 for ir in T.irreps) != G.order:
        raise VerificationFailure("sum of squared degrees differs from the group order")
    if classes[0].representative != 0:
        raise VerificationFailure("first class must be the identity")
    conj = [[v.conjugate() for v in ir.values] for ir in T.irreps]
    for ir in T.irreps:
        if ir.values[0] != ir.dim or G.order % ir.dim:
            raise VerificationFailure("degree does not match value at identity or does not divide |G|")
    for i in range(r):
        for j in range(i, r):
            s = csum(T.irreps[i].values[l] * conj[j][l] * sizes[l] for l in range(r))
            if s != (G.order if i == j else 0):
                raise VerificationFailure(f"row orthogonality fails for irreps {i}, {j}")
    for a in range(r):
        for b in range(a, r):
            s = csum(T.irreps[i].values[a] * conj[i][b] for i in range(r))
            if s != (G.order // sizes[a] if a == b else 0):
                raise VerificationFailure(f"column orthogonality fails for classes {a}, {b}")


def table_from_json(data: Mapping, group: FiniteGroup | None = None) -> CharacterTable:
    """Load an externally supplied table and verify it against the group."""
    G = group if group is not None else build_group(data["group"])
    classes = G.conjugacy_classes()
    given = [tuple(sorted(c)) for c in data.get("classes", [list(c.members) for c in classes])]
    if given != [c.members for c in classes]:
        raise InvalidInput("class list does not match the group's conjugacy classes")
    irreps = []
    for row in data["irreps"]:
        vals = tuple(Cyclotomic.from_json(v) for v in row["values"])
        irreps.append(Irrep(int(row["dim"]), vals))
    T = CharacterTable(G, classes, tuple(irreps))
    verify_table(T)
    return T


def central_character(T: CharacterTable, irrep: int, z: int) -> Cyclotomic:
    """The scalar by which central ``z`` acts in irrep ``irrep``."""
    hit = T._central_cache.get((irrep, z))
    if hit is not None:
        return hit
    G = T.group
    if not G.is_central(z):
        raise InvalidInput(f"element {z} is not central")
    ir = T.irreps[irrep]
    alpha = ir.values[G.class_of(z)] / ir.dim
    for c in T.classes:
        g = c.representative
        if T.value(irrep, G.mul[z][g]) != alpha * ir.values[G.class_of(g)]:
            raise VerificationFailure("central element does not act by a scalar")
    if alpha ** G.element_order(z) != ONE:
        raise VerificationFailure("central character is not a root of unity of the right order")
    T._central_cache[(irrep, z)] = alpha
    return alpha
