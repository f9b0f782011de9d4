"""Twisted group algebras ``C*(K, c)`` with product ``g o h = c(g,h) gh``."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .character_table import character_table
from .cocycles import TwoCocycleA, U1Cocycle, build_extension, commutation_exponent, validate_cocycle
from .errors import CapExceeded, InvalidInput, VerificationFailure
from .exact_arith import ONE, ZERO, Cyclotomic, csum, root_of_unity, solve
from .finite_group import DEFAULT_ORDER_CAP, ConjClass, FiniteGroup


class AlgebraElement:
    """Finitely supported combination of group elements; zero coefficients are dropped."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: "TwistedAlgebra", coeffs: Mapping[int, object] | None = None):
        self.algebra = algebra
        out = {}
        for g, v in (coeffs or {}).items():
            v = Cyclotomic.coerce(v)
            if not v.is_zero():
                if not 0 <= g < algebra.group.order:
                    raise InvalidInput(f"element index {g} out of range")
                out[int(g)] = v
        self.coeffs = out

    def __getitem__(self, g: int) -> Cyclotomic:
        return self.coeffs.get(g, ZERO)

    def _check(self, other):
        if not isinstance(other, AlgebraElement) or other.algebra is not self.algebra:
            if isinstance(other, AlgebraElement) and other.algebra == self.algebra:
                return
            raise InvalidInput("elements belong to different algebras")

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for g, v in other.coeffs.items():
            out[g] = out.get(g, ZERO) + v
        return AlgebraElement(self.algebra, out)

    def __neg__(self):
        return AlgebraElement(self.algebra, {g: -v for g, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return self.algebra.multiply(self, other)
        s = Cyclotomic.coerce(other)
        return AlgebraElement(self.algebra, {g: v * s for g, v in self.coeffs.items()})

    def __rmul__(self, other):
        s = Cyclotomic.coerce(other)
        return AlgebraElement(self.algebra, {g: s * v for g, v in self.coeffs.items()})

    def __eq__(self, other):
        if isinstance(other, AlgebraElement):
            return self.algebra == other.algebra and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, Cyclotomic)):
            return self == self.algebra.identity * other
        return NotImplemented

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __repr__(self):
        body = ", ".join(f"{g}: {v}" for g, v in sorted(self.coeffs.items()))
        return f"AlgebraElement({{{body}}})"

    def to_json(self) -> dict:
        return {"coeffs": {str(g): v.to_json() for g, v in sorted(self.coeffs.items())}}


@dataclass(frozen=True)
class TwistedIrrep:
    label: int
    dim: int
    values: tuple[Cyclotomic, ...]

    def __call__(self, g: int) -> Cyclotomic:
        return self.values[g]


class TwistedAlgebra:
    """``C*(K, c)``; ``cocycle=None`` gives the ordinary group algebra."""

    def __init__(self, group: FiniteGroup, cocycle: U1Cocycle | None = None,
                 order_cap: int = DEFAULT_ORDER_CAP):
        if cocycle is None:
            cocycle = U1Cocycle.trivial(group)
        if cocycle.group != group:
            raise InvalidInput("cocycle lives on a different group")
        rep = validate_cocycle(cocycle, max_violations=1)
        if not rep.ok:
            raise InvalidInput("twisting cocycle must be a normalized cocycle")
        self.group = group
        self.cocycle = cocycle.reduced()
        self.order_cap = order_cap
        self._irreps = None
        self._idem = None
        m = self.cocycle.modulus
        self._c = [[root_of_unity(m, e) for e in row] for row in self.cocycle.exponents]

    def __eq__(self, other):
        return (isinstance(other, TwistedAlgebra) and self.group == other.group
                and self.cocycle == other.cocycle)

    def __hash__(self):
        return hash((self.group, self.cocycle))

    def __repr__(self):
        return f"TwistedAlgebra({self.group!r}, modulus={self.cocycle.modulus})"

    @property
    def is_untwisted(self) -> bool:
        return self.cocycle.is_trivial()

    def c(self, g: int, h: int) -> Cyclotomic:
        return self._c[g][h]

    # -- elements -----------------------------------------------------
    def element(self, coeffs: Mapping[int, object] | None = None) -> AlgebraElement:
        return AlgebraElement(self, coeffs)

    def basis(self, g: int) -> AlgebraElement:
        return AlgebraElement(self, {g: ONE})

    @property
    def identity(self) -> AlgebraElement:
        return self.basis(0)

    @property
    def zero(self) -> AlgebraElement:
        return AlgebraElement(self, {})

    def element_from_json(self, data: Mapping) -> AlgebraElement:
        return AlgebraElement(self, {int(k): Cyclotomic.from_json(v) for k, v in data["coeffs"].items()})

    def multiply(self, a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
        if a.algebra != self or b.algebra != self:
            raise InvalidInput("elements belong to a different algebra")
        mul = self.group.mul
        out: dict[int, list] = {}
        untw = self.is_untwisted
        for g, x in a.coeffs.items():
            for h, y in b.coeffs.items():
                v = x * y if untw else x * y * self._c[g][h]
                out.setdefault(mul[g][h], []).append(v)
        return AlgebraElement(self, {k: csum(vs) for k, vs in out.items()})

    def is_central(self, a: AlgebraElement) -> bool:
        return all(self.multiply(a, self.basis(s)) == self.multiply(self.basis(s), a)
                   for s in self.group.generators)

    # -- centre -------------------------------------------------------
    def is_regular(self, g: int) -> bool:
        return all(commutation_exponent(self.cocycle, g, h) == 0 for h in self.group.centralizer(g))

    def c_regular_classes(self) -> tuple[ConjClass, ...]:
        return tuple(cl for cl in self.group.conjugacy_classes() if self.is_regular(cl.representative))

    @property
    def regular_elements(self) -> tuple[int, ...]:
        return tuple(sorted(g for cl in self.c_regular_classes() for g in cl.members))

    def twisted_inverse(self, g: int) -> AlgebraElement:
        gi = self.group.inv[g]
        return AlgebraElement(self, {gi: self._c[g][gi].inverse()})

    def class_element(self, cl: ConjClass) -> AlgebraElement:
        """``1_(g)``: the conjugation average of ``g``, normalized to coefficient 1 at the representative."""
        G = self.group
        g = cl.representative
        if self.is_untwisted:
            return AlgebraElement(self, {h: ONE for h in cl.members})
        acc = self.zero
        bg = self.basis(g)
        for x in range(G.order):
            acc = acc + self.multiply(self.multiply(self.basis(x), bg), self.twisted_inverse(x))
        return acc * Fraction(1, G.centralizer_order(g))

    def center_basis(self) -> tuple[AlgebraElement, ...]:
        out = []
        for cl in self.c_regular_classes():
            e = self.class_element(cl)
            if e[cl.representative] != ONE or set(e.coeffs) != set(cl.members):
                raise VerificationFailure("class element has unexpected support")
            if not self.is_central(e):
                raise VerificationFailure(f"class element for {cl.representative} is not central")
            out.append(e)
        return tuple(out)

    # -- representations ----------------------------------------------
    def twisted_irreps(self) -> tuple[TwistedIrrep, ...]:
        if self._irreps is None:
            self._irreps = self._compute_irreps()
        return self._irreps

    def _compute_irreps(self) -> tuple[TwistedIrrep, ...]:
        K = self.group
        if self.is_untwisted:
            T = character_table(K)
            rows = [(ir.dim, tuple(ir.values[K.class_of(k)] for k in range(K.order))) for ir in T.irreps]
        else:
            m = self.cocycle.modulus
            if m * K.order > self.order_cap:
                raise CapExceeded(f"extension order {m * K.order} exceeds cap {self.order_cap}")
            nu = TwoCocycleA(K, (m,), self.cocycle.exponents)
            ext = build_extension(None, K, nu)
            T = character_table(ext.total)
            zeta = root_of_unity(m, 1)
            # (a=1, k=identity) sits at index 1
            rows = []
            for i, ir in enumerate(T.irreps):
                if ir.values[ext.total.class_of(1)] == zeta * ir.dim:
                    rows.append((ir.dim, tuple(T.value(i, ext.section[k]) for k in range(K.order))))
        rows.sort(key=lambda r: (r[0], tuple(v.sort_key() for v in r[1])))
        irreps = tuple(TwistedIrrep(i, d, vals) for i, (d, vals) in enumerate(rows))
        regular = set(self.regular_elements)
        for ir in irreps:
            if ir.values[0] != ir.dim:
                raise VerificationFailure("twisted character has wrong value at identity")
            if any(not ir.values[g].is_zero() for g in range(K.order) if g not in regular):
                raise VerificationFailure("twisted character is nonzero off the regular elements")
        if sum(ir.dim ** 2 for ir in irreps) != K.order:
            raise VerificationFailure("twisted degrees do not satisfy sum of squares = |K|")
        if len(irreps) != len(self.c_regular_classes()):
            raise VerificationFailure("number of twisted irreps differs from number of regular classes")
        return irreps

    def idempotent(self, rho: TwistedIrrep | int) -> AlgebraElement:
        if isinstance(rho, int):
            rho = self.twisted_irreps()[rho]
        K = self.group
        scale = Fraction(rho.dim, K.order)
        coeffs = {}
        for g in self.regular_elements:
            gi = K.inv[g]
            coeffs[g] = self._c[g][gi].inverse() * rho.values[gi] * scale
        return AlgebraElement(self, coeffs)

    def idempotents(self) -> tuple[AlgebraElement, ...]:
        if self._idem is None:
            self._idem = tuple(self.idempotent(r) for r in self.twisted_irreps())
        return self._idem

    def nu(self, rho: TwistedIrrep | int) -> Fraction:
        """``(dim / |K|)^2``, the pairing of an idempotent with itself."""
        if isinstance(rho, int):
            rho = self.twisted_irreps()[rho]
        return Fraction(rho.dim, self.group.order) ** 2

    # -- pairing and expansions ----------------------------------------
    def pairing(self, a: AlgebraElement, b: AlgebraElement) -> Cyclotomic:
        """``(1/|K|)`` times the identity coefficient of ``a o b``."""
        if a.algebra != self or b.algebra != self:
            raise InvalidInput("elements belong to a different algebra")
        K = self.group
        terms = []
        for g, x in a.coeffs.items():
            gi = K.inv[g]
            y = b.coeffs.get(gi)
            if y is not None:
                terms.append(x * y * self._c[g][gi])
        return csum(terms) / K.order

    def expand_in_idempotents(self, delta: AlgebraElement, check_central: bool = True) -> tuple[Cyclotomic, ...]:
        """Coefficients ``e_rho`` with ``delta = sum_rho e_rho f_rho``."""
        if check_central and not self.is_central(delta):
            raise InvalidInput("element is not central")
        reps = [cl.representative for cl in self.c_regular_classes()]
        idem = self.idempotents()
        matrix = [[f[r] for f in idem] for r in reps]
        coeffs = solve(matrix, [delta[r] for r in reps])
        recon = self.zero
        for e, f in zip(coeffs, idem):
            recon = recon + f * e
        if recon != delta:
            raise VerificationFailure("idempotent expansion does not reconstruct the element")
        return tuple(coeffs)

    def character_coefficient(self, delta: AlgebraElement, rho: TwistedIrrep | int) -> Cyclotomic:
        """``(1/dim) sum_g delta(g) chi_rho(g)``: the scalar by which delta acts in rho."""
        if isinstance(rho, int):
            rho = self.twisted_irreps()[rho]
        return csum(v * rho.values[g] for g, v in delta.coeffs.items()) / rho.dim


def multiply(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    if a.algebra != b.algebra:
        raise InvalidInput("elements belong to different algebras")
    return a.algebra.multiply(a, b)


def pairing(a: AlgebraElement, b: AlgebraElement) -> Cyclotomic:
    if a.algebra != b.algebra:
        raise InvalidInput("elements belong to different algebras")
    return a.algebra.pairing(a, b)


def c_regular_classes(A: TwistedAlgebra):
    return A.c_regular_classes()


def center_basis(A: TwistedAlgebra):
    return A.center_basis()


def twisted_irreps(A: TwistedAlgebra):
    return A.twisted_irreps()


def idempotent(A: TwistedAlgebra, rho) -> AlgebraElement:
    return A.idempotent(rho)


def expand_in_idempotents(delta: AlgebraElement, central: bool = True):
    return delta.algebra.expand_in_idempotents(delta, check_central=central)
