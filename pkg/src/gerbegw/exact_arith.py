"""Exact rational and cyclotomic arithmetic.

Rationals are :class:`fractions.Fraction`.  Elements of a cyclotomic field
``Q(zeta_n)`` are stored in the power basis ``1, zeta_n, ..., zeta_n^(phi(n)-1)``
reduced modulo the n-th cyclotomic polynomial, always at the smallest
conductor whose field contains the value.  Because of that normalization two
elements are equal iff their ``(conductor, coefficients)`` pairs are equal.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Mapping, Sequence

from .errors import InvalidInput

Rational = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@lru_cache(maxsize=None)
def prime_factors(n: int) -> tuple[int, ...]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return tuple(out)


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    r = n
    for p in prime_factors(n):
        r = r // p * (p - 1)
    return r


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _poly_divexact(num: list[int], den: Sequence[int]) -> list[int]:
    # den is monic; coefficients low -> high
    num = list(num)
    dd = len(den) - 1
    q = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i]
        if c:
            q[i - dd] = c
            for j, d in enumerate(den):
                num[i - dd + j] -= c * d
    if any(num[:dd]):
        raise ArithmeticError("inexact polynomial division")
    return q


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients (low to high) of the n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError("conductor must be positive")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in _divisors(n)[:-1]:
        poly = _poly_divexact(poly, cyclotomic_polynomial(d))
    return tuple(poly)


def _reduce(poly: list[Fraction], n: int) -> tuple[Fraction, ...]:
    """Reduce a polynomial in zeta_n modulo Phi_n, returning phi(n) coefficients."""
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    poly = list(poly) + [_ZERO] * max(0, deg - len(poly))
    for i in range(len(poly) - 1, deg - 1, -1):
        c = poly[i]
        if c:
            base = i - deg
            for j, pc in enumerate(phi[:-1]):
                if pc:
                    poly[base + j] -= c * pc
            poly[i] = _ZERO
    return tuple(poly[:deg])


def _embed(coeffs: Sequence[Fraction], n: int, big: int) -> tuple[Fraction, ...]:
    """Rewrite an element of Q(zeta_n) in the power basis of Q(zeta_big), n | big."""
    if n == big:
        return tuple(coeffs)
    step = big // n
    poly = [_ZERO] * ((len(coeffs) - 1) * step + 1)
    for k, c in enumerate(coeffs):
        poly[k * step] = c
    return _reduce(poly, big)


def _solve_fraction(mat: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction] | None:
    """Solve a square nonsingular system over Q; None if singular."""
    n = len(mat)
    a = [list(row) + [r] for row, r in zip(mat, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


@lru_cache(maxsize=None)
def _descent_data(n: int, m: int):
    """Pivot columns and inverse data for rewriting Q(zeta_n) elements at conductor m."""
    rows = []
    for i in range(euler_phi(m)):
        rows.append(_embed([_ZERO] * i + [_ONE], m, n))
    # choose pivot columns greedily so that the square submatrix is invertible
    pivots: list[int] = []
    for col in range(euler_phi(n)):
        cand = pivots + [col]
        sub = [[row[c] for c in cand] for row in rows]
        if _rank(sub) == len(cand):
            pivots = cand
            if len(pivots) == len(rows):
                break
    # columns of the square system: unknown y_i multiplies rows[i]
    square = [[rows[i][c] for i in range(len(rows))] for c in pivots]
    return tuple(pivots), tuple(tuple(r) for r in rows), tuple(tuple(r) for r in square)


def _rank(mat: list[list[Fraction]]) -> int:
    a = [list(r) for r in mat]
    rank = 0
    ncols = len(a[0]) if a else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(a)) if a[r][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for r in range(len(a)):
            if r != rank and a[r][col] != 0:
                f = a[r][col] / a[rank][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        rank += 1
    return rank


def _descend(coeffs: tuple[Fraction, ...], n: int, m: int) -> tuple[Fraction, ...] | None:
    pivots, rows, square = _descent_data(n, m)
    y = _solve_fraction([list(r) for r in square], [coeffs[c] for c in pivots])
    if y is None:
        return None
    recon = [_ZERO] * len(coeffs)
    for yi, row in zip(y, rows):
        if yi:
            for k, v in enumerate(row):
                if v:
                    recon[k] += yi * v
    if tuple(recon) != coeffs:
        return None
    return tuple(y)


def _normalize(n: int, coeffs: tuple[Fraction, ...]) -> tuple[int, tuple[Fraction, ...]]:
    while n > 1:
        if not any(coeffs[1:]):
            return 1, (coeffs[0],)
        for p in prime_factors(n):
            y = _descend(coeffs, n, n // p)
            if y is not None:
                n, coeffs = n // p, y
                break
        else:
            break
    return n, coeffs


class Cyclotomic:
    """An exact element of a cyclotomic field, normalized to minimal conductor.

    Supports ``+ - * /`` with other cyclotomics, ints and Fractions.
    """

    __slots__ = ("_n", "_c", "_hash")

    def __init__(self, conductor: int, coeffs: Sequence, *, _normalized: bool = False):
        if conductor < 1:
            raise ValueError("conductor must be positive")
        c = tuple(Fraction(x) for x in coeffs)
        if len(c) != euler_phi(conductor):
            c = _reduce(list(c), conductor)
        if not _normalized:
            conductor, c = _normalize(conductor, c)
        self._n = conductor
        self._c = c
        self._hash = None

    # -- construction -------------------------------------------------
    @classmethod
    def _raw(cls, n: int, c: tuple[Fraction, ...]) -> "Cyclotomic":
        obj = cls.__new__(cls)
        obj._n = n
        obj._c = c
        obj._hash = None
        return obj

    @classmethod
    def from_rational(cls, r) -> "Cyclotomic":
        return cls._raw(1, (Fraction(r),))

    @classmethod
    def from_exponents(cls, n: int, terms: Mapping[int, object]) -> "Cyclotomic":
        """Build ``sum_k terms[k] * zeta_n**k`` (any integer k)."""
        poly = [_ZERO] * n
        for k, v in terms.items():
            poly[k % n] += Fraction(v)
        return cls(n, _reduce(poly, n))

    @classmethod
    def coerce(cls, x) -> "Cyclotomic":
        if isinstance(x, Cyclotomic):
            return x
        if isinstance(x, (int, Fraction)):
            return cls._raw(1, (Fraction(x),))
        raise TypeError(f"cannot coerce {type(x).__name__} to Cyclotomic")

    # -- accessors ----------------------------------------------------
    @property
    def conductor(self) -> int:
        return self._n

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return self._c

    def is_rational(self) -> bool:
        return self._n == 1

    def is_zero(self) -> bool:
        return self._n == 1 and self._c[0] == 0

    def to_rational(self) -> Fraction:
        if self._n != 1:
            raise ValueError(f"{self!r} is not rational")
        return self._c[0]

    def at_conductor(self, big: int) -> tuple[Fraction, ...]:
        """Coefficients of this value in the power basis of Q(zeta_big)."""
        if big % self._n:
            raise ValueError(f"conductor {self._n} does not divide {big}")
        return _embed(self._c, self._n, big)

    # -- arithmetic ---------------------------------------------------
    def _binary(self, other, op):
        n = lcm(self._n, other._n)
        a = _embed(self._c, self._n, n)
        b = _embed(other._c, other._n, n)
        return op(a, b, n)

    def __add__(self, other):
        try:
            other = Cyclotomic.coerce(other)
        except TypeError:
            return NotImplemented
        if self._n == 1 and other._n == 1:
            return Cyclotomic._raw(1, (self._c[0] + other._c[0],))
        return self._binary(other, lambda a, b, n: Cyclotomic(n, tuple(x + y for x, y in zip(a, b))))

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic._raw(self._n, tuple(-x for x in self._c))

    def __sub__(self, other):
        try:
            other = Cyclotomic.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def _scale(self, r: Fraction) -> "Cyclotomic":
        if r == 0:
            return Cyclotomic._raw(1, (_ZERO,))
        return Cyclotomic._raw(self._n, tuple(x * r for x in self._c))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self._scale(Fraction(other))
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        if other._n == 1:
            return self._scale(other._c[0])
        if self._n == 1:
            return other._scale(self._c[0])

        def mul(a, b, n):
            poly = [_ZERO] * (len(a) + len(b) - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        if y:
                            poly[i + j] += x * y
            return Cyclotomic(n, _reduce(poly, n))

        return self._binary(other, mul)

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        if self.is_zero():
            raise ZeroDivisionError("division by zero in cyclotomic field")
        if self._n == 1:
            return Cyclotomic._raw(1, (1 / self._c[0],))
        # a^-1 = prod_{j != 1} sigma_j(a) / N(a)
        prod = Cyclotomic.from_rational(1)
        for j in range(2, self._n):
            if gcd(j, self._n) == 1:
                prod = prod * self.galois(j)
        norm = (self * prod).to_rational()
        return prod._scale(1 / norm)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero in cyclotomic field")
            return self._scale(1 / Fraction(other))
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Cyclotomic.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = Cyclotomic.from_rational(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def galois(self, j: int) -> "Cyclotomic":
        """Apply the automorphism zeta -> zeta**j (j coprime to the conductor)."""
        n = self._n
        if gcd(j, n) != 1:
            raise ValueError(f"{j} is not coprime to conductor {n}")
        if n == 1:
            return self
        poly = [_ZERO] * n
        for k, c in enumerate(self._c):
            if c:
                poly[(k * j) % n] += c
        return Cyclotomic(n, _reduce(poly, n), _normalized=True)

    def conjugate(self) -> "Cyclotomic":
        return self.galois(-1)

    # -- comparison, hashing, display ---------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self._n == 1 and self._c[0] == other
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        return self._n == other._n and self._c == other._c

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._c[0]) if self._n == 1 else hash((self._n, self._c))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    def sort_key(self) -> tuple:
        """Fixed total order used for deterministic sorting (1 sorts before -1)."""
        return (self._n, tuple(-x for x in self._c))

    def __repr__(self):
        if self._n == 1:
            return f"Cyclotomic({self._c[0]})"
        return f"Cyclotomic({self})"

    def __str__(self):
        if self._n == 1:
            return str(self._c[0])
        terms = []
        for k, c in enumerate(self._c):
            if not c:
                continue
            z = "1" if k == 0 else (f"z{self._n}" if k == 1 else f"z{self._n}^{k}")
            if k == 0:
                terms.append(str(c))
            elif c == 1:
                terms.append(z)
            elif c == -1:
                terms.append("-" + z)
            else:
                terms.append(f"{c}*{z}")
        return " + ".join(terms).replace("+ -", "- ")

    def to_json(self) -> dict:
        return {
            "conductor": self._n,
            "coeffs": {str(k): str(c) for k, c in enumerate(self._c) if c},
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Cyclotomic":
        n = int(data["conductor"])
        coeffs = [_ZERO] * euler_phi(n)
        for k, v in data.get("coeffs", {}).items():
            coeffs[int(k)] = Fraction(v)
        return cls(n, coeffs)


ZERO = Cyclotomic.from_rational(0)
ONE = Cyclotomic.from_rational(1)


@lru_cache(maxsize=4096)
def root_of_unity(n: int, k: int = 1) -> Cyclotomic:
    """``zeta_n ** k`` with ``zeta_n = exp(2 pi i / n)``."""
    if n < 1:
        raise ValueError("n must be positive")
    k %= n
    if k == 0:
        return ONE
    return Cyclotomic.from_exponents(n, {k: 1})


def cyc_arith(a, b, op: str) -> Cyclotomic:
    a, b = Cyclotomic.coerce(a), Cyclotomic.coerce(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def galois(a, j: int) -> Cyclotomic:
    return Cyclotomic.coerce(a).galois(j)


def csum(values: Iterable) -> Cyclotomic:
    """Sum of cyclotomics/rationals, accumulating rationals separately."""
    rat = _ZERO
    acc = None
    for v in values:
        if isinstance(v, Cyclotomic):
            if v._n == 1:
                rat += v._c[0]
            else:
                acc = v if acc is None else acc + v
        else:
            rat += Fraction(v)
    if acc is None:
        return Cyclotomic._raw(1, (rat,))
    return acc + rat if rat else acc


def solve(matrix: Sequence[Sequence], rhs: Sequence) -> list[Cyclotomic]:
    """Solve a square nonsingular linear system exactly over a cyclotomic field."""
    n = len(matrix)
    a = [[Cyclotomic.coerce(x) for x in row] + [Cyclotomic.coerce(r)] for row, r in zip(matrix, rhs)]
    if any(len(row) != n + 1 for row in a):
        raise ValueError("matrix must be square and match rhs")
    for col in range(n):
        piv = next((r for r in range(col, n) if not a[r][col].is_zero()), None)
        if piv is None:
            raise InvalidInput("singular system")
        a[col], a[piv] = a[piv], a[col]
        inv = a[col][col].inverse()
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and not a[r][col].is_zero():
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]
