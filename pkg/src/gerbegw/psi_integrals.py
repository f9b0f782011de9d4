"""Descendant integrals of psi classes via the DVV (Virasoro) recursion."""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from threading import RLock
from typing import Iterable, Sequence

from .errors import InvalidInput

DEFAULT_CACHE_CAP = 200_000


@dataclass(frozen=True)
class PsiSpec:
    genus: int
    exponents: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(int(a) for a in self.exponents))
        if self.genus < 0 or any(a < 0 for a in self.exponents):
            raise InvalidInput("genus and exponents must be nonnegative")

    @property
    def n(self) -> int:
        return len(self.exponents)

    @property
    def stable(self) -> bool:
        return self.n >= 1 and 2 * self.genus - 2 + self.n > 0


def double_factorial(k: int) -> int:
    """``k!!`` with ``(-1)!! = 1``."""
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out


class _Memo:
    def __init__(self, cap: int):
        self.cap = cap
        self.data: dict = {}
        self.lock = RLock()

    def get(self, key):
        with self.lock:
            return self.data.get(key)

    def put(self, key, value):
        with self.lock:
            if len(self.data) < self.cap:
                self.data.setdefault(key, value)


_MEMO = _Memo(DEFAULT_CACHE_CAP)


def set_cache_cap(cap: int) -> None:
    if cap < 1:
        raise InvalidInput("cache cap must be positive")
    with _MEMO.lock:
        _MEMO.cap = cap
        if len(_MEMO.data) > cap:
            _MEMO.data.clear()


def clear_cache() -> None:
    with _MEMO.lock:
        _MEMO.data.clear()


def _submultisets(exps: Sequence[int]):
    """Yield ``(I, J, weight)`` over splittings of a multiset, weighted by multiplicity."""
    counts = sorted(Counter(exps).items())
    for takes in itertools.product(*(range(m + 1) for _, m in counts)):
        w = 1
        left, right = [], []
        for (a, m), t in zip(counts, takes):
            w *= comb(m, t)
            left += [a] * t
            right += [a] * (m - t)
        yield tuple(left), tuple(right), w


def _value(g: int, exps: tuple[int, ...]) -> Fraction:
    """Integral for a sorted exponent tuple, zero outside the stable range."""
    n = len(exps)
    if n == 0 or 2 * g - 2 + n <= 0 or any(a < 0 for a in exps):
        return Fraction(0)
    if sum(exps) != 3 * g - 3 + n:
        return Fraction(0)
    key = (g, exps)
    hit = _MEMO.get(key)
    if hit is not None:
        return hit
    # recurse on the largest exponent (last after sorting)
    v = _dvv(g, exps, n - 1)
    _MEMO.put(key, v)
    return v


def _base(g: int, exps: tuple[int, ...]) -> Fraction | None:
    if g == 0 and exps == (0, 0, 0):
        return Fraction(1)
    if g == 1 and exps == (1,):
        return Fraction(1, 24)
    return None


def _dvv(g: int, exps: tuple[int, ...], i: int) -> Fraction:
    """One DVV step with distinguished index ``i`` (exponents need not be sorted)."""
    b = _base(g, tuple(sorted(exps)))
    if b is not None:
        return b
    a1 = exps[i]
    rest = exps[:i] + exps[i + 1:]
    total = Fraction(0)
    for j, aj in enumerate(rest):
        others = rest[:j] + rest[j + 1:]
        coeff = Fraction(double_factorial(2 * (a1 + aj) - 1), double_factorial(2 * aj - 1))
        total += coeff * _value(g, tuple(sorted(others + (a1 + aj - 1,))))
    half = Fraction(0)
    for bb in range(a1 - 1):
        cc = a1 - 2 - bb
        w = double_factorial(2 * bb + 1) * double_factorial(2 * cc + 1)
        s = Fraction(0)
        if g >= 1:
            s += _value(g - 1, tuple(sorted(rest + (bb, cc))))
        for I, J, mult in _submultisets(rest):
            for g1 in range(g + 1):
                x = _value(g1, tuple(sorted(I + (bb,))))
                if x:
                    s += mult * x * _value(g - g1, tuple(sorted(J + (cc,))))
        half += w * s
    return (total + half / 2) / double_factorial(2 * a1 + 1)


def psi_integral(spec: PsiSpec | int, exponents: Iterable[int] | None = None,
                 distinguished: int | None = None) -> Fraction:
    """``<tau_{a_1} ... tau_{a_n}>_g``.

    ``distinguished`` selects which marked point the top-level recursion step
    eliminates; every choice gives the same value.
    """
    if not isinstance(spec, PsiSpec):
        spec = PsiSpec(int(spec), tuple(exponents or ()))
    if not spec.stable:
        raise InvalidInput(f"unstable: (g, n) = ({spec.genus}, {spec.n})")
    g, exps = spec.genus, spec.exponents
    if sum(exps) != 3 * g - 3 + len(exps):
        return Fraction(0)
    if distinguished is None:
        return _value(g, tuple(sorted(exps)))
    if not 0 <= distinguished < len(exps):
        raise InvalidInput("distinguished index out of range")
    return _dvv(g, exps, distinguished)
