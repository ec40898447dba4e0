"""Exact Bernoulli numbers, Bernoulli polynomials and their periodic versions.

Numbers are kept as :class:`fractions.Fraction` and only turned into floats at
the point of use.  The convention is ``B_1 = -1/2``.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .errors import CapExceededError, DomainError

__all__ = [
    "BernoulliCache",
    "default_cache",
    "bernoulli_number",
    "bernoulli_float",
    "bernoulli_polynomial",
    "periodic_bernoulli",
    "bernoulli_sup",
]

DEFAULT_N_MAX = 128


def _to_float(q: Fraction) -> float:
    try:
        return float(q)
    except OverflowError:  # |B_n| passes 1e308 near n = 260
        return math.inf if q > 0 else -math.inf


class BernoulliCache:
    """Table ``B_0 .. B_{n_max}`` built eagerly from the binomial recursion

    ``(n+1) B_n = -sum_{k<n} C(n+1, k) B_k``.
    """

    def __init__(self, n_max: int = DEFAULT_N_MAX):
        if n_max < 0:
            raise DomainError("n_max must be non-negative")
        self.n_max = n_max
        values = [Fraction(1)]
        for n in range(1, n_max + 1):
            acc = sum(math.comb(n + 1, k) * values[k] for k in range(n))
            values.append(-acc / (n + 1))
        self.values = tuple(values)
        self.floats = tuple(_to_float(v) for v in values)

    def _check(self, n: int) -> None:
        if n < 0:
            raise DomainError("Bernoulli index must be non-negative")
        if n > self.n_max:
            raise CapExceededError(f"Bernoulli index {n} exceeds cache size {self.n_max}")

    def number(self, n: int) -> Fraction:
        self._check(n)
        return self.values[n]

    def as_float(self, n: int) -> float:
        self._check(n)
        return self.floats[n]

    def polynomial(self, k: int, x: float) -> float:
        """``B_k(x) = sum_j C(k, j) B_j x^(k-j)`` evaluated by Horner's rule."""
        self._check(k)
        acc = 0.0
        for j in range(k + 1):
            acc = acc * x + math.comb(k, j) * self.floats[j]
        return acc

    def periodic(self, k: int, x: float) -> float:
        return self.polynomial(k, x - math.floor(x))

    def sup(self, k: int) -> float:
        """Upper bound for ``|B_k(x)|`` on ``[0, 1]``."""
        self._check(k)
        if k == 0:
            return 1.0
        if k == 1:
            return 0.5
        if k % 2 == 0:
            # even polynomials peak at the endpoints
            return abs(self.floats[k])
        # odd k >= 3: B_k(0) = 0 and the polynomial is odd about 1/2, so
        # |B_k(x)| <= (k/2) sup|B_{k-1}|
        return 0.5 * k * abs(self.floats[k - 1])

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)


@lru_cache(maxsize=None)
def default_cache() -> BernoulliCache:
    return BernoulliCache(DEFAULT_N_MAX)


def bernoulli_number(n: int, cache: BernoulliCache | None = None) -> Fraction:
    return (cache or default_cache()).number(n)


def bernoulli_float(n: int, cache: BernoulliCache | None = None) -> float:
    return (cache or default_cache()).as_float(n)


def bernoulli_polynomial(k: int, x: float, cache: BernoulliCache | None = None) -> float:
    return (cache or default_cache()).polynomial(k, x)


def periodic_bernoulli(k: int, x: float, cache: BernoulliCache | None = None) -> float:
    """``psi_k(x) = B_k({x})`` where ``{x}`` is the fractional part."""
    return (cache or default_cache()).periodic(k, x)


def bernoulli_sup(k: int, cache: BernoulliCache | None = None) -> float:
    return (cache or default_cache()).sup(k)
