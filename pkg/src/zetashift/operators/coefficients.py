"""Forward and inverse operator coefficients ``p_n(s)`` and ``q_n(s)``."""
from __future__ import annotations

import math

from ..bernoulli import default_cache
from ..errors import DomainError
from ..numerics import complex_gamma, pochhammer


def p_coeff(n: int, s: complex) -> complex:
    """``p_0 = 1`` and ``p_n(s) = s (s+1) ... (s+n-1) / (n+1)!``."""
    if n < 0:
        raise DomainError("coefficient index must be non-negative")
    s = complex(s)
    out = 1.0 + 0.0j
    # (n+1)! = 2 * 3 * ... * (n+1), interleaved to avoid overflow
    for j in range(n):
        out *= (s + j) / (j + 2)
    return out


def p_sequence(s: complex, count: int) -> list[complex]:
    """``[p_0(s), ..., p_{count-1}(s)]`` by the recurrence ``p_{n+1} = p_n (s+n)/(n+2)``."""
    s = complex(s)
    out = []
    p = 1.0 + 0.0j
    for n in range(count):
        out.append(p)
        p = p * (s + n) / (n + 2)
    return out


def p_continuous(x: float, s: complex) -> complex:
    """``Gamma(s+x) / (Gamma(x+2) Gamma(s))``, equal to ``p_n(s)`` at ``x = n``."""
    if x < 0:
        raise DomainError("p_continuous is defined for x >= 0")
    s = complex(s)
    return complex_gamma(s + x) / (complex_gamma(x + 2.0) * complex_gamma(s))


def _q_closed(n: int, s: complex) -> complex:
    b = default_cache().number(n)
    if b == 0:
        return 0j
    return float(b) / math.factorial(n) * pochhammer(s, n)


class CoefficientSeq:
    """Lazily extended coefficient sequence anchored at ``s``.

    ``kind`` is ``"p"`` or ``"q"``; the ``q`` sequence uses the recursion
    ``q_n = -sum_{k<n} q_k p_{n-k}(s+k)``, memoised.
    """

    def __init__(self, kind: str, s: complex):
        if kind not in ("p", "q"):
            raise DomainError(f"unknown coefficient kind {kind!r}")
        self.kind = kind
        self.s = complex(s)
        self.values: list[complex] = [1.0 + 0.0j]
        self._shifted: dict[int, list[complex]] = {}

    def _p_shift(self, k: int, count: int) -> list[complex]:
        seq = self._shifted.get(k)
        if seq is None or len(seq) < count:
            seq = p_sequence(self.s + k, max(count, 2 * len(seq or ()) + 8))
            self._shifted[k] = seq
        return seq

    def extend(self, n: int) -> None:
        while len(self.values) <= n:
            m = len(self.values)
            if self.kind == "p":
                self.values.append(self.values[-1] * (self.s + m - 1) / (m + 1))
            else:
                acc = 0j
                for k in range(m):
                    acc += self.values[k] * self._p_shift(k, m - k + 1)[m - k]
                self.values.append(-acc)

    def __getitem__(self, n: int) -> complex:
        self.extend(n)
        return self.values[n]

    def __len__(self) -> int:
        return len(self.values)


def q_coeff(n: int, s: complex, method: str = "closed") -> complex:
    """Inverse-operator coefficient ``q_n(s)``.

    ``closed``: ``B_n / n! * (s)_n`` (limited by the Bernoulli table size).
    ``recursive``: the convolution recursion against ``p``.
    """
    if n < 0:
        raise DomainError("coefficient index must be non-negative")
    if method == "closed":
        return _q_closed(n, complex(s))
    if method == "recursive":
        return CoefficientSeq("q", s)[n]
    raise DomainError(f"unknown q method {method!r}")


def q_sequence(s: complex, count: int, method: str = "closed") -> list[complex]:
    if method == "recursive":
        seq = CoefficientSeq("q", s)
        return [seq[n] for n in range(count)]
    return [q_coeff(n, s, method) for n in range(count)]
