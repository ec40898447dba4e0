"""Finite diagnostics for series that the operator calculus shows diverge."""
from __future__ import annotations

import math

from ..errors import DomainError
from ..hurwitz import hurwitz_taylor
from ..numerics import is_nonpositive_integer
from .diagnostics import SeriesDiagnostics, Verdict, classify, term_ratios


def _entire_order(max_modulus: float, q: float, tol: float) -> int:
    if q <= 0.0:
        return 1
    need = math.log(tol * (1.0 - q) / max(max_modulus, 1e-300)) / math.log(q)
    return max(8, int(math.ceil(need)) + 1)


def taylor_shift_partial(
    s: complex,
    a: float = 1.0,
    n: int = 1,
    K: int | None = None,
    tol: float = 1e-10,
    K_cap: int = 20000,
) -> SeriesDiagnostics:
    """Partial sums over ``k`` of ``D^k [zeta(s, a) - a^-s] / k! * n^k``.

    This is the Taylor expansion of ``zeta(z, a+1)`` about ``s`` evaluated at
    ``z = s + n``: it converges iff ``n < |s - 1|``.  The pole part is summed
    exactly; the entire part comes from FFT Cauchy coefficients on the circle
    of radius ``n + 2``.  With ``K`` given, exactly ``K+1`` terms are traced;
    otherwise terms are added until a verdict is reached or ``K_cap`` is hit.
    """
    s = complex(s)
    if not 0 < a <= 1:
        raise DomainError("a must lie in (0, 1]")
    if n < 0:
        raise DomainError("n must be non-negative")
    meta = {"series": "taylor_shift", "s": s, "a": a, "n": n, "tol": tol}
    if s == 1:
        verdict = Verdict.undefined_term(0, "k = 0 term is zeta(1, a+1), a pole")
        return SeriesDiagnostics((), (), (), verdict, 1, meta)
    radius = n + 2.0
    q = n / radius
    probe = hurwitz_taylor(s, a, 8, radius, include_head=False)
    order = _entire_order(probe.max_modulus, q, 1e-3 * tol)
    exp = hurwitz_taylor(s, a, order, radius, include_head=False)
    meta.update(entire_order=order, contour_radius=radius, contour_nodes=exp.nodes)
    w = -1.0 / (s - 1.0)
    qp = n / abs(s - 1.0)

    def tail(k):
        if qp >= 1.0:
            return math.inf
        pole = abs(1.0 / (s - 1.0)) * qp ** (k + 1) / (1.0 - qp)
        return pole + exp.entire_tail_bound(n, min(k, order) + 1)

    limit = K if K is not None else K_cap
    terms, partial = [], []
    acc = 0j
    pole_k = 1.0 / (s - 1.0)  # (-1)^k n^k / (s-1)^(k+1)
    nk = 1.0
    verdict = None
    for k in range(limit + 1):
        e = exp.entire[k] * nk if k <= order else 0.0
        t = complex(pole_k + e)
        acc += t
        terms.append(t)
        partial.append(acc)
        if K is None:
            verdict = classify(terms, partial, tol, tail, 1 if n == 0 else None)
            if verdict is not None:
                break
        pole_k *= w * n
        nk *= n
    if verdict is None:
        verdict = classify(terms, partial, tol, tail, 1 if n == 0 else None, final=True)
    return SeriesDiagnostics(tuple(terms), tuple(partial), term_ratios(terms), verdict, 1, meta)


def p_series_diagnostics(s: complex, N: int, tol: float = 1e-12) -> SeriesDiagnostics:
    """Partial sums of ``sum_{n<=N} p_n(s)``."""
    s = complex(s)
    if N < 0:
        raise DomainError("N must be non-negative")
    terms, partial = [], []
    p = 1.0 + 0.0j
    acc = 0j
    for n in range(N + 1):
        acc += p
        terms.append(p)
        partial.append(acc)
        p = p * (s + n) / (n + 2)
    stop = int(round(1 - s.real)) if is_nonpositive_integer(s) else None
    verdict = classify(terms, partial, tol, None, stop, final=True, power_law_test=True)
    meta = {"series": "p_series", "s": s, "N": N}
    return SeriesDiagnostics(tuple(terms), tuple(partial), term_ratios(terms), verdict, 1, meta)
