"""The inverse operator ``G^-1[f](s) = sum_n q_n(s) f(s+n)``."""
from __future__ import annotations

import math

from ..bernoulli import default_cache
from ..errors import CapExceededError, DomainError
from ..numerics import is_nonpositive_integer
from .coefficients import q_sequence
from .diagnostics import SeriesDiagnostics, Verdict, classify, term_ratios
from .families import Evaluable


def q_at_neg_int(n: int, M: int) -> float:
    """``q_n(-M) = (-1)^n B_n C(M, n)``, zero for ``n > M``."""
    if n > M:
        return 0.0
    return float((-1) ** n * default_cache().number(n) * math.comb(M, n))


def apply_G_inverse_at_neg_int(f, M: int) -> complex:
    """The terminating sum ``sum_{n=0}^{M} q_n(-M) f(-M+n)``."""
    if M < 0:
        raise DomainError("M must be a non-negative integer")
    acc = 0j
    for n in range(M + 1):
        q = q_at_neg_int(n, M)
        if q:
            acc += q * complex(f(complex(n - M)))
    return acc


def g_inverse_partial_sums(
    f: Evaluable,
    s: complex,
    N: int,
    tol: float = 1e-12,
    method: str = "closed",
) -> SeriesDiagnostics:
    """Partial sums of ``sum_{n<=N} q_n(s) f(s+n)`` with even-index term ratios.

    A term whose coefficient is exactly zero contributes zero and ``f`` is not
    evaluated there, even at a declared pole.  A pole meeting a non-zero
    coefficient stops the trace with ``undefined_term``.
    """
    s = complex(s)
    if N < 0:
        raise DomainError("N must be non-negative")
    if method == "closed" and N >= len(default_cache()):
        raise CapExceededError(f"closed-form q_n needs B_n for n <= {N}; table holds {len(default_cache()) - 1}")
    qs = q_sequence(s, N + 1, method)
    terms, partial = [], []
    acc = 0j
    verdict = None
    skipped_poles = []
    for n, q in enumerate(qs):
        z = s + n
        pole = f.residue_at(z) is not None
        if q == 0:
            t = 0j
            if pole:
                skipped_poles.append(n)
        elif pole:
            verdict = Verdict.undefined_term(n, f"pole of f at s+n = {z}")
            break
        else:
            t = q * f(z)
        acc += t
        terms.append(t)
        partial.append(acc)
    stop = None
    meta = {"operator": "G^-1", "function": f.name, "s": s, "N": N, "q_method": method}
    if is_nonpositive_integer(s):
        M = -int(round(s.real))
        stop = M + 1
        meta["value_at_neg_int"] = apply_G_inverse_at_neg_int(f, M) if M <= N else None
    if skipped_poles:
        meta["zero_coefficient_poles"] = skipped_poles
    if verdict is None:
        verdict = classify(terms, partial, tol, None, stop, final=True)
    return SeriesDiagnostics(tuple(terms), tuple(partial), term_ratios(terms, 2), verdict, 2, meta)
