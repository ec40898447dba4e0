"""The shift operator ``G[f](s) = sum_n p_n(s) f(s+n)`` and its truncations."""
from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import NonConvergenceError, PoleError
from ..hurwitz import hurwitz_regular, pole_free_power_ratio
from ..numerics import is_nonpositive_integer, real_base_pow
from .diagnostics import SeriesDiagnostics, Verdict, classify, term_ratios
from .families import Evaluable, zeta_family


def _prod_skip(s: complex, n: int, skip: int) -> complex:
    out = 1.0 + 0.0j
    for j in range(n):
        if j != skip:
            out *= s + j
    return out


def removable_limit(s: complex, n: int, residue: complex, scale: float) -> complex | None:
    """``lim c(s) (s)_n f(s+n)`` when ``(s)_n`` has a simple zero and ``f`` a simple pole.

    ``scale`` is the s-independent coefficient factor (``1/(n+1)!`` for ``p_n``).
    Returns ``None`` when ``(s)_n`` does not vanish, i.e. the pole is genuine.
    """
    if not is_nonpositive_integer(s):
        return None
    j0 = -int(round(s.real))
    if j0 >= n:
        return None
    return residue * scale * _prod_skip(s, n, j0)


def _inv_factorial_ratio(n: int) -> float:
    return 1.0 / math.factorial(n + 1)


def g_term(f: Evaluable, s: complex, n: int, pn: complex) -> complex:
    """``p_n(s) f(s+n)`` with the removable-limit rule at declared poles."""
    z = s + n
    res = f.residue_at(z)
    if res is not None:
        lim = removable_limit(s, n, res, _inv_factorial_ratio(n))
        if lim is None:
            raise PoleError(f"term {n}: f has a pole at s+n = {z} and p_n(s) != 0")
        return lim
    if pn == 0:
        return 0j
    return pn * f(z)


def _terminates_at(f: Evaluable, s: complex, start: int):
    """First index after which every term is structurally zero, or ``None``."""
    if not is_nonpositive_integer(s):
        return None
    last = int(round(1 - s.real))  # p_n(s) = 0 from here on
    for loc, _ in f.poles:
        d = loc - s
        if d.imag == 0 and d.real == round(d.real) and d.real >= last:
            last = max(last, int(round(d.real)) + 1)
    return max(last, start)


def apply_G(
    f: Evaluable,
    s: complex,
    tol: float = 1e-12,
    n_cap: int = 2000,
    start: int = 0,
) -> SeriesDiagnostics:
    """Adaptive ``sum_{n >= start} p_n(s) f(s+n)``.

    The tail is certified when ``f`` carries a decay bound; otherwise the
    verdict comes from the partial-sum heuristics and is marked non-certified.
    A term at a genuine pole gives an ``undefined_term`` verdict.  Raises
    :class:`NonConvergenceError` if ``n_cap`` terms leave the verdict open.
    """
    s = complex(s)
    stop = _terminates_at(f, s, start)
    terms, partial = [], []
    pn = 1.0 + 0.0j
    for _ in range(start):
        pn = pn * (s + _) / (_ + 2)
    acc = 0j
    state = {"pn": pn}

    def tail(n):
        if f.bound is None or f.decay is None:
            return math.inf
        b = abs(state["pn"]) * f.bound(s + n)
        rho = f.decay * max(1.0, (abs(s) + n) / (n + 2))
        if not math.isfinite(b) or rho >= 1.0:
            return math.inf
        return b * rho / (1.0 - rho)

    has_bound = f.bound is not None and f.decay is not None
    # the certificate eventually applies, so the series is known to converge
    certifiable = has_bound and f.decay < 1.0
    meta = {"operator": "G", "function": f.name, "s": s, "tol": tol, "start": start,
            "tail": "certified decay bound" if has_bound else "heuristic (non-certified)"}
    verdict = None
    n = start
    while n < start + n_cap:
        try:
            t = g_term(f, s, n, state["pn"])
        except PoleError as exc:
            verdict = Verdict.undefined_term(n, str(exc))
            break
        acc += t
        terms.append(t)
        partial.append(acc)
        verdict = classify(terms, partial, tol, tail if has_bound else None,
                           None if stop is None else stop - start,
                           divergence_checks=not certifiable, power_law_test=True)
        if verdict is not None and verdict.kind == "converged":
            verdict = Verdict.converged(verdict.value, n, verdict.certified, verdict.evidence)
        if verdict is not None:
            break
        state["pn"] = state["pn"] * (s + n) / (n + 2)
        n += 1
    diag = SeriesDiagnostics(tuple(terms), tuple(partial), term_ratios(terms), verdict
                             or Verdict.inconclusive(f"no verdict after {n_cap} terms"), 1, meta)
    if verdict is None:
        raise NonConvergenceError(f"G series undecided after {n_cap} terms", diag)
    return diag


@dataclass(frozen=True)
class TruncationResult:
    N: int
    value: complex
    reference: complex
    abs_error: float


def truncated_G(s: complex, a: float = 1.0, N: int = 10) -> TruncationResult:
    """``G_N(s, a) = sum_{n<=N} p_n(s) [zeta(s+n, a) - a^-(s+n)]`` against ``1/((s-1) a^(s-1))``."""
    s = complex(s)
    if s == 1:
        raise PoleError("G_N has a pole at s = 1")
    f = zeta_family(a)
    pn = 1.0 + 0.0j
    acc = 0j
    for n in range(N + 1):
        acc += g_term(f, s, n, pn)
        pn = pn * (s + n) / (n + 2)
    ref = 1.0 / ((s - 1.0) * real_base_pow(a, s - 1.0))
    return TruncationResult(N, acc, ref, abs(acc - ref))


def truncated_G_difference(s: complex, a: float = 1.0, N: int = 10) -> complex:
    """``G_N(s, a) - 1/((s-1) a^(s-1))`` evaluated without the pole at ``s = 1``."""
    s = complex(s)
    f = zeta_family(a)
    # n = 0 term minus the reference: R(s,a) - a^-s - (a^(1-s) - 1)/(s-1)
    acc = hurwitz_regular(s, a, 1e-15) - real_base_pow(a, -s) - pole_free_power_ratio(a, s)
    pn = s / 2.0
    for n in range(1, N + 1):
        acc += g_term(f, s, n, pn)
        pn = pn * (s + n) / (n + 2)
    return acc


__all__ = [
    "TruncationResult",
    "apply_G",
    "g_term",
    "removable_limit",
    "truncated_G",
    "truncated_G_difference",
]
