"""Hurwitz zeta function on C \\ {1} by Euler-Maclaurin summation.

The evaluator sums ``M`` terms directly and applies ``K`` Bernoulli
correction pairs at ``X = M + a``::

    zeta(s, a) = sum_{m<M} (m+a)^-s + X^(1-s)/(s-1) + X^-s/2
                 + sum_{l=1}^{K} B_{2l}/(2l)! (s)_{2l-1} X^(-s-2l+1) + R

with ``|R| <= |T_{K+1}| (1 + |s+2K+1| / (Re s + 2K + 1))``, where ``T_{K+1}``
is the first omitted correction.  ``M`` and ``K`` are chosen adaptively.

Derivatives in ``s`` go through Cauchy's integral formula applied to the
entire function ``zeta(z, a) - a^-z - 1/(z-1)``; the head term and the pole
have closed-form derivatives and are added back exactly.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .bernoulli import default_cache
from .errors import DomainError, NonConvergenceError, PoleError, ToleranceError
from .numerics import log_gamma, real_base_pow

__all__ = [
    "EMParams",
    "HurwitzEval",
    "TaylorExpansion",
    "hurwitz_zeta",
    "em_hurwitz",
    "hurwitz_regular",
    "zeta_minus_head",
    "hurwitz_zeta_deriv",
    "hurwitz_taylor",
    "pole_free_power_ratio",
    "EM_MAX_ORDER",
]

EPS = 2.220446049250313e-16
EM_MAX_ORDER = 63  # B_{2K+2} must stay inside the default Bernoulli table
M_CAP = 20000


@dataclass(frozen=True)
class EMParams:
    head_terms: int
    order: int
    target_tol: float


@dataclass(frozen=True)
class HurwitzEval:
    value: complex
    est_error: float
    params_used: EMParams


@lru_cache(maxsize=None)
def _em_coefficients() -> tuple:
    """``B_{2l} / (2l)!`` as floats for l = 0 .. EM_MAX_ORDER + 1."""
    table = default_cache()
    return tuple(
        float(table.number(2 * l) / Fraction(math.factorial(2 * l)))
        for l in range(EM_MAX_ORDER + 2)
    )


def pole_free_power_ratio(x: float, s: complex) -> complex:
    """``(x^(1-s) - 1) / (s - 1)`` without cancellation near ``s = 1``."""
    s = complex(s)
    lx = math.log(x)
    w = (1.0 - s) * lx
    if abs(w) > 0.5:
        return (real_base_pow(x, 1.0 - s) - 1.0) / (s - 1.0)
    # (e^w - 1)/w as a power series
    term = 1.0 + 0.0j
    acc = term
    for j in range(1, 30):
        term *= w / (j + 1)
        acc += term
        if abs(term) < 1e-18 * abs(acc):
            break
    return -lx * acc


def _csum(values):
    return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))


def _em_raw(s: complex, a: float, M: int, K: int, regular: bool):
    """Fixed-parameter evaluation; returns (value, truncation bound, rounding estimate)."""
    sigma, t = s.real, abs(s.imag)
    head = [real_base_pow(m + a, -s) for m in range(M)]
    rnd = sum(abs(h) * (2.0 + t * abs(math.log(m + a))) for m, h in enumerate(head))
    X = M + a
    lx = math.log(X)
    xs = real_base_pow(X, -s)
    if regular:
        integral = pole_free_power_ratio(X, s)
    else:
        integral = X * xs / (s - 1.0)
    rnd += abs(integral) * (3.0 + t * abs(lx)) + abs(xs) * (1.0 + t * abs(lx))
    coef = _em_coefficients()
    poch = s
    pw = xs / X
    corr = []
    for l in range(1, K + 1):
        corr.append(coef[l] * poch * pw)
        poch *= (s + 2 * l - 1) * (s + 2 * l)
        pw /= X * X
    nxt = abs(coef[K + 1] * poch * pw)
    denom = sigma + 2 * K + 1
    trunc = nxt * (1.0 + abs(s + 2 * K + 1) / denom) if denom > 0 else math.inf
    rnd += 4.0 * sum(abs(c) for c in corr)
    value = _csum(head) + integral + 0.5 * xs + _csum(corr)
    return value, trunc, 2.0 * EPS * rnd


def _best_order(s: complex, a: float, M: int, tol: float):
    """Smallest K whose remainder bound is below ``tol`` (else the best K)."""
    sigma = s.real
    X = M + a
    coef = _em_coefficients()
    xs_abs = math.pow(X, -sigma)
    poch = s
    pw = xs_abs / X
    best_k, best_bound = None, math.inf
    rising = 0
    for K in range(1, EM_MAX_ORDER + 1):
        # first omitted term is l = K + 1
        poch *= (s + 2 * K - 1) * (s + 2 * K)
        pw /= X * X
        denom = sigma + 2 * K + 1
        if denom <= 0:
            continue
        bound = abs(coef[K + 1] * poch) * pw * (1.0 + abs(s + 2 * K + 1) / denom)
        if bound < best_bound:
            best_k, best_bound = K, bound
            rising = 0
        else:
            rising += 1
            if rising > 3:
                break
        if bound <= tol:
            break
    return best_k, best_bound


def _initial_head(s: complex, a: float) -> int:
    return max(1, int(math.ceil((abs(s) + 30.0) / (2.0 * math.pi) - a)))


REFLECT_BELOW = -8.0
_TWO_PI = 2.0 * math.pi


def _periodic_zeta(a: float, w: complex, cut: float):
    """``sum_{n>=1} e^(2 pi i n a) n^-w`` for ``Re w > 1``; stops once the tail is below ``cut``.

    Returns ``(value, tail bound, sum of |terms|)``.
    """
    sw = w.real
    vals = []
    mass = 0.0
    n = 1
    while True:
        ph = _TWO_PI * ((n * a) % 1.0)
        term = complex(math.cos(ph), math.sin(ph)) * real_base_pow(n, -w)
        vals.append(term)
        mass += abs(term) * (1.0 + abs(w.imag) * math.log(n))
        tail = n ** (1.0 - sw) / (sw - 1.0)
        if tail <= cut or n >= 100000:
            return _csum(vals), tail, mass
        n += 1


def _reflected(s: complex, a: float, tol: float, regular: bool):
    """``zeta(s, a)`` for ``Re s < 0`` from Hurwitz's formula

    ``zeta(s, a) = Gamma(w) (2 pi)^-w [e^(-i pi w/2) F(a, w) + e^(i pi w/2) F(-a, w)]``,
    ``w = 1 - s``, with ``F`` the periodic zeta function.  Parameters in
    ``(1, 2]`` are shifted down by one first.
    """
    shift = 0.0j
    if a > 1.0:
        a -= 1.0
        shift = real_base_pow(a, -s)
    w = 1.0 - s
    log_pref = log_gamma(w) - w * math.log(_TWO_PI)
    try:
        p_minus = cmath.exp(log_pref - 0.5j * math.pi * w)
        p_plus = cmath.exp(log_pref + 0.5j * math.pi * w)
    except OverflowError:
        return complex(math.inf, 0.0), math.inf
    big = max(abs(p_minus), abs(p_plus))
    cut = 0.01 * tol / big if big > 0 else 1.0
    f_minus, tail_m, mass_m = _periodic_zeta(a, w, cut)
    f_plus, tail_p, mass_p = _periodic_zeta(-a, w, cut)
    value = p_minus * f_minus + p_plus * f_plus - shift
    # exp() of a large argument keeps only |log_pref| * EPS relative accuracy
    amp = 8.0 * EPS * (4.0 + abs(log_pref) + abs(w))
    est = abs(p_minus) * (tail_m + amp * mass_m) + abs(p_plus) * (tail_p + amp * mass_p)
    est += 2.0 * EPS * abs(shift) * (1.0 + abs(s.imag * math.log(a)))
    if regular:
        value -= 1.0 / (s - 1.0)
    return value, est + EPS * abs(value)


def _zeta_auto(s: complex, a: float, tol: float, regular: bool = False):
    """Adaptive evaluation without raising on an unmet tolerance.

    Returns ``(value, est_error, EMParams)``; the caller decides what to do
    when ``est_error > tol``.  Far in the left half-plane the head sum
    cancels catastrophically, so Hurwitz's formula is used there instead.
    """
    s = complex(s)
    if s.real < REFLECT_BELOW:
        value, est = _reflected(s, a, tol, regular)
        return value, est, EMParams(0, 0, tol)
    M0 = _initial_head(s, a)
    M = M0
    best = None

    def consider(M):
        nonlocal best
        K, _ = _best_order(s, a, M, 0.5 * tol)
        if K is None:
            return None
        value, trunc, rnd = _em_raw(s, a, M, K, regular)
        est = trunc + rnd
        if best is None or est < best[1]:
            best = (value, est, EMParams(M, K, tol))
        return trunc, rnd

    while M <= M_CAP:
        got = consider(M)
        if got is not None:
            trunc, rnd = got
            if trunc + rnd <= tol:
                break
            if trunc <= 0.5 * tol:
                # rounding-limited; a longer head only adds more rounding
                break
        M = int(M * 1.5) + 1
    if best is None or best[1] > tol:
        # left of the critical strip the head terms are large, so shorter
        # heads with higher order can win
        for M in range(M0 - 1, -1, -1):
            got = consider(M)
            if best is not None and (best[1] <= tol or (got is not None and got[0] > 1e3 * best[1])):
                break
    if best is None:
        raise ToleranceError(f"no Euler-Maclaurin parameters for s={s}")
    return best


def _check_a(a: float) -> float:
    a = float(a)
    if not 0.0 < a <= 1.0:
        raise DomainError(f"Hurwitz parameter must satisfy 0 < a <= 1, got {a!r}")
    return a


def hurwitz_zeta(s: complex, a: float = 1.0, tol: float = 1e-10) -> HurwitzEval:
    """``zeta(s, a)`` for ``s != 1`` and ``0 < a <= 1`` with error estimate <= ``tol``.

    Raises :class:`PoleError` at ``s = 1`` and :class:`ToleranceError` if no
    ``(M, K)`` within the caps meets ``tol`` (typically because rounding in the
    head sum dominates far in the left half-plane).
    """
    s = complex(s)
    a = _check_a(a)
    if s == 1:
        raise PoleError("zeta(s, a) has a pole at s = 1")
    value, est, params = _zeta_auto(s, a, tol)
    if est > tol:
        raise ToleranceError(
            f"zeta({s}, {a}) reached est. error {est:.3g}, above tol {tol:.3g}"
        )
    return HurwitzEval(value, est, params)


def em_hurwitz(s: complex, a: float, head_terms: int, order: int) -> HurwitzEval:
    """Euler-Maclaurin evaluation at fixed ``(M, K)``; ``est_error`` is the
    remainder bound plus a rounding estimate."""
    s = complex(s)
    if s == 1:
        raise PoleError("zeta(s, a) has a pole at s = 1")
    if not 1 <= order <= EM_MAX_ORDER:
        raise DomainError(f"order must lie in [1, {EM_MAX_ORDER}]")
    if head_terms < 0:
        raise DomainError("head_terms must be non-negative")
    value, trunc, rnd = _em_raw(s, float(a), head_terms, order, False)
    return HurwitzEval(value, trunc + rnd, EMParams(head_terms, order, math.nan))


def hurwitz_regular(s: complex, a: float, tol: float = 1e-13) -> complex:
    """``zeta(s, a) - 1/(s - 1)``, entire in ``s``; any ``a > 0``."""
    if not a > 0:
        raise DomainError("a must be positive")
    return _zeta_auto(complex(s), float(a), tol, regular=True)[0]


def zeta_minus_head(s: complex, a: float, tol: float = 1e-13) -> complex:
    """``zeta(s, a) - a^-s``, evaluated as ``zeta(s, a + 1)`` (no cancellation)."""
    s = complex(s)
    if s == 1:
        raise PoleError("zeta(s, a) - a^-s has a pole at s = 1")
    return _zeta_auto(s, float(a) + 1.0, tol)[0]


def zeta_minus_head_with_error(s: complex, a: float, tol: float = 1e-13):
    s = complex(s)
    if s == 1:
        raise PoleError("zeta(s, a) - a^-s has a pole at s = 1")
    value, est, _ = _zeta_auto(s, float(a) + 1.0, tol)
    return value, est


# ---------------------------------------------------------------------------
# Taylor coefficients and derivatives


@dataclass
class TaylorExpansion:
    """Taylor data of ``zeta(z, a)`` (or ``zeta(z, a) - a^-z``) about ``center``.

    ``entire[k]`` are the coefficients of ``E(z) = zeta(z, a+1) - 1/(z-1)``
    computed on a circle of ``radius``; ``max_modulus`` is the largest
    ``|E|`` seen on the contour, giving the Cauchy estimate
    ``|e_k| <= max_modulus / radius**k`` for coefficients beyond the table.
    """

    center: complex
    a: float
    radius: float
    entire: np.ndarray
    max_modulus: float
    include_head: bool
    nodes: int

    def pole_coeff(self, k: int) -> complex:
        return (-1) ** k / (self.center - 1.0) ** (k + 1)

    def head_coeff(self, k: int) -> complex:
        if not self.include_head:
            return 0.0j
        la = -math.log(self.a)
        return la**k * real_base_pow(self.a, -self.center) / math.factorial(k)

    def coeff(self, k: int) -> complex:
        """k-th Taylor coefficient ``f^(k)(center) / k!``."""
        e = self.entire[k] if k < len(self.entire) else 0.0
        return self.pole_coeff(k) + e + self.head_coeff(k)

    def entire_tail_bound(self, n: float, start: int) -> float:
        """Bound on ``sum_{k >= start} |e_k| n^k`` from the Cauchy estimate."""
        q = n / self.radius
        if q >= 1.0:
            return math.inf
        return self.max_modulus * q**start / (1.0 - q)


def _circle_values(s, a, radius, count, tol):
    nodes = s + radius * np.exp(2j * np.pi * np.arange(count) / count)
    out = [_zeta_auto(complex(z), a + 1.0, tol, regular=True) for z in nodes]
    return np.array([v for v, _, _ in out]), max(e for _, e, _ in out)


def _refine(s, a, radius, count, prev, tol):
    """Values on ``count`` nodes, reusing the even-indexed ones from ``count/2``.

    ``prev`` and the result are ``(values, largest estimated error)`` pairs.
    """
    if prev is None:
        return _circle_values(s, a, radius, count, tol)
    prev_vals, prev_err = prev
    vals = np.empty(count, dtype=complex)
    vals[0::2] = prev_vals
    odd = s + radius * np.exp(2j * np.pi * (2 * np.arange(count // 2) + 1) / count)
    out = [_zeta_auto(complex(z), a + 1.0, tol, regular=True) for z in odd]
    vals[1::2] = [v for v, _, _ in out]
    return vals, max([prev_err] + [e for _, e, _ in out])


def hurwitz_taylor(
    s: complex,
    a: float,
    order: int,
    radius: float = 1.0,
    tol: float = 1e-13,
    include_head: bool = True,
    node_cap: int = 1 << 14,
) -> TaylorExpansion:
    """Taylor coefficients of ``zeta(z, a)`` about ``s`` up to ``order``.

    The entire remainder is sampled on ``|z - s| = radius`` and transformed
    with an FFT; the node count doubles until the scaled coefficients
    ``e_k radius**k`` move by less than ``tol`` relative to ``max(1, max|E|)``.
    """
    s = complex(s)
    if abs(s - 1.0) < 1e-6:
        raise PoleError("expansion centre too close to the pole at s = 1")
    count = 32
    while count < 2 * (order + 1):
        count *= 2
    scale = radius ** np.arange(order + 1, dtype=float)
    samples = _refine(s, a, radius, count, None, 0.01 * tol)
    scaled = (np.fft.fft(samples[0]) / count)[: order + 1]
    while True:
        if count * 2 > node_cap:
            raise NonConvergenceError(f"Taylor coefficients did not settle within {node_cap} nodes")
        count *= 2
        samples = _refine(s, a, radius, count, samples, 0.01 * tol)
        vals, noise = samples
        new = (np.fft.fft(vals) / count)[: order + 1]
        # evaluation noise sets a floor below which refinement cannot help
        floor = max(tol * max(1.0, float(np.max(np.abs(vals)))), 4.0 * noise)
        done = np.max(np.abs(new - scaled)) <= floor
        scaled = new
        if done:
            break
    return TaylorExpansion(
        center=s,
        a=float(a),
        radius=float(radius),
        entire=scaled / scale,
        max_modulus=float(np.max(np.abs(samples[0]))),
        include_head=include_head,
        nodes=count,
    )


def hurwitz_zeta_deriv(
    s: complex,
    a: float = 1.0,
    k: int = 1,
    tol: float = 1e-10,
    node_cap: int = 4096,
    radius: float = 1.0,
) -> complex:
    """k-th derivative in ``s`` of ``zeta(s, a)``.

    ``k!/(2 pi)`` times the trapezoid sum of ``E(s + r e^{i theta}) (r e^{i theta})^-k``
    over equally spaced nodes, doubling the node count until successive
    estimates differ by less than ``tol``; pole and head derivatives are exact.
    """
    s = complex(s)
    a = _check_a(a)
    if k < 0:
        raise DomainError("derivative order must be non-negative")
    if abs(s - 1.0) < 1e-6:
        raise PoleError("derivative requested within 1e-6 of the pole at s = 1")
    if k == 0:
        return hurwitz_zeta(s, a, tol).value
    fact = math.factorial(k)
    count = 16
    while count < 2 * k + 2:
        count *= 2
    samples = _refine(s, a, radius, count, None, 1e-15)
    est = fact * (np.fft.fft(samples[0])[k] / count) / radius**k
    while True:
        if count * 2 > node_cap:
            raise NonConvergenceError(f"derivative did not settle within {node_cap} nodes")
        count *= 2
        samples = _refine(s, a, radius, count, samples, 1e-15)
        new = fact * (np.fft.fft(samples[0])[k] / count) / radius**k
        if abs(new - est) < max(tol, 4.0 * fact * samples[1] / radius**k):
            est = new
            break
        est = new
    pole = (-1) ** k * fact / (s - 1.0) ** (k + 1)
    head = (-math.log(a)) ** k * real_base_pow(a, -s)
    return complex(est + pole + head)
