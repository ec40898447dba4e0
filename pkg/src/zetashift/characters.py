"""Dirichlet characters and L-functions.

Characters are built from the cyclic decomposition of ``(Z/kZ)^*``: one
primitive-root factor per odd prime power, and the ``{-1, 5}`` pair for
``2^e`` with ``e >= 3``.  Each character is stored as its full value table.

``L(s, chi)`` is available two ways:

* ``hurwitz``: ``L = k^-s sum_r chi(r) zeta(s, r/k)``.  For non-principal
  characters the terms use ``zeta(s, r/k) - 1/(s-1)``, so the individual
  poles cancel before any floating-point subtraction and ``s = 1`` is allowed.
* ``euler_maclaurin``: per-residue Euler-Maclaurin expansion at a fixed even
  order ``p`` whose remainder integral ``int_0^oo (x+X)^(-s-p) psi_p(x) dx`` is
  computed by Gauss-Legendre quadrature on unit intervals plus a tail bound.
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .bernoulli import default_cache
from .errors import CapExceededError, DomainError, PoleError, ToleranceError
from .hurwitz import EPS, _zeta_auto, pole_free_power_ratio
from .numerics import pochhammer, real_base_pow

__all__ = [
    "DirichletCharacter",
    "CharacterGroup",
    "character_group",
    "dirichlet_L",
    "dirichlet_L_with_error",
    "emid_truncated",
    "euler_phi",
    "factorize",
    "primitive_root",
]

MODULUS_CAP = 10**6


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorisation by trial division, primes ascending."""
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def euler_phi(n: int) -> int:
    result = n
    for p, _ in factorize(n):
        result -= result // p
    return result


def primitive_root(p: int, e: int = 1) -> int:
    """Smallest primitive root modulo ``p`` lifted to one modulo ``p**e`` (p odd)."""
    order = p - 1
    qs = [q for q, _ in factorize(order)]
    g = 2
    while any(pow(g, order // q, p) == 1 for q in qs):
        g += 1
    if e >= 2 and pow(g, p - 1, p * p) == 1:
        g += p
    return g


def _root_of_unity(frac: Fraction) -> complex:
    frac = frac % 1
    exact = {
        Fraction(0): 1 + 0j,
        Fraction(1, 4): 1j,
        Fraction(1, 2): -1 + 0j,
        Fraction(3, 4): -1j,
    }
    if frac in exact:
        return exact[frac]
    return cmath.exp(2j * math.pi * float(frac))


@dataclass(frozen=True)
class _Factor:
    modulus: int
    order: int
    logs: dict  # residue mod `modulus` -> discrete log


def _cyclic_factor(modulus: int, gen: int, order: int) -> _Factor:
    logs = {}
    x = 1
    for t in range(order):
        logs[x] = t
        x = x * gen % modulus
    return _Factor(modulus, order, logs)


def _factors(k: int) -> list[_Factor]:
    out = []
    for p, e in factorize(k):
        q = p**e
        if p != 2:
            out.append(_cyclic_factor(q, primitive_root(p, e), q - q // p))
        elif e == 2:
            out.append(_cyclic_factor(4, 3, 2))
        elif e >= 3:
            five = _cyclic_factor(q, 5, q // 4)
            sign = {n: (0 if n % 4 == 1 else 1) for n in range(1, q, 2)}
            out.append(_Factor(q, 2, sign))
            # log base 5 of n * (-1)^sign(n)
            logs5 = {n: five.logs[n if n % 4 == 1 else q - n] for n in range(1, q, 2)}
            out.append(_Factor(q, q // 4, logs5))
    return out


@dataclass(frozen=True)
class DirichletCharacter:
    modulus: int
    values: tuple
    is_principal: bool
    index: int = 0
    exponents: tuple = field(default=(), compare=False)

    def __call__(self, n: int) -> complex:
        return self.values[n % self.modulus]

    def conj(self) -> "DirichletCharacter":
        return DirichletCharacter(
            self.modulus,
            tuple(v.conjugate() for v in self.values),
            self.is_principal,
            -1,
        )


@dataclass(frozen=True)
class CharacterGroup:
    modulus: int
    characters: tuple

    def __len__(self):
        return len(self.characters)

    def __getitem__(self, i):
        return self.characters[i]

    def __iter__(self):
        return iter(self.characters)

    @property
    def principal(self) -> DirichletCharacter:
        return self.characters[0]

    def non_principal(self) -> list[DirichletCharacter]:
        return [c for c in self.characters if not c.is_principal]


def character_group(k: int) -> CharacterGroup:
    """All ``phi(k)`` characters mod ``k`` in canonical order.

    Index 0 is the principal character; the rest follow the lexicographic
    order of exponent tuples over the cyclic factors (primes ascending, the
    ``-1`` factor before the ``5`` factor for powers of two).
    """
    if k < 1:
        raise DomainError("modulus must be a positive integer")
    if k > MODULUS_CAP:
        raise CapExceededError(f"modulus {k} above cap {MODULUS_CAP}")
    factors = _factors(k)
    units = [n for n in range(k) if math.gcd(n, k) == 1]
    logs = {n: tuple(f.logs[n % f.modulus] for f in factors) for n in units}
    chars = []
    for idx, exps in enumerate(itertools.product(*(range(f.order) for f in factors))):
        table = [0j] * k
        for n in units:
            frac = sum(
                (Fraction(t * l, f.order) for t, l, f in zip(exps, logs[n], factors)),
                Fraction(0),
            )
            table[n] = _root_of_unity(frac)
        chars.append(
            DirichletCharacter(k, tuple(table), all(t == 0 for t in exps), idx, exps)
        )
    return CharacterGroup(k, tuple(chars))


# ---------------------------------------------------------------------------
# L-functions


def _residues(chi: DirichletCharacter):
    k = chi.modulus
    return [(r, chi(r)) for r in range(1, k + 1) if chi(r) != 0]


def _L_hurwitz(s: complex, chi: DirichletCharacter, tol: float):
    k = chi.modulus
    res = _residues(chi)
    scale = abs(real_base_pow(k, -s))
    tol_r = tol / (len(res) * max(scale, 1e-300))
    total, err = 0j, 0.0
    regular = not chi.is_principal
    for r, c in res:
        v, e, _ = _zeta_auto(s, r / k, tol_r, regular=regular)
        total += c * v
        err += e
    return real_base_pow(k, -s) * total, scale * err


def _gauss_legendre_unit(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


def _bernoulli_poly_array(p: int, u: np.ndarray) -> np.ndarray:
    table = default_cache()
    acc = np.zeros_like(u)
    for j in range(p + 1):
        acc = acc * u + math.comb(p, j) * table.as_float(j)
    return acc


def _em_remainder(s: complex, X: float, p: int, tol: float):
    """``int_0^oo (x+X)^(-s-p) psi_p(x) dx`` and an error bound for it."""
    sigma = s.real
    sup = default_cache().sup(p)
    u, w = _gauss_legendre_unit(p + 16)
    weights = w * _bernoulli_poly_array(p, u)
    expo = -s - p

    def tail(J):
        return sup * (J + X) ** (1.0 - sigma - p) / (sigma + p - 1.0)

    J = 32
    while tail(J) > tol and J < 1 << 20:
        J *= 2
    pts = np.arange(J)[:, None] + u[None, :] + X
    vals = np.exp(expo * np.log(pts))
    return complex(np.sum(vals @ weights)), tail(J)


def _L_euler_maclaurin(s: complex, chi: DirichletCharacter, tol: float, order=None, head_terms=None):
    k = chi.modulus
    sigma = s.real
    if order is None:
        order = max(6, 2 * math.ceil((13.0 - sigma) / 2.0))
    if order % 2 or order < 2:
        raise DomainError("Euler-Maclaurin order must be an even integer >= 2")
    if sigma + order - 1.0 <= 0:
        raise DomainError("order too small: remainder integral diverges")
    if head_terms is None:
        head_terms = max(4, math.ceil((abs(s) + order) / (2.0 * math.pi))) + 2
    table = default_cache()
    res = _residues(chi)
    scale = abs(real_base_pow(k, -s))
    tol_r = tol / (4.0 * len(res) * max(scale, 1e-300))
    poch_p = pochhammer(s, order)
    pref = poch_p / math.factorial(order)
    total, err, mass = 0j, 0.0, 0.0
    log_x = math.log(head_terms + 1.0)
    for r, c in res:
        a = r / k
        X = head_terms + a
        parts = [real_base_pow(m + a, -s) for m in range(head_terms)]
        head = sum(parts)
        mass += sum(abs(v) for v in parts)
        if chi.is_principal:
            pole = real_base_pow(X, 1.0 - s) / (s - 1.0)
        else:
            # sum_r chi(r) = 0 lets the 1/(s-1) part drop out
            pole = pole_free_power_ratio(X, s)
        xs = real_base_pow(X, -s)
        corr = 0j
        poch = s  # (s)_{l-1} for l = 2
        for l in range(2, order + 1, 2):
            corr += table.as_float(l) / math.factorial(l) * poch * xs * X ** (1 - l)
            poch *= (s + l - 1) * (s + l)
        integral, ierr = _em_remainder(s, X, order, tol_r / max(abs(pref), 1e-300))
        total += c * (head + pole + 0.5 * xs + corr - pref * integral)
        err += abs(pref) * ierr
        mass += abs(pole) + abs(xs) + abs(corr) + abs(pref * integral)
    rounding = 4.0 * EPS * mass * (2.0 + abs(s.imag) * log_x)
    return real_base_pow(k, -s) * total, scale * (err + rounding)


def dirichlet_L_with_error(
    s: complex,
    chi: DirichletCharacter,
    method: str = "hurwitz",
    tol: float = 1e-10,
    **kwargs,
):
    """Like :func:`dirichlet_L` but returns ``(value, estimated error)``."""
    s = complex(s)
    if chi.is_principal and s == 1:
        raise PoleError("L(s, chi_0) has a pole at s = 1")
    if method == "hurwitz":
        return _L_hurwitz(s, chi, tol)
    if method in ("euler_maclaurin", "euler-maclaurin", "em"):
        return _L_euler_maclaurin(s, chi, tol, **kwargs)
    raise DomainError(f"unknown L-function method {method!r}")


def dirichlet_L(
    s: complex,
    chi: DirichletCharacter,
    method: str = "hurwitz",
    tol: float = 1e-10,
    **kwargs,
) -> complex:
    """``L(s, chi)`` with estimated error at most ``tol``.

    ``method`` is ``"hurwitz"`` or ``"euler_maclaurin"``.  A principal
    character at ``s = 1`` raises :class:`PoleError`.
    """
    value, err = dirichlet_L_with_error(s, chi, method, tol, **kwargs)
    if err > tol:
        raise ToleranceError(f"L({s}) estimated error {err:.3g} exceeds tol {tol:.3g}")
    return value


def emid_truncated(
    s: complex,
    chi: DirichletCharacter,
    order: int,
    head_terms: int = 0,
) -> complex:
    """Per-residue Bernoulli rearrangement of ``L(s, chi)`` cut after ``order`` terms.

    Each residue contributes ``sum_{m<=M} (m+a)^-s + sum_{n<=order}
    B_n/n! (s)_n / (s+n-1) X^(1-s-n)`` with ``a = r/k`` and ``X = a + M``.
    With ``head_terms = 0`` this is the formal series anchored at ``r/k``,
    which diverges as ``order`` grows; a positive head makes the truncation
    a good approximation.
    """
    s = complex(s)
    k = chi.modulus
    table = default_cache()
    if chi.is_principal and s == 1:
        raise PoleError("L(s, chi_0) has a pole at s = 1")
    total = 0j
    for r, c in _residues(chi):
        a = r / k
        X = a + head_terms
        acc = sum(real_base_pow(m + a, -s) for m in range(head_terms + 1))
        if chi.is_principal:
            acc += real_base_pow(X, 1.0 - s) / (s - 1.0)
        else:
            acc += pole_free_power_ratio(X, s)
        poch = 1.0 + 0.0j  # (s)_{n-1}
        for n in range(1, order + 1):
            b = table.as_float(n)
            if b:
                acc += b / math.factorial(n) * poch * real_base_pow(X, 1.0 - s - n)
            poch *= s + n - 1
        total += c * acc
    return real_base_pow(k, -s) * total
