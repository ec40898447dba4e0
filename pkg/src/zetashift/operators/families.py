"""Functions the operators act on, with their pole sets and decay bounds."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from ..characters import DirichletCharacter
from ..errors import DomainError, PoleError
from ..hurwitz import zeta_minus_head
from ..numerics import real_base_pow

EVAL_TOL = 1e-15


@dataclass(frozen=True)
class Evaluable:
    """``func`` plus declared simple poles ``((location, residue), ...)``.

    ``bound(z)`` (optional) majorises ``|func(z)|``; ``decay`` is a constant
    with ``bound(z+1) <= decay * bound(z)`` wherever ``bound(z)`` is finite.
    Together they let the shift operators certify their tails.
    """

    func: Callable[[complex], complex]
    poles: tuple = ()
    bound: Optional[Callable[[complex], float]] = None
    decay: Optional[float] = None
    name: str = "f"

    def __call__(self, z: complex) -> complex:
        return self.func(complex(z))

    def residue_at(self, z: complex) -> Optional[complex]:
        for loc, res in self.poles:
            if loc == z:
                return res
        return None


def zeta_family(a: float = 1.0) -> Evaluable:
    """``f(z) = zeta(z, a) - a^-z``, i.e. ``zeta(z, a+1)``; simple pole at 1 with residue 1."""
    if not 0 < a <= 1:
        raise DomainError("a must lie in (0, 1]")

    def bound(z):
        # first term plus the integral from 1: (1+a)^-sigma (sigma+a)/(sigma-1)
        sig = z.real
        if sig <= 1.0:
            return math.inf
        return (sig + a) / (sig - 1.0) * (1.0 + a) ** (-sig)

    return Evaluable(
        lambda z: zeta_minus_head(z, a, EVAL_TOL),
        ((1 + 0j, 1 + 0j),),
        bound,
        1.0 / (1.0 + a),
        f"zeta(z,{a:g})-{a:g}^-z",
    )


def power_family(x: float) -> Evaluable:
    """``f(z) = x^z`` for real ``0 < x < 1``."""
    if not 0 < x < 1:
        raise DomainError("x must lie in (0, 1)")
    return Evaluable(
        lambda z: real_base_pow(x, z),
        (),
        lambda z: x**z.real,
        x,
        f"{x:g}^z",
    )


def constant_family(c: complex = 1.0) -> Evaluable:
    c = complex(c)
    return Evaluable(lambda z: c, (), None, None, f"const({c})")


def reciprocal_family() -> Evaluable:
    """``f(z) = 1/(z-1)``."""

    def f(z):
        if z == 1:
            raise PoleError("1/(z-1) has a pole at z = 1")
        return 1.0 / (z - 1.0)

    return Evaluable(f, ((1 + 0j, 1 + 0j),), None, None, "1/(z-1)")


def hurid_family(a: float = 1.0) -> Evaluable:
    """``f(z) = 1 / ((z-1) a^(z-1))``."""

    def f(z):
        if z == 1:
            raise PoleError("pole at z = 1")
        return 1.0 / ((z - 1.0) * real_base_pow(a, z - 1.0))

    return Evaluable(f, ((1 + 0j, 1 + 0j),), None, None, f"1/((z-1){a:g}^(z-1))")


def l_function_family(chi: DirichletCharacter) -> Evaluable:
    """``f(z) = sum_r chi(r) zeta(z, r/k + 1) = k^z L(z, chi) - sum_r chi(r) (k/r)^z``.

    Residue at 1 is ``sum_r chi(r)`` (zero for non-principal characters).
    """
    k = chi.modulus
    res = [(r, chi(r)) for r in range(1, k + 1) if chi(r) != 0]
    total = sum(c for _, c in res)
    poles = () if not chi.is_principal else ((1 + 0j, complex(total)),)

    def f(z):
        if z == 1 and chi.is_principal:
            raise PoleError("principal L-family has a pole at z = 1")
        return sum(c * zeta_minus_head(z, r / k, EVAL_TOL) for r, c in res)

    def bound(z):
        sig = z.real
        if sig <= 1.0:
            return math.inf
        return sum(
            abs(c) * (sig + r / k) / (sig - 1.0) * (1.0 + r / k) ** (-sig) for r, c in res
        )

    return Evaluable(f, poles, bound, 1.0 / (1.0 + 1.0 / k), f"L-family mod {k} #{chi.index}")
