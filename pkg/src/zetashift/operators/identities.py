"""Residual checks for the identities the operator calculus produces."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from ..characters import character_group, dirichlet_L
from ..errors import DomainError, PoleError, ToleranceError
from ..hurwitz import hurwitz_taylor, hurwitz_zeta, pole_free_power_ratio, zeta_minus_head
from ..numerics import real_base_pow
from .coefficients import p_sequence
from .families import l_function_family, zeta_family
from .shift import apply_G


@dataclass(frozen=True)
class IdentityReport:
    identity: str
    params: dict
    value: complex
    reference: complex
    residual: float
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "identity": self.identity,
            "params": self.params,
            "value": self.value,
            "reference": self.reference,
            "residual": self.residual,
            "details": self.details,
        }


def _check_s(s):
    s = complex(s)
    if s == 1:
        raise PoleError("identity excluded at the pole s = 1")
    return s


def hurwitz_identity(s, a: float = 1.0, tol: float = 1e-12) -> IdentityReport:
    """zeta(s,a) against 1/((s-1)a^(s-1)) + a^-s - sum_{n>=1} p_n(s)[zeta(s+n,a) - a^-(s+n)]."""
    s = _check_s(s)
    try:
        z = hurwitz_zeta(s, a, tol)
    except ToleranceError:
        # rounding floor above tol (large |zeta|); take the default accuracy
        z = hurwitz_zeta(s, a)
    lhs = z.value
    tail = apply_G(zeta_family(a), s, tol, start=1)
    rhs = 1.0 / ((s - 1.0) * real_base_pow(a, s - 1.0)) + real_base_pow(a, -s) - tail.value
    return IdentityReport(
        "hurwitz_identity", {"s": s, "a": a}, lhs, rhs, abs(lhs - rhs),
        {"terms": tail.verdict.n_used + 1, "certified": tail.verdict.certified, "zeta_error": z.est_error},
    )


def van_gorder_zeta(s, a: float = 1.0, tol: float = 1e-13) -> IdentityReport:
    """G[zeta(., a) - a^-.](s) against 1/((s-1) a^(s-1))."""
    s = _check_s(s)
    d = apply_G(zeta_family(a), s, tol)
    ref = 1.0 / ((s - 1.0) * real_base_pow(a, s - 1.0))
    return IdentityReport(
        "van_gorder_zeta", {"s": s, "a": a}, d.value, ref, abs(d.value - ref),
        {"terms": d.verdict.n_used + 1, "certified": d.verdict.certified},
    )


def l_function(s, k: int = 4, index: int = 1, tol: float = 1e-12) -> IdentityReport:
    """G applied to sum_r chi(r) zeta(., r/k + 1), plus the rearranged L identity.

    ``residual`` is the larger of the two; both are kept in ``details``.
    """
    s = complex(s)
    group = character_group(k)
    if not 0 <= index < len(group):
        raise DomainError(f"character index {index} out of range for modulus {k}")
    chi = group[index]
    if s == 1 and chi.is_principal:
        raise PoleError("principal L-function has a pole at s = 1")
    res = [(r, chi(r)) for r in range(1, k + 1) if chi(r) != 0]
    fam = l_function_family(chi)
    full = apply_G(fam, s, tol)
    # k^(s-1)/(s-1) sum chi(r) r^(1-s) = sum chi(r) [(r/k)^(1-s) - 1]/(s-1) + (sum chi)/(s-1)
    ref = sum(c * pole_free_power_ratio(r / k, s) for r, c in res)
    if chi.is_principal:
        ref += sum(c for _, c in res) / (s - 1.0)
    first = abs(full.value - ref)

    tail = apply_G(fam, s, tol, start=1)
    lhs = dirichlet_L(s, chi, method="euler_maclaurin", tol=1e-10)
    lhs -= sum(c * real_base_pow(r, -s) for r, c in res)
    rhs = ref / k * real_base_pow(k, 1.0 - s) - real_base_pow(k, -s) * tail.value
    second = abs(lhs - rhs)
    return IdentityReport(
        "l_function", {"s": s, "k": k, "index": index}, full.value, ref, max(first, second),
        {"operator_residual": first, "rearranged_residual": second,
         "rearranged_value": lhs, "rearranged_reference": rhs},
    )


def trivial_zero_direct(m: int = 1, a: float = 1.0) -> IdentityReport:
    """p_m(-m)/(m+2) + sum_{n<=m} p_n(-m)[zeta(-m+n,a) - a^(m-n)] against -a^(m+1)/(m+1)."""
    if m < 1:
        raise DomainError("m must be a positive integer")
    p = p_sequence(-m, m + 1)
    val = p[m] / (m + 2)
    for n in range(m + 1):
        val += p[n] * zeta_minus_head(complex(n - m), a, 1e-15)
    ref = -(a ** (m + 1)) / (m + 1)
    return IdentityReport("trivial_zero_direct", {"m": m, "a": a}, val, ref, abs(val - ref))


def trivial_zero_taylor(m: int = 1, a: float = 1.0, K: int = 40) -> IdentityReport:
    """Derivative-expanded trivial-zero identity truncated after ``K`` derivative terms.

    Uses ``D^k[zeta(s,a) - a^-s] = zeta^(k)(s,a) - (-log a)^k a^-s`` at ``s = -m``,
    with all ``K`` Taylor coefficients from one Cauchy contour.
    """
    if m < 1:
        raise DomainError("m must be a positive integer")
    s = complex(-m)
    p = p_sequence(s, m + 1)
    radius = m + 2.0
    exp = hurwitz_taylor(s, a, K, radius, include_head=False)
    val = p[m] / (m + 2)
    for k in range(K + 1):
        moment = sum(p[n] * n**k for n in range(m + 1))
        val += exp.coeff(k) * moment
    # omitted k > K: pole part is geometric in n/(m+1), entire part by Cauchy
    bound = 0.0
    for n in range(1, m + 1):
        q = n / (m + 1.0)
        bound += abs(p[n]) * (q ** (K + 1) / ((m + 1.0) * (1.0 - q)) + exp.entire_tail_bound(n, K + 1))
    ref = -(a ** (m + 1)) / (m + 1)
    return IdentityReport(
        "trivial_zero_taylor", {"m": m, "a": a, "K": K}, val, ref, abs(val - ref),
        {"truncation_bound": bound, "contour_nodes": exp.nodes},
    )


IDENTITIES: dict[str, Callable[..., IdentityReport]] = {
    "hurwitz_identity": hurwitz_identity,
    "van_gorder_zeta": van_gorder_zeta,
    "l_function": l_function,
    "trivial_zero_direct": trivial_zero_direct,
    "trivial_zero_taylor": trivial_zero_taylor,
}


def _l_grid():
    out = []
    for k in (3, 4, 5, 8):
        for chi in character_group(k).non_principal():
            for s in (2, 3 + 1j, -1.5):
                out.append({"s": s, "k": k, "index": chi.index})
    return out


def default_grid(which: str) -> list[dict]:
    which = which.replace("-", "_")
    if which == "hurwitz_identity":
        return [{"s": s, "a": a} for s in (-4.5, -2, -0.5 + 3j, 2 + 1j, 5, 0.5 + 10j) for a in (1.0, 0.5, 0.25)]
    if which == "van_gorder_zeta":
        return [{"s": s} for s in (2, 3 + 2j, -2.5, -2)]
    if which == "l_function":
        return _l_grid()
    if which == "trivial_zero_direct":
        return [{"m": m, "a": a} for m in range(1, 6) for a in (1.0, 0.5)]
    if which == "trivial_zero_taylor":
        return [{"m": m, "a": 1.0, "K": 40} for m in (1, 2)]
    raise DomainError(f"unknown identity {which!r}")


def verify_identity(which: str, **params) -> IdentityReport:
    key = which.replace("-", "_")
    if key not in IDENTITIES:
        raise DomainError(f"unknown identity {which!r}; choose from {sorted(IDENTITIES)}")
    return IDENTITIES[key](**params)


def verify_grid(which: str, grid: list[dict] | None = None) -> list[IdentityReport]:
    grid = default_grid(which) if grid is None else grid
    return [verify_identity(which, **params) for params in grid]


__all__ = [
    "IDENTITIES",
    "IdentityReport",
    "default_grid",
    "verify_grid",
    "verify_identity",
    "hurwitz_identity",
    "van_gorder_zeta",
    "l_function",
    "trivial_zero_direct",
    "trivial_zero_taylor",
]
