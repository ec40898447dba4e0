"""Shift-operator calculus on zeta-type functions.

``G[f](s) = sum_n p_n(s) f(s+n)`` with ``p_n(s) = (s)_n / (n+1)!``, its
convolution inverse with coefficients ``q_n(s) = B_n/n! (s)_n``, truncations
``G_N``, identity checks, and divergence diagnostics for the Taylor-shift
operator that ``G`` replaces.
"""
from .coefficients import CoefficientSeq, p_coeff, p_continuous, p_sequence, q_coeff, q_sequence
from .diagnostics import SeriesDiagnostics, Verdict, classify
from .families import (
    Evaluable,
    constant_family,
    hurid_family,
    l_function_family,
    power_family,
    reciprocal_family,
    zeta_family,
)
from .shift import TruncationResult, apply_G, truncated_G, truncated_G_difference
from .inverse import apply_G_inverse_at_neg_int, g_inverse_partial_sums
from .taylor import p_series_diagnostics, taylor_shift_partial
from .identities import IDENTITIES, IdentityReport, default_grid, verify_grid, verify_identity

__all__ = [
    "CoefficientSeq",
    "p_coeff",
    "p_continuous",
    "p_sequence",
    "q_coeff",
    "q_sequence",
    "SeriesDiagnostics",
    "Verdict",
    "classify",
    "Evaluable",
    "constant_family",
    "hurid_family",
    "l_function_family",
    "power_family",
    "reciprocal_family",
    "zeta_family",
    "TruncationResult",
    "apply_G",
    "truncated_G",
    "truncated_G_difference",
    "apply_G_inverse_at_neg_int",
    "g_inverse_partial_sums",
    "p_series_diagnostics",
    "taylor_shift_partial",
    "IDENTITIES",
    "IdentityReport",
    "default_grid",
    "verify_grid",
    "verify_identity",
]
