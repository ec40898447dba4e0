"""Hurwitz zeta and Dirichlet L-functions, the coefficient shift operator G and its inverse."""
from .bernoulli import bernoulli_number, bernoulli_polynomial, default_cache
from .characters import character_group, dirichlet_L
from .errors import (
    CapExceededError,
    DomainError,
    NonConvergenceError,
    PoleError,
    ToleranceError,
    ZetaShiftError,
)
from .hurwitz import hurwitz_taylor, hurwitz_zeta
from .numerics import complex_gamma, pochhammer

__version__ = "0.1.0"

__all__ = [
    "bernoulli_number",
    "bernoulli_polynomial",
    "default_cache",
    "character_group",
    "dirichlet_L",
    "hurwitz_taylor",
    "hurwitz_zeta",
    "complex_gamma",
    "pochhammer",
    "CapExceededError",
    "DomainError",
    "NonConvergenceError",
    "PoleError",
    "ToleranceError",
    "ZetaShiftError",
]
