"""Complex scalar kernel: gamma, rising factorials and real-base powers."""
from __future__ import annotations

import cmath
import math

from .errors import DomainError, PoleError

__all__ = ["complex_gamma", "log_gamma", "pochhammer", "real_base_pow", "is_nonpositive_integer"]

# Lanczos approximation, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def is_nonpositive_integer(z: complex) -> bool:
    z = complex(z)
    return z.imag == 0.0 and z.real <= 0.0 and z.real == math.floor(z.real)


def _sin_pi(z: complex) -> complex:
    # sin(pi z) with the real part reduced first, so the result keeps its
    # relative accuracy near the integers.
    n = round(z.real)
    w = complex(z.real - n, z.imag)
    val = cmath.sin(math.pi * w)
    return -val if n % 2 else val


def _lanczos(z: complex) -> complex:
    z = z - 1.0
    x = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        x += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return cmath.exp(_LOG_SQRT_2PI + (z + 0.5) * cmath.log(t) - t) * x


def complex_gamma(z: complex) -> complex:
    """Gamma function of a complex argument.

    Lanczos approximation on Re z >= 1/2, reflection formula elsewhere.
    Relative error stays below 1e-12 for |z| <= 50.
    """
    z = complex(z)
    if is_nonpositive_integer(z):
        raise PoleError(f"gamma has a pole at z = {z.real:g}")
    if z.imag == 0.0 and z.real == math.floor(z.real) and z.real <= 171:
        return complex(math.factorial(int(z.real) - 1))
    if z.real < 0.5:
        return math.pi / (_sin_pi(z) * _lanczos(1.0 - z))
    return _lanczos(z)


# B_{2k} / (2k (2k-1)) for the Stirling series
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)


def log_gamma(z: complex) -> complex:
    """A logarithm of Gamma(z) for Re z > 0 (Stirling series after shifting to Re z >= 15).

    The branch is not the principal one; ``exp(log_gamma(z))`` is what callers
    use, and it stays representable long after ``complex_gamma`` overflows.
    """
    z = complex(z)
    if z.real <= 0.0:
        raise DomainError("log_gamma needs Re z > 0")
    shift = 0j
    while z.real < 15.0:
        shift += cmath.log(z)
        z += 1.0
    inv = 1.0 / z
    inv2 = inv * inv
    ser = 0j
    for c in reversed(_STIRLING):
        ser = ser * inv2 + c
    return (z - 0.5) * cmath.log(z) - z + _LOG_SQRT_2PI + ser * inv - shift


def pochhammer(s: complex, n: int) -> complex:
    """Rising factorial ``s (s+1) ... (s+n-1)``; the empty product is 1."""
    if n < 0:
        raise DomainError("pochhammer needs n >= 0")
    s = complex(s)
    out = 1.0 + 0.0j
    for j in range(n):
        out *= s + j
    return out


def real_base_pow(a: float, w: complex) -> complex:
    """``a**w`` for real ``a > 0`` using the real logarithm of ``a``.

    The modulus goes through ``math.pow`` so real exponents stay correctly
    rounded; only the phase picks up the ``|Im w| * ln a`` rounding.
    """
    if not a > 0:
        raise DomainError(f"real_base_pow needs a positive base, got {a!r}")
    w = complex(w)
    if a == 1.0:
        return 1.0 + 0.0j
    mag = math.pow(a, w.real)
    if w.imag == 0.0:
        return complex(mag, 0.0)
    phase = w.imag * math.log(a)
    return complex(mag * math.cos(phase), mag * math.sin(phase))
