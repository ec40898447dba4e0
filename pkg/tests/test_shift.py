import math
import random

import mpmath
import pytest

from zetashift.errors import NonConvergenceError, PoleError
from zetashift.hurwitz import hurwitz_zeta
from zetashift.operators import (
    apply_G,
    constant_family,
    hurid_family,
    l_function_family,
    p_coeff,
    power_family,
    reciprocal_family,
    taylor_shift_partial,
    truncated_G,
    truncated_G_difference,
    zeta_family,
)
from zetashift.characters import character_group

mpmath.mp.dps = 40


def geometric_oracle(s, x):
    s = complex(s)
    if s == 2:
        return 1 / (1 - x)
    return ((1 - x) ** (1 - s) - 1) / (x * (s - 1))


@pytest.mark.parametrize("s", [2, 3 + 2j, -2.5, 0.5 + 7j, -2, -5])
def test_zeta_family_gives_reciprocal(s):
    s = complex(s)
    d = apply_G(zeta_family(1.0), s)
    assert d.verdict.kind == "converged"
    assert abs(d.verdict.value - 1 / (s - 1)) < 1e-10


@pytest.mark.parametrize("a", [0.5, 0.25])
@pytest.mark.parametrize("s", [2.5, -1.5 + 1j, -3])
def test_zeta_family_general_a(a, s):
    s = complex(s)
    d = apply_G(zeta_family(a), s)
    want = 1 / ((s - 1) * a ** (s - 1))
    assert abs(d.verdict.value - want) < 1e-10 * max(1, abs(want))


def test_zeta_family_certified():
    d = apply_G(zeta_family(1.0), 2)
    assert d.verdict.certified
    assert d.meta["tail"] == "certified decay bound"


@pytest.mark.parametrize("x", [0.1, 0.25, 0.5])
@pytest.mark.parametrize("s", [3, 2 + 1j, -1.5, 2])
def test_geometric_oracle(x, s):
    s = complex(s)
    d = apply_G(power_family(x), s, tol=1e-13)
    got = d.verdict.value / x**s
    assert abs(got - geometric_oracle(s, x)) < 1e-10


def test_power_examples():
    d = apply_G(power_family(0.5), 3)
    assert abs(d.verdict.value - 0.375) < 1e-12
    for x in (0.2, 0.7):
        d = apply_G(power_family(x), 2)
        assert abs(d.verdict.value - x**2 / (1 - x)) < 1e-10


def test_removable_term_matches_limit():
    # G[1/(z-1)](-2): compare with the same sum at s = -2 + eps in high precision
    eps = mpmath.mpf("1e-25")
    s = mpmath.mpf(-2) + eps
    ref = sum(mpmath.rf(s, n) / mpmath.factorial(n + 1) / (s + n - 1) for n in range(4))
    d = apply_G(reciprocal_family(), -2)
    assert d.verdict.kind == "converged"
    assert abs(d.verdict.value - complex(ref)) < 1e-14


def test_genuine_pole_is_undefined_term():
    d = apply_G(reciprocal_family(), 1)
    assert d.verdict.kind == "undefined_term"
    assert d.verdict.index == 0
    d = apply_G(reciprocal_family(), -2.5 + 0j)
    assert d.verdict.kind == "converged"


def test_constant_family_diverges():
    d = apply_G(constant_family(1.0), 2, n_cap=500)
    assert d.verdict.kind == "diverging"
    assert d.verdict.label == "diverging (evidence)"


def test_cap_raises_with_diagnostics():
    # x^z with x close to 1 converges too slowly for a tiny cap
    with pytest.raises(NonConvergenceError) as info:
        apply_G(power_family(0.999), 3.5, n_cap=10)
    diag = info.value.diagnostics
    assert len(diag.partial_sums) == 10
    assert diag.verdict.kind == "inconclusive"


def test_start_offset():
    full = apply_G(zeta_family(1.0), 2.5).verdict.value
    head = hurwitz_zeta(2.5, 1.0, 1e-14).value - 1
    rest = apply_G(zeta_family(1.0), 2.5, start=1).verdict.value
    assert abs(full - head - rest) < 1e-11


def test_l_family_poles():
    chi = character_group(4)[1]
    assert l_function_family(chi).poles == ()
    assert l_function_family(character_group(4)[0]).poles


def test_hurid_family_values():
    f = hurid_family(0.5)
    z = 2.5 - 1j
    assert abs(f(z) - 1 / ((z - 1) * 0.5 ** (z - 1))) < 1e-14
    with pytest.raises(PoleError):
        f(1)


def test_zeta_family_bound_random():
    rng = random.Random(99)
    for _ in range(60):
        a = rng.uniform(0.05, 1)
        f = zeta_family(a)
        z = complex(rng.uniform(1.05, 9), rng.uniform(-20, 20))
        assert abs(f(z)) <= f.bound(z) * (1 + 1e-12)


def test_truncated_examples():
    r = truncated_G(2, 1.0, 0)
    assert abs(r.value - (math.pi**2 / 6 - 1)) < 1e-12
    assert r.reference == 1
    assert r.abs_error == abs(r.value - r.reference)
    r = truncated_G(2, 1.0, 60)
    assert r.abs_error < 1e-10
    r = truncated_G(0.5 + 14j, 1.0, 10)
    assert math.isfinite(r.abs_error)
    with pytest.raises(PoleError):
        truncated_G(1, 1.0, 5)


@pytest.mark.parametrize("s", [0.5 + 14j, -3.5 + 2j, 4, -2])
@pytest.mark.parametrize("N", [0, 3, 25])
def test_difference_matches(s, N):
    r = truncated_G(s, 0.5, N)
    d = truncated_G_difference(s, 0.5, N)
    assert abs(d - (r.value - r.reference)) <= 1e-9 * max(1, abs(r.value))


def test_difference_near_pole_is_finite():
    for N in (1, 10, 50):
        d = truncated_G_difference(1 + 1e-9, 1.0, N)
        assert abs(d) < 1


def test_truncated_oracle_mpmath():
    s, a, N = -1.5 + 3j, 0.5, 12
    ref = sum(
        mpmath.rf(mpmath.mpc(s), n) / mpmath.factorial(n + 1) * (mpmath.zeta(mpmath.mpc(s) + n, a) - mpmath.power(a, -(mpmath.mpc(s) + n)))
        for n in range(N + 1)
    )
    assert abs(truncated_G(s, a, N).value - complex(ref)) < 1e-9


def test_truncation_equality_inside_disc():
    # N < |s - 1|: summing converged Taylor shifts reproduces G_N
    s, N = 10.0, 3
    total = 0j
    for n in range(N + 1):
        d = taylor_shift_partial(s, 1.0, n)
        assert d.verdict.kind == "converged"
        total += p_coeff(n, s) * d.verdict.value
    assert abs(total - truncated_G(s, 1.0, N).value) < 1e-6
