import math

import mpmath
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from zetashift.bernoulli import bernoulli_number
from zetashift.errors import CapExceededError, DomainError
from zetashift.operators import CoefficientSeq, p_coeff, p_continuous, p_sequence, q_coeff, q_sequence

ANCHORS = [2, -0.5, 1 + 2j, -3.7]


def mp_p(n, s):
    return complex(mpmath.rf(mpmath.mpc(s), n) / mpmath.factorial(n + 1))


def mp_q(n, s):
    # mpmath also uses B_1 = -1/2
    return complex(mpmath.bernoulli(n) / mpmath.factorial(n) * mpmath.rf(mpmath.mpc(s), n))


def test_p_examples():
    for s in (0.3, 2 - 5j, -7):
        assert p_coeff(0, s) == 1
    for n in range(40):
        assert abs(p_coeff(n, 1) - 1 / (n + 1)) < 1e-15
        assert abs(p_coeff(n, 2) - 1) < 1e-13
    assert p_coeff(4, -3) == 0


@pytest.mark.parametrize("s", [0.5, -2.5 + 1j, 7 - 3j, 1e-3])
def test_p_against_mpmath(s):
    for n in (1, 2, 5, 20, 60, 150):
        ref = mp_p(n, s)
        assert abs(p_coeff(n, s) - ref) <= 1e-13 * abs(ref)


def test_p_sequence_matches_coeff():
    s = 0.7 - 2j
    seq = p_sequence(s, 50)
    for n, v in enumerate(seq):
        assert abs(v - p_coeff(n, s)) <= 1e-14 * abs(v)


@given(st.integers(1, 30), st.integers(0, 40))
def test_p_vanishes_past_negative_integer(m, extra):
    # p_n(-m) = 0 once the product reaches the factor (s + m)
    n = m + 1 + extra
    assert p_coeff(n, -m) == 0
    assert p_coeff(m, -m) != 0


def test_p_at_zero():
    # the product contains the factor s + 0
    assert all(p_coeff(n, 0) == 0 for n in range(1, 20))


@pytest.mark.parametrize("s", [1, 2, 3, 4])
def test_p_lower_bound(s):
    fac = math.factorial(s - 1)
    for n in range(1, 51):
        assert p_coeff(n, s).real >= 1 / (fac * (n + 1)) - 1e-12


@pytest.mark.parametrize("s", [0.5, 3 + 1j, -2.5])
def test_p_continuous(s):
    for n in range(0, 12):
        assert abs(p_continuous(float(n), s) - p_coeff(n, s)) <= 1e-10 * max(1, abs(p_coeff(n, s)))
    for x in (0.25, 3.5, 7.9):
        ref = complex(mpmath.gamma(mpmath.mpc(s) + x) / (mpmath.gamma(x + 2) * mpmath.gamma(mpmath.mpc(s))))
        assert abs(p_continuous(x, s) - ref) <= 1e-11 * abs(ref)
    with pytest.raises(DomainError):
        p_continuous(-0.1, s)


def test_q_examples():
    for s in (2, 0.5 - 1j, -3.7):
        s = complex(s)
        for m in ("closed", "recursive"):
            assert q_coeff(0, s, m) == 1
            assert abs(q_coeff(1, s, m) + s / 2) < 1e-15
            assert abs(q_coeff(2, s, m) - s * (s + 1) / 12) < 1e-14


@pytest.mark.parametrize("s", ANCHORS)
def test_q_closed_against_mpmath(s):
    for n in range(0, 40):
        ref = mp_q(n, s)
        assert abs(q_coeff(n, s) - ref) <= 1e-13 * max(abs(ref), 1e-300)


EPS = 2.0**-52


@pytest.mark.parametrize("s", ANCHORS)
def test_inverse_convolution(s):
    s = complex(s)
    qs = q_sequence(s, 31)
    for n in range(31):
        terms = [qs[k] * p_coeff(n - k, s + k) for k in range(n + 1)]
        resid = abs(sum(terms) - (1 if n == 0 else 0))
        mass = sum(abs(t) for t in terms)
        # terms reach 1e11 at s = 2, n = 30: below that mass 1e-9 is reachable,
        # above it rounding of the coefficients themselves dominates
        assert resid < 1e-9 or resid <= 64 * EPS * mass
        if 64 * EPS * mass < 1e-10:
            assert resid < 1e-9


def _sym(s):
    return sympy.nsimplify(s.real, rational=True) + sympy.I * sympy.nsimplify(s.imag, rational=True)


@pytest.mark.parametrize("s", ANCHORS)
def test_inverse_convolution_exact(s):
    # exact rational arithmetic on the closed form with this package's B_n
    z = _sym(complex(s))

    def rf(x, n):
        out = sympy.Integer(1)
        for j in range(n):
            out *= x + j
        return out

    q = [sympy.Rational(b.numerator, b.denominator) / sympy.factorial(n) * rf(z, n)
         for n, b in ((n, bernoulli_number(n)) for n in range(31))]
    for n in range(31):
        acc = sum(q[k] * rf(z + k, n - k) / sympy.factorial(n - k + 1) for k in range(n + 1))
        assert sympy.expand(acc) == (1 if n == 0 else 0)


@pytest.mark.parametrize("s", ANCHORS)
def test_recursive_equals_closed(s):
    rec = q_sequence(s, 31, "recursive")
    closed = q_sequence(s, 31, "closed")
    for n in range(31):
        # odd closed-form values are exact zeros; measure against the sequence scale there
        scale = abs(closed[n]) if closed[n] else max(abs(c) for c in closed[: n + 1])
        assert abs(rec[n] - closed[n]) <= 1e-9 * scale


def test_coefficient_seq_lazy():
    seq = CoefficientSeq("p", 1.5)
    assert len(seq) == 1
    assert abs(seq[10] - p_coeff(10, 1.5)) < 1e-15
    assert len(seq) == 11
    with pytest.raises(DomainError):
        CoefficientSeq("r", 1)


def test_q_errors():
    with pytest.raises(CapExceededError):
        q_coeff(500, 2.0)
    with pytest.raises(DomainError):
        q_coeff(3, 2.0, "magic")
    with pytest.raises(DomainError):
        q_coeff(-1, 2.0)
    with pytest.raises(DomainError):
        p_coeff(-1, 2.0)
