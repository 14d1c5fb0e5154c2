import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from nlcoherent import ConvergenceError, DomainError, PoleError
from nlcoherent.specfun import (
    SeriesControl,
    bessel_i,
    bessel_k,
    beta,
    log_bessel_i,
    log_beta,
    log_gamma,
    log_meijer_g_measure,
    lower_incomplete_gamma,
    meijer_g_measure,
    mellin_barnes_g,
    p_f_q,
    upper_incomplete_gamma,
)

mp.mp.dps = 30


def rel(a, b):
    return abs(a - b) / abs(b)


@pytest.mark.parametrize("x, expected", [(1.0, 0.0), (5.0, math.log(24.0)), (0.5, 0.5 * math.log(math.pi))])
def test_log_gamma_values(x, expected):
    assert log_gamma(x) == pytest.approx(expected, abs=1e-14)


@given(st.floats(min_value=1e-3, max_value=1e3))
def test_log_gamma_recurrence(x):
    assert log_gamma(x + 1.0) == pytest.approx(log_gamma(x) + math.log(x), rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("x", [0.0, -1.0, -2.5, math.nan])
def test_log_gamma_rejects_nonpositive(x):
    with pytest.raises(DomainError):
        log_gamma(x)


@pytest.mark.parametrize("a, b, expected", [(1, 1, 1.0), (0.5, 1.5, math.pi / 2), (3, 4, 1 / 60)])
def test_beta_values(a, b, expected):
    assert beta(a, b) == pytest.approx(expected, rel=1e-14)


def test_log_beta_large_arguments_do_not_overflow():
    expected = float(mp.log(mp.beta(400, 500)))
    assert log_beta(400.0, 500.0) == pytest.approx(expected, rel=1e-13)
    assert beta(400.0, 500.0) == pytest.approx(float(mp.beta(400, 500)), rel=1e-11)


@pytest.mark.parametrize("a, b", [(0, 1), (1, -2), (-0.5, 0.5)])
def test_beta_rejects_nonpositive(a, b):
    with pytest.raises(DomainError):
        beta(a, b)


@pytest.mark.parametrize("x", [0.0, 0.3, 1.0, 7.5, 40.0])
def test_upper_incomplete_gamma_s1(x):
    assert upper_incomplete_gamma(1.0, x) == pytest.approx(math.exp(-x), rel=1e-14)


def test_upper_incomplete_gamma_against_quadrature():
    val, _ = integrate.quad(lambda t: t**1.5 * math.exp(-t), 1.3, math.inf, epsrel=1e-13)
    assert rel(upper_incomplete_gamma(2.5, 1.3), val) < 1e-10


@pytest.mark.parametrize("s, x", [(0.2, 0.01), (0.7, 2.3), (3.0, 10.0), (12.5, 4.0), (5.0, 80.0)])
def test_incomplete_gammas_against_mpmath(s, x):
    assert rel(upper_incomplete_gamma(s, x), float(mp.gammainc(s, x, mp.inf))) < 1e-10
    assert rel(lower_incomplete_gamma(s, x), float(mp.gammainc(s, 0, x))) < 1e-10


def test_incomplete_gamma_domain():
    with pytest.raises(DomainError):
        upper_incomplete_gamma(0.0, 1.0)
    with pytest.raises(DomainError):
        lower_incomplete_gamma(1.0, -0.1)


def _bessel_i_series(nu, x):
    # oracle: power series summed in extended precision
    with mp.workdps(40):
        return float(mp.nsum(lambda k: (mp.mpf(x) / 2) ** (2 * k + nu) / (mp.factorial(k) * mp.gamma(k + nu + 1)),
                             [0, mp.inf]))


def test_bessel_i_trivial():
    assert bessel_i(1, 0.0) == 0.0
    assert bessel_i(0, 0.0) == 1.0


@pytest.mark.parametrize("nu", [0.0, 1.0, 2.0, 3.0, 0.5, 7.25])
@pytest.mark.parametrize("x", [0.01, 2.0, 11.9, 12.1, 50.0, 199.0])
def test_bessel_i_against_series(nu, x):
    assert rel(bessel_i(nu, x), _bessel_i_series(nu, x)) < 1e-12


def test_bessel_i_overflow_and_scaled():
    with pytest.raises(OverflowError):
        bessel_i(1.0, 1000.0)
    scaled = bessel_i(1.0, 1000.0, scaled=True)
    assert rel(scaled, float(mp.besseli(1, 1000) * mp.exp(-1000))) < 1e-12
    assert log_bessel_i(1.0, 1000.0) == pytest.approx(float(mp.log(mp.besseli(1, 1000))), rel=1e-14)


def test_bessel_i_continuity_across_twelve():
    # no algorithm seam shows up around x = 12
    xs = 12.0 + np.array([-1e-9, 0.0, 1e-9])
    vals = bessel_i(1.0, xs)
    assert np.all(np.abs(np.diff(vals)) / vals[1] < 1e-8)


def test_bessel_k_half_integer():
    assert bessel_k(0.5, 1.0) == pytest.approx(math.sqrt(math.pi / 2) * math.exp(-1.0), rel=1e-14)


def test_bessel_k_asymptotic():
    x = 50.0
    approx = math.sqrt(math.pi / (2 * x)) * math.exp(-x) * (1 + 3 / (8 * x))
    assert rel(bessel_k(1.0, x), approx) < 1e-3
    assert rel(bessel_k(1.0, x), float(mp.besselk(1, x))) < 1e-12


@pytest.mark.parametrize("nu", [0, 1, 2])
@pytest.mark.parametrize("x", [0.1, 0.5, 3.0, 20.0, 100.0])
def test_bessel_wronskian(nu, x):
    # scaled forms keep the products finite at x = 100
    lhs = bessel_i(nu, x, scaled=True) * bessel_k(nu + 1, x, scaled=True) \
        + bessel_i(nu + 1, x, scaled=True) * bessel_k(nu, x, scaled=True)
    assert lhs == pytest.approx(1.0 / x, rel=1e-10)


@pytest.mark.parametrize("x", [0.0, -1.0])
def test_bessel_k_domain(x):
    with pytest.raises(DomainError):
        bessel_k(1.0, x)


@pytest.mark.parametrize("x", [-3.0, 0.0, 0.4, 5.0, 30.0])
def test_1f1_exponential(x):
    assert p_f_q([1.0], [1.0], x) == pytest.approx(math.exp(x), rel=1e-13)


@pytest.mark.parametrize("x", [0.1, 1.0, 9.0, 100.0])
def test_1f2_bessel(x):
    expected = bessel_i(1.0, 2 * math.sqrt(x)) / math.sqrt(x)
    assert p_f_q([1.0], [1.0, 2.0], x) == pytest.approx(expected, rel=1e-12)


def test_1f1_incomplete_gamma_form():
    d, x = 0.7, 2.3
    closed = d * math.exp(x) * x ** (-d) * (math.gamma(d) - upper_incomplete_gamma(d, x))
    assert p_f_q([1.0], [1.0 + d], x) == pytest.approx(closed, rel=1e-10)


@settings(max_examples=60, deadline=None)
@given(
    a=st.lists(st.floats(0.1, 4.0), min_size=0, max_size=2),
    b=st.lists(st.floats(0.1, 4.0), min_size=2, max_size=3),
    x=st.floats(-5.0, 5.0),
)
def test_pfq_matches_gamma_ratio_sum(a, b, x):
    with mp.workdps(40):
        expected = float(mp.hyper(a, b, x))
    got = p_f_q(a, b, x)
    assert got == pytest.approx(expected, rel=1e-12, abs=1e-12 * max(1.0, abs(expected)))


def test_pfq_errors():
    with pytest.raises(PoleError):
        p_f_q([1.0], [-2.0], 0.5)
    with pytest.raises(DomainError):
        p_f_q([1.0, 1.0], [2.0], 1.5)
    with pytest.raises(DomainError):
        p_f_q([1.0, 1.0, 1.0], [2.0], 0.1)
    with pytest.raises(ConvergenceError):
        p_f_q([1.0], [1.0], 50.0, SeriesControl(max_terms=10))


def test_pfq_terminating():
    # 2F1(-3, 1; 1; x) = (1 - x)^3, a polynomial for any x
    assert p_f_q([-3.0, 1.0], [1.0], 4.0) == pytest.approx((1 - 4.0) ** 3)


def test_series_control_validation():
    with pytest.raises(DomainError):
        SeriesControl(rel_tol=0.0)
    with pytest.raises(DomainError):
        SeriesControl(max_terms=0)


@pytest.mark.parametrize("y", [0.01, 0.7, 3.0, 25.0])
def test_meijer_one_parameter(y):
    assert meijer_g_measure(y, [0.0]) == pytest.approx(math.exp(-y), rel=1e-14)
    assert meijer_g_measure(y, [1.5]) == pytest.approx(math.exp(-y) * y**1.5, rel=1e-14)


@pytest.mark.parametrize("y", [0.01, 0.7, 3.0, 25.0])
def test_meijer_two_parameters(y):
    expected = 2 * math.sqrt(y) * bessel_k(1.0, 2 * math.sqrt(y))
    assert meijer_g_measure(y, [1.0, 0.0]) == pytest.approx(expected, rel=1e-13)
    with mp.workdps(30):
        oracle = float(mp.meijerg([[], []], [[1, 0], []], y))
    assert meijer_g_measure(y, [1.0, 0.0]) == pytest.approx(oracle, rel=1e-12)


@pytest.mark.parametrize("n", range(0, 16, 3))
def test_meijer_one_parameter_moments(n):
    d = 0.5
    val, _ = integrate.quad(lambda y: meijer_g_measure(y, [d]) * y**n, 0, math.inf, epsrel=1e-12, limit=200)
    assert rel(val, math.gamma(n + 1 + d)) < 1e-8


@pytest.mark.parametrize("n", range(0, 11))
def test_meijer_su11_moments(n):
    val, _ = integrate.quad(lambda y: meijer_g_measure(y, [1.0, 0.0]) * y**n, 0, math.inf, epsrel=1e-12, limit=400)
    assert rel(val, math.factorial(n) * math.factorial(n + 1)) < 1e-8


@pytest.mark.parametrize("deltas", [(0.0, 0.5, 1.5), (0.0, 0.0, 0.0), (0.3, 1.2, 2.0, 0.0)])
@pytest.mark.parametrize("y", [0.05, 1.0, 10.0, 200.0])
def test_mellin_barnes_against_mpmath(deltas, y):
    with mp.workdps(30):
        oracle = float(mp.meijerg([[], []], [list(deltas), []], y))
    assert rel(mellin_barnes_g(y, deltas), oracle) < 1e-9


def test_mellin_barnes_reduces_to_closed_forms():
    for y in (0.2, 4.0):
        assert rel(mellin_barnes_g(y, [0.5]), math.exp(-y) * y**0.5) < 1e-9
        assert rel(mellin_barnes_g(y, [1.0, 0.0]), meijer_g_measure(y, [1.0, 0.0])) < 1e-9


def test_meijer_domain():
    with pytest.raises(DomainError):
        meijer_g_measure(0.0, [0.0])
    with pytest.raises(DomainError):
        meijer_g_measure(1.0, [])
    with pytest.raises(DomainError):
        log_meijer_g_measure(1.0, [0.0, 0.0, 0.0])
