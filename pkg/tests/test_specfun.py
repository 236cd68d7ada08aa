import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from dualhankel.errors import DomainError
from dualhankel.quad import gauss_jacobi_unit, gauss_laguerre, integrate
from dualhankel.specfun import (
    Params,
    bessel_i_scaled,
    gamma_moment,
    laguerre,
    laguerre_asymptotic,
    laguerre_table,
    laguerre_zeros,
    ln_gamma,
    log_gamma_ratio,
    phi_n,
    phi_table,
    pochhammer,
)


def test_params_domain():
    Params(alpha=-0.5, beta=0.1, eta=3.0, y=0.0)
    for bad in (dict(alpha=-1.0), dict(beta=0.0), dict(eta=-1.0), dict(y=-0.1), dict(alpha=math.nan)):
        with pytest.raises(DomainError):
            Params(**bad)
    assert Params().replace(y=2.0).y == 2.0


@pytest.mark.parametrize("x, expected", [(1.0, 0.0), (5.0, math.log(24.0)), (0.5, 0.5723649429247001)])
def test_ln_gamma_examples(x, expected):
    assert ln_gamma(x) == pytest.approx(expected, abs=1e-15)


@settings(max_examples=60)
@given(st.floats(1e-3, 1e4))
def test_ln_gamma_against_mpmath(x):
    ref = float(mp.loggamma(mp.mpf(x)))
    assert abs(ln_gamma(x) - ref) <= 1e-13 * max(1.0, abs(ref))


def test_ln_gamma_domain():
    with pytest.raises(DomainError):
        ln_gamma(0.0)
    with pytest.raises(DomainError):
        ln_gamma(np.array([1.0, -2.0]))


@pytest.mark.parametrize("a, k, expected", [(3.7, 0, 1.0), (1.0, 4, 24.0), (-2.0, 3, 0.0), (0.5, 3, 1.875)])
def test_pochhammer(a, k, expected):
    assert pochhammer(a, k) == expected


def test_bessel_examples():
    assert bessel_i_scaled(0.7, 0.0) == pytest.approx(1 / math.gamma(1.7), rel=1e-15)
    assert bessel_i_scaled(0.0, 1.0) == pytest.approx(2.2795853023360673, rel=1e-15)
    # I_1(0) = (xi/2) g_1((xi/2)^2) vanishes with the prefactor
    xi = 0.0
    assert (xi / 2) * bessel_i_scaled(1.0, (xi / 2) ** 2) == 0.0


def _g_reference(alpha, w):
    w = mp.mpc(w)
    return complex(mp.nsum(lambda n: w**n / (mp.factorial(n) * mp.gamma(alpha + n + 1)), [0, mp.inf]))


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 1.0, 2.5])
@pytest.mark.parametrize("w", [0.3, 7.5, 15.9, 16.1, 60.0, 400.0, -4.0, -90.0, 3 + 4j, -20 + 35j, 200j])
def test_bessel_against_mpmath(alpha, w):
    got = bessel_i_scaled(alpha, w)
    ref = _g_reference(alpha, w)
    assert abs(got - ref) <= 1e-12 * abs(ref) + 1e-300


def test_bessel_exp_scaled_and_positivity():
    w = np.array([0.0, 1.0, 50.0, 1e4])
    scaled = bessel_i_scaled(1.5, w, exp_scaled=True)
    assert np.allclose(scaled[:3], bessel_i_scaled(1.5, w[:3]) * np.exp(-2 * np.sqrt(w[:3])), rtol=1e-14)
    assert np.all(bessel_i_scaled(0.3, np.linspace(0, 300, 40)) > 0)
    assert np.isfinite(scaled[-1]) and scaled[-1] > 0


def test_bessel_reconstructs_i_alpha():
    from scipy import special

    for alpha in (0.0, 0.5, 2.0):
        for xi in (0.5, 3.0, 40.0):
            value = (xi / 2) ** alpha * bessel_i_scaled(alpha, (xi / 2) ** 2)
            assert value == pytest.approx(special.iv(alpha, xi), rel=1e-13)


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 2.0])
def test_laguerre_low_degrees(alpha):
    x = np.linspace(0, 7, 9)
    assert np.all(laguerre(0, alpha, x) == 1.0)
    assert np.allclose(laguerre(1, alpha, x), 1 + alpha - x)


def test_laguerre_example():
    assert laguerre(2, 0.0, 2.0) == pytest.approx(-1.0, abs=1e-15)


@pytest.mark.parametrize("n, alpha, x", [(7, 0.0, 3.3), (25, 1.5, 10.0), (60, -0.5, 0.2), (120, 2.5, 40.0)])
def test_laguerre_against_mpmath(n, alpha, x):
    ref = float(mp.laguerre(n, alpha, x))
    assert abs(laguerre(n, alpha, x) - ref) <= 1e-11 * max(1.0, abs(ref))


def test_laguerre_table_matches_single():
    table = laguerre_table(30, 1.2, np.array([0.5, 4.0]))
    for n in (0, 1, 17, 30):
        assert np.allclose(table[n], laguerre(n, 1.2, np.array([0.5, 4.0])), rtol=1e-14)


@pytest.mark.parametrize("alpha", [0.0, 1.5])
def test_derivative_identity(alpha):
    # d/dx L_n^(alpha) = -L_{n-1}^(alpha+1); central differences carry O(h^2) error
    h = 1e-5
    for n in range(1, 31):
        for x in (0.4, 2.0, 7.5):
            fd = (laguerre(n, alpha, x + h) - laguerre(n, alpha, x - h)) / (2 * h)
            exact = -laguerre(n - 1, alpha + 1, x)
            assert abs(fd - exact) <= 1e-6 * max(1.0, abs(exact))


def test_phi_examples():
    assert phi_n(0, 1.7, 3.0) == pytest.approx(math.gamma(2.7) ** -0.5, rel=1e-15)
    assert phi_n(0, 0.0, 5.0) == 1.0
    for n in (1, 6, 30):
        expected = math.sqrt(math.gamma(1.5 + n + 1) / math.factorial(n)) / math.gamma(2.5)
        assert phi_n(n, 1.5, 0.0) == pytest.approx(expected, rel=1e-13)


def test_phi_table_agrees_with_phi_n():
    x = np.array([0.0, 0.7, 12.0])
    table = phi_table(41, 0.5, x)
    for n in (0, 1, 10, 40):
        assert np.allclose(table[n], phi_n(n, 0.5, x), rtol=1e-12, atol=1e-14)


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 2.0])
def test_orthonormality(alpha):
    m_max = 12
    rule = gauss_laguerre(m_max + 1, alpha)
    gram = integrate(rule, lambda x: np.einsum("mi,ni->imn", phi_table(m_max + 1, alpha, x), phi_table(m_max + 1, alpha, x)))
    assert np.max(np.abs(gram - np.eye(m_max + 1))) <= 1e-12


@pytest.mark.parametrize(
    "n, alpha, expected",
    [
        (1, 0.0, [1.0]),
        (2, 0.0, [2 - math.sqrt(2), 2 + math.sqrt(2)]),
        (1, 3.3, [4.3]),
        (5, 0.0, [0.26356031971814109, 1.4134030591065168, 3.5964257710407221, 7.0858100058588376, 12.640800844275783]),
    ],
)
def test_zeros_examples(n, alpha, expected):
    assert np.allclose(laguerre_zeros(n, alpha), expected, rtol=1e-14)


@pytest.mark.parametrize("alpha", [-0.5, 0.0, 1.5])
def test_zeros_interlace(alpha):
    prev = laguerre_zeros(1, alpha)
    for n in range(2, 41):
        cur = laguerre_zeros(n, alpha)
        assert np.all(cur > 0) and np.all(np.diff(cur) > 0)
        # each zero of L_{n-1} sits strictly between consecutive zeros of L_n
        assert np.all(cur[:-1] < prev) and np.all(prev < cur[1:])
        assert np.max(np.abs(laguerre(n, alpha, cur))) <= 1e-9 * np.max(np.abs(laguerre_table(n, alpha, cur)))
        prev = cur


def test_gamma_moment_examples():
    n = np.arange(8)
    assert np.allclose(gamma_moment(n, 1.0, 1.0), 1 / (n + 1), rtol=1e-14)
    assert gamma_moment(0, 2.5, 0.7) == pytest.approx(math.gamma(2.5) * math.gamma(0.7) / math.gamma(3.2), rel=1e-14)
    expected = math.gamma(1.5) * math.gamma(5) / math.gamma(6.5)
    assert gamma_moment(3, 2.0, 1.5) == pytest.approx(expected, rel=1e-14)
    rule = gauss_jacobi_unit(64, 2.0, 1.5)
    assert integrate(rule, lambda t: t**3) == pytest.approx(expected, rel=1e-13)


@settings(max_examples=40)
@given(st.floats(0.05, 20), st.floats(0.05, 20), st.integers(0, 3000))
def test_gamma_moment_ratio(beta, eta, n):
    ratio = gamma_moment(n + 1, beta, eta) / gamma_moment(n, beta, eta)
    assert ratio == pytest.approx((beta + n) / (beta + eta + n), rel=1e-12)


@settings(max_examples=60)
@given(st.floats(0.01, 1e6), st.floats(-0.99, 25))
def test_log_gamma_ratio_against_mpmath(x, e):
    assume(x + e >= 0.01)
    with mp.workdps(40):
        ref = mp.loggamma(mp.mpf(x) + mp.mpf(e)) - mp.loggamma(mp.mpf(x))
    assert abs(log_gamma_ratio(x, e) - float(ref)) <= 1e-14 * max(1.0, abs(float(ref)))


def test_log_gamma_ratio_domain():
    with pytest.raises(DomainError):
        log_gamma_ratio(0.25, -0.5)


def test_asymptotic_remainder_scaling():
    # |L_n(1) - leading term| * n^(3/4) stays bounded: remainder is O(n^((2 alpha - 3)/4))
    n = np.arange(200, 2001)
    values = laguerre_table(2000, 0.0, 1.0)[200:]
    scaled = np.abs(values - laguerre_asymptotic(n, 0.0, 1.0)) * n**0.75
    assert scaled.max() < 0.5
    # the envelope of L_n(1) is e^(1/2) / sqrt(pi) * n^(-1/4)
    envelope = math.exp(0.5) / math.sqrt(math.pi)
    assert 0.9 * envelope < np.max(np.abs(values) * n**0.25) < 1.1 * envelope


def test_asymptotic_phase_root():
    # 2 sqrt(n) = pi/4 + pi/2 zeroes the cosine for alpha = 0, y = 1
    n = (3 * math.pi / 8) ** 2
    assert abs(laguerre_asymptotic(n, 0.0, 1.0)) < 1e-15


def test_asymptotic_near_cosine_zero_is_not_relatively_accurate():
    # at n = 400 the cosine is small, so the O(n^-3/4) remainder is comparable to
    # the value itself: the relative deviation is near 47%, not within 10%
    exact = laguerre(400, 0.0, 1.0)
    approx = laguerre_asymptotic(400, 0.0, 1.0)
    assert abs(approx - exact) / abs(exact) > 0.1
    assert abs(approx - exact) * 400**0.75 < 0.5


def test_asymptotic_domain():
    with pytest.raises(DomainError):
        laguerre_asymptotic(10, 0.0, 0.0)
