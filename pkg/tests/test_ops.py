import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dualhankel.errors import DomainError, SliceMismatchError
from dualhankel.ops import (
    LaguerreCoeffs,
    MonomialCoeffs,
    adjoint_apply_quadrature,
    adjoint_apply_spectral,
    bargmann_apply,
    build_operator_matrix,
    dual_transform_quadrature,
    dual_transform_spectral,
    hankel_fractional_apply,
    hankel_fractional_chain,
    null_space_indices,
    pointwise_bound,
    range_basis_report,
    slice_derivative,
    slice_inner_product,
    slice_taylor_coefficients,
)
from dualhankel.quad import disk_rule, gauss_laguerre, integrate
from dualhankel.quat import Quaternion, SlicePoint, allclose, eval_power_series, power
from dualhankel.specfun import Params, gamma_moment, laguerre_zeros, phi_n, phi_table

I, J, K = Quaternion.unit("i"), Quaternion.unit("j"), Quaternion.unit("k")


def _grid(radii=(0.0, 0.3, 0.6, 0.85)):
    # points on several slices and radii
    pts = []
    for r in radii:
        for theta in (0.0, 1.1, 2.5, -2.0):
            for axis in ((1, 0, 0), (0, 0.6, 0.8), (1 / math.sqrt(3),) * 3):
                pts.append([r * math.cos(theta)] + [r * math.sin(theta) * a for a in axis])
    return Quaternion.from_array(np.array(pts))


def _random_coeffs(rng, n):
    return rng.normal(size=(n, 4)) / (1 + np.arange(n))[:, None]


# ---- coefficient types ------------------------------------------------------


def test_laguerre_coeffs_parseval():
    rng = np.random.default_rng(1)
    phi = LaguerreCoeffs(0.5, _random_coeffs(rng, 12))
    rule = gauss_laguerre(40, 0.5)
    quad = integrate(rule, lambda x: phi(x).norm2())
    assert quad == pytest.approx(phi.norm2(), rel=1e-12)
    assert phi.inner(phi).w == pytest.approx(phi.norm2(), rel=1e-14)


def test_monomial_coeffs_norm_against_disk():
    rng = np.random.default_rng(2)
    f = MonomialCoeffs(_random_coeffs(rng, 8))
    rule = disk_rule(10, 24, 2.0, 0.5)
    for axis in (I, Quaternion(0, 0, 0.6, 0.8)):
        quad = integrate(rule, lambda q: f(q).norm2(), axis=axis)
        assert quad == pytest.approx(f.norm2(2.0, 0.5), rel=1e-12)


def test_coefficient_validation():
    with pytest.raises(DomainError):
        LaguerreCoeffs(-1.0, [1.0])
    with pytest.raises(ValueError):
        LaguerreCoeffs(0.0, np.ones((3, 3)))
    with pytest.raises(ValueError):
        MonomialCoeffs([1.0, math.nan])
    assert LaguerreCoeffs(0.0, [1.0, 2.0]).coeffs.shape == (2, 4)


# ---- the dual transform -----------------------------------------------------


@pytest.mark.parametrize("y", [0.0, 0.5, 3.0])
def test_eigen_relation_spectral(y):
    for n in (0, 3, 11):
        image = dual_transform_spectral(LaguerreCoeffs.basis(n, 15, 0.7), y)
        expected = np.zeros((15, 4))
        expected[n, 0] = phi_n(n, 0.7, y)
        assert np.allclose(image.coeffs, expected, atol=1e-15)


def test_spectral_examples():
    image = dual_transform_spectral(LaguerreCoeffs.basis(0, 3, 0.0), 0.0)
    assert image.coeffs[0, 0] == 1.0
    y5 = laguerre_zeros(5, 0.0)[-1]
    # zero up to rounding relative to the neighbouring value phi_4(y5)
    assert abs(dual_transform_spectral(LaguerreCoeffs.basis(5, 8, 0.0), y5).coeffs[5, 0]) <= 1e-12 * abs(phi_n(4, 0.0, y5))
    with pytest.raises(DomainError):
        dual_transform_spectral(LaguerreCoeffs.basis(0, 3, 0.0), -1.0)


@pytest.mark.parametrize("alpha", [0.0, 1.5])
@pytest.mark.parametrize("y", [0.0, 0.5, 3.0])
def test_eigen_relation_quadrature(y, alpha):
    q = _grid()
    worst = 0.0
    for n in range(16):
        basis = LaguerreCoeffs.basis(n, n + 1, alpha)
        got = dual_transform_quadrature(basis, y, alpha, q)
        expected = power(q, n) * phi_n(n, alpha, y)
        worst = max(worst, float(np.max(np.abs(got.array - expected.array))))
    assert worst <= 1e-8


def test_quadrature_examples():
    phi0 = LaguerreCoeffs.basis(0, 1, 0.0)
    assert allclose(dual_transform_quadrature(phi0, 0.0, 0.0, Quaternion(0.5)), Quaternion(1.0), atol=1e-13)
    # at q = 0 only the phi_0 component survives, scaled by phi_0(y)
    rng = np.random.default_rng(4)
    phi = LaguerreCoeffs(1.0, _random_coeffs(rng, 6))
    got = dual_transform_quadrature(phi, 2.0, 1.0, Quaternion(0.0))
    assert np.allclose(got.array, phi_n(0, 1.0, 2.0) * phi.coeffs[0], atol=1e-13)
    with pytest.raises(DomainError):
        dual_transform_quadrature(phi, 2.0, 1.0, Quaternion(0.0, 1.0, 0.0, 0.0))


def test_quadrature_matches_spectral_for_quaternion_coefficients():
    rng = np.random.default_rng(5)
    phi = LaguerreCoeffs(0.5, _random_coeffs(rng, 10))
    q = _grid((0.2, 0.7))
    got = dual_transform_quadrature(phi, 1.3, 0.5, q)
    expected = eval_power_series(dual_transform_spectral(phi, 1.3).coeffs, q)
    assert np.max(np.abs(got.array - expected.array)) <= 1e-10


def test_complex_valued_input_is_rejected():
    with pytest.raises(TypeError):
        dual_transform_quadrature(lambda x: x + 1j, 1.0, 0.0, Quaternion(0.1))


# ---- adjoint ----------------------------------------------------------------


def test_adjoint_spectral_on_basis():
    params = Params(alpha=0.5, beta=2.0, eta=1.5, y=0.8)
    for k in (0, 4):
        out = adjoint_apply_spectral(MonomialCoeffs.basis(k, 6), params.y, params)
        expected = math.pi * gamma_moment(k, 2.0, 1.5) * phi_n(k, 0.5, 0.8)
        assert out.coeffs[k, 0] == pytest.approx(expected, rel=1e-14)
        assert np.count_nonzero(out.coeffs) == 1
    y3 = laguerre_zeros(3, 0.5)[0]
    assert abs(adjoint_apply_spectral(MonomialCoeffs.basis(3, 4), y3, params).coeffs[3, 0]) <= 1e-14


def test_adjoint_general_moments():
    params = Params(alpha=0.0, beta=1.0, eta=1.0, y=1.0)
    moments = np.array([2.0, 3.0, 5.0])
    out = adjoint_apply_spectral(MonomialCoeffs(np.ones(3)), 1.0, params, moments=moments)
    assert np.allclose(out.coeffs[:, 0], math.pi * moments * np.array([phi_n(n, 0.0, 1.0) for n in range(3)]))
    with pytest.raises(ValueError):
        adjoint_apply_spectral(MonomialCoeffs(np.ones(4)), 1.0, params, moments=moments)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.0, 6.0), st.floats(-0.5, 2.0))
def test_duality_coefficients(seed, y, alpha):
    rng = np.random.default_rng(seed)
    params = Params(alpha=alpha, beta=1.5, eta=0.8, y=y)
    phi = LaguerreCoeffs(alpha, _random_coeffs(rng, 20))
    G = MonomialCoeffs(_random_coeffs(rng, 20))
    lhs = dual_transform_spectral(phi, y).inner(G, params.beta, params.eta)
    rhs = phi.inner(adjoint_apply_spectral(G, y, params))
    assert np.max(np.abs(lhs.array - rhs.array)) <= 1e-10


@pytest.mark.parametrize("y", [0.0, 1.0])
def test_adjoint_quadrature_matches_spectral(y):
    params = Params(alpha=1.0, beta=1.5, eta=2.0, y=y)
    rng = np.random.default_rng(6)
    G = MonomialCoeffs(_random_coeffs(rng, 8))
    x = np.array([0.0, 0.4, 2.5, 7.0])
    got = adjoint_apply_quadrature(G, x, y, params)
    expected = adjoint_apply_spectral(G, y, params)(x)
    assert np.max(np.abs(got.array - expected.array)) <= 1e-10
    # the slice used for the disk does not matter
    other = adjoint_apply_quadrature(G, x, y, params, axis=Quaternion(0, 0, 0.6, 0.8))
    assert np.max(np.abs(other.array - expected.array)) <= 1e-10


def test_adjoint_quadrature_examples():
    alpha = 1.5
    x = np.array([0.3, 2.0])
    # G = e_0 with beta = 1, eta = alpha: the weight (1 - |q|^2)^(alpha - 1)
    params = Params(alpha=alpha, beta=1.0, eta=alpha, y=0.9)
    got = adjoint_apply_quadrature(MonomialCoeffs.basis(0, 1), x, params.y, params)
    expected = math.pi * gamma_moment(0, 1.0, alpha) * phi_n(0, alpha, 0.9) * phi_n(0, alpha, x)
    assert np.allclose(got.w, expected, rtol=1e-12)
    assert allclose(adjoint_apply_quadrature(lambda q: np.zeros(q.shape), x, 0.9, params), Quaternion(np.zeros(2)))
    # G = e_2 at y = 0
    params0 = Params(alpha=alpha, beta=1.0, eta=1.0, y=0.0)
    got = adjoint_apply_quadrature(MonomialCoeffs.basis(2, 3), x, 0.0, params0)
    expected = math.pi * gamma_moment(2, 1.0, 1.0) * phi_n(2, alpha, 0.0) * phi_n(2, alpha, x)
    assert np.max(np.abs(got.w - expected)) <= 1e-7


def test_adjoint_quadrature_rejects_mismatched_rule():
    params = Params(alpha=0.0, beta=1.0, eta=1.0, y=1.0)
    with pytest.raises(ValueError):
        adjoint_apply_quadrature(MonomialCoeffs.basis(0, 1), 1.0, 1.0, params, disk=disk_rule(4, 8, 2.0, 1.0))


def test_duality_quadrature_forms():
    params = Params(alpha=0.5, beta=1.0, eta=1.5, y=1.2)
    rng = np.random.default_rng(8)
    phi = LaguerreCoeffs(params.alpha, _random_coeffs(rng, 8))
    G = MonomialCoeffs(_random_coeffs(rng, 8))
    image = lambda q: dual_transform_quadrature(phi, params.y, params.alpha, q)
    lhs = slice_inner_product(image, G, params.beta, params.eta)
    rule = gauss_laguerre(60, params.alpha)
    rhs = integrate(rule, lambda x: phi(x).conj() * adjoint_apply_quadrature(G, x, params.y, params))
    assert np.max(np.abs(lhs.array - rhs.array)) <= 1e-7


# ---- Parseval on the ball ---------------------------------------------------


@pytest.mark.parametrize("y", [0.0, 0.7, 4.0])
def test_parseval_on_image(y):
    params = Params(alpha=0.0, beta=1.0, eta=1.0, y=y)
    rng = np.random.default_rng(9)
    phi = LaguerreCoeffs(0.0, _random_coeffs(rng, 12))
    image = dual_transform_spectral(phi, y)
    scale = phi_table(12, 0.0, y)[:, None]
    expected = math.pi * np.sum(gamma_moment(np.arange(12), 1.0, 1.0) * np.sum((scale * phi.coeffs) ** 2, axis=1))
    disk = disk_rule(16, 48, 1.0, 1.0)
    quad = integrate(disk, lambda q: image(q).norm2(), axis=J)
    assert quad == pytest.approx(expected, rel=1e-8)
    assert image.norm2(params.beta, params.eta) == pytest.approx(expected, rel=1e-13)


# ---- fractional Hankel transform --------------------------------------------


def test_fractional_identity_and_projection():
    rng = np.random.default_rng(10)
    phi = LaguerreCoeffs(0.0, _random_coeffs(rng, 7))
    assert np.array_equal(hankel_fractional_apply(phi, 1.0).coeffs, phi.coeffs)
    proj = hankel_fractional_apply(phi, 0.0).coeffs
    assert np.array_equal(proj[0], phi.coeffs[0]) and not np.any(proj[1:])


@settings(max_examples=40)
@given(st.floats(-1, 1), st.floats(-1, 1), st.floats(0, 1), st.floats(0, 1), st.integers(0, 2**32 - 1))
def test_semigroup_same_slice(a, b, c, d, seed):
    axis = Quaternion(0, 0.0, 0.6, 0.8)
    p = Quaternion(a * 0.7) + axis * (b * 0.7)
    q = Quaternion(c * 0.7) + axis * (d * 0.7)
    phi = LaguerreCoeffs(1.0, np.random.default_rng(seed).normal(size=(12, 4)))
    left = hankel_fractional_apply(hankel_fractional_apply(phi, q), p)
    right = hankel_fractional_apply(phi, p * q)
    assert np.max(np.abs(left.coeffs - right.coeffs)) <= 1e-14
    chained = hankel_fractional_chain(phi, [q, p])
    assert np.max(np.abs(chained.coeffs - right.coeffs)) <= 1e-14


def test_fractional_guards():
    phi = LaguerreCoeffs.basis(1, 3, 0.0)
    with pytest.raises(SliceMismatchError):
        hankel_fractional_chain(phi, [I * 0.5, J * 0.5])
    with pytest.raises(DomainError):
        hankel_fractional_apply(phi, 1.2)
    # a complex parameter acts on slice i
    out = hankel_fractional_apply(phi, 0.5j)
    assert allclose(Quaternion.from_array(out.coeffs[1]), I * 0.5)


def test_fractional_eigen_relation():
    # L_t phi_n = t^n phi_n, checked by values
    t = 0.4 + 0.3j
    out = hankel_fractional_apply(LaguerreCoeffs.basis(4, 5, 0.5), t)
    x = np.array([0.2, 3.0])
    z = t**4 * phi_n(4, 0.5, x)
    assert np.allclose(out(x).w, z.real) and np.allclose(out(x).x, z.imag)


# ---- Bargmann transform -----------------------------------------------------


def test_bargmann_at_origin():
    for alpha in (0.0, 1.5):
        phi0 = LaguerreCoeffs.basis(0, 1, alpha)
        value = bargmann_apply(phi0, Quaternion(0.0), alpha)
        assert value.w == pytest.approx(math.gamma(alpha + 1) ** 0.5, rel=1e-13)


@pytest.mark.parametrize("alpha", [0.0, 0.5, 2.0])
def test_bargmann_proportional_to_y0_transform(alpha):
    rng = np.random.default_rng(12)
    phi = LaguerreCoeffs(alpha, _random_coeffs(rng, 10))
    q = _grid()
    bargmann = bargmann_apply(phi, q, alpha)
    dual = dual_transform_quadrature(phi, 0.0, alpha, q)
    assert np.max(np.abs(bargmann.array - math.gamma(alpha + 1) * dual.array)) <= 1e-10
    for n in (1, 6):
        value = bargmann_apply(LaguerreCoeffs.basis(n, n + 1, alpha), q, alpha)
        expected = power(q, n) * (math.gamma(alpha + 1) * phi_n(n, alpha, 0.0))
        assert np.max(np.abs(value.array - expected.array)) <= 1e-9 * max(1.0, math.gamma(alpha + 1) * phi_n(n, alpha, 0.0))


# ---- slice calculus ---------------------------------------------------------


def test_slice_derivative_examples():
    for n in (0, 1, 4):
        f = lambda q, n=n: power(q, n)
        for point in (Quaternion(0.3, 0.2, -0.1, 0.4), SlicePoint(0.1, 0.5, K)):
            assert np.max(np.abs(slice_derivative(f, point).array)) <= 1e-9
    value = slice_derivative(lambda q: q.conj(), Quaternion(0.2, 0.0, 0.5, 0.0))
    assert allclose(value, Quaternion(1.0), atol=1e-9)


def test_image_is_slice_regular():
    rng = np.random.default_rng(13)
    phi = LaguerreCoeffs(0.0, _random_coeffs(rng, 6))
    f = lambda q: dual_transform_quadrature(phi, 1.0, 0.0, q)
    for point in (Quaternion(0.1, 0.3, 0.0, 0.2), Quaternion(-0.4, 0.0, 0.5, 0.0)):
        assert np.max(np.abs(slice_derivative(f, point, h=1e-4).array)) <= 1e-6


def test_taylor_coefficients_roundtrip():
    rng = np.random.default_rng(14)
    f = MonomialCoeffs(_random_coeffs(rng, 10))
    for axis in (None, Quaternion(0, 0.6, 0.0, 0.8)):
        coeffs = slice_taylor_coefficients(f, 12, axis=axis)
        assert np.allclose(coeffs[:10], f.coeffs, atol=1e-13)
        assert np.allclose(coeffs[10:], 0.0, atol=1e-13)
    with pytest.raises(DomainError):
        slice_taylor_coefficients(f, 4, radius=1.0)


def test_slice_inner_product_matches_coefficients():
    rng = np.random.default_rng(15)
    f = MonomialCoeffs(_random_coeffs(rng, 6))
    g = MonomialCoeffs(_random_coeffs(rng, 6))
    via_values = slice_inner_product(lambda q: f(q), lambda q: g(q), 1.0, 2.0, n_terms=10)
    assert np.allclose(via_values.array, f.inner(g, 1.0, 2.0).array, atol=1e-12)


# ---- matrices, null space, range --------------------------------------------


def test_operator_matrix_examples():
    params = Params(alpha=0.0, beta=1.0, eta=1.0, y=0.0)
    closed = build_operator_matrix(0.0, params, 5)
    assert closed[0, 0] == pytest.approx(math.sqrt(math.pi), rel=1e-15)
    assert np.count_nonzero(closed - np.diag(np.diag(closed))) == 0
    for y in (0.0, 1.0, 3.5):
        params = Params(alpha=0.5, beta=2.0, eta=1.0, y=y)
        closed = build_operator_matrix(y, params, 20)
        disc = build_operator_matrix(y, params, 20, form="discretized")
        assert np.max(np.abs(closed - disc)) <= 1e-7
    with pytest.raises(ValueError):
        build_operator_matrix(1.0, params, 5, form="dense")


def test_null_space_examples():
    assert null_space_indices(0.0, 0.0, 60) == ()
    assert null_space_indices(0.0, 1.5, 60) == ()
    z5 = laguerre_zeros(5, 0.0)[-1]
    assert abs(z5 - 12.6408) < 1e-4
    assert 5 in null_space_indices(z5, 0.0, 20)
    for root in laguerre_zeros(7, 1.0):
        assert 7 in null_space_indices(root, 1.0, 10)
    assert null_space_indices(1.0, 0.0, 10) == (1,)


def test_null_space_generic_y_is_empty():
    rng = np.random.default_rng(16)
    for y in rng.uniform(0, 1, 200):
        assert null_space_indices(y, 0.0, 50, tol=1e-9) == ()


def test_range_report_examples():
    report = range_basis_report(0.0, 0.0, 12)
    assert report.surviving == tuple(range(13)) and not report.strict_inclusion
    z5 = laguerre_zeros(5, 0.0)[-1]
    report = range_basis_report(z5, 0.0, 12)
    assert 5 not in report.surviving and report.strict_inclusion
    assert range_basis_report(0.37, 0.0, 0).surviving == (0,)


# ---- pointwise bound --------------------------------------------------------


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.0, 8.0), st.floats(0.0, 0.95))
def test_cauchy_schwarz_bound(seed, y, r):
    rng = np.random.default_rng(seed)
    phi = LaguerreCoeffs(0.5, rng.normal(size=(25, 4)))
    direction = rng.normal(size=4)
    q = Quaternion.from_array(r * direction / np.linalg.norm(direction))
    value, bound = pointwise_bound(phi, y, q)
    assert value <= bound * (1 + 1e-12) + 1e-300
