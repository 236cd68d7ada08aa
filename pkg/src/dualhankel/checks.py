"""Identity checks run by ``dualhankel verify``.

Each check takes the parameter pack, a truncation and a seeded generator and
returns the measured error; :data:`CHECKS` pairs it with its default
tolerance. A check passes when ``error <= tolerance``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .kernels import (
    bergman_kernel_series,
    diagonal_identity_check,
    hankel_kernel_closed,
    hankel_kernel_series,
    kernel_reproduce_check,
)
from .ops import (
    LaguerreCoeffs,
    MonomialCoeffs,
    adjoint_apply_quadrature,
    adjoint_apply_spectral,
    bargmann_apply,
    build_operator_matrix,
    dual_transform_quadrature,
    dual_transform_spectral,
    hankel_fractional_chain,
    null_space_indices,
    pointwise_bound,
    slice_derivative,
    slice_inner_product,
)
from .quad import disk_rule, gauss_laguerre, integrate
from .quat import Quaternion, from_slice, power
from .spectral import decay_fit, schatten_report, singular_values_closed, svd_factorization_check, svd_small
from .specfun import Params, gamma_moment, laguerre_zeros, phi_n

__all__ = ["Check", "CHECKS", "random_axes", "ball_grid", "run_checks"]


@dataclass(frozen=True)
class Check:
    name: str
    func: Callable
    tolerance: float
    description: str


def random_axes(rng, count):
    """``count`` random unit imaginary directions, shape ``(count, 3)``."""
    v = rng.normal(size=(count, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def ball_grid(rng, radii, n_angles=6, n_slices=3) -> Quaternion:
    """Points ``r e^{I theta}`` on ``n_slices`` random slices; flat Quaternion array."""
    theta = 2 * math.pi * (np.arange(n_angles) + 0.5) / n_angles
    z = (np.asarray(radii, dtype=float)[:, None] * np.exp(1j * theta)).ravel()
    axes = random_axes(rng, n_slices)
    return from_slice(z[None, :], axes[:, None, :]).reshape(-1)


def _random_quaternions(rng, n):
    return rng.normal(size=(n, 4)) / math.sqrt(n)


def check_hille_hardy(params, trunc, rng):
    q = ball_grid(rng, [0.3, 0.5, 0.7], n_angles=4)
    xs = np.array([0.1, 1.0, 5.0, 10.0])
    x, y = np.meshgrid(xs, xs, indexing="ij")
    qq = q.reshape(q.shape + (1, 1))
    closed = hankel_kernel_closed(qq, x, y, params.alpha)
    series = hankel_kernel_series(qq, x, y, params.alpha, n_max=80)
    return float(np.max(np.abs(closed.array - series.array)))


def check_eigen_relation(params, trunc, rng):
    q = ball_grid(rng, [0.0, 0.4, 0.8], n_angles=4)
    worst = 0.0
    for n in range(16):
        phi = LaguerreCoeffs.basis(n, n + 1, params.alpha)
        value = dual_transform_quadrature(phi, params.y, params.alpha, q)
        expected = phi_n(n, params.alpha, params.y) * power(q, n).array
        worst = max(worst, float(np.max(np.abs(value.array - expected))))
    return worst


def check_moments(params, trunc, rng):
    rule = disk_rule(32, 64, params.beta, params.eta)
    powers = rule.nodes[None, :] ** np.arange(11)[:, None]
    gram = (np.conj(powers) * rule.weights) @ powers.T
    expected = np.diag(math.pi * gamma_moment(np.arange(11), params.beta, params.eta))
    return float(np.max(np.abs(gram - expected)))


def check_parseval(params, trunc, rng):
    phi = LaguerreCoeffs(params.alpha, _random_quaternions(rng, 20))
    image = dual_transform_spectral(phi, params.y)
    rule = disk_rule(48, 96, params.beta, params.eta)
    quad = float(integrate(rule, lambda p: image(p).norm2()))
    exact = image.norm2(params.beta, params.eta)
    return abs(quad - exact) / exact


def check_reproducing_property(params, trunc, rng):
    rule = disk_rule(48, 96, params.beta, params.eta)
    p = rule.points()
    q = ball_grid(rng, [0.2, 0.6], n_angles=3, n_slices=2)
    worst = 0.0
    for j in range(q.shape[0]):
        qj = q[j]
        kernel = bergman_kernel_series(p, qj, params.beta, params.eta).conj()
        for m in range(11):
            pm = power(p, m)
            value = Quaternion.from_array(np.tensordot(rule.weights, (kernel * pm).array, axes=(0, 0)))
            worst = max(worst, float(np.max(np.abs(value.array - power(qj, m).array))))
    return worst


def check_diagonal_identity(params, trunc, rng):
    q = ball_grid(rng, [0.3, 0.6, 0.8], n_angles=4)
    lhs, rhs = diagonal_identity_check(q, params.y, params.alpha)
    return float(np.max(np.abs(lhs - rhs) / np.abs(lhs)))


def check_kernel_reproduction(params, trunc, rng):
    q = ball_grid(rng, [0.3, 0.6], n_angles=3, n_slices=2)
    lhs, rhs = kernel_reproduce_check(q, np.array([0.5, 2.0]), params.y, params.alpha, params.beta, params.eta)
    return float(np.max(np.abs(lhs.array - rhs.array)))


def check_svd_cross(params, trunc, rng):
    N = max(trunc, 10)
    matrix = build_operator_matrix(params.y, params, N, "discretized")
    _, sigma, _ = svd_small(matrix)
    closed = np.sort(singular_values_closed(params.y, params, N))[::-1]
    k = min(10, N)
    return float(np.max(np.abs(sigma[:k] - closed[:k]) / closed[:k]))


def check_duality_coefficients(params, trunc, rng):
    n = min(trunc, 20)
    phi = LaguerreCoeffs(params.alpha, _random_quaternions(rng, n))
    G = MonomialCoeffs(_random_quaternions(rng, n))
    left = dual_transform_spectral(phi, params.y).inner(G, params.beta, params.eta)
    right = phi.inner(adjoint_apply_spectral(G, params.y, params))
    return float(np.max(np.abs(left.array - right.array)))


def check_duality_quadrature(params, trunc, rng):
    n = 6
    phi = LaguerreCoeffs(params.alpha, _random_quaternions(rng, n))
    G = MonomialCoeffs(_random_quaternions(rng, n))
    image = lambda q: dual_transform_quadrature(phi, params.y, params.alpha, q)
    left = slice_inner_product(image, G, params.beta, params.eta, n_terms=24)
    rule = gauss_laguerre(2 * n + 2, float(params.alpha))
    xs = rule.nodes
    adj = adjoint_apply_quadrature(G, xs, params.y, params)
    right = np.tensordot(rule.weights, (phi(xs).conj() * adj).array, axes=(0, 0))
    return float(np.max(np.abs(left.array - right)))


def check_semigroup(params, trunc, rng):
    phi = LaguerreCoeffs(params.alpha, _random_quaternions(rng, max(trunc, 2)))
    axis = random_axes(rng, 1)[0]
    worst = 0.0
    for _ in range(5):
        zp, zq = rng.uniform(0.1, 0.99, 2) * np.exp(1j * rng.uniform(0, 2 * math.pi, 2))
        p, q = from_slice(zp, axis), from_slice(zq, axis)
        lhs = hankel_fractional_chain(phi, [q, p])
        rhs = hankel_fractional_chain(phi, [p * q])
        worst = max(worst, float(np.max(np.abs(lhs.coeffs - rhs.coeffs))))
    return worst


def check_bargmann(params, trunc, rng):
    q = ball_grid(rng, [0.0, 0.4, 0.8], n_angles=4)
    phi = LaguerreCoeffs(params.alpha, _random_quaternions(rng, 8))
    lhs = bargmann_apply(phi, q, params.alpha)
    rhs = dual_transform_quadrature(phi, 0.0, params.alpha, q)
    return float(np.max(np.abs(lhs.array - math.gamma(params.alpha + 1) * rhs.array)))


def check_factorization(params, trunc, rng):
    result = svd_factorization_check(params.y, params, 30)
    return max(result.residual, result.projection_residual)


def check_slice_regularity(params, trunc, rng):
    phi = LaguerreCoeffs(params.alpha, _random_quaternions(rng, 10))
    q = ball_grid(rng, [0.2, 0.5, 0.7], n_angles=4)
    f = lambda p: dual_transform_quadrature(phi, params.y, params.alpha, p)
    return float(np.max(slice_derivative(f, q, h=1e-4).norm()))


def check_cauchy_schwarz(params, trunc, rng):
    phi = LaguerreCoeffs(params.alpha, _random_quaternions(rng, 20))
    q = ball_grid(rng, [0.1, 0.5, 0.9], n_angles=4)
    lhs, rhs = pointwise_bound(phi, params.y, q)
    return float(np.max(np.maximum(lhs - rhs, 0.0) / rhs))


def check_null_space(params, trunc, rng):
    worst = 0.0
    for y in laguerre_zeros(5, params.alpha):
        if 5 not in null_space_indices(y, params.alpha, 10):
            return math.inf
        phi = LaguerreCoeffs.basis(5, 6, params.alpha)
        image = lambda q: dual_transform_quadrature(phi, y, params.alpha, q)
        norm2 = float(slice_inner_product(image, image, params.beta, params.eta, n_terms=24).w)
        worst = max(worst, math.sqrt(max(norm2, 0.0)))
    return worst


def check_decay_slope(params, trunc, rng):
    fit = decay_fit(params.y, params)
    expected = params.alpha - params.eta if params.y == 0 else -(params.eta + 0.5)
    return abs(fit.slope - expected)


def check_schatten_slope(params, trunc, rng):
    p = 2.0
    report = schatten_report(params.y, params, p)
    if params.y == 0:
        expected = p * (params.alpha - params.eta) / 2
    else:
        expected = -p * (params.eta + 0.5) / 2
    return abs(report.term_slope - expected)


CHECKS = (
    Check("bargmann_proportionality", check_bargmann, 1e-10, "Bargmann transform equals Gamma(alpha+1) S_0"),
    Check("cauchy_schwarz_bound", check_cauchy_schwarz, 1e-12, "|S phi(q)|^2 <= R_{|q|^2}(y,y) ||phi||^2"),
    Check("decay_slope", check_decay_slope, 0.2, "log-log slope of c_n against its predicted exponent"),
    Check("diagonal_identity", check_diagonal_identity, 1e-8, "R_{|q|^2}(y,y) = int |R_q(x,y)|^2 dmu(x)"),
    Check("duality_coefficients", check_duality_coefficients, 1e-10, "<S phi, G> = <phi, S* G> on coefficients"),
    Check("duality_quadrature", check_duality_quadrature, 1e-7, "<S phi, G> = <phi, S* G> by quadrature"),
    Check("eigen_relation", check_eigen_relation, 1e-8, "S phi_n = phi_n(y) e_n by Gauss-Laguerre"),
    Check("hille_hardy", check_hille_hardy, 1e-9, "closed Hankel kernel against its Laguerre series"),
    Check("kernel_reproduction", check_kernel_reproduction, 1e-7, "R_q = int conj K(p,q) R_p omega"),
    Check("monomial_moments", check_moments, 1e-12, "disk rule Gram matrix of monomials"),
    Check("null_space", check_null_space, 1e-7, "S phi_5 vanishes at the zeros of L_5"),
    Check("parseval", check_parseval, 1e-8, "||S phi||^2 = pi sum gamma_n |phi_n(y) a_n|^2"),
    Check("polar_factorization", check_factorization, 1e-12, "S = U|S| and U*U a projection"),
    Check("reproducing_property", check_reproducing_property, 1e-8, "<K(., q), e_m> = q^m"),
    Check("schatten_slope", check_schatten_slope, 0.1, "block-sum slope of s_n^2 against its predicted exponent"),
    Check("semigroup", check_semigroup, 1e-14, "L_p L_q = L_pq on one slice"),
    Check("slice_regularity", check_slice_regularity, 1e-6, "slice derivative of S phi vanishes"),
    Check("svd_cross_check", check_svd_cross, 1e-6, "Jacobi SVD of the discretized matrix vs closed s_n"),
)


def run_checks(params: Params, trunc: int = 40, seed: int = 0, tol: float | None = None, names=None) -> list:
    """Run the selected checks in name order; each gets its own seeded generator."""
    results = []
    for index, check in enumerate(CHECKS):
        if names is not None and check.name not in names:
            continue
        rng = np.random.default_rng([seed, index])
        tolerance = check.tolerance if tol is None else tol
        try:
            error = float(check.func(params, trunc, rng))
            message = ""
        except Exception as exc:  # a crashing check is a failing check
            error = math.inf
            message = f"{type(exc).__name__}: {exc}"
        passed = bool(error <= tolerance)
        results.append(
            {
                "name": check.name,
                "description": check.description,
                "error": error,
                "tolerance": tolerance,
                "passed": passed,
                "message": message,
            }
        )
    return results
