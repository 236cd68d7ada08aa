"""The fractional Hankel kernel ``R_q(x, y)`` and the Bergman kernel ``K(p, q)``.

``R_q(x, y) = sum_n q^n phi_n(x) phi_n(y)`` has real Taylor coefficients, so it
is evaluated in slice-complex arithmetic. Its closed form is written without
fractional powers of ``q``:

    R_q(x, y) = (1-q)^-(alpha+1) exp(-q (x+y) / (1-q)) g_alpha(q x y / (1-q)^2)

with ``g_alpha`` the entire function of :func:`specfun.bessel_i_scaled`.

``K(p, q) = (1/pi) sum_n p^n conj(q)^n / gamma_n`` reproduces the weighted slice
Bergman space with weight ``t^(beta-1) (1-t)^(eta-1)``; for ``p, q`` in
different slices the ordered products ``p^n conj(q)^n`` are genuinely
quaternionic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DivergenceError, DomainError
from .quad import QuadratureRule, disk_rule, gauss_laguerre
from .quat import Quaternion, _as_quaternion, from_slice, to_slice
from .specfun import Params, bessel_i_scaled, gamma_moment, phi_table

__all__ = [
    "KernelEvalRequest",
    "hyper2f1_star",
    "bergman_kernel_series",
    "bergman_kernel_closed_slice",
    "hankel_kernel_closed",
    "hankel_kernel_series",
    "kernel_reproduce_check",
    "diagonal_identity_check",
]


@dataclass(frozen=True)
class KernelEvalRequest:
    """Truncation controls for the kernel series."""

    params: Params
    n_terms: int = 80
    tol: float = 1e-16

    def __post_init__(self):
        if self.n_terms < 1:
            raise ValueError("n_terms must be at least 1")
        if not self.tol > 0:
            raise ValueError("tol must be positive")


def hyper2f1_star(a, b, c, p, q, n_terms: int = 400, tol: float = 1e-16) -> Quaternion:
    """``sum_k (a)_k (b)_k / (c)_k p^k q^k / k!`` with ordered powers ``p^k q^k``.

    Summation stops once every term is below ``tol`` relative to the partial
    sum, or after ``n_terms`` terms.
    """
    if c <= 0 and float(c).is_integer():
        raise DomainError("c must not be a nonpositive integer")
    p = _as_quaternion(p)
    q = _as_quaternion(q)
    if np.any(p.norm() * q.norm() >= 1.0):
        raise DivergenceError("the star hypergeometric series needs |p| |q| < 1")
    shape = np.broadcast_shapes(p.shape, q.shape)
    pk = Quaternion.from_array(np.broadcast_to(np.array([1.0, 0, 0, 0]), shape + (4,)))
    qk = pk
    total = pk.array.copy()
    coef = 1.0
    for k in range(n_terms - 1):
        coef *= (a + k) * (b + k) / ((c + k) * (k + 1))
        pk = pk * p
        qk = qk * q
        term = coef * (pk * qk).array
        total += term
        size = np.linalg.norm(term, axis=-1)
        if np.all(size <= tol * np.maximum(1.0, np.linalg.norm(total, axis=-1))):
            break
    return Quaternion.from_array(total)


def bergman_kernel_series(p, q, beta: float, eta: float, n_terms: int = 400, tol: float = 1e-16) -> Quaternion:
    """Reproducing kernel ``Gamma(beta+eta)/(pi Gamma(eta) Gamma(beta)) 2F1*(1, eta+beta; beta | [p, conj q])``."""
    if beta <= 0 or eta <= 0:
        raise DomainError("beta and eta must be positive")
    p = _as_quaternion(p)
    q = _as_quaternion(q)
    if np.any(p.norm() >= 1.0) or np.any(q.norm() >= 1.0):
        raise DomainError("kernel arguments must lie in the open unit ball")
    scale = math.exp(special.gammaln(beta + eta) - special.gammaln(eta) - special.gammaln(beta)) / math.pi
    return scale * hyper2f1_star(1.0, eta + beta, beta, p, q.conj(), n_terms=n_terms, tol=tol)


def bergman_kernel_closed_slice(z, w, eta: float):
    """``(eta/pi) (1 - z conj(w))^-(eta+1)``: the ``beta = 1`` kernel on one slice."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    if np.any(np.abs(z) >= 1) or np.any(np.abs(w) >= 1):
        raise DomainError("kernel arguments must lie in the open unit disc")
    return eta / math.pi * (1.0 - z * np.conj(w)) ** (-(eta + 1.0))


def _hankel_closed_complex(z, x, y, alpha):
    z, x, y = np.broadcast_arrays(np.asarray(z, dtype=complex), np.asarray(x, float), np.asarray(y, float))
    one_minus = 1.0 - z
    w = z * x * y / one_minus**2
    g = bessel_i_scaled(alpha, w, exp_scaled=True)
    exponent = -z * (x + y) / one_minus + 2.0 * np.sqrt(w)
    return one_minus ** (-(alpha + 1.0)) * np.exp(exponent) * g


def _hankel_series_complex(z, x, y, alpha, n_max):
    z = np.asarray(z, dtype=complex)
    px = phi_table(n_max + 1, alpha, x)
    py = phi_table(n_max + 1, alpha, y)
    acc = np.zeros(np.broadcast_shapes(z.shape, px.shape[1:], py.shape[1:]), dtype=complex)
    for n in range(n_max, -1, -1):
        acc = acc * z + px[n] * py[n]
    return acc


def _check_ball(q):
    if isinstance(q, Quaternion):
        r = q.norm()
    else:
        r = np.abs(np.asarray(q))
    if np.any(r >= 1.0):
        raise DomainError("the Hankel kernel needs |q| < 1")


def hankel_kernel_closed(q, x, y, alpha: float):
    """Closed-form kernel ``R_q^alpha(x, y)``.

    ``q`` may be a :class:`Quaternion` (result is a Quaternion) or a complex
    slice coordinate (result is complex). ``x``, ``y`` broadcast against ``q``.
    """
    _check_ball(q)
    if isinstance(q, Quaternion):
        z, axis = to_slice(q)
        return from_slice(_hankel_closed_complex(z, x, y, alpha), axis)
    return _hankel_closed_complex(q, x, y, alpha)


def hankel_kernel_series(q, x, y, alpha: float, n_max: int = 80):
    """Hille-Hardy partial sum ``sum_{n <= n_max} q^n phi_n(x) phi_n(y)``."""
    _check_ball(q)
    if isinstance(q, Quaternion):
        z, axis = to_slice(q)
        return from_slice(_hankel_series_complex(z, x, y, alpha, n_max), axis)
    return _hankel_series_complex(q, x, y, alpha, n_max)


def kernel_reproduce_check(q, x, y, alpha, beta, eta, rule: QuadratureRule | None = None, axis=None):
    """Both sides of ``R_q(x,y) = int_{B_I} conj(K(p,q)) R_p(x,y) omega(|p|^2) dlambda(p)``.

    The disk integral runs over the slice ``axis`` (default ``i``); ``q`` may
    sit in any slice. The default rule is graded in angle because ``R_p`` has
    non-decaying Taylor coefficients. ``x`` and ``y`` broadcast; returns
    ``(closed_form, integral)`` as Quaternions of shape ``q.shape + xy.shape``.
    """
    q = _as_quaternion(q)
    if rule is None:
        rule = disk_rule(40, 96, beta, eta, graded_tol=1e-12)
    x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
    keep = rule.weights > 0
    nodes = rule.nodes[keep]
    w = rule.weights[keep]

    r_max = float(np.max(q.norm())) if q.shape != () else float(q.norm())
    n_max = _series_length(r_max, beta, eta)
    # conj(K(p, q)) = sum_n q^n conj(p)^n / (pi gamma_n): integrate the p-part first
    kernel = _hankel_closed_complex(nodes.reshape((-1,) + (1,) * x.ndim), x, y, alpha)
    powers = np.conj(nodes)[None, :] ** np.arange(n_max + 1)[:, None]
    moments = np.tensordot(powers * w, kernel, axes=(1, 0))
    moments /= math.pi * gamma_moment(np.arange(n_max + 1), beta, eta).reshape((-1,) + (1,) * x.ndim)

    p_axis = np.array([1.0, 0, 0]) if axis is None else np.asarray(_as_quaternion(axis).vector)
    moment_q = from_slice(moments, p_axis)
    z, q_axis = to_slice(q)
    qz = z.reshape(z.shape + (1,) * x.ndim)
    qa = q_axis.reshape(q_axis.shape[:-1] + (1,) * x.ndim + (3,))
    total = None
    for n in range(n_max, -1, -1):
        term = moment_q[n]
        total = term if total is None else from_slice(qz, qa) * total + term
    lhs = hankel_kernel_closed(Quaternion.from_array(q.array.reshape(q.shape + (1,) * x.ndim + (4,))), x, y, alpha)
    return lhs, total


def _series_length(r, beta, eta, tol=1e-18):
    """Smallest ``n`` with ``r^n / gamma_n <= tol / gamma_0``, capped at 2000."""
    if r == 0.0:
        return 0
    n = np.arange(2001)
    ratio = np.exp(n * math.log(r) - np.log(gamma_moment(n, beta, eta)) + math.log(gamma_moment(0, beta, eta)))
    below = np.nonzero(ratio <= tol)[0]
    return int(below[0]) if below.size else 2000


def diagonal_identity_check(q, y, alpha: float, rule: QuadratureRule | None = None):
    """Both sides of ``R_{|q|^2}(y, y) = int_0^inf |R_q(x, y)|^2 x^alpha e^{-x} dx``.

    Returns ``(closed_form, quadrature)`` as real arrays of ``q``'s shape.
    """
    q = _as_quaternion(q)
    if rule is None:
        rule = gauss_laguerre(256, float(alpha))
    z, _ = to_slice(q)
    r2 = np.abs(z) ** 2
    lhs = _hankel_closed_complex(r2, y, y, alpha).real
    keep = rule.weights > 0
    xs = rule.nodes[keep]
    vals = _hankel_closed_complex(z[..., None], xs, y, alpha)
    rhs = np.sum(rule.weights[keep] * np.abs(vals) ** 2, axis=-1)
    return lhs, rhs
