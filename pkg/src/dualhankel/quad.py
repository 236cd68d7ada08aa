"""Gauss rules for ``x^alpha e^{-x} dx`` and ``t^(beta-1) (1-t)^(eta-1) dt``, plus a disk rule.

Nodes are eigenvalues of the Jacobi matrix of the orthonormal recurrence,
polished by Newton's method on that recurrence. Weights come from the
Christoffel function ``1 / sum_k p_k(x)^2`` rather than from eigenvector
components, which keeps them accurate to full *relative* precision even
where they are as small as ``1e-300``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import special

from ._linalg import hermitian_eigvalsh, tridiag_eigh
from .errors import ConvergenceError, DomainError
from .quat import CANONICAL_AXIS, Quaternion, from_slice

__all__ = [
    "QuadratureRule",
    "gauss_laguerre",
    "gauss_jacobi_unit",
    "disk_rule",
    "integrate",
    "tridiag_eigh",
    "hermitian_eigvalsh",
]

_LN_BIG = 100 * math.log(10.0)


@dataclass(frozen=True, eq=False)
class QuadratureRule:
    """Nodes and weights of a quadrature rule.

    ``kind`` is ``"laguerre"``, ``"jacobi"`` or ``"disk"``; ``params`` holds
    the defining parameters. Disk nodes are complex slice coordinates
    ``u + iv``; :meth:`points` embeds them in a chosen slice.
    """

    nodes: np.ndarray
    weights: np.ndarray
    kind: str
    params: tuple

    def __len__(self):
        return self.nodes.size

    @property
    def mass(self) -> float:
        return float(np.sum(self.weights))

    def points(self, axis=None) -> Quaternion:
        if self.kind != "disk":
            return Quaternion(self.nodes)
        return from_slice(self.nodes, CANONICAL_AXIS if axis is None else axis)


def _freeze(*arrays):
    for a in arrays:
        a.flags.writeable = False


def _gauss_from_recurrence(diag, off, mu0, max_newton=12):
    """Gauss rule for orthonormal polynomials ``x p_k = b_{k+1} p_{k+1} + a_k p_k + b_k p_{k-1}``.

    ``diag[k] = a_k`` and ``off[k] = b_{k+1}`` for ``k = 0 .. n-1``.
    """
    n = len(diag)
    x = tridiag_eigh(diag, off[: n - 1])
    for _ in range(max_newton):
        p, dp, _ = _recurrence_eval(x, diag, off, mu0)
        step = p / dp
        x = x - step
        if np.all(np.abs(step) <= 4 * np.finfo(float).eps * np.abs(x)):
            break
    else:
        if np.any(np.abs(step) > 1e-12 * np.abs(x)):
            raise ConvergenceError("Newton polishing of Gauss nodes did not converge")
    _, _, log_christoffel = _recurrence_eval(x, diag, off, mu0)
    return x, np.exp(-log_christoffel)


def _recurrence_eval(x, diag, off, mu0):
    """``p_n(x)``, ``p_n'(x)`` (common scale) and ``log sum_{k<n} p_k(x)^2``."""
    n = len(diag)
    p_prev = np.zeros_like(x)
    p = np.full_like(x, 1.0 / math.sqrt(mu0))
    d_prev = np.zeros_like(x)
    d = np.zeros_like(x)
    total = p * p
    shift = np.zeros_like(x)
    for k in range(n):
        back = off[k - 1] if k > 0 else 0.0
        p_next = ((x - diag[k]) * p - back * p_prev) / off[k]
        d_next = ((x - diag[k]) * d + p - back * d_prev) / off[k]
        p_prev, p, d_prev, d = p, p_next, d, d_next
        if k < n - 1:
            total = total + p * p
        big = (np.abs(p) > 1e100) | (np.abs(d) > 1e100)
        if np.any(big):
            for arr in (p_prev, p, d_prev, d):
                arr[big] *= 1e-100
            total[big] *= 1e-200
            shift[big] += 2 * _LN_BIG
    return p, d, np.log(total) + shift


@lru_cache(maxsize=64)
def gauss_laguerre(n: int, alpha: float) -> QuadratureRule:
    """``n``-point Gauss rule for ``x^alpha e^{-x} dx`` on ``(0, inf)``.

    Exact for polynomials of degree ``2n - 1``. Weights of the largest nodes
    underflow to zero for ``n`` beyond ~180; :func:`integrate` skips them.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if alpha <= -1:
        raise DomainError(f"alpha must exceed -1, got {alpha}")
    k = np.arange(n + 1, dtype=float)
    diag = 2 * k[:n] + alpha + 1
    off = np.sqrt(k[1:] * (k[1:] + alpha))
    nodes, weights = _gauss_from_recurrence(diag, off, math.gamma(alpha + 1))
    _freeze(nodes, weights)
    return QuadratureRule(nodes, weights, "laguerre", (float(alpha),))


def _jacobi_recurrence(n, a, b):
    """Orthonormal recurrence of Jacobi weight ``(1-x)^a (1+x)^b`` on [-1, 1]."""
    k = np.arange(n + 1, dtype=float)
    s = 2 * k + a + b
    diag = np.empty(n)
    with np.errstate(divide="ignore", invalid="ignore"):
        diag[:] = (b * b - a * a) / (s[:n] * (s[:n] + 2))
    diag[0] = (b - a) / (a + b + 2)
    kk = k[1:]
    ss = s[1:]
    with np.errstate(divide="ignore", invalid="ignore"):
        beta = 4 * kk * (kk + a) * (kk + b) * (kk + a + b) / (ss**2 * (ss + 1) * (ss - 1))
    beta[0] = 4 * (a + 1) * (b + 1) / ((a + b + 2) ** 2 * (a + b + 3))
    return diag, np.sqrt(beta)


@lru_cache(maxsize=64)
def gauss_jacobi_unit(n: int, beta: float, eta: float) -> QuadratureRule:
    """``n``-point Gauss rule for ``t^(beta-1) (1-t)^(eta-1) dt`` on ``(0, 1)``."""
    if n < 1:
        raise ValueError("n must be positive")
    if beta <= 0 or eta <= 0:
        raise DomainError("beta and eta must be positive")
    diag, off = _jacobi_recurrence(n, eta - 1.0, beta - 1.0)
    mu0 = math.exp(special.betaln(beta, eta))
    # t = (1 + x) / 2 rescales the recurrence and the measure
    nodes, weights = _gauss_from_recurrence((1 + diag) / 2, off / 2, mu0)
    _freeze(nodes, weights)
    return QuadratureRule(nodes, weights, "jacobi", (float(beta), float(eta)))


def disk_rule(
    n_radial: int,
    n_theta: int,
    beta: float,
    eta: float,
    graded_tol: float | None = None,
    max_theta: int = 1 << 18,
) -> QuadratureRule:
    """Product rule for ``int_{B_I} f(q) omega(|q|^2) du dv`` on a slice disk.

    With ``t = r^2`` the integral is ``1/2 int_0^1 int_0^{2pi} f(sqrt(t) e^{I theta})
    omega(t) dtheta dt``: Gauss-Jacobi in ``t`` and the uniform ``n_theta``-point
    rule in ``theta`` (exact for trigonometric polynomials of degree
    ``< n_theta``).

    A uniform angular rule aliases frequency ``k`` onto ``k - n_theta``; for
    integrands whose Taylor coefficients do not decay (the Hankel kernel
    ``R_p``), that error only falls off algebraically. ``graded_tol`` raises the
    angular count on each circle of radius ``r`` to ``log(graded_tol) / log(r)``
    so that ``r^n_theta <= graded_tol``.
    """
    if n_radial < 1 or n_theta < 1:
        raise ValueError("rule sizes must be positive")
    radial = gauss_jacobi_unit(n_radial, beta, eta)
    nodes, weights = [], []
    for t, wt in zip(radial.nodes, radial.weights):
        r = math.sqrt(t)
        m = n_theta
        if graded_tol is not None:
            m = max(m, min(max_theta, math.ceil(math.log(graded_tol) / math.log(r))))
        theta = 2 * math.pi * np.arange(m) / m
        nodes.append(r * np.exp(1j * theta))
        weights.append(np.full(m, math.pi * wt / m))
    nodes = np.concatenate(nodes)
    weights = np.concatenate(weights)
    _freeze(nodes, weights)
    return QuadratureRule(nodes, weights, "disk", (n_radial, n_theta, float(beta), float(eta), graded_tol))


def integrate(rule: QuadratureRule, f: Callable, axis=None):
    """``sum_i w_i f(x_i)``.

    ``f`` receives real nodes (half-line and unit-interval rules) or a
    :class:`Quaternion` array of slice points (disk rules, slice ``axis``,
    default ``i``). Values may be real, complex, quaternion arrays of shape
    ``(n, 4)`` or :class:`Quaternion`. Nodes whose weight underflowed to zero
    are not evaluated.
    """
    keep = rule.weights > 0
    w = rule.weights[keep]
    x = rule.points(axis)[keep] if rule.kind == "disk" else rule.nodes[keep]
    values = f(x)
    if isinstance(values, Quaternion):
        return Quaternion.from_array(np.tensordot(w, values.array, axes=(0, 0)))
    return np.tensordot(w, np.asarray(values), axes=(0, 0))
