"""The dual transform ``S^alpha_y``, its adjoint and the transforms around it.

Functions on the half line are stored as :class:`LaguerreCoeffs`
(``phi = sum_n phi_n^alpha a_n``) and slice regular functions on the ball as
:class:`MonomialCoeffs` (``f(q) = sum_n q^n c_n``). Coefficients are
quaternions on the right.

The spectral form ``S phi_n = phi_n(y) e_n`` defines the operator. The
quadrature form

    S phi(q) = int_0^inf R_q(x, y) phi(x) x^alpha e^{-x} dx

reproduces it and is used as an independent check.

Pairings of functions on the ball use ``<f, g>_omega = int conj(f) g omega``,
which on coefficients reads ``pi sum_n gamma_n conj(c_n) d_n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError, SliceMismatchError
from .kernels import _hankel_closed_complex
from .quad import QuadratureRule, disk_rule, gauss_laguerre
from .quat import (
    CANONICAL_AXIS,
    Quaternion,
    SlicePoint,
    _as_quaternion,
    _axis_array,
    _hamilton,
    eval_power_series,
    from_slice,
    to_slice,
)
from .specfun import Params, gamma_moment, laguerre_table, phi_table

__all__ = [
    "LaguerreCoeffs",
    "MonomialCoeffs",
    "RangeReport",
    "dual_transform_spectral",
    "dual_transform_quadrature",
    "adjoint_apply_spectral",
    "adjoint_apply_quadrature",
    "hankel_fractional_apply",
    "hankel_fractional_chain",
    "bargmann_apply",
    "slice_derivative",
    "slice_taylor_coefficients",
    "slice_inner_product",
    "build_operator_matrix",
    "null_space_indices",
    "range_basis_report",
    "pointwise_bound",
]

DEFAULT_TRUNCATION = 40
DEFAULT_HALF_LINE_NODES = 200
# radius of the circle used to read Taylor coefficients off quadrature images
COEFF_RADIUS = 0.9


def _quaternion_coeffs(coeffs) -> np.ndarray:
    if isinstance(coeffs, Quaternion):
        c = np.array(coeffs.array)
    else:
        c = np.array(coeffs, dtype=float)
        if c.ndim == 1:
            c = np.stack([c, np.zeros_like(c), np.zeros_like(c), np.zeros_like(c)], axis=-1)
    if c.ndim != 2 or c.shape[1] != 4:
        raise ValueError(f"coefficients must have shape (N,) or (N, 4), got {c.shape}")
    if not np.all(np.isfinite(c)):
        raise ValueError("coefficients must be finite")
    c.flags.writeable = False
    return c


def _qdot(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``sum_n conj(a_n) b_n`` for quaternion arrays of shape ``(N, 4)``."""
    conj_a = a * np.array([1.0, -1.0, -1.0, -1.0])
    return np.sum(_hamilton(conj_a, b), axis=0)


@dataclass(frozen=True, eq=False)
class LaguerreCoeffs:
    """``phi = sum_n phi_n^alpha a_n`` in ``L^{2,alpha}(0, inf)``, quaternion ``a_n``."""

    alpha: float
    coeffs: np.ndarray

    def __post_init__(self):
        if self.alpha <= -1:
            raise DomainError(f"alpha must exceed -1, got {self.alpha}")
        object.__setattr__(self, "coeffs", _quaternion_coeffs(self.coeffs))

    @classmethod
    def basis(cls, n: int, size: int, alpha: float) -> "LaguerreCoeffs":
        c = np.zeros(size)
        c[n] = 1.0
        return cls(alpha, c)

    def __len__(self):
        return self.coeffs.shape[0]

    def __call__(self, x) -> Quaternion:
        table = phi_table(len(self), self.alpha, x)
        return Quaternion.from_array(np.tensordot(table, self.coeffs, axes=(0, 0)))

    def norm2(self) -> float:
        return float(np.sum(self.coeffs**2))

    def inner(self, other: "LaguerreCoeffs") -> Quaternion:
        """``<self, other> = sum conj(a_n) b_n`` (truncated to the shorter length)."""
        n = min(len(self), len(other))
        return Quaternion.from_array(_qdot(self.coeffs[:n], other.coeffs[:n]))


@dataclass(frozen=True, eq=False)
class MonomialCoeffs:
    """``f(q) = sum_n q^n c_n`` on the unit ball, quaternion ``c_n`` on the right."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _quaternion_coeffs(self.coeffs))

    @classmethod
    def basis(cls, n: int, size: int | None = None) -> "MonomialCoeffs":
        c = np.zeros(n + 1 if size is None else size)
        c[n] = 1.0
        return cls(c)

    def __len__(self):
        return self.coeffs.shape[0]

    def __call__(self, q) -> Quaternion:
        return eval_power_series(self.coeffs, q)

    def norm2(self, beta: float, eta: float, moments=None) -> float:
        g = _moments(len(self), beta, eta, moments)
        return float(math.pi * np.sum(g * np.sum(self.coeffs**2, axis=1)))

    def inner(self, other: "MonomialCoeffs", beta: float, eta: float, moments=None) -> Quaternion:
        n = min(len(self), len(other))
        g = _moments(n, beta, eta, moments)
        return Quaternion.from_array(math.pi * _qdot(self.coeffs[:n], g[:, None] * other.coeffs[:n]))


def _moments(n, beta, eta, moments):
    if moments is None:
        return gamma_moment(np.arange(n), beta, eta)
    g = np.asarray(moments, dtype=float)
    if g.size < n:
        raise ValueError(f"need {n} moments, got {g.size}")
    return g[:n]


def dual_transform_spectral(phi: LaguerreCoeffs, y: float) -> MonomialCoeffs:
    """``S^alpha_y phi`` on coefficients: ``c_n = phi_n^alpha(y) a_n``."""
    if y < 0:
        raise DomainError("y must be nonnegative")
    scale = phi_table(len(phi), phi.alpha, y)
    return MonomialCoeffs(scale[:, None] * phi.coeffs)


def _values_array(values, n) -> np.ndarray:
    """Function values as a real ``(n, 4)`` quaternion array."""
    if isinstance(values, Quaternion):
        return np.broadcast_to(values.array, (n, 4))
    values = np.asarray(values)
    if np.iscomplexobj(values):
        raise TypeError("complex values are ambiguous; return a Quaternion instead")
    if values.shape == (n, 4):
        return values.astype(float)
    out = np.zeros((n, 4))
    out[:, 0] = np.broadcast_to(values, (n,))
    return out


def _slice_kernel_sum(kernel, axis, values) -> Quaternion:
    """``sum_j from_slice(kernel[..., j], axis) * values[j]``.

    ``kernel`` is complex with trailing node axis; ``values`` is ``(J, 4)``.
    The sum splits as ``P + axis * Q`` with real tensor contractions.
    """
    p = np.tensordot(kernel.real, values, axes=(-1, 0))
    q = np.tensordot(kernel.imag, values, axes=(-1, 0))
    unit = from_slice(np.ones(np.shape(axis)[:-1], dtype=complex) * 1j, axis).array
    unit = unit.reshape(unit.shape[:-1] + (1,) * (q.ndim - 1 - (unit.ndim - 1)) + (4,))
    return Quaternion.from_array(p + _hamilton(unit, q))


def dual_transform_quadrature(phi: Callable, y: float, alpha: float, q, rule: QuadratureRule | None = None) -> Quaternion:
    """``S^alpha_y phi(q) = int R_q(x, y) phi(x) x^alpha e^{-x} dx`` by Gauss-Laguerre.

    ``phi`` maps an array of nodes to real values or to a :class:`Quaternion`
    array (a :class:`LaguerreCoeffs` instance works). Returns a Quaternion of
    ``q``'s shape.
    """
    if y < 0:
        raise DomainError("y must be nonnegative")
    if rule is None:
        rule = gauss_laguerre(DEFAULT_HALF_LINE_NODES, float(alpha))
    q = _as_quaternion(q)
    if np.any(q.norm() >= 1.0):
        raise DomainError("the transform is evaluated inside the unit ball")
    keep = rule.weights > 0
    xs, w = rule.nodes[keep], rule.weights[keep]
    values = _values_array(phi(xs), xs.size)
    z, axis = to_slice(q)
    kernel = _hankel_closed_complex(z[..., None], xs, y, alpha) * w
    return _slice_kernel_sum(kernel, axis, values)


def adjoint_apply_spectral(G: MonomialCoeffs, y: float, params: Params, moments=None) -> LaguerreCoeffs:
    """Adjoint on coefficients: ``b_n = pi gamma_n phi_n^alpha(y) g_n``.

    ``moments`` replaces ``gamma_n^{beta,eta}`` by a user-supplied sequence
    (general radial weights).
    """
    if y < 0:
        raise DomainError("y must be nonnegative")
    n = len(G)
    g = _moments(n, params.beta, params.eta, moments)
    scale = math.pi * g * phi_table(n, params.alpha, y)
    return LaguerreCoeffs(params.alpha, scale[:, None] * G.coeffs)


def adjoint_apply_quadrature(
    G: Callable,
    x,
    y: float,
    params: Params,
    disk: QuadratureRule | None = None,
    axis=None,
) -> Quaternion:
    """``(S^alpha_y)^* G(x) = int_{B_I} R_{conj q}(x, y) G(q) omega(|q|^2) du dv``.

    ``G`` receives the disk nodes as a Quaternion array in slice ``axis``. The
    default disk rule is graded in angle: ``R_{conj q}`` has Taylor
    coefficients that do not decay, so a uniform angular rule would alias.
    """
    if disk is None:
        disk = disk_rule(16, 64, params.beta, params.eta, graded_tol=1e-13)
    if disk.kind != "disk" or disk.params[2:4] != (float(params.beta), float(params.eta)):
        raise ValueError("disk rule does not match the weight parameters")
    axis_vec = CANONICAL_AXIS if axis is None else _axis_array(axis)
    keep = disk.weights > 0
    z, w = disk.nodes[keep], disk.weights[keep]
    values = _values_array(G(from_slice(z, axis_vec)), z.size)
    x = np.asarray(x, dtype=float)
    kernel = _hankel_closed_complex(np.conj(z), x[..., None], y, params.alpha) * w
    return _slice_kernel_sum(kernel, axis_vec, values)


def hankel_fractional_apply(phi: LaguerreCoeffs, t) -> LaguerreCoeffs:
    """Fractional Hankel transform ``L_t^alpha``: ``a_n -> t^n a_n``.

    ``t`` is a real, complex (slice ``i``) or quaternion parameter with
    ``|t| <= 1``; powers act on the left of the coefficients.
    """
    t = Quaternion.from_complex(t) if np.iscomplexobj(t) else _as_quaternion(t)
    if t.shape != ():
        raise ValueError("t must be a single parameter")
    if float(t.norm()) > 1.0 + 1e-15:
        raise DomainError("the fractional Hankel transform needs |t| <= 1")
    z, axis = to_slice(t)
    powers = from_slice(z ** np.arange(len(phi)), axis).array
    return LaguerreCoeffs(phi.alpha, _hamilton(powers, phi.coeffs))


def hankel_fractional_chain(phi: LaguerreCoeffs, ts, tol: float = 1e-14) -> LaguerreCoeffs:
    """Apply ``L_{t_1}``, then ``L_{t_2}``, ... with all parameters on one slice.

    Composition is only defined here for commuting parameters; mixing slices
    raises :class:`SliceMismatchError`.
    """
    params = [Quaternion.from_complex(t) if np.iscomplexobj(t) else _as_quaternion(t) for t in ts]
    axis = None
    for t in params:
        vec = np.asarray(t.vector)
        size = np.linalg.norm(vec)
        if size <= tol:
            continue
        unit = vec / size
        if axis is None:
            axis = unit
        elif np.linalg.norm(np.cross(axis, unit)) > tol:
            raise SliceMismatchError("fractional Hankel parameters lie on different slices")
    out = phi
    for t in params:
        out = hankel_fractional_apply(out, t)
    return out


def bargmann_apply(phi: Callable, q, alpha: float, rule: QuadratureRule | None = None) -> Quaternion:
    """Second Bargmann transform ``(1-q)^-(alpha+1) int t^alpha exp(-t/(1-q)) phi(t) dt``.

    Evaluated as a Gauss-Laguerre sum of ``exp(-t q/(1-q)) phi(t)``.
    """
    if rule is None:
        rule = gauss_laguerre(DEFAULT_HALF_LINE_NODES, float(alpha))
    q = _as_quaternion(q)
    if np.any(q.norm() >= 1.0):
        raise DomainError("the transform is evaluated inside the unit ball")
    keep = rule.weights > 0
    xs, w = rule.nodes[keep], rule.weights[keep]
    values = _values_array(phi(xs), xs.size)
    z, axis = to_slice(q)
    zz = z[..., None]
    kernel = (1.0 - zz) ** (-(alpha + 1.0)) * np.exp(-xs * zz / (1.0 - zz)) * w
    return _slice_kernel_sum(kernel, axis, values)


def slice_derivative(f: Callable, point, h: float = 1e-5) -> Quaternion:
    """``1/2 (d/du + I d/dv) f(u + v I)`` by central differences.

    ``point`` is a :class:`SlicePoint` or a Quaternion (its own slice is
    used; real points take the canonical axis). ``I`` multiplies on the left.
    """
    if isinstance(point, SlicePoint):
        z = np.asarray(point.u) + 1j * np.asarray(point.v)
        axis = np.asarray(point.axis.vector)
    else:
        z, axis = to_slice(point)
    fu = f(from_slice(z + h, axis)) - f(from_slice(z - h, axis))
    fv = f(from_slice(z + 1j * h, axis)) - f(from_slice(z - 1j * h, axis))
    unit = from_slice(np.ones(np.shape(z)) * 1j, axis)
    return (fu + unit * fv) / (4.0 * h)


def slice_taylor_coefficients(f: Callable, n_terms: int, radius: float = COEFF_RADIUS, n_theta: int | None = None, axis=None) -> np.ndarray:
    """Right coefficients ``c_m`` of a slice regular ``f`` read off one circle.

    ``c_m = (1 / (2 pi r^m)) int e^{-I m theta} f(r e^{I theta}) dtheta`` by the
    trapezoidal rule. Returns a ``(n_terms, 4)`` array. Near the edge of the
    ball the quadrature form of ``S`` loses accuracy, so pairings of its images
    go through these coefficients rather than through a disk rule.
    """
    if not 0 < radius < 1:
        raise DomainError("radius must lie in (0, 1)")
    if n_theta is None:
        n_theta = max(128, 2 * n_terms)
    axis_vec = CANONICAL_AXIS if axis is None else _axis_array(axis)
    theta = 2 * math.pi * np.arange(n_theta) / n_theta
    values = _values_array(f(from_slice(radius * np.exp(1j * theta), axis_vec)), n_theta)
    unit = from_slice(1j, axis_vec).array
    rotated = _hamilton(np.broadcast_to(unit, values.shape), values)
    m = np.arange(n_terms)[:, None]
    cos = np.cos(m * theta) / n_theta
    sin = np.sin(m * theta) / n_theta
    coeffs = cos @ values - sin @ rotated
    return coeffs / radius ** np.arange(n_terms)[:, None]


def slice_inner_product(f, g, beta: float, eta: float, n_terms: int = DEFAULT_TRUNCATION, radius: float = COEFF_RADIUS, axis=None) -> Quaternion:
    """``<f, g>_omega`` through Taylor coefficients; ``f``, ``g`` are callables or MonomialCoeffs."""

    def coeffs(h):
        if isinstance(h, MonomialCoeffs):
            c = np.zeros((n_terms, 4))
            k = min(n_terms, len(h))
            c[:k] = h.coeffs[:k]
            return c
        return slice_taylor_coefficients(h, n_terms, radius=radius, axis=axis)

    return MonomialCoeffs(coeffs(f)).inner(MonomialCoeffs(coeffs(g)), beta, eta)


def build_operator_matrix(
    y: float,
    params: Params,
    N: int = DEFAULT_TRUNCATION,
    form: str = "closed",
    rule: QuadratureRule | None = None,
    radius: float = COEFF_RADIUS,
) -> np.ndarray:
    """Matrix of ``S^alpha_y`` in the orthonormal pair ``(phi_n)``, ``(e_m / sqrt(pi gamma_m))``.

    ``form="closed"`` gives ``diag(sqrt(pi gamma_n) phi_n(y))``. ``form="discretized"``
    assembles ``<e_m / sqrt(pi gamma_m), S phi_n>_omega`` from Gauss-Laguerre images
    of ``S phi_n`` on the circle of radius ``radius`` in slice ``i``; those pairings
    are real because the images have real coefficients.
    """
    if N < 1:
        raise ValueError("N must be positive")
    norms = np.sqrt(math.pi * gamma_moment(np.arange(N), params.beta, params.eta))
    if form == "closed":
        return np.diag(norms * phi_table(N, params.alpha, y))
    if form != "discretized":
        raise ValueError(f"unknown form {form!r}")
    if rule is None:
        rule = gauss_laguerre(DEFAULT_HALF_LINE_NODES, float(params.alpha))
    keep = rule.weights > 0
    xs, w = rule.nodes[keep], rule.weights[keep]
    n_theta = max(128, 4 * N)
    theta = 2 * math.pi * np.arange(n_theta) / n_theta
    circle = radius * np.exp(1j * theta)
    kernel = _hankel_closed_complex(circle[:, None], xs, y, params.alpha) * w
    images = kernel @ phi_table(N, params.alpha, xs).T  # (theta, n)
    # complex-slice Taylor coefficients: c_m = mean(e^{-i m theta} f) / r^m
    m = np.arange(N)
    coeffs = (np.exp(-1j * np.outer(m, theta)) @ images) / n_theta / radius ** m[:, None]
    return norms[:, None] * coeffs.real


def null_space_indices(y: float, alpha: float, N: int, tol: float = 1e-9) -> tuple:
    """``{n <= N : L_n^alpha(y) = 0}`` up to ``tol`` relative to neighbouring values."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    if not tol > 0:
        raise ValueError("tol must be positive")
    table = np.abs(laguerre_table(N + 1, alpha, y))
    out = []
    for n in range(N + 1):
        neighbours = table[n + 1] if n == 0 else max(table[n - 1], table[n + 1])
        if table[n] <= tol * max(1.0, neighbours):
            out.append(n)
    return tuple(out)


@dataclass(frozen=True)
class RangeReport:
    """Monomial directions that survive ``S^alpha_y`` up to degree ``N``."""

    y: float
    alpha: float
    N: int
    surviving: tuple
    null_indices: tuple

    @property
    def strict_inclusion(self) -> bool:
        """Some monomial is missing from the range, so it is not the whole space."""
        return len(self.null_indices) > 0


def range_basis_report(y: float, alpha: float, N: int, tol: float = 1e-9) -> RangeReport:
    null = null_space_indices(y, alpha, N, tol)
    surviving = tuple(n for n in range(N + 1) if n not in null)
    return RangeReport(float(y), float(alpha), int(N), surviving, null)


def pointwise_bound(phi: LaguerreCoeffs, y: float, q):
    """``(|S phi(q)|^2, R_{|q|^2}(y, y) ||phi||^2)``; the first never exceeds the second."""
    q = _as_quaternion(q)
    value = eval_power_series(dual_transform_spectral(phi, y).coeffs, q)
    z, _ = to_slice(q)
    bound = _hankel_closed_complex(np.abs(z) ** 2, y, y, phi.alpha).real * phi.norm2()
    return value.norm2(), bound
