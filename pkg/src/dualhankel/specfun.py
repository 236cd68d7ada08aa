"""Real special functions: log-gamma, Pochhammer, scaled Bessel I, Laguerre.

The normalized Laguerre functions

    phi_n(x) = sqrt(n! / Gamma(alpha + n + 1)) * L_n^(alpha)(x)

are orthonormal for the measure ``x^alpha e^{-x} dx`` on the half line, and
``gamma_moment`` gives the Beta moments ``int_0^1 t^n t^(beta-1) (1-t)^(eta-1) dt``
that set the monomial norms of the weighted Bergman spaces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from ._linalg import tridiag_eigh
from .errors import ConvergenceError, DomainError

__all__ = [
    "Params",
    "ln_gamma",
    "pochhammer",
    "bessel_i_scaled",
    "laguerre",
    "laguerre_table",
    "phi_n",
    "phi_table",
    "laguerre_zeros",
    "gamma_moment",
    "log_gamma_ratio",
    "laguerre_asymptotic",
]


@dataclass(frozen=True)
class Params:
    """Parameter pack ``(alpha, beta, eta, y)``.

    ``alpha > -1`` is the Laguerre index, ``beta, eta > 0`` define the
    weight ``t^(beta-1) (1-t)^(eta-1)`` and ``y >= 0`` is the frozen kernel
    argument.
    """

    alpha: float = 0.0
    beta: float = 1.0
    eta: float = 1.0
    y: float = 0.0

    def __post_init__(self):
        for name in ("alpha", "beta", "eta", "y"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value}")
        if self.alpha <= -1:
            raise DomainError(f"alpha must exceed -1, got {self.alpha}")
        if self.beta <= 0:
            raise DomainError(f"beta must be positive, got {self.beta}")
        if self.eta <= 0:
            raise DomainError(f"eta must be positive, got {self.eta}")
        if self.y < 0:
            raise DomainError(f"y must be nonnegative, got {self.y}")

    def replace(self, **changes) -> "Params":
        values = dict(alpha=self.alpha, beta=self.beta, eta=self.eta, y=self.y)
        values.update(changes)
        return Params(**values)


def ln_gamma(x):
    """``log Gamma(x)`` for ``x > 0`` (scalars or arrays)."""
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0) or np.any(~np.isfinite(xa)):
        raise DomainError("ln_gamma is only defined here for finite x > 0")
    out = special.gammaln(xa)
    return float(out) if out.ndim == 0 else out


def pochhammer(a: float, k: int) -> float:
    """Rising factorial ``(a)_k = a (a+1) ... (a+k-1)``, with ``(a)_0 = 1``."""
    if k < 0:
        raise ValueError("k must be a nonnegative integer")
    out = 1.0
    for j in range(k):
        out *= a + j
    return out


_SERIES_RADIUS = 16.0


def bessel_i_scaled(alpha: float, w, exp_scaled: bool = False):
    """Entire function ``g(w) = sum_n w^n / (n! Gamma(alpha + n + 1))``.

    ``I_alpha(xi) = (xi/2)^alpha g((xi/2)^2)``, so ``g`` carries the Bessel
    function without any fractional power; ``w`` may be real or complex.
    With ``exp_scaled`` the result is multiplied by ``exp(-2 sqrt(w))``
    (principal root), which keeps large arguments in range.

    The Taylor series is used for ``|w| <= 16``. Beyond that the series loses
    digits to cancellation off the positive axis, so the value is taken from
    the exponentially scaled ``I_alpha`` of the AMOS library.
    """
    if alpha <= -1:
        raise DomainError(f"alpha must exceed -1, got {alpha}")
    w = np.asarray(w)
    is_complex = np.iscomplexobj(w)
    wc = w.astype(complex)
    out = np.empty(wc.shape, dtype=complex)

    small = np.abs(wc) <= _SERIES_RADIUS
    if np.any(small):
        ws = wc[small]
        term = np.full(ws.shape, 1.0 / special.gamma(alpha + 1.0), dtype=complex)
        total = term.copy()
        n = 0
        while True:
            n += 1
            term = term * ws / (n * (alpha + n))
            total += term
            if n > 2 * _SERIES_RADIUS and np.all(np.abs(term) <= 1e-17 * np.abs(total)):
                break
            if n > 200:
                break
        if exp_scaled:
            total *= np.exp(-2.0 * np.sqrt(ws))
        out[small] = total

    large = ~small
    if np.any(large):
        wl = wc[large]
        root = np.sqrt(wl)
        xi = 2.0 * root
        # ive(a, xi) = I_a(xi) exp(-Re xi); Re xi >= 0 on the principal branch
        scaled = special.ive(alpha, xi) * np.exp(-1j * xi.imag) * np.exp(-alpha * np.log(root))
        out[large] = scaled if exp_scaled else scaled * np.exp(xi)

    # g is real on the real line; exp(-2 sqrt(w)) is not for w < 0
    if not is_complex and (not exp_scaled or np.all(w >= 0)):
        out = out.real
    return out[()] if out.ndim == 0 else out


def laguerre_table(n_max: int, alpha: float, x) -> np.ndarray:
    """Values ``L_0 .. L_{n_max}`` at ``x``; shape ``(n_max + 1,) + x.shape``."""
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = 1.0 + alpha - x
    for n in range(1, n_max):
        out[n + 1] = ((2 * n + 1 + alpha - x) * out[n] - (n + alpha) * out[n - 1]) / (n + 1)
    return out


def laguerre(n: int, alpha: float, x):
    """Generalized Laguerre polynomial ``L_n^(alpha)(x)`` by three-term recurrence."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev[()] if prev.ndim == 0 else prev
    cur = 1.0 + alpha - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + alpha - x) * cur - (k + alpha) * prev) / (k + 1)
    return cur[()] if np.ndim(cur) == 0 else cur


def phi_n(n: int, alpha: float, y):
    """Normalized Laguerre function ``phi_n^alpha(y)``."""
    if alpha <= -1:
        raise DomainError(f"alpha must exceed -1, got {alpha}")
    scale = math.exp(0.5 * (math.lgamma(n + 1.0) - math.lgamma(alpha + n + 1.0)))
    return scale * laguerre(n, alpha, y)


def phi_table(n_terms: int, alpha: float, x) -> np.ndarray:
    """``phi_0 .. phi_{n_terms-1}`` at ``x`` via the orthonormal recurrence.

    The orthonormal form never forms ``n!`` or ``Gamma(n + alpha + 1)``, so it
    is safe for thousands of terms.
    """
    if alpha <= -1:
        raise DomainError(f"alpha must exceed -1, got {alpha}")
    x = np.asarray(x, dtype=float)
    out = np.empty((n_terms,) + x.shape)
    if n_terms == 0:
        return out
    out[0] = math.exp(-0.5 * math.lgamma(alpha + 1.0))
    if n_terms > 1:
        out[1] = (1.0 + alpha - x) * out[0] / math.sqrt(1.0 + alpha)
    for n in range(1, n_terms - 1):
        out[n + 1] = (
            (2 * n + 1 + alpha - x) * out[n] - math.sqrt(n * (n + alpha)) * out[n - 1]
        ) / math.sqrt((n + 1) * (n + 1 + alpha))
    return out


def laguerre_zeros(n: int, alpha: float, max_newton: int = 20) -> np.ndarray:
    """The ``n`` zeros of ``L_n^(alpha)``, increasing.

    Seeds are the eigenvalues of the symmetric tridiagonal Jacobi matrix
    (diagonal ``2k + alpha + 1``, off-diagonal ``sqrt(k (k + alpha))``); Newton
    steps on the recurrence then restore full relative precision.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if alpha <= -1:
        raise DomainError(f"alpha must exceed -1, got {alpha}")
    k = np.arange(n)
    diag = 2 * k + alpha + 1.0
    off = np.sqrt(k[1:] * (k[1:] + alpha))
    x = tridiag_eigh(diag, off)
    prev = np.inf
    for _ in range(max_newton):
        table = laguerre_table(n, alpha, x)
        deriv = (n * table[n] - (n + alpha) * table[n - 1]) / x
        step = table[n] / deriv
        x = x - step
        rel = float(np.max(np.abs(step) / np.abs(x)))
        # stop at a few ulps, or once tiny steps stop shrinking (rounding floor)
        if rel <= 16 * np.finfo(float).eps or (rel <= 1e-11 and rel >= prev / 2):
            break
        prev = rel
    else:
        raise ConvergenceError(f"Newton polishing of Laguerre zeros (n={n}) did not converge")
    return np.sort(x)


# B_{2k} / (2k (2k-1)) for the Stirling series of log Gamma
_STIRLING = (1 / 12, -1 / 360, 1 / 1260, -1 / 1680, 1 / 1188, -691 / 360360, 1 / 156, -3617 / 122400)


def log_gamma_ratio(x, e: float):
    """``log Gamma(x + e) - log Gamma(x)`` without the cancellation of two large log-gammas.

    For ``x >= 10`` the Stirling expansions are subtracted term by term, with the
    leading part written as ``(x - 1/2) log1p(e/x) + e log(x + e) - e``.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0) or np.any(x + e <= 0):
        raise DomainError("log_gamma_ratio needs x > 0 and x + e > 0")
    small = x < 10
    xs = np.where(small, 10.0, x)
    big = (xs - 0.5) * np.log1p(e / xs) + e * np.log(xs + e) - e
    for k, c in enumerate(_STIRLING, start=1):
        big = big + c * ((xs + e) ** (1 - 2 * k) - xs ** (1 - 2 * k))
    xl = np.where(small, x, 1.0)
    out = np.where(small, special.gammaln(xl + e) - special.gammaln(xl), big)
    return float(out) if out.ndim == 0 else out


def gamma_moment(n, beta: float, eta: float):
    """``Gamma(eta) Gamma(beta + n) / Gamma(beta + eta + n)``, the ``n``-th Beta moment."""
    if beta <= 0 or eta <= 0:
        raise DomainError("beta and eta must be positive")
    n = np.asarray(n, dtype=float)
    out = np.exp(special.gammaln(eta) - log_gamma_ratio(beta + n, eta))
    return float(out) if out.ndim == 0 else out


def laguerre_asymptotic(n, alpha: float, y: float):
    """Leading oscillatory term of ``L_n^(alpha)(y)`` for large ``n`` and fixed ``y > 0``.

    ``e^{y/2} / (sqrt(pi) y^{(2 alpha+1)/4}) n^{(2 alpha-1)/4} cos(2 sqrt(n y) - pi (2 alpha+1)/4)``;
    the remainder is ``O(n^{(2 alpha-3)/4})``.
    """
    if y <= 0:
        raise DomainError("the oscillatory asymptotic needs y > 0")
    n = np.asarray(n, dtype=float)
    out = (
        math.exp(y / 2)
        / (math.sqrt(math.pi) * y ** ((2 * alpha + 1) / 4))
        * n ** ((2 * alpha - 1) / 4)
        * np.cos(2 * np.sqrt(n * y) - math.pi * (2 * alpha + 1) / 4)
    )
    return float(out) if out.ndim == 0 else out
