"""Singular values, Schatten sums, decay fits and the polar factor of ``S^alpha_y``.

In the orthonormal pair ``(phi_n)``, ``(e_n / sqrt(pi gamma_n))`` the operator is
diagonal with entries ``sqrt(pi gamma_n) phi_n(y)``, so its singular values are

    s_n = sqrt(c_n),   c_n = pi gamma_n^{beta,eta} phi_n^alpha(y)^2.

They are indexed by ``n`` and are not monotone for ``y > 0``; anything
compared against an SVD is sorted first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from ._linalg import jacobi_svd
from .kernels import _hankel_closed_complex
from .ops import LaguerreCoeffs, MonomialCoeffs, build_operator_matrix, null_space_indices
from .quad import gauss_jacobi_unit
from .specfun import Params, gamma_moment, log_gamma_ratio, phi_table

__all__ = [
    "SpectralReport",
    "SchattenReport",
    "DecayFit",
    "BoundednessReport",
    "FactorizationCheck",
    "c_n_sequence",
    "singular_values_closed",
    "svd_small",
    "schatten_threshold",
    "schatten_report",
    "decay_fit",
    "boundedness_report",
    "partial_isometry_apply",
    "partial_isometry_matrix",
    "svd_factorization_check",
    "halving_ratios",
    "spectral_report",
]

P_GRID = (1.0, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0)


def c_n_sequence(y: float, params: Params, N: int) -> np.ndarray:
    """``c_n = pi gamma_n phi_n(y)^2`` for ``n = 0 .. N-1``.

    At ``y = 0`` the closed value ``phi_n(0)^2 = Gamma(n+alpha+1) / (n! Gamma(alpha+1)^2)``
    is used, entirely in log-gamma form.
    """
    if N < 1:
        raise ValueError("N must be positive")
    n = np.arange(N)
    a, b, e = params.alpha, params.beta, params.eta
    if y == 0:
        log_c = (
            math.log(math.pi)
            + special.gammaln(e)
            - log_gamma_ratio(b + n, e)
            + log_gamma_ratio(n + 1, a)
            - 2 * special.gammaln(a + 1)
        )
        return np.exp(log_c)
    return math.pi * gamma_moment(n, b, e) * phi_table(N, a, y) ** 2


def singular_values_closed(y: float, params: Params, N: int) -> np.ndarray:
    """``s_n = sqrt(pi gamma_n) |phi_n(y)|`` for ``n = 0 .. N-1``, in index order."""
    return np.sqrt(c_n_sequence(y, params, N))


def svd_small(matrix, tol: float = 1e-15):
    """One-sided Jacobi SVD ``A = U diag(sigma) V^H`` with ``sigma`` descending."""
    return jacobi_svd(matrix, tol=tol)


def schatten_threshold(y: float, params: Params) -> float:
    """Exponent beyond which ``sum s_n^p`` converges: ``4/(1+2 eta)`` or, at ``y = 0``, ``2/(eta-alpha)``."""
    if y > 0:
        return 4.0 / (1.0 + 2.0 * params.eta)
    if params.eta <= params.alpha:
        return math.inf
    return 2.0 / (params.eta - params.alpha)


def _block_average(values, window):
    m = values.size // window
    trimmed = values[: m * window].reshape(m, window)
    return trimmed.mean(axis=1)


def _loglog_slope(n, values):
    mask = values > 0
    slope, intercept = np.polyfit(np.log(n[mask]), np.log(values[mask]), 1)
    return float(slope), float(intercept)


@dataclass(frozen=True)
class DecayFit:
    """Least-squares fit ``log c_n ~ slope log n + log_prefactor`` over ``n_range``."""

    slope: float
    log_prefactor: float
    n_range: tuple
    window: int


def decay_fit(y: float, params: Params, n_range=(500, 5000), window: int = 25) -> DecayFit:
    """Slope of ``log c_n`` against ``log n``.

    For ``y > 0`` the ``cos^2`` oscillation of ``c_n`` is damped first by
    averaging over consecutive blocks of ``window`` indices. ``exp(log_prefactor)``
    is a fitted stand-in for the envelope constant.
    """
    lo, hi = int(n_range[0]), int(n_range[1])
    if not 1 <= lo < hi:
        raise ValueError("n_range must be increasing and start at 1 or more")
    c = c_n_sequence(y, params, hi + 1)[lo : hi + 1]
    n = np.arange(lo, hi + 1, dtype=float)
    if y > 0:
        c = _block_average(c, window)
        n = _block_average(n, window)
        used_window = window
    else:
        used_window = 1
    slope, intercept = _loglog_slope(n, c)
    return DecayFit(slope, intercept, (lo, hi), used_window)


@dataclass
class SchattenReport:
    """Partial sums of ``s_n^p`` and the diagnostics read off them.

    ``cauchy_tail`` is ``S_N - S_{N/2}``. ``tail_estimate`` extrapolates
    ``sum_{n >= N} s_n^p`` from the fitted power law of the block-averaged
    terms (infinite when that law is not summable). ``block_sum_slope`` is
    the log-log slope of consecutive ``window``-block sums over ``[N/10, N)``.
    """

    p: float
    threshold: float
    N: int
    partial_sums: np.ndarray = field(repr=False)
    cauchy_tail: float
    tail_estimate: float
    term_slope: float
    block_sum_slope: float
    convergent: bool

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "threshold": self.threshold,
            "N": self.N,
            "final_partial_sum": float(self.partial_sums[-1]),
            "cauchy_tail": self.cauchy_tail,
            "tail_estimate": self.tail_estimate,
            "term_slope": self.term_slope,
            "block_sum_slope": self.block_sum_slope,
            "convergent": self.convergent,
        }


def schatten_report(y: float, params: Params, p: float, N: int = 5000, window: int = 250) -> SchattenReport:
    """Schatten ``p`` diagnostics from the first ``N`` singular values.

    Blocks are wider than in :func:`decay_fit`: for ``y > 0`` the terms carry a
    ``|cos|^p`` factor with period about ``pi sqrt(n)`` in ``n``, and narrow
    blocks that land near its zeros bias the log-log slope downward.
    """
    if p < 1:
        raise ValueError("p must be at least 1")
    if N < 10 * window:
        raise ValueError(f"N must be at least {10 * window}")
    terms = singular_values_closed(y, params, N) ** p
    sums = np.cumsum(terms)
    n = np.arange(N, dtype=float)
    half = N // 2
    start = N // 10
    blocks = _block_average(terms[start:], window) * window
    centers = _block_average(n[start:], window)
    block_slope, _ = _loglog_slope(centers, blocks)
    term_slope = block_slope  # block sums and block means share a slope

    if term_slope < -1.0:
        # sum_{n >= N} A n^k ~ A N^(k+1) / (-k-1), with A N^k matched at the last block
        last = blocks[-1] / window
        tail = float(last * centers[-1] / (-term_slope - 1.0))
    else:
        tail = math.inf
    return SchattenReport(
        p=float(p),
        threshold=schatten_threshold(y, params),
        N=N,
        partial_sums=sums,
        cauchy_tail=float(sums[-1] - sums[half - 1]),
        tail_estimate=tail,
        term_slope=float(term_slope),
        block_sum_slope=float(block_slope),
        convergent=bool(term_slope < -1.0),
    )


@dataclass(frozen=True)
class BoundednessReport:
    """``sup c_n`` with its trend, and the kernel-diagonal integral.

    ``ell`` is ``pi int_0^1 R_t(y, y) omega(t) dt`` (``inf`` when divergent),
    with ``ell_error`` the gap between two Gauss rule sizes. At ``y = 0``
    ``y0_integral`` is ``int R_t(0,0) omega dt`` from the kernel and
    ``y0_integral_alt`` the same integral carrying an extra ``2^-alpha``;
    ``y0_ratio`` is their quotient.
    """

    y: float
    params: Params
    N: int
    sup_c: float
    argmax_c: int
    slope: float
    bounded: bool
    ell: float
    ell_error: float
    ell_finite: bool
    y0_integral: float | None = None
    y0_integral_alt: float | None = None
    y0_ratio: float | None = None


def _ell_positive_y(y, params, n):
    # R_t(y, y) ~ (1-t)^(-1/2) as t -> 1, so the Jacobi exponent absorbs it
    rule = gauss_jacobi_unit(n, params.beta, params.eta - 0.5)
    t = rule.nodes
    values = np.sqrt(1.0 - t) * _hankel_closed_complex(t, y, y, params.alpha).real
    return math.pi * float(np.dot(rule.weights, values))


def boundedness_report(y: float, params: Params, N: int = 5000) -> BoundednessReport:
    """Boundedness diagnostics for ``S^alpha_y``.

    Boundedness means ``sup_n c_n < inf``; the trend is judged from the slope
    of ``log c_n`` over the last decade of indices (``slope <= 0`` within a
    small tolerance counts as bounded). The integral ``ell`` is a sufficient
    condition only: it needs ``eta > alpha + 1`` at ``y = 0`` and ``eta > 1/2``
    for ``y > 0``.
    """
    c = c_n_sequence(y, params, N)
    lo = max(100, N // 10)
    fit = decay_fit(y, params, (lo, N - 1)) if N - 1 > lo else None
    slope = fit.slope if fit is not None else float("nan")
    bounded = bool(fit is None or slope <= 0.02)
    a, b, e = params.alpha, params.beta, params.eta
    extra = {}
    if y == 0:
        finite = e > a + 1
        if finite:
            integral = math.exp(special.betaln(b, e - a - 1) - special.gammaln(a + 1))
        else:
            integral = math.inf
        ell, err = math.pi * integral, 0.0
        extra = dict(y0_integral=integral, y0_integral_alt=integral / 2**a, y0_ratio=2.0**a)
    else:
        finite = e > 0.5
        if finite:
            ell = _ell_positive_y(y, params, 96)
            err = abs(ell - _ell_positive_y(y, params, 48))
        else:
            ell, err = math.inf, 0.0
    return BoundednessReport(
        y=float(y),
        params=params,
        N=N,
        sup_c=float(np.max(c)),
        argmax_c=int(np.argmax(c)),
        slope=slope,
        bounded=bounded,
        ell=ell,
        ell_error=err,
        ell_finite=finite,
        **extra,
    )


def _isometry_signs(y, params, N, tol):
    signs = np.sign(phi_table(N, params.alpha, y))
    null = null_space_indices(y, params.alpha, N - 1, tol) if N > 0 else ()
    signs[list(null)] = 0.0
    return signs, null


def partial_isometry_apply(phi: LaguerreCoeffs, y: float, params: Params, tol: float = 1e-9) -> MonomialCoeffs:
    """``U^alpha_y``: ``a_n -> sign(phi_n(y)) a_n / sqrt(pi gamma_n)``, zero on the null set."""
    N = len(phi)
    signs, _ = _isometry_signs(y, params, N, tol)
    scale = signs / np.sqrt(math.pi * gamma_moment(np.arange(N), params.beta, params.eta))
    return MonomialCoeffs(scale[:, None] * phi.coeffs)


def partial_isometry_matrix(y: float, params: Params, N: int, tol: float = 1e-9) -> np.ndarray:
    """Matrix of ``U^alpha_y`` in the orthonormal pair, assembled column by column."""
    norms = np.sqrt(math.pi * gamma_moment(np.arange(N), params.beta, params.eta))
    out = np.zeros((N, N))
    for n in range(N):
        image = partial_isometry_apply(LaguerreCoeffs.basis(n, N, params.alpha), y, params, tol)
        out[:, n] = norms * image.coeffs[:, 0]
    return out


@dataclass(frozen=True)
class FactorizationCheck:
    """Residuals of ``S = U |S|`` and of ``U^* U`` being an orthogonal projection."""

    residual: float
    projection_residual: float
    zero_columns: tuple
    null_indices: tuple


def svd_factorization_check(y: float, params: Params, N: int = 30, tol: float = 1e-9) -> FactorizationCheck:
    """Verify the polar factorization on the ``N x N`` truncation.

    ``U^* U`` is compared against the projection onto ``span{phi_n : n not in N_y}``
    and checked for idempotence and self-adjointness.
    """
    S = build_operator_matrix(y, params, N, "closed")
    U = partial_isometry_matrix(y, params, N, tol)
    modulus = np.diag(singular_values_closed(y, params, N))
    residual = float(np.max(np.abs(S - U @ modulus)))
    P = U.conj().T @ U
    null = null_space_indices(y, params.alpha, N - 1, tol)
    target = np.diag([0.0 if n in null else 1.0 for n in range(N)])
    projection = max(
        float(np.max(np.abs(P @ P - P))),
        float(np.max(np.abs(P - P.conj().T))),
        float(np.max(np.abs(P - target))),
    )
    zero_cols = tuple(int(n) for n in range(N) if not np.any(U[:, n]))
    return FactorizationCheck(residual, projection, zero_cols, null)


def halving_ratios(y: float, params: Params, sizes=(512, 1024, 2048)) -> list:
    """``max_{[N, 2N]} s_n / max_{[N/2, N]} s_n`` for each ``N``; values below 1/2 mean fast decay."""
    s = singular_values_closed(y, params, 2 * max(sizes) + 1)
    return [float(np.max(s[N : 2 * N + 1]) / np.max(s[N // 2 : N + 1])) for N in sizes]


@dataclass
class SpectralReport:
    """Collected spectral data of ``S^alpha_y`` up to index ``N``."""

    params: Params
    N: int
    singular_values: np.ndarray
    c_sequence: np.ndarray
    schatten_partial_sums: dict
    schatten: dict
    null_indices: tuple
    sup_c: float
    decay_slope: float
    ell_integral: float
    boundedness: BoundednessReport


def spectral_report(params: Params, N: int = 5000, ps=P_GRID) -> SpectralReport:
    """Assemble singular values, Schatten sums over ``ps`` and boundedness data."""
    y = params.y
    c = c_n_sequence(y, params, N)
    reports = {float(p): schatten_report(y, params, p, N) for p in ps}
    bound = boundedness_report(y, params, N)
    return SpectralReport(
        params=params,
        N=N,
        singular_values=np.sqrt(c),
        c_sequence=c,
        schatten_partial_sums={p: r.partial_sums for p, r in reports.items()},
        schatten=reports,
        null_indices=null_space_indices(y, params.alpha, N - 1),
        sup_c=bound.sup_c,
        decay_slope=bound.slope,
        ell_integral=bound.ell,
        boundedness=bound,
    )
