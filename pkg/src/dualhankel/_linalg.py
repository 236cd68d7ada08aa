"""Small dense eigen/SVD solvers used for quadrature rules and cross-checks.

These are deliberately plain: matrices here are at most a few hundred rows.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ConvergenceError

_EPS = np.finfo(float).eps


def tridiag_eigh(diag, offdiag, vectors: bool = False, max_iter: int = 60):
    """Eigen-decomposition of a real symmetric tridiagonal matrix.

    Implicit QL with Wilkinson-type shifts. ``offdiag[i]`` couples rows
    ``i`` and ``i + 1``. Returns eigenvalues in increasing order, and the
    matching orthonormal eigenvectors as columns when ``vectors`` is set.
    """
    d = np.array(diag, dtype=float)
    n = d.size
    e = np.zeros(n)
    e[: n - 1] = np.asarray(offdiag, dtype=float)[: n - 1]
    z = np.eye(n) if vectors else None

    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= _EPS * dd:
                    break
                m += 1
            if m == l:
                break
            if it == max_iter:
                raise ConvergenceError(f"tridiagonal QL did not converge for eigenvalue {l}")
            it += 1
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            deflated = False
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    deflated = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if z is not None:
                    zi = z[:, i].copy()
                    z[:, i] = c * zi - s * z[:, i + 1]
                    z[:, i + 1] = s * zi + c * z[:, i + 1]
                i -= 1
            if deflated:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0

    order = np.argsort(d, kind="stable")
    if z is None:
        return d[order]
    return d[order], z[:, order]


def hermitian_eigvalsh(a) -> np.ndarray:
    """Eigenvalues of a dense Hermitian matrix (Householder reduction + QL)."""
    a = np.array(a, dtype=complex)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    a = 0.5 * (a + a.conj().T)
    for k in range(n - 2):
        x = a[k + 1 :, k]
        xn = np.linalg.norm(x)
        if xn == 0.0:
            continue
        phase = x[0] / abs(x[0]) if x[0] != 0 else 1.0
        v = x.copy()
        v[0] += phase * xn
        v /= np.linalg.norm(v)
        a[k + 1 :, :] -= 2.0 * np.outer(v, v.conj() @ a[k + 1 :, :])
        a[:, k + 1 :] -= 2.0 * np.outer(a[:, k + 1 :] @ v, v.conj())
    d = np.real(np.diag(a))
    # a diagonal unitary similarity makes the off-diagonal real and nonnegative
    e = np.abs(np.diag(a, 1))
    return tridiag_eigh(d, e)


def jacobi_svd(a, tol: float = 1e-15, max_sweeps: int = 60):
    """One-sided (Hestenes) Jacobi SVD: ``a = U diag(sigma) V^H``, sigma descending."""
    a = np.asarray(a)
    transposed = a.shape[0] < a.shape[1]
    if transposed:
        a = a.conj().T
    dtype = complex if np.iscomplexobj(a) else float
    u = np.array(a, dtype=dtype)
    n = u.shape[1]
    v = np.eye(n, dtype=dtype)

    for _ in range(max_sweeps):
        worst = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                alpha = np.vdot(u[:, i], u[:, i]).real
                beta = np.vdot(u[:, j], u[:, j]).real
                gamma = np.vdot(u[:, i], u[:, j])
                g = abs(gamma)
                if g == 0.0 or g <= tol * math.sqrt(alpha * beta):
                    continue
                worst = max(worst, g / math.sqrt(alpha * beta))
                phase = gamma / g if dtype is complex else math.copysign(1.0, gamma)
                zeta = (beta - alpha) / (2.0 * g)
                t = math.copysign(1.0, zeta) / (abs(zeta) + math.sqrt(1.0 + zeta * zeta))
                cs = 1.0 / math.sqrt(1.0 + t * t)
                sn = cs * t
                for m in (u, v):
                    mi = m[:, i].copy()
                    mj = m[:, j] * np.conj(phase) if dtype is complex else m[:, j] * phase
                    m[:, i] = cs * mi - sn * mj
                    m[:, j] = sn * mi + cs * mj
        if worst <= tol:
            break
    else:
        raise ConvergenceError("one-sided Jacobi SVD hit the sweep cap")

    sigma = np.linalg.norm(u, axis=0)
    order = np.argsort(-sigma, kind="stable")
    sigma = sigma[order]
    u = u[:, order]
    v = v[:, order]
    nz = sigma > 0.0
    u[:, nz] /= sigma[nz]
    if transposed:
        return v, sigma, u
    return u, sigma, v
