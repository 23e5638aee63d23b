"""Cyclic Jacobi eigensolver for dense real symmetric matrices."""
from __future__ import annotations

import math

import numpy as np

__all__ = ["ConvergenceError", "jacobi_eigh", "off_norm"]


class ConvergenceError(ArithmeticError):
    """The Jacobi sweeps did not reach the requested off-diagonal norm."""

    def __init__(self, sweeps, residual, tol):
        self.sweeps = sweeps
        self.residual = residual
        super().__init__(
            f"Jacobi iteration did not converge in {sweeps} sweeps: "
            f"off-diagonal norm {residual:.3e} > {tol:.3e}"
        )


def off_norm(a: np.ndarray) -> float:
    """Frobenius norm of the strictly off-diagonal part."""
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def jacobi_eigh(a, tol=1e-12, max_sweeps=100):
    """Eigen-decompose a symmetric matrix by cyclic Jacobi rotations.

    Pairs ``(p, q)`` are swept in row-major order, so the result depends on
    nothing but the input.  Iteration stops once the off-diagonal Frobenius
    norm falls to ``tol * max(1, ||a||_F)``.

    Returns
    -------
    w : (n,) ndarray
        Eigenvalues, in the order they end up on the diagonal (unsorted).
    v : (n, n) ndarray
        Orthonormal eigenvectors as columns, ``a @ v[:, k] ~ w[k] * v[:, k]``.
    sweeps : int
        Number of full sweeps performed.
    """
    a = np.array(a, dtype=np.float64, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    a = 0.5 * (a + a.T)
    n = a.shape[0]
    v = np.eye(n)
    threshold = tol * max(1.0, float(np.linalg.norm(a)))
    negligible = 1e-6 * threshold / max(n, 1)

    for sweep in range(max_sweeps + 1):
        residual = off_norm(a)
        if residual <= threshold:
            return np.diag(a).copy(), v, sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= negligible:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c

                col_p = a[:, p].copy()
                col_q = a[:, q]
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :]
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0

                vp = v[:, p].copy()
                vq = v[:, q]
                v[:, p] = c * vp - s * vq
                v[:, q] = s * vp + c * vq

    raise ConvergenceError(max_sweeps, residual, threshold)
