"""Cyclic Jacobi eigensolver for small dense real symmetric matrices."""

import logging

import numpy as np

from .config import config
from .errors import EigensolverError

logger = logging.getLogger(__name__)


def _off_norm(a: np.ndarray) -> float:
    upper = np.triu(a, 1)
    return float(np.sqrt(2.0 * np.sum(upper * upper)))


def jacobi_eigh(
    matrix: np.ndarray,
    rel_tol: float | None = None,
    max_sweeps: int | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decompose a symmetric matrix by cyclic Jacobi rotations.

    Sweeps visit the pairs (p, q), p < q, in row order. Iteration stops when the
    Frobenius norm of the off-diagonal part is at most ``rel_tol * ||A||_F``.
    Entries that are exactly zero are never rotated, so diagonal input is
    returned unchanged with the identity as eigenvector matrix.

    Args:
        matrix: Square symmetric matrix.
        rel_tol: Relative off-diagonal stopping threshold.
        max_sweeps: Sweep cap.

    Returns:
        (w, V) with ``A = V diag(w) V^T``; ``w`` is in solver order, not sorted.

    Raises:
        EigensolverError: The sweep cap was reached before convergence.
    """
    rel_tol = config.JACOBI_REL_TOL if rel_tol is None else rel_tol
    max_sweeps = config.JACOBI_MAX_SWEEPS if max_sweeps is None else max_sweeps

    a = np.array(matrix, dtype=np.float64, copy=True)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError(f"Matrix must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise EigensolverError("Matrix has non-finite entries")
    v = np.eye(n)
    threshold = rel_tol * float(np.linalg.norm(a))

    sweeps = 0
    while _off_norm(a) > threshold:
        if sweeps >= max_sweeps:
            raise EigensolverError(
                f"Jacobi did not converge in {max_sweeps} sweeps "
                f"(off-diagonal mass {_off_norm(a):.3e}, threshold {threshold:.3e})"
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = (1.0 if theta >= 0.0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c

                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0

                vec_p = v[:, p].copy()
                vec_q = v[:, q].copy()
                v[:, p] = c * vec_p - s * vec_q
                v[:, q] = s * vec_p + c * vec_q
        sweeps += 1

    logger.debug("Jacobi converged in %d sweeps (n=%d)", sweeps, n)
    return np.diag(a).copy(), v
