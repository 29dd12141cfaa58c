"""Dense factorizations with instability reporting.

Gram and collocation systems here range from perfectly benign to
spectacularly ill-conditioned; the policy is to complete the solve when
at all defensible and always report what was done: factorization method,
diagonal jitter consumed, condition estimate, and (for pseudoinverses)
the retained rank.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

# jitter ladder: 1e-12 * trace/N, escalating tenfold up to 1e-6 * trace/N
_JITTER_STEPS = tuple(10.0**e for e in range(-12, -5))


@dataclass
class FactorizationReport:
    method: str                       # "spd", "spd+jitter", or "svd"
    jitter_used: float = 0.0
    condition_estimate: float = 1.0
    truncated_rank: int | None = None


def _power_condition(A, factor, iterations: int = 20) -> float:
    # extreme-eigenvalue estimate: plain power iteration for the top,
    # inverse iteration through the Cholesky factor for the bottom
    n = A.shape[0]
    if n <= 1:
        return 1.0
    v = np.full(n, 1.0 / np.sqrt(n))
    w = v.copy()
    for _ in range(iterations):
        v = A @ v
        nv = np.linalg.norm(v)
        if nv == 0.0:
            return np.inf
        v /= nv
        w = cho_solve(factor, w)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return np.inf
        w /= nw
    top = float(v @ (A @ v))
    bottom_inv = float(w @ cho_solve(factor, w))
    if top <= 0.0 or bottom_inv <= 0.0:
        return np.inf
    return max(top * bottom_inv, 1.0)


def spd_factor(A):
    """Cholesky factorization with the escalating-jitter fallback.

    Returns (factor, report); `factor` feeds spd_solve.  Raises
    numpy.linalg.LinAlgError when even the largest jitter fails, which
    signals duplicated or near-duplicate functionals rather than simple
    ill-conditioning.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("square matrix required")
    n = A.shape[0]
    base = abs(np.trace(A)) / n if n else 0.0
    jitter = 0.0
    try:
        factor = cho_factor(A, lower=True)
    except LinAlgError:
        factor = None
        for step in _JITTER_STEPS:
            jitter = step * base
            try:
                factor = cho_factor(A + jitter * np.eye(n), lower=True)
                break
            except LinAlgError:
                continue
        if factor is None:
            raise np.linalg.LinAlgError(
                "matrix not positive definite even with maximal jitter"
            ) from None
    report = FactorizationReport(
        method="spd" if jitter == 0.0 else "spd+jitter",
        jitter_used=jitter,
        condition_estimate=_power_condition(A, factor),
    )
    return factor, report


def spd_solve(factor, b):
    return cho_solve(factor, np.asarray(b, dtype=float))


def solve_spd(A, b):
    """Solve A x = b for symmetric positive (semi)definite A.

    Returns (x, FactorizationReport).  The jitter policy trades a
    recorded O(1e-12..1e-6)*mean-diagonal perturbation for completion.
    """
    factor, report = spd_factor(A)
    return spd_solve(factor, b), report


def _truncated_svd(A, tol):
    if not tol > 0.0:
        raise ValueError("tolerance must be positive")
    U, s, Vt = np.linalg.svd(np.asarray(A, dtype=float), full_matrices=False)
    keep = s > tol * s[0] if s.size else np.zeros(0, dtype=bool)
    rank = int(keep.sum())
    condition = float(s[0] / s[keep][-1]) if rank else np.inf
    report = FactorizationReport(
        method="svd",
        condition_estimate=condition,
        truncated_rank=rank,
    )
    return U[:, keep], s[keep], Vt[keep], report


def pinv_apply(A, tol, b):
    """Minimum-norm least-squares solution of A x = b.

    Singular values below tol * sigma_max are truncated; the report
    carries the retained rank and the condition of the retained part.
    """
    U, s, Vt, report = _truncated_svd(A, tol)
    y = U.T @ np.asarray(b, dtype=float)
    y = y / s if y.ndim == 1 else y / s[:, None]
    return Vt.T @ y, report


def pinv_matrix(A, tol):
    """The truncated-SVD pseudoinverse itself, for repeated application."""
    U, s, Vt, report = _truncated_svd(A, tol)
    return (Vt.T / s) @ U.T, report
