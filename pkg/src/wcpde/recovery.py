"""Direct linear recovery formulas and their worst-case error constants.

A recovery row expresses a numerical solution value at a point x as an
explicit linear combination of the problem data,

    u~(x) = sum_j c_j * lam_j(u*),

with the PDE functionals first and the boundary functionals after.  The
worst-case error over the unit ball of the Sobolev space H with kernel K
is the dual norm of the error functional,

    ||eps_{x,c}||^2 = K(x,x) - 2 c.k(x) + c.G.c,

with G the Gram matrix of the data functionals and k(x) the cross
vector.  Minimizing over c gives the error-optimal recovery G c* = k(x),
whose value K(x,x) - k(x).c* needs no matrix at all.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from . import kernel, linalg

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class RecoveryRow:
    x: tuple
    functionals: tuple
    weights: np.ndarray
    report: linalg.FactorizationReport | None = None

    def __post_init__(self):
        object.__setattr__(self, "x", (float(self.x[0]), float(self.x[1])))
        object.__setattr__(self, "functionals", tuple(self.functionals))
        w = np.asarray(self.weights, dtype=float)
        if len(w) != len(self.functionals):
            raise ValueError("one weight per functional required")
        if not np.all(np.isfinite(w)):
            raise ValueError("recovery weights must be finite")
        object.__setattr__(self, "weights", w)


@dataclass
class ErrorReport:
    method: str
    case: str
    eval_order: int
    norm: float
    condition_estimate: float = np.nan
    jitter: float = 0.0
    reason: str = ""


def error_norm(spec: kernel.KernelSpec, row: RecoveryRow) -> float:
    """Worst-case error constant of the row in the space of `spec`.

    |u*(x) - u~(x)| <= error_norm * ||u*||_H for every u* in H.  The
    quadratic form cancels heavily near optimal rows; tiny negative
    residue is clamped to zero (and logged) before the square root.
    """
    G = kernel.gram_matrix(spec, row.functionals)
    k = kernel.cross_vector(spec, row.x, row.functionals)
    c = row.weights
    value = spec.diagonal() - 2.0 * (c @ k) + c @ (G @ c)
    if value < 0.0:
        log.debug("clamping negative squared norm %.3e to zero", value)
        value = 0.0
    return float(np.sqrt(value))


def optimal_recovery(spec: kernel.KernelSpec, x, fs) -> RecoveryRow:
    """The error-optimal recovery row at x over the data functionals fs.

    Solves the Gram system G c* = k(x) by SPD factorization with the
    jitter fallback; the factorization report travels on the row.
    """
    fs = tuple(fs)
    G = kernel.gram_matrix(spec, fs)
    k = kernel.cross_vector(spec, x, fs)
    c, report = linalg.solve_spd(G, k)
    return RecoveryRow(x=tuple(x), functionals=fs, weights=c, report=report)


def optimal_norm_direct(spec: kernel.KernelSpec, x, fs, c_star) -> float:
    """Matrix-free optimal norm sqrt(K(x,x) - k(x).c*)."""
    k = kernel.cross_vector(spec, x, fs)
    value = spec.diagonal() - float(np.asarray(c_star) @ k)
    return float(np.sqrt(max(value, 0.0)))


def lagrange_check(spec: kernel.KernelSpec, fs, rows) -> float:
    """Max deviation |lam_i(c_k) - delta_ik| of the optimal-recovery basis.

    fs must be point evaluations; rows[i] is the optimal recovery built
    at the point of fs[i], so its weight vector should be the i-th unit
    vector by the reproduction property.
    """
    fs = list(fs)
    for f in fs:
        if f.kind != "eval":
            raise ValueError("lagrange_check runs on point-evaluation functionals only")
    if len(rows) != len(fs):
        raise ValueError("one row per functional required")
    dev = 0.0
    for i, row in enumerate(rows):
        e = np.zeros(len(fs))
        e[i] = 1.0
        dev = max(dev, float(np.max(np.abs(row.weights - e))))
    return dev
