"""Modified Bessel functions of the second kind and the Matern radial
profile, together with the closed-form radial reductions needed when a
Laplacian acts on one or both kernel arguments.

The Matern profile of (Bessel) order nu is

    g_nu(r) = r^nu K_nu(r),   g_nu(0) = 2^(nu-1) Gamma(nu)   (nu >= 1),

and the Sobolev kernel of order m in dimension d is a multiple of
g_{m - d/2}.  Everything here works with integer nu: the package targets
even dimensions with integer Sobolev order, so m - d/2 is an integer.

Applying the d-dimensional radial Laplacian to g_nu lowers the profile
index.  From (r^nu K_nu)' = -r^nu K_{nu-1} one gets

    Lap[g_nu](r)     = -d g_{nu-1}(r) + r^2 g_{nu-2}(r)
    Lap^2[g_nu](r)   = d(d+2) g_{nu-2}(r) - (2d+4) r^2 g_{nu-3}(r)
                       + r^4 g_{nu-4}(r)

where low or negative indices are harmless because each such term
carries a power of r that keeps the product r^p g_k = r^(p+k) K_|k|
finite (K_{-n} = K_n).  At r = 0 only the leading term survives.
"""

import math

import numpy as np
from scipy.special import kn as _kn


class OrderTooLowError(ValueError):
    """The kernel is not smooth enough for the requested operator pair."""


# below this radius every profile equals its r = 0 limit to double
# precision (the deviation is O(r^2)); the direct product r^p K_k(r)
# would eventually pair an underflow with an overflow and produce NaN
_LIMIT_RADIUS = 1e-8


def g_limit(nu):
    # lim_{r->0} r^nu K_nu(r) for integer nu >= 1
    if nu < 1:
        raise OrderTooLowError(f"profile g_{nu} diverges at r = 0")
    return 2.0 ** (nu - 1) * math.gamma(nu)


def _check_order(nu):
    if int(nu) != nu or nu < 0:
        raise ValueError(f"Bessel order must be a non-negative integer, got {nu}")
    return int(nu)


def bessel_k(nu, r):
    """Modified Bessel function K_nu(r), integer nu >= 0, r > 0.

    Accepts scalars or arrays; relative accuracy is that of
    scipy.special.kn (about 1e-14), comfortably inside the 1e-10 the
    assembly layer needs on r in [1e-6, 30].
    """
    nu = _check_order(nu)
    arr = np.asarray(r, dtype=float)
    if np.any(arr <= 0.0):
        raise ValueError("bessel_k requires r > 0")
    out = _kn(nu, arr)
    return out if arr.ndim else float(out)


def matern_g(nu, r):
    """The profile g_nu(r) = r^nu K_nu(r) with its removable limit at 0."""
    nu = _check_order(nu)
    if nu < 1:
        raise OrderTooLowError("matern_g needs nu >= 1 for a finite value at r = 0")
    arr = np.asarray(r, dtype=float)
    if np.any(arr < 0.0):
        raise ValueError("matern_g requires r >= 0")
    out = np.empty_like(arr)
    pos = arr > _LIMIT_RADIUS
    rp = arr[pos]
    out[pos] = rp**nu * _kn(nu, rp)
    out[~pos] = g_limit(nu)
    return out if arr.ndim else float(out)


def _term(power, index, rp):
    # r^power * g_index on strictly positive radii; valid whenever
    # power + index >= 1, which holds for every term produced below
    return rp ** (power + index) * _kn(abs(index), rp)


def matern_laplacian_profile(nu, dim, total_laplacians, r):
    """Radial profile of the kernel after 0, 1, or 2 Laplacians.

    Returns Lap^t[g_nu](r) for t = total_laplacians, reduced in closed
    form; no finite differences and no division by r, so the value is
    exact at r = 0 as well.  Requires nu - total_laplacians >= 1 so the
    leading profile index stays positive; below that the diagonal value
    diverges and the requested operator pair is inadmissible for this
    smoothness (raises OrderTooLowError).
    """
    nu = _check_order(nu)
    if total_laplacians not in (0, 1, 2):
        raise ValueError("total_laplacians must be 0, 1, or 2")
    if nu - total_laplacians < 1:
        raise OrderTooLowError(
            f"{total_laplacians} Laplacian(s) need profile order nu >= "
            f"{total_laplacians + 1}, got nu = {nu}"
        )
    if total_laplacians == 0:
        return matern_g(nu, r)
    d = int(dim)
    arr = np.asarray(r, dtype=float)
    if np.any(arr < 0.0):
        raise ValueError("radius must be >= 0")
    out = np.empty_like(arr)
    pos = arr > _LIMIT_RADIUS
    rp = arr[pos]
    if total_laplacians == 1:
        out[pos] = -d * _term(0, nu - 1, rp) + _term(2, nu - 2, rp)
        out[~pos] = -d * g_limit(nu - 1)
    else:
        out[pos] = (
            d * (d + 2) * _term(0, nu - 2, rp)
            - (2 * d + 4) * _term(2, nu - 3, rp)
            + _term(4, nu - 4, rp)
        )
        out[~pos] = d * (d + 2) * g_limit(nu - 2)
    return out if arr.ndim else float(out)
