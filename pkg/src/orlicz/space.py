"""Modular and Luxemburg norm machinery for Orlicz sequence spaces.

The modular is sigma(x) = sum M(|x_n|); the norm is the Minkowski gauge
of the modular unit ball, inf{rho > 0 : sigma(x/rho) <= 1}.  Both are
exact finite sums here because every sequence has finite support.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import Delta2RequiredError, DomainError, OrliczError
from .functions import OrliczFunction
from .sequences import SparseSequence

__all__ = [
    "modular",
    "luxemburg_norm",
    "luxemburg_norm_dense",
    "modular_dense",
    "project_head",
    "project_tail",
    "nu_bound",
    "phi_bound",
    "scale_to_modular",
]

_NORM_MAX_ITER = 200


def modular(M: OrliczFunction, x: SparseSequence) -> float:
    """sigma_M(x) = sum over the support of M(|x_n|)."""
    if not x.entries:
        return 0.0
    vals = np.abs(np.array(x.values(), dtype=float))
    return float(np.sum(np.asarray(M.eval(vals), dtype=float)))


def _modular_scaled(M: OrliczFunction, absvals: np.ndarray, rho: float) -> float:
    return float(np.sum(np.asarray(M.eval(absvals / rho), dtype=float)))


def luxemburg_norm(M: OrliczFunction, x: SparseSequence, tol: float = 1e-12) -> float:
    """Gauge of the modular unit ball, by bracketing and bisection on rho.

    sigma(x/rho) is non-increasing in rho, > 1 at rho = max|x_n|/t_bar
    (single term M(t_bar) > 1 already), and <= 1 once rho is doubled far
    enough.  Bisection then shrinks the bracket to relative width tol.
    """
    if tol <= 0.0:
        raise DomainError(f"tol must be > 0, got {tol}")
    if not x.entries:
        return 0.0
    absvals = np.abs(np.array(x.values(), dtype=float))
    lo = float(absvals.max()) / M.t_bar
    hi = lo
    for _ in range(_NORM_MAX_ITER):
        if _modular_scaled(M, absvals, hi) <= 1.0:
            break
        lo = hi
        hi *= 2.0
    else:
        raise OrliczError("bracketing failed: sigma(x/rho) stayed above 1")
    for _ in range(_NORM_MAX_ITER):
        if hi - lo <= tol * hi:
            break
        mid = 0.5 * (lo + hi)
        if _modular_scaled(M, absvals, mid) > 1.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def modular_dense(M: OrliczFunction, rows: np.ndarray) -> np.ndarray:
    """Row-wise modular of a dense (n, d) block."""
    rows = np.asarray(rows, dtype=float)
    if rows.ndim == 1:
        rows = rows[None, :]
    return np.asarray(M.eval(np.abs(rows)), dtype=float).sum(axis=1)


def luxemburg_norm_dense(
    M: OrliczFunction, rows: np.ndarray, iters: int = 60
) -> np.ndarray:
    """Row-wise Luxemburg norm of a dense (n, d) block, vectorized bisection."""
    rows = np.asarray(rows, dtype=float)
    if rows.ndim == 1:
        rows = rows[None, :]
    absr = np.abs(rows)
    vmax = absr.max(axis=1)
    nz = vmax > 0.0
    out = np.zeros(len(rows), dtype=float)
    if not nz.any():
        return out
    a = absr[nz]
    hi = vmax[nz] / M.t_bar
    # sigma(x/hi) > 1 at the guard value, so every row doubles at least once.
    for _ in range(_NORM_MAX_ITER):
        sig = np.asarray(M.eval(a / hi[:, None]), dtype=float).sum(axis=1)
        need = sig > 1.0
        if not need.any():
            break
        hi[need] *= 2.0
    lo = hi / 2.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        sig = np.asarray(M.eval(a / mid[:, None]), dtype=float).sum(axis=1)
        above = sig > 1.0
        lo = np.where(above, mid, lo)
        hi = np.where(above, hi, mid)
    out[nz] = 0.5 * (lo + hi)
    return out


def project_head(x: SparseSequence, n: int) -> SparseSequence:
    """Keep entries with index <= n."""
    if n < 0:
        raise DomainError(f"projection cutoff must be >= 0, got {n}")
    return SparseSequence(tuple((i, v) for i, v in x.entries if i <= n))


def project_tail(x: SparseSequence, n: int) -> SparseSequence:
    """Keep entries with index > n."""
    if n < 0:
        raise DomainError(f"projection cutoff must be >= 0, got {n}")
    return SparseSequence(tuple((i, v) for i, v in x.entries if i > n))


def _require_constant(M: OrliczFunction) -> float:
    if M.delta2_constant is None:
        raise Delta2RequiredError(
            f"family {M.family_tag!r} carries no doubling constant"
        )
    return M.delta2_constant


def nu_bound(M: OrliczFunction, K: float) -> float:
    """Majorant of the modular over the ball of norm radius K.

    Splits a point of the 2^m-ball (m smallest with 2^m >= K, floored at 0)
    into coordinates above and below t_bar: at most M(2^m t_bar)/M(2^-m t_bar)
    of modular mass can sit above, and the doubling constant iterated m times
    caps the rest by C^-m.
    """
    if K <= 0.0 or not math.isfinite(K):
        raise DomainError(f"radius K must be positive and finite, got {K}")
    C = _require_constant(M)
    m = max(0, math.ceil(math.log2(K)))
    while 2.0 ** m < K:  # guard against log2 rounding at dyadic K
        m += 1
    big = float(M.eval(2.0 ** m * M.t_bar))
    small = float(M.eval(2.0 ** (-m) * M.t_bar))
    if small <= 0.0:
        raise OrliczError(f"M(2^-{m} t_bar) vanished; bound unavailable")
    return C ** (-m) + big / small


def phi_bound(M: OrliczFunction, t: float) -> float:
    """Diameter bound 2^(1-m) for the modular sublevel set at height t.

    m is the largest integer >= 0 with C^m >= t: points with modular <= C^m
    have norm <= 2^-m (iterate the doubling inequality), so the sublevel set
    sits inside that ball and its diameter is at most twice the radius.
    Monotone non-decreasing in t; 2 for t >= 1.
    """
    if t <= 0.0 or not math.isfinite(t):
        raise DomainError(f"level t must be positive and finite, got {t}")
    C = _require_constant(M)
    m = 0
    power = C
    # Multiplicative accumulation keeps C^m exact to the same float sequence
    # the perturbation scan produces, so boundary levels resolve identically.
    while power >= t and m < 4096:
        m += 1
        power *= C
    return 2.0 ** (1 - m)


def scale_to_modular(
    M: OrliczFunction, x: SparseSequence, target: float, tol: float = 1e-12
) -> SparseSequence:
    """Scale x so its modular hits target (bisection on the scale factor)."""
    if target <= 0.0:
        raise DomainError(f"target modular must be > 0, got {target}")
    if not x.entries:
        raise DomainError("cannot scale the zero sequence to a positive modular")
    absvals = np.abs(np.array(x.values(), dtype=float))

    def sig(s: float) -> float:
        return float(np.sum(np.asarray(M.eval(s * absvals), dtype=float)))

    hi = 1.0
    for _ in range(_NORM_MAX_ITER):
        if sig(hi) >= target:
            break
        hi *= 2.0
    else:
        raise OrliczError("modular did not reach the target under upscaling")
    lo = 0.0
    for _ in range(_NORM_MAX_ITER):
        if hi - lo <= tol * hi:
            break
        mid = 0.5 * (lo + hi)
        if sig(mid) < target:
            lo = mid
        else:
            hi = mid
    return x.scale(0.5 * (lo + hi))
