"""Constructive minimization by accumulated modular perturbations.

The engine adds a small nonnegative weighted modular g_a to an objective
so that the sum attains its minimum on a truncated grid, with an explicit
certificate.  One perturbation round localizes the sublevel sets (tail
coordinates of near-minimizers are pinned below the round's budget); the
loop spends a geometrically shrinking budget per round so the accumulated
weights stay strictly below the requested total.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, NotProperError, OrliczError
from .functions import OrliczFunction
from .sequences import SparseSequence
from .space import (
    luxemburg_norm,
    luxemburg_norm_dense,
    modular,
    modular_dense,
    nu_bound,
    phi_bound,
    project_tail,
)
from .weights import PerturbationWeights, g_eval, g_eval_dense

__all__ = [
    "Objective",
    "GridOracle",
    "SolveReport",
    "SupportReport",
    "construct_local_perturbation",
    "perturb_minimize",
    "support_from_below",
    "supporting_functional",
]

_CHUNK_ROWS = 2_000_000


@dataclass(frozen=True)
class Objective:
    """A proper extended-real function on a declared norm ball.

    eval maps a sparse sequence to a float, +inf allowed outside the
    effective domain, NaN never.  eval_dense, when provided, evaluates a
    dense (n, d) block whose columns live on the given coordinate indices;
    the engine falls back to row-by-row eval otherwise.  lower_bound is a
    witness that the objective is bounded below; probe_points witness
    properness.  coercive and parallel_safe are caller assertions (the
    engine treats the objective as non-coercive, and evaluates serially,
    unless told otherwise).
    """

    eval: Callable[[SparseSequence], float]
    domain_radius: float
    lower_bound: float
    eval_dense: Optional[Callable] = None
    probe_points: tuple[SparseSequence, ...] = field(default=(SparseSequence(),))
    coercive: bool = False
    parallel_safe: bool = False

    def assert_proper(self) -> None:
        for p in self.probe_points:
            v = float(self.eval(p))
            if math.isnan(v):
                raise OrliczError("objective returned NaN at a probe point")
            if v < math.inf:
                return
        raise NotProperError("objective is +inf at every probe point")


class GridOracle:
    """Exhaustive search over a box grid on the leading coordinates.

    Exact on its own grid, so it meets any accuracy request; the pluggable
    contract is the trio grid()/sequence_at()/describe() plus evaluate(),
    which any replacement candidate enumerator can also provide.
    """

    def __init__(self, indices: tuple[int, ...] = (1, 2, 3), step: float = 0.05, radius: float = 1.0):
        if not indices or len(indices) > 8:
            raise DomainError("grid oracle supports 1..8 coordinates")
        if len(set(indices)) != len(indices) or any(i < 1 for i in indices):
            raise DomainError(f"grid indices must be distinct and >= 1, got {indices}")
        if step <= 0.0 or radius <= 0.0 or step > radius:
            raise DomainError("need 0 < step <= radius")
        self.indices = tuple(int(i) for i in indices)
        self.step = float(step)
        self.radius = float(radius)
        self._grid: np.ndarray | None = None

    def grid(self) -> np.ndarray:
        if self._grid is None:
            n = int(math.floor(self.radius / self.step + 1e-9))
            axis = np.arange(-n, n + 1, dtype=float) * self.step
            mesh = np.meshgrid(*([axis] * len(self.indices)), indexing="ij")
            self._grid = np.stack(mesh, axis=-1).reshape(-1, len(self.indices))
        return self._grid

    def sequence_at(self, row: int) -> SparseSequence:
        values = self.grid()[row]
        return SparseSequence.from_pairs(
            (idx, v) for idx, v in zip(self.indices, values) if v != 0.0
        )

    def evaluate(self, scalar_fn: Callable, dense_fn: Optional[Callable] = None) -> np.ndarray:
        """Values over the whole grid, chunked to bound peak memory."""
        pts = self.grid()
        if dense_fn is not None:
            parts = [
                np.asarray(dense_fn(pts[i : i + _CHUNK_ROWS], self.indices), dtype=float)
                for i in range(0, len(pts), _CHUNK_ROWS)
            ]
            return np.concatenate(parts) if len(parts) > 1 else parts[0]
        out = np.empty(len(pts), dtype=float)
        for i in range(len(pts)):
            out[i] = scalar_fn(self.sequence_at(i))
        return out

    def describe(self) -> str:
        return (
            f"grid(indices={list(self.indices)}, step={self.step:g}, "
            f"radius={self.radius:g}, points={len(self.grid())})"
        )


@dataclass(frozen=True)
class SolveReport:
    """Outcome of a perturbation run, serializable for the command line."""

    weights: PerturbationWeights
    minimizer: SparseSequence
    min_value: float
    iterations: int
    converged: bool
    final_tail_index: int
    compactness_proxy: float
    certificate_accuracy: float
    certificate_resolution: str

    def to_dict(self) -> dict:
        from .sequences import format_sequence

        return {
            "weights": self.weights.to_dict(),
            "minimizer": format_sequence(self.minimizer),
            "min_value": self.min_value,
            "iterations": self.iterations,
            "converged": self.converged,
            "final_tail_index": self.final_tail_index,
            "compactness_proxy": self.compactness_proxy,
            "certificate_accuracy": self.certificate_accuracy,
            "certificate_resolution": self.certificate_resolution,
        }


@dataclass(frozen=True)
class SupportReport:
    """Weights supporting f from below and the contact point."""

    weights: PerturbationWeights
    minimizer: SparseSequence
    supported_value: float
    inner: SolveReport

    def to_dict(self) -> dict:
        from .sequences import format_sequence

        return {
            "weights": self.weights.to_dict(),
            "minimizer": format_sequence(self.minimizer),
            "supported_value": self.supported_value,
            "inner": self.inner.to_dict(),
        }


def construct_local_perturbation(
    M: OrliczFunction,
    x: SparseSequence,
    K: float,
    eps: float,
) -> tuple[PerturbationWeights, float]:
    """Weights a with sup a_n = eps, g_a(x) < delta, and pinned tails.

    Returns (a, delta) where delta is the largest eps*C^j/3 whose sublevel
    diameter bound at 3*delta/eps falls below eps.  The head weight theta
    keeps the head contribution under delta/4; the head length N cuts the
    tail modular of x under delta/(2 eps).  Consequences, exact on finitely
    supported data: sup_norm(a) = eps, g_a(x) < delta, and every y in the
    K-ball with g_a(y) <= 3*delta has ||tail beyond N|| < eps.
    """
    if eps <= 0.0 or not math.isfinite(eps):
        raise DomainError(f"eps must be positive and finite, got {eps}")
    if K <= 0.0 or not math.isfinite(K):
        raise DomainError(f"K must be positive and finite, got {K}")
    nx = luxemburg_norm(M, x)
    if nx > K * (1.0 + 1e-9):
        raise DomainError(f"point norm {nx} exceeds the declared radius {K}")
    C = M.delta2_constant
    if C is None:
        from .errors import Delta2RequiredError

        raise Delta2RequiredError(
            f"family {M.family_tag!r} carries no doubling constant"
        )

    delta = None
    power = 1.0
    for _ in range(10000):
        candidate = eps * power / 3.0
        if phi_bound(M, 3.0 * candidate / eps) < eps:
            delta = candidate
            break
        power *= C
    if delta is None:
        raise OrliczError("sublevel diameter bound never fell below eps")

    theta = min(eps / 2.0, delta / (4.0 * nu_bound(M, K)))
    tail_budget = delta / 2.0
    # The scan ends by x.max_index at the latest: the tail modular is 0 there.
    N = 0
    while eps * modular(M, project_tail(x, N)) >= tail_budget:
        N += 1
    a = PerturbationWeights(head=(theta,) * N, tail=eps)
    return a, delta


def _total_values(
    M: OrliczFunction,
    f: Objective,
    weights: PerturbationWeights,
    oracle: GridOracle,
) -> np.ndarray:
    def scalar(x: SparseSequence) -> float:
        return float(f.eval(x)) + g_eval(M, weights, x)

    def dense(rows: np.ndarray, indices: tuple[int, ...]) -> np.ndarray:
        base = np.asarray(f.eval_dense(rows, indices), dtype=float)
        return base + g_eval_dense(M, weights, rows, indices)

    vals = oracle.evaluate(scalar, dense if f.eval_dense is not None else None)
    if np.isnan(vals).any():
        raise OrliczError("objective returned NaN on the grid")
    finite = vals[np.isfinite(vals)]
    if finite.size == 0:
        raise NotProperError("objective is +inf on the whole grid")
    if finite.min() < f.lower_bound - 1e-9 * (1.0 + abs(f.lower_bound)):
        raise OrliczError(
            f"objective dipped below its declared lower bound {f.lower_bound}"
        )
    return vals


def _tail_proxy(
    M: OrliczFunction,
    oracle: GridOracle,
    vals: np.ndarray,
    level: float,
    head_len: int,
    cap: int = 10000,
) -> float:
    """Max tail norm over sampled near-minimizers of the current sweep."""
    tail_cols = [j for j, idx in enumerate(oracle.indices) if idx > head_len]
    if not tail_cols:
        return 0.0
    vmin = float(np.min(vals[np.isfinite(vals)]))
    rows = np.nonzero(vals <= vmin + level)[0][:cap]
    block = oracle.grid()[rows][:, tail_cols]
    norms = luxemburg_norm_dense(M, block)
    return float(norms.max()) if norms.size else 0.0


def perturb_minimize(
    M: OrliczFunction,
    f: Objective,
    eps: float,
    oracle: GridOracle,
    budget: int = 50,
    tail_tol: float = 1e-3,
    move_tol: float = 1e-6,
) -> SolveReport:
    """Accumulate perturbations until the grid minimizer stabilizes.

    Round n spends eps * 2^(-n-2) on a perturbation centered at the current
    grid argmin; if the objective was not declared coercive, an initial
    eps/4 uniform weight is folded in first.  The run stops when the argmin
    moves by less than move_tol and the sampled sublevel set at the round's
    delta has tail norms below tail_tol beyond the accumulated head.  The
    accumulated sup norm stays strictly below eps on every path, including
    budget exhaustion.
    """
    if eps <= 0.0 or not math.isfinite(eps):
        raise DomainError(f"eps must be positive and finite, got {eps}")
    if budget < 1:
        raise DomainError(f"budget must be >= 1, got {budget}")
    if not math.isfinite(f.domain_radius) or f.domain_radius <= 0.0:
        raise DomainError("objective needs a positive finite domain_radius")
    f.assert_proper()

    theta0 = 0.0 if f.coercive else eps / 4.0
    weights = PerturbationWeights(head=(), tail=theta0)
    vals = _total_values(M, f, weights, oracle)
    x_cur = oracle.sequence_at(int(np.argmin(vals)))

    converged = False
    iterations = 0
    delta_n = math.nan
    proxy = math.inf
    for n in range(1, budget + 1):
        eps_n = eps * 2.0 ** (-n - 2)
        K_eff = max(f.domain_radius, luxemburg_norm(M, x_cur))
        a_n, delta_n = construct_local_perturbation(M, x_cur, K_eff, eps_n)
        weights = weights + a_n
        vals = _total_values(M, f, weights, oracle)
        x_next = oracle.sequence_at(int(np.argmin(vals)))
        moved = luxemburg_norm(M, x_next - x_cur)
        proxy = _tail_proxy(M, oracle, vals, delta_n, len(weights.head))
        iterations = n
        x_cur = x_next
        if moved < move_tol and proxy < tail_tol:
            converged = True
            break

    if weights.sup_norm >= eps:
        raise OrliczError("weight budget overflow; schedule violated")
    return SolveReport(
        weights=weights,
        minimizer=x_cur,
        min_value=float(np.min(vals)),
        iterations=iterations,
        converged=converged,
        final_tail_index=len(weights.head),
        compactness_proxy=proxy,
        certificate_accuracy=delta_n,
        certificate_resolution=oracle.describe(),
    )


def support_from_below(
    M: OrliczFunction,
    f: Objective,
    delta_lo: float,
    eps_hi: float,
    oracle: GridOracle,
    budget: int = 50,
    tail_tol: float = 1e-3,
    move_tol: float = 1e-6,
) -> SupportReport:
    """Weights a with delta_lo <= a_n <= eps_hi and f - g_a minimized on grid.

    Applies the engine to f - eps_hi * sigma (coercive outright: it is +inf
    off the bounded domain ball) with the budget eps_hi - delta_lo, then
    flips the accumulated weights: a_n = eps_hi - a'_n.  Since sup a' stays
    strictly under the budget, every a_n lands strictly above delta_lo.
    """
    if not (0.0 < delta_lo < eps_hi):
        raise DomainError(f"need 0 < delta_lo < eps_hi, got {delta_lo}, {eps_hi}")
    if not math.isfinite(f.domain_radius) or f.domain_radius <= 0.0:
        raise DomainError("support construction needs a bounded domain ball")
    K = f.domain_radius
    radius_slack = K * (1.0 + 1e-9)

    def shifted(x: SparseSequence) -> float:
        if luxemburg_norm(M, x) > radius_slack:
            return math.inf
        return float(f.eval(x)) - eps_hi * modular(M, x)

    shifted_dense = None
    if f.eval_dense is not None:

        def shifted_dense(rows: np.ndarray, indices: tuple[int, ...]) -> np.ndarray:
            base = np.asarray(f.eval_dense(rows, indices), dtype=float)
            out = base - eps_hi * modular_dense(M, rows)
            outside = luxemburg_norm_dense(M, rows) > radius_slack
            out[outside] = math.inf
            return out

    f1 = Objective(
        eval=shifted,
        domain_radius=K,
        lower_bound=f.lower_bound - eps_hi * nu_bound(M, K),
        eval_dense=shifted_dense,
        probe_points=f.probe_points,
        coercive=True,
        parallel_safe=f.parallel_safe,
    )
    inner = perturb_minimize(
        M, f1, eps_hi - delta_lo, oracle, budget=budget,
        tail_tol=tail_tol, move_tol=move_tol,
    )
    a = PerturbationWeights(
        head=tuple(eps_hi - v for v in inner.weights.head),
        tail=eps_hi - inner.weights.tail,
    )
    x_bar = inner.minimizer
    return SupportReport(
        weights=a,
        minimizer=x_bar,
        supported_value=float(f.eval(x_bar)) - g_eval(M, a, x_bar),
        inner=inner,
    )


def supporting_functional(
    M: OrliczFunction,
    a: PerturbationWeights,
    x_bar: SparseSequence,
    K: float,
    check_samples: int = 0,
    seed: int = 0,
) -> tuple[SparseSequence, float]:
    """Subgradient of g_a at x_bar and a bound on its functional norm.

    p_n = a_n M'(|x_bar_n|) sign(x_bar_n) on the support, 0 elsewhere;
    coordinate convexity of t -> M(|t|) makes p a global subgradient of
    g_a.  The norm bound 2 sup|a_n| nu_bound(M, K+2) follows from the
    Lipschitz estimate on the slightly enlarged ball.  With check_samples
    > 0, the subgradient inequality is spot-checked on that many seeded
    points of the K-ball (tolerance 1e-10) before returning.
    """
    pairs = []
    for idx, val in x_bar.entries:
        slope = a.weight_at(idx) * M.d1(abs(val)) * math.copysign(1.0, val)
        if slope != 0.0:
            pairs.append((idx, slope))
    p = SparseSequence(tuple(pairs))
    norm_bound = 2.0 * a.sup_norm * nu_bound(M, K + 2.0)

    if check_samples > 0:
        from .sampling import BallSampler

        span = max(x_bar.max_index, len(a.head)) + 10
        sampler = BallSampler(
            seed=seed,
            count=check_samples,
            support_size=min(6, span),
            index_range=span,
        )
        g_at_bar = g_eval(M, a, x_bar)
        for y in sampler.points(M, K):
            gap = g_eval(M, a, y) - g_at_bar - _pairing(p, y - x_bar)
            if gap < -1e-10:
                raise OrliczError(
                    f"subgradient inequality failed by {gap:.3e} at a sample"
                )
    return p, norm_bound


def _pairing(p: SparseSequence, h: SparseSequence) -> float:
    return sum(p.value_at(idx) * val for idx, val in h.entries)
