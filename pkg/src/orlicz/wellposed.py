"""Sampled well-posedness diagnostics over sublevel sets.

Everything here is relative to a finite sample: infima, sublevel sets,
covering radii.  The verdicts are desk-scale evidence, not proofs, and
the reports say which sampler produced them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .engine import Objective
from .errors import DomainError, NotProperError, OrliczError
from .functions import OrliczFunction
from .sequences import SparseSequence
from .space import luxemburg_norm, luxemburg_norm_dense, modular

__all__ = [
    "SublevelSample",
    "WellPosednessReport",
    "IntersectionCheck",
    "WitnessStats",
    "sublevel_sample",
    "kuratowski_estimate",
    "intersection_lemma_check",
    "wpmc_diagnose",
    "non_delta2_witness",
]

VERDICT_WPMC = "looks-wpmc"
VERDICT_NOT_WPMC = "looks-not-wpmc"
VERDICT_INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class SublevelSample:
    """Sampled points within `level` of the sampled infimum."""

    level: float
    points: tuple[SparseSequence, ...]
    inf_sample: float
    sampler_spec: str


@dataclass(frozen=True)
class WellPosednessReport:
    levels: tuple[float, ...]
    alpha_estimates: tuple[float, ...]
    diam_estimates: tuple[float, ...]
    verdict: str
    sampler_spec: str

    def to_dict(self) -> dict:
        return {
            "levels": list(self.levels),
            "alpha_estimates": list(self.alpha_estimates),
            "diam_estimates": list(self.diam_estimates),
            "verdict": self.verdict,
            "sampler_spec": self.sampler_spec,
        }


@dataclass(frozen=True)
class IntersectionCheck:
    """Truthy iff no sampled counterexample to the sublevel containment."""

    holds: bool
    hypothesis_nonempty: bool
    checked: int

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class WitnessStats:
    k: int
    t_k: float
    i_k: int
    ratio: float
    sigma_x: float
    sigma_2x: float
    norm_x: float

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "t_k": self.t_k,
            "i_k": self.i_k,
            "ratio": self.ratio,
            "sigma_x": self.sigma_x,
            "sigma_2x": self.sigma_2x,
            "norm_x": self.norm_x,
        }


def sublevel_sample(
    M: OrliczFunction,
    f: Objective,
    K: float,
    eps: float,
    sampler,
) -> SublevelSample:
    """Points of the sample within eps of the sampled infimum over K*B."""
    if eps < 0.0:
        raise DomainError(f"level eps must be >= 0, got {eps}")
    pts = sampler.points(M, K)
    values = [float(f.eval(p)) for p in pts]
    finite = [v for v in values if math.isfinite(v)]
    if not finite:
        raise NotProperError("no sampled point has a finite value")
    inf_sample = min(finite)
    chosen = tuple(p for p, v in zip(pts, values) if v <= inf_sample + eps)
    return SublevelSample(
        level=eps, points=chosen, inf_sample=inf_sample,
        sampler_spec=sampler.describe(),
    )


def _dense_block(points) -> np.ndarray:
    span = max((p.max_index for p in points), default=0)
    rows = np.zeros((len(points), max(span, 1)), dtype=float)
    for i, p in enumerate(points):
        for idx, val in p.entries:
            rows[i, idx - 1] = val
    return rows


def kuratowski_estimate(
    points, M: OrliczFunction, max_centers: int
) -> float:
    """Greedy covering radius with max_centers centers (farthest-point rule).

    An upper proxy for the non-compactness index of the sampled set: the
    radius after k greedy centers is within a factor 2 of the best k-center
    radius, and it is non-increasing in max_centers.  Ties in the farthest
    point go to the lowest list index.
    """
    pts = list(points)
    if not pts:
        raise DomainError("cannot estimate covering radius of an empty sample")
    if max_centers < 1:
        raise DomainError(f"max_centers must be >= 1, got {max_centers}")
    rows = _dense_block(pts)
    # dist[i] = distance from point i to its nearest chosen center
    dist = luxemburg_norm_dense(M, rows - rows[0])
    for _ in range(1, min(max_centers, len(pts))):
        far = int(np.argmax(dist))  # argmax takes the first maximum: lowest index wins ties
        if dist[far] == 0.0:
            break
        dist = np.minimum(dist, luxemburg_norm_dense(M, rows - rows[far]))
    return float(dist.max())


def _diam_estimate(points, M: OrliczFunction, cap: int = 200) -> float:
    pts = list(points)
    if len(pts) < 2:
        return 0.0
    if len(pts) > cap:
        stride = max(1, len(pts) // cap)
        pts = pts[::stride][:cap]
    rows = _dense_block(pts)
    n = len(rows)
    ii, jj = np.triu_indices(n, k=1)
    dists = luxemburg_norm_dense(M, rows[ii] - rows[jj])
    return float(dists.max()) if dists.size else 0.0


def intersection_lemma_check(
    M: OrliczFunction,
    f: Objective,
    g: Objective,
    K: float,
    delta: float,
    sampler,
    fp_slack: float = 1e-9,
) -> IntersectionCheck:
    """Sampled containment: near-minimizers of f+g are near-minimizers of each.

    With S the common sample, if some point of S is within delta of both
    sampled infima, then every point of S within delta of inf(f+g) must be
    within 3*delta of each separate infimum.  The containment can be tight,
    so the 3*delta side carries an absolute fp_slack.
    """
    if delta <= 0.0:
        raise DomainError(f"delta must be > 0, got {delta}")
    pts = sampler.points(M, K)
    fv = np.array([float(f.eval(p)) for p in pts])
    gv = np.array([float(g.eval(p)) for p in pts])
    both = fv + gv
    finite = np.isfinite(fv) & np.isfinite(gv)
    if not finite.any():
        raise NotProperError("no sampled point is finite for both objectives")
    inf_f = fv[finite].min()
    inf_g = gv[finite].min()
    inf_fg = both[finite].min()
    hypothesis = (fv <= inf_f + delta) & (gv <= inf_g + delta)
    if not hypothesis.any():
        return IntersectionCheck(holds=True, hypothesis_nonempty=False, checked=0)
    candidates = both <= inf_fg + delta
    contained = (fv <= inf_f + 3.0 * delta + fp_slack) & (
        gv <= inf_g + 3.0 * delta + fp_slack
    )
    bad = candidates & ~contained
    return IntersectionCheck(
        holds=not bool(bad.any()),
        hypothesis_nonempty=True,
        checked=int(candidates.sum()),
    )


def wpmc_diagnose(
    M: OrliczFunction,
    f: Objective,
    K: float,
    levels,
    sampler,
    max_centers: int = 8,
    tol: float = 1e-2,
    slack: float = 0.1,
) -> WellPosednessReport:
    """Covering-radius and diameter trends across shrinking sublevel sets.

    looks-wpmc: both estimates fall below tol at the smallest level and
    decrease weakly (within `slack`) along the way.  looks-not-wpmc: either
    estimate at the smallest level stays above 10*tol.
    Anything else is inconclusive.
    """
    levels = tuple(float(v) for v in levels)
    if not levels or any(v <= 0.0 for v in levels):
        raise DomainError("levels must be positive")
    if any(a <= b for a, b in zip(levels, levels[1:])):
        raise DomainError("levels must be strictly decreasing")

    pts = sampler.points(M, K)
    values = [float(f.eval(p)) for p in pts]
    finite = [v for v in values if math.isfinite(v)]
    if not finite:
        raise NotProperError("no sampled point has a finite value")
    inf_sample = min(finite)

    alphas = []
    diams = []
    for level in levels:
        chosen = [p for p, v in zip(pts, values) if v <= inf_sample + level]
        alphas.append(kuratowski_estimate(chosen, M, max_centers))
        diams.append(_diam_estimate(chosen, M))

    def weakly_decreasing(seq) -> bool:
        return all(b <= a * (1.0 + slack) + 1e-12 for a, b in zip(seq, seq[1:]))

    if (
        alphas[-1] < tol
        and diams[-1] < tol
        and weakly_decreasing(alphas)
        and weakly_decreasing(diams)
    ):
        verdict = VERDICT_WPMC
    elif alphas[-1] > 10.0 * tol or diams[-1] > 10.0 * tol:
        # Either estimate staying an order of magnitude above tol at the
        # deepest level is evidence the sublevel sets do not collapse.
        verdict = VERDICT_NOT_WPMC
    else:
        verdict = VERDICT_INCONCLUSIVE
    return WellPosednessReport(
        levels=levels,
        alpha_estimates=tuple(alphas),
        diam_estimates=tuple(diams),
        verdict=verdict,
        sampler_spec=sampler.describe(),
    )


def non_delta2_witness(
    M: OrliczFunction,
    k: int,
    refinement: int = 4,
    max_scan: int = 400,
) -> tuple[SparseSequence, WitnessStats]:
    """A plateau sequence with small modular but norm pinned near 1/2.

    Scans t downward on the geometric grid 2^(-j/refinement), keeping only
    points with 2t < 1 and M(2t) < 1, until M(t)/M(2t) < 1/k.  The witness
    puts t on the first floor(1/M(2t)) coordinates, so its modular stays
    below 1/k + M(t) while doubling it pushes the modular toward 1 and the
    norm into [sigma(2x)/2, 1/2].  Fails when the ratio never drops (the
    function satisfies the doubling condition at this resolution).
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if refinement < 1:
        raise DomainError(f"refinement must be >= 1, got {refinement}")
    t_k = None
    for j in range(1, max_scan + 1):
        t = 2.0 ** (-j / refinement)
        if 2.0 * t >= 1.0:
            continue
        m2t = float(M.eval(2.0 * t))
        if not (0.0 < m2t < 1.0):
            continue
        ratio = float(M.eval(t)) / m2t
        if ratio < 1.0 / k:
            t_k = t
            break
    if t_k is None:
        raise OrliczError(
            f"no scan point with M(t)/M(2t) < 1/{k}; "
            "the function appears to satisfy the doubling condition"
        )
    m_t = float(M.eval(t_k))
    m_2t = float(M.eval(2.0 * t_k))
    i_k = int(math.floor(1.0 / m_2t))
    x = SparseSequence.from_pairs((n, t_k) for n in range(1, i_k + 1))
    stats = WitnessStats(
        k=k,
        t_k=t_k,
        i_k=i_k,
        ratio=m_t / m_2t,
        sigma_x=modular(M, x),
        sigma_2x=modular(M, x.scale(2.0)),
        norm_x=luxemburg_norm(M, x),
    )
    return x, stats
