"""Named objective builders for the command line and the test benches."""

from __future__ import annotations

import math

import numpy as np

from .engine import Objective
from .errors import DomainError
from .functions import OrliczFunction
from .sequences import SparseSequence, parse_sequence
from .space import luxemburg_norm, luxemburg_norm_dense, modular, modular_dense

__all__ = [
    "modular_objective",
    "squared_distance_objective",
    "shifted_ball_objective",
    "inverse_bump_objective",
    "parse_objective",
]


def modular_objective(M: OrliczFunction, radius: float = 1.0) -> Objective:
    """f = sigma_M on the radius ball; coercive, minimized at 0."""

    def dense(rows: np.ndarray, indices) -> np.ndarray:
        return modular_dense(M, rows)

    return Objective(
        eval=lambda x: modular(M, x),
        domain_radius=radius,
        lower_bound=0.0,
        eval_dense=dense,
        coercive=True,
    )


def squared_distance_objective(
    M: OrliczFunction, z: SparseSequence, coercive: bool = True
) -> Objective:
    """f(x) = ||x - z||^2 in the Luxemburg norm; domain ball of radius 2||z||."""
    nz = luxemburg_norm(M, z)
    if nz == 0.0:
        raise DomainError("target z must be nonzero; use the modular objective for 0")
    dense_z_cache: dict[tuple[int, ...], np.ndarray] = {}

    def dense(rows: np.ndarray, indices) -> np.ndarray:
        key = tuple(indices)
        if any(i not in key for i, _ in z.entries):
            raise DomainError(
                "grid does not cover the support of z; widen the oracle's index set"
            )
        if key not in dense_z_cache:
            dense_z_cache[key] = np.array([z.value_at(i) for i in indices], dtype=float)
        diff = rows - dense_z_cache[key][None, :]
        return luxemburg_norm_dense(M, diff) ** 2

    return Objective(
        eval=lambda x: luxemburg_norm(M, x - z) ** 2,
        domain_radius=2.0 * nz,
        lower_bound=0.0,
        eval_dense=dense,
        probe_points=(z, SparseSequence()),
        coercive=coercive,
    )


def shifted_ball_objective(M: OrliczFunction, radius: float = 1.0) -> Objective:
    """f = 1 + ||x||^2 inside the radius ball, +inf outside.

    The minimum over the ball is at 0, but subtracting a full multiple of
    the modular flips it onto the sphere, which is what makes this the
    standard stress case for the support construction.
    """

    def evaluate(x: SparseSequence) -> float:
        n = luxemburg_norm(M, x)
        return 1.0 + n * n if n <= radius * (1.0 + 1e-12) else math.inf

    def dense(rows: np.ndarray, indices) -> np.ndarray:
        n = luxemburg_norm_dense(M, rows)
        out = 1.0 + n * n
        out[n > radius * (1.0 + 1e-12)] = math.inf
        return out

    return Objective(
        eval=evaluate,
        domain_radius=radius,
        lower_bound=1.0,
        eval_dense=dense,
        coercive=False,
    )


def inverse_bump_objective(M: OrliczFunction, radius: float = 1.0) -> Objective:
    """f = b^-2 for the standard smooth bump b supported on the radius ball.

    b(x) = exp(1 - 1/(1 - (||x||/radius)^2)) inside, 0 outside, so f is
    smooth inside, equals 1 at the center, and blows up at the boundary.
    """

    def evaluate(x: SparseSequence) -> float:
        r = luxemburg_norm(M, x) / radius
        if r >= 1.0:
            return math.inf
        try:
            return math.exp(2.0 / (1.0 - r * r) - 2.0)
        except OverflowError:  # true value exceeds float range just inside the wall
            return math.inf

    def dense(rows: np.ndarray, indices) -> np.ndarray:
        r = luxemburg_norm_dense(M, rows) / radius
        inside = r < 1.0
        out = np.full(len(rows), math.inf)
        rr = r[inside]
        with np.errstate(over="ignore"):
            out[inside] = np.exp(2.0 / (1.0 - rr * rr) - 2.0)
        return out

    return Objective(
        eval=evaluate,
        domain_radius=radius,
        lower_bound=1.0,
        eval_dense=dense,
        coercive=False,
    )


def parse_objective(M: OrliczFunction, text: str) -> Objective:
    """Objective literal -> objective.

    Forms: "modular", "modular:R", "sqdist:<sequence literal>",
    "ball-quad", "ball-quad:R", "bump-inv", "bump-inv:R".
    """
    text = text.strip()
    name, _, rest = text.partition(":")
    name = name.lower()
    if name == "modular":
        radius = float(rest) if rest else 1.0
        return modular_objective(M, radius)
    if name == "sqdist":
        z = parse_sequence(rest)
        return squared_distance_objective(M, z)
    if name == "ball-quad":
        radius = float(rest) if rest else 1.0
        return shifted_ball_objective(M, radius)
    if name == "bump-inv":
        radius = float(rest) if rest else 1.0
        return inverse_bump_objective(M, radius)
    raise DomainError(f"unknown objective {text!r}")
