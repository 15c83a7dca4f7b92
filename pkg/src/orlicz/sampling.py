"""Seeded samplers for balls and sublevel sets.

Each draw recreates its generator from the stored seed, so repeated calls
return identical points and the sampler can be shared between diagnostics
without order effects.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .functions import OrliczFunction
from .sequences import SparseSequence
from .space import luxemburg_norm_dense

__all__ = ["BallSampler", "GridSampler", "dense_to_sequences"]


def dense_to_sequences(rows: np.ndarray, indices: tuple[int, ...]) -> list[SparseSequence]:
    """Map dense rows over the given coordinate indices to sparse form."""
    out = []
    for row in np.asarray(rows, dtype=float):
        out.append(
            SparseSequence.from_pairs(
                (idx, v) for idx, v in zip(indices, row) if v != 0.0
            )
        )
    return out


@dataclass(frozen=True)
class BallSampler:
    """Random points of radius*B with log-uniform radii.

    Directions: `support_size` coordinates drawn without replacement from
    1..index_range, standard normal values, row normalized to Luxemburg
    norm 1.  Radii: radius * 10**(-decades * u), u uniform, so every scale
    down to radius/10^decades is populated.  The zero sequence and any
    `extra` points are appended to every draw.
    """

    seed: int
    count: int = 400
    support_size: int = 6
    index_range: int = 40
    decades: float = 3.0
    include_zero: bool = True
    extra: tuple[SparseSequence, ...] = field(default=())

    def __post_init__(self):
        if self.count < 1:
            raise DomainError(f"count must be >= 1, got {self.count}")
        if not (1 <= self.support_size <= self.index_range):
            raise DomainError(
                f"need 1 <= support_size <= index_range, got "
                f"{self.support_size}, {self.index_range}"
            )

    def dense_points(self, M: OrliczFunction, radius: float) -> tuple[np.ndarray, tuple[int, ...]]:
        """(rows, indices): dense coordinates over 1..index_range."""
        if radius <= 0.0:
            raise DomainError(f"radius must be > 0, got {radius}")
        rng = np.random.default_rng(self.seed)
        rows = np.zeros((self.count, self.index_range), dtype=float)
        for i in range(self.count):
            support = rng.choice(self.index_range, size=self.support_size, replace=False)
            rows[i, support] = rng.standard_normal(self.support_size)
        norms = luxemburg_norm_dense(M, rows)
        norms[norms == 0.0] = 1.0
        radii = radius * 10.0 ** (-self.decades * rng.uniform(size=self.count))
        rows *= (radii / norms)[:, None]
        return rows, tuple(range(1, self.index_range + 1))

    def points(self, M: OrliczFunction, radius: float) -> list[SparseSequence]:
        rows, indices = self.dense_points(M, radius)
        pts = dense_to_sequences(rows, indices)
        if self.include_zero:
            pts.append(SparseSequence())
        pts.extend(self.extra)
        return pts

    def describe(self) -> str:
        return (
            f"random-ball(seed={self.seed}, count={self.count}, "
            f"support={self.support_size}, indices<={self.index_range}, "
            f"decades={self.decades:g}, zero={self.include_zero}, "
            f"extra={len(self.extra)})"
        )


@dataclass(frozen=True)
class GridSampler:
    """All points of a box grid over the leading coordinates."""

    indices: tuple[int, ...] = (1, 2)
    step: float = 0.1
    radius: float = 1.0

    def __post_init__(self):
        if self.step <= 0.0 or self.radius <= 0.0:
            raise DomainError("grid step and radius must be > 0")
        if len(self.indices) > 8 or not self.indices:
            raise DomainError("grid sampler supports 1..8 coordinates")

    def dense_points(self, M: OrliczFunction, radius: float | None = None) -> tuple[np.ndarray, tuple[int, ...]]:
        n = int(np.floor(self.radius / self.step + 1e-9))
        axis = np.arange(-n, n + 1, dtype=float) * self.step
        mesh = np.meshgrid(*([axis] * len(self.indices)), indexing="ij")
        rows = np.stack(mesh, axis=-1).reshape(-1, len(self.indices))
        return rows, self.indices

    def points(self, M: OrliczFunction, radius: float | None = None) -> list[SparseSequence]:
        rows, indices = self.dense_points(M, radius)
        return dense_to_sequences(rows, indices)

    def describe(self) -> str:
        return (
            f"grid(indices={list(self.indices)}, step={self.step:g}, "
            f"radius={self.radius:g})"
        )
