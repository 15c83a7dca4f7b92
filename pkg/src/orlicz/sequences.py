"""Finitely supported sequences with 1-based indices."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import DomainError

__all__ = ["SparseSequence", "parse_sequence", "format_sequence"]


@dataclass(frozen=True)
class SparseSequence:
    """Entries (index, value) with strictly increasing indices >= 1, values != 0.

    Immutable; arithmetic merges supports and drops exact-zero results, so
    the representation is always canonical and equality is structural.
    """

    entries: tuple[tuple[int, float], ...] = field(default=())

    def __post_init__(self):
        prev = 0
        for idx, val in self.entries:
            if not isinstance(idx, int) or idx < 1:
                raise DomainError(f"indices must be integers >= 1, got {idx!r}")
            if idx <= prev:
                raise DomainError(f"indices must be strictly increasing, got {idx} after {prev}")
            if val == 0.0 or not np.isfinite(val):
                raise DomainError(f"values must be nonzero and finite, got {val!r} at index {idx}")
            prev = idx

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, float]]) -> "SparseSequence":
        """Build from (index, value) pairs in any order; zeros are dropped."""
        cleaned = sorted((int(i), float(v)) for i, v in pairs if float(v) != 0.0)
        for (a, _), (b, _) in zip(cleaned, cleaned[1:]):
            if a == b:
                raise DomainError(f"duplicate index {a}")
        return cls(tuple(cleaned))

    @classmethod
    def from_values(cls, values: Sequence[float], start: int = 1) -> "SparseSequence":
        """Dense prefix -> sparse form, indices start..start+len-1, zeros dropped."""
        return cls.from_pairs(
            (start + i, v) for i, v in enumerate(values) if float(v) != 0.0
        )

    def __iter__(self) -> Iterator[tuple[int, float]]:
        return iter(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)

    @property
    def support_size(self) -> int:
        return len(self.entries)

    @property
    def max_index(self) -> int:
        return self.entries[-1][0] if self.entries else 0

    def value_at(self, index: int) -> float:
        for idx, val in self.entries:
            if idx == index:
                return val
            if idx > index:
                break
        return 0.0

    def indices(self) -> tuple[int, ...]:
        return tuple(idx for idx, _ in self.entries)

    def values(self) -> tuple[float, ...]:
        return tuple(val for _, val in self.entries)

    def scale(self, factor: float) -> "SparseSequence":
        if factor == 0.0:
            return SparseSequence()
        return SparseSequence(tuple((i, v * factor) for i, v in self.entries))

    def __mul__(self, factor: float) -> "SparseSequence":
        return self.scale(float(factor))

    __rmul__ = __mul__

    def __neg__(self) -> "SparseSequence":
        return self.scale(-1.0)

    def _merge(self, other: "SparseSequence", sign: float) -> "SparseSequence":
        out: list[tuple[int, float]] = []
        a, b = self.entries, other.entries
        i = j = 0
        while i < len(a) or j < len(b):
            if j >= len(b) or (i < len(a) and a[i][0] < b[j][0]):
                out.append(a[i])
                i += 1
            elif i >= len(a) or b[j][0] < a[i][0]:
                out.append((b[j][0], sign * b[j][1]))
                j += 1
            else:
                v = a[i][1] + sign * b[j][1]
                if v != 0.0:
                    out.append((a[i][0], v))
                i += 1
                j += 1
        return SparseSequence(tuple(out))

    def __add__(self, other: "SparseSequence") -> "SparseSequence":
        return self._merge(other, 1.0)

    def __sub__(self, other: "SparseSequence") -> "SparseSequence":
        return self._merge(other, -1.0)

    def to_dense(self, length: int | None = None) -> np.ndarray:
        n = self.max_index if length is None else length
        out = np.zeros(n, dtype=float)
        for idx, val in self.entries:
            if idx <= n:
                out[idx - 1] = val
        return out


def parse_sequence(text: str) -> SparseSequence:
    """Parse the literal "i1:v1,i2:v2,..."; empty or blank text is the zero sequence."""
    text = text.strip()
    if not text:
        return SparseSequence()
    pairs = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            idx_text, val_text = chunk.split(":")
            pairs.append((int(idx_text), float(val_text)))
        except ValueError as exc:
            raise DomainError(f"bad sequence entry {chunk!r}; expected index:value") from exc
    return SparseSequence.from_pairs(pairs)


def format_sequence(x: SparseSequence) -> str:
    """Inverse of parse_sequence (canonical order, repr-exact floats)."""
    return ",".join(f"{i}:{v!r}" for i, v in x.entries)
