"""Ordinal patterns and their distributions.

Patterns are kept internally as Lehmer codes in ``[0, m!)`` and rendered as
1-based rank tuples ``(k_1, ..., k_m)`` at the edges.  Ties are broken by
position: a stable ascending sort on ``(value, index)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from graphpe.services.errors import InvalidArgumentError

OrdinalPattern = tuple[int, ...]


@dataclass
class PatternDistribution:
    """Counts of Lehmer-coded patterns of a fixed order ``m``."""

    m: int
    counts: dict[int, int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def distinct(self) -> int:
        return sum(1 for c in self.counts.values() if c > 0)

    def probabilities(self) -> np.ndarray:
        observed = np.array([c for c in self.counts.values() if c > 0], dtype=np.float64)
        if observed.size == 0:
            return observed
        return observed / observed.sum()

    def as_dict(self) -> dict[OrdinalPattern, int]:
        return {
            pattern_from_code(code, self.m): count
            for code, count in sorted(self.counts.items())
        }

    def add_codes(self, codes: np.ndarray) -> None:
        uniq, freq = np.unique(np.asarray(codes, dtype=np.int64), return_counts=True)
        for code, count in zip(uniq.tolist(), freq.tolist()):
            self.counts[code] = self.counts.get(code, 0) + count

    def merge(self, other: PatternDistribution) -> PatternDistribution:
        if other.m != self.m:
            raise InvalidArgumentError(
                f"cannot pool patterns of order {self.m} and {other.m}"
            )
        merged = dict(self.counts)
        for code, count in other.counts.items():
            merged[code] = merged.get(code, 0) + count
        return PatternDistribution(m=self.m, counts=merged)

    @classmethod
    def from_patterns(
        cls, patterns: Iterable[Sequence[int]], m: int
    ) -> PatternDistribution:
        dist = cls(m=m)
        for pattern in patterns:
            if len(pattern) != m:
                raise InvalidArgumentError(
                    f"pattern {tuple(pattern)} does not have length {m}"
                )
            code = lehmer_code(pattern)
            dist.counts[code] = dist.counts.get(code, 0) + 1
        return dist


def _factorials(m: int) -> np.ndarray:
    return np.array([math.factorial(i) for i in range(m)], dtype=np.int64)


def ordinal_pattern(v: Sequence[float]) -> OrdinalPattern:
    """Return ``(k_1..k_m)`` with ``v[k_1] <= ... <= v[k_m]`` (1-based, ties by index)."""
    arr = np.asarray(v, dtype=np.float64).reshape(-1)
    if arr.size < 2:
        raise InvalidArgumentError(f"pattern order must be >= 2, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        bad = int(np.flatnonzero(~np.isfinite(arr))[0])
        raise InvalidArgumentError(f"entry {bad} is not finite: {arr[bad]}")
    order = np.argsort(arr, kind="stable")
    return tuple(int(i) + 1 for i in order)


def ordinal_codes(windows: np.ndarray) -> np.ndarray:
    """Lehmer codes of the ordinal patterns of every row of ``windows``."""
    rows = np.asarray(windows, dtype=np.float64)
    if rows.ndim != 2 or rows.shape[1] < 2:
        raise InvalidArgumentError(f"expected an (N, m) matrix with m >= 2, got {rows.shape}")
    if not np.all(np.isfinite(rows)):
        bad = np.argwhere(~np.isfinite(rows))[0]
        raise InvalidArgumentError(
            f"embedding row {int(bad[0])} has a non-finite entry at {int(bad[1])}"
        )
    perms = np.argsort(rows, axis=1, kind="stable")
    return _encode_permutations(perms)


def _encode_permutations(perms: np.ndarray) -> np.ndarray:
    m = perms.shape[1]
    fact = _factorials(m)
    codes = np.zeros(perms.shape[0], dtype=np.int64)
    for i in range(m - 1):
        smaller = np.count_nonzero(perms[:, i + 1:] < perms[:, i:i + 1], axis=1)
        codes += smaller.astype(np.int64) * fact[m - 1 - i]
    return codes


def lehmer_code(pattern: Sequence[int]) -> int:
    """Lehmer code of a 1-based rank tuple."""
    perm = np.asarray(pattern, dtype=np.int64).reshape(1, -1) - 1
    m = perm.shape[1]
    if sorted(perm[0].tolist()) != list(range(m)):
        raise InvalidArgumentError(f"{tuple(pattern)} is not a permutation of 1..{m}")
    return int(_encode_permutations(perm)[0])


def pattern_from_code(code: int, m: int) -> OrdinalPattern:
    if not 0 <= code < math.factorial(m):
        raise InvalidArgumentError(f"code {code} outside [0, {m}!)")
    remaining = list(range(1, m + 1))
    out: list[int] = []
    for i in range(m - 1, -1, -1):
        idx, code = divmod(code, math.factorial(i))
        out.append(remaining.pop(idx))
    return tuple(out)


def normalized_shannon(d: PatternDistribution, m: int) -> float:
    """Shannon entropy of ``d`` divided by ``ln(m!)``, clamped to ``[0, 1]``."""
    if d.m != m:
        raise InvalidArgumentError(f"distribution has order {d.m}, expected {m}")
    if d.total < 1:
        raise InvalidArgumentError("pattern distribution is empty")
    probs = d.probabilities()
    entropy = float(-np.sum(probs * np.log(probs)))
    value = entropy / math.log(math.factorial(m))
    return min(1.0, max(0.0, value))


def missing_patterns(d: PatternDistribution) -> int:
    """How many of the ``m!`` patterns never occur."""
    return math.factorial(d.m) - d.distinct


__all__ = [
    "OrdinalPattern",
    "PatternDistribution",
    "ordinal_pattern",
    "ordinal_codes",
    "lehmer_code",
    "pattern_from_code",
    "normalized_shannon",
    "missing_patterns",
]
