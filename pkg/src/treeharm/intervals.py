"""Finite unions of closed real intervals."""
from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class IntervalUnion:
    """Sorted, pairwise disjoint closed intervals ``[lo, hi]``."""

    intervals: tuple[tuple[float, float], ...]

    def __post_init__(self):
        prev_hi = -math.inf
        for lo, hi in self.intervals:
            if not lo <= hi:
                raise ValueError(f"empty or reversed interval [{lo}, {hi}]")
            if lo <= prev_hi:
                raise ValueError("intervals must be sorted and disjoint")
            prev_hi = hi

    @classmethod
    def from_intervals(cls, pieces: Iterable[tuple[float, float]], merge_tol: float = 0.0) -> IntervalUnion:
        """Normalize arbitrary pieces: sort, and merge overlaps or gaps <= ``merge_tol``."""
        items = sorted((min(a, b), max(a, b)) for a, b in pieces)
        merged: list[list[float]] = []
        for lo, hi in items:
            if merged and lo <= merged[-1][1] + merge_tol:
                merged[-1][1] = max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        return cls(tuple((float(a), float(b)) for a, b in merged))

    @property
    def lo(self) -> float:
        return self.intervals[0][0]

    @property
    def hi(self) -> float:
        return self.intervals[-1][1]

    def __len__(self):
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    def distance_to(self, x: float) -> float:
        best = math.inf
        for lo, hi in self.intervals:
            if lo <= x <= hi:
                return 0.0
            best = min(best, abs(x - lo), abs(x - hi))
        return best

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return self.distance_to(x) <= tol

    def issubset(self, other: IntervalUnion, tol: float = 0.0) -> bool:
        return all(
            any(olo - tol <= lo and hi <= ohi + tol for olo, ohi in other.intervals)
            for lo, hi in self.intervals
        )

    def is_strict_subset(self, other: IntervalUnion, tol: float = 0.0) -> bool:
        """Subset up to ``tol`` and not equal up to ``tol``."""
        return self.issubset(other, tol) and not other.issubset(self, tol)

    def hausdorff_to_points(self, points: np.ndarray) -> float:
        """Hausdorff distance between the union and a finite point set."""
        pts = np.sort(np.asarray(points, dtype=float))
        if pts.size == 0:
            return math.inf
        d_pts = max(self.distance_to(float(x)) for x in pts)
        # distance to the sample is piecewise linear; its maxima over an interval
        # sit at the interval ends or at midpoints of consecutive samples
        mids = 0.5 * (pts[:-1] + pts[1:])
        d_union = 0.0
        for lo, hi in self.intervals:
            cand = np.concatenate([[lo, hi], mids[(mids >= lo) & (mids <= hi)]])
            k = np.clip(np.searchsorted(pts, cand), 1, pts.size - 1) if pts.size > 1 else None
            if k is None:
                near = np.abs(cand - pts[0])
            else:
                near = np.minimum(np.abs(cand - pts[k - 1]), np.abs(cand - pts[k]))
            d_union = max(d_union, float(near.max()))
        return max(d_pts, d_union)

    def to_list(self) -> list[list[float]]:
        return [[lo, hi] for lo, hi in self.intervals]

    def __str__(self):
        return " U ".join(f"[{lo:.15g}, {hi:.15g}]" for lo, hi in self.intervals)
