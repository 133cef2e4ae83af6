"""Interval bookkeeping for radii paired through a quadratic constraint.

Given radii x, y in [N1/4, 4N1] with x^2 - y^2 confined to a window of
length N1/A above an offset, cover [N1/4, 4N1] by intervals of length 1/A
and map each source interval index j to a target index k(j) so that every
admissible x lands within 100 intervals of I_{k(j)}, with the map hitting
any fixed target at most 100 times. Both properties are verified by brute
force on a fine mesh.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["LocalizeReport", "localize_map"]


@dataclass
class LocalizeReport:
    """Result of building and verifying the interval map."""

    n1: float
    a: float
    k_offset: float
    j_range: tuple  # inclusive index range of source intervals
    k_of_j: np.ndarray  # target index per source index
    violations: int
    max_multiplicity: int
    checked_points: int

    def passed(self) -> bool:
        return self.violations == 0 and self.max_multiplicity <= 100


def _index_of(a: float, x):
    """Index m with x in I_m = [(m - 1/2)/a, (m + 1/2)/a)."""
    return np.round(np.asarray(x, dtype=float) * a).astype(np.int64)


def localize_map(
    n1: float, a: float, k_offset: float = 0.0, mesh: float = 1e-3
) -> LocalizeReport:
    """Build the index map and verify containment and multiplicity.

    Intervals are I_j = [(j - 1/2)/a, (j + 1/2)/a) covering [n1/4, 4 n1];
    k(j) is the index of the interval containing sqrt(j^2/a^2 + k_offset).
    Containment is checked on a mesh of y values: for each y the admissible
    x range is [sqrt(y^2 + k_offset), sqrt(y^2 + k_offset + n1/a)] clipped
    to [n1/4, 4 n1]; since the x interval-index is monotone in x, checking
    both endpoints covers every admissible x.
    """
    if n1 < 1:
        raise ValueError(f"need n1 >= 1, got {n1}")
    if not 1 <= a or not 4 * a <= n1:
        raise ValueError(f"need 1 <= a << n1, got a={a}, n1={n1}")
    if abs(k_offset) > n1 ** 2 / 4:
        raise ValueError(f"need |k_offset| << n1^2, got {k_offset}")
    j_lo = int(math.ceil(a * n1 / 4))
    j_hi = int(math.floor(4 * a * n1))
    j = np.arange(j_lo, j_hi + 1)
    targets = np.sqrt(np.maximum((j / a) ** 2 + k_offset, 0.0))
    k_of_j = _index_of(a, targets)

    counts = np.bincount(k_of_j - k_of_j.min())
    max_mult = int(counts.max())

    y = np.arange(n1 / 4, 4 * n1 + mesh / 2, mesh)
    jy = _index_of(a, y)
    jy = np.clip(jy, j_lo, j_hi)
    lo = y ** 2 + k_offset
    hi = lo + n1 / a
    xmin = np.sqrt(np.maximum(lo, (n1 / 4) ** 2))
    xmax = np.sqrt(np.minimum(np.maximum(hi, 0.0), (4 * n1) ** 2))
    valid = xmax >= xmin
    kj = k_of_j[jy - j_lo]
    m_lo = _index_of(a, xmin)
    m_hi = _index_of(a, xmax)
    bad = valid & ((m_lo < kj - 100) | (m_hi > kj + 100))
    return LocalizeReport(
        n1=float(n1),
        a=float(a),
        k_offset=float(k_offset),
        j_range=(j_lo, j_hi),
        k_of_j=k_of_j,
        violations=int(np.count_nonzero(bad)),
        max_multiplicity=max_mult,
        checked_points=int(np.count_nonzero(valid)),
    )
