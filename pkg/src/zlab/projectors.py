"""Dyadic, modulation, and angular Fourier projectors.

All projectors are diagonal multipliers on the periodic lattice, so identities
like telescoping reconstruction hold exactly (to rounding). The Whitney tiling
enumerates pairs of angular sectors by separation scale, following the usual
parallel/transverse split.
"""

from __future__ import annotations

import warnings

import numpy as np

from .cutoffs import beta_a_j, dyadic_scales, psi_n
from .grids import SpaceTimeField, SpatialField

__all__ = [
    "project_dyadic",
    "project_modulation",
    "project_angular",
    "whitney_tiles",
]


def project_dyadic(u: SpatialField, N: int) -> SpatialField:
    """Restrict to the dyadic frequency annulus |xi| ~ N (band [N/2, 2N]).

    Bands up to N = 2 * nyquist are accepted: corner modes reach
    sqrt(2) * nyquist, and that final band is needed for exact reconstruction.
    """
    if N > 2 * u.grid.nyquist:
        raise ValueError(
            f"dyadic band N={N} exceeds the lattice (Nyquist {u.grid.nyquist}, aliased)"
        )
    mult = psi_n(N, u.grid.abs_xi())
    return SpatialField(u.grid, u.values * mult)


def project_modulation(w: SpaceTimeField, L: int, flavor: str) -> SpaceTimeField:
    """Restrict to dyadic distance ~ L from the flavor's characteristic surface."""
    mod = w.grid.modulation(flavor)
    if L > 1 and L / 2.0 > float(np.max(np.abs(mod))):
        warnings.warn(
            f"modulation band L={L} ({flavor}) is empty or aliased on this grid",
            stacklevel=2,
        )
    mult = psi_n(L, mod)
    return SpaceTimeField(w.grid, w.values * mult)


def project_angular(u, sector):
    """Restrict to the angular sector (A, j); sector j=0 keeps the xi=0 mode.

    Accepts a SpatialField or a SpaceTimeField; ``sector`` is a pair (A, j).
    """
    A, j = sector
    if isinstance(u, SpatialField):
        grid = u.grid
        mult = beta_a_j(A, j, grid.angle_xi())
        mult[grid.abs_xi() == 0] = 1.0 if j == 0 else 0.0
        return SpatialField(grid, u.values * mult)
    grid = u.grid.spatial
    mult = beta_a_j(A, j, grid.angle_xi())
    mult[grid.abs_xi() == 0] = 1.0 if j == 0 else 0.0
    return SpaceTimeField(u.grid, u.values * mult[:, :, None])


def whitney_tiles(M: int):
    """Angular tiling of direction pairs: (A, j1, j2) triples.

    Parallel tiles: A = M with cyclic |j1 - j2| <= 16.  Transverse tiles:
    64 <= A <= M with 16 <= cyclic |j1 - j2| <= 32.
    """
    M = int(M)
    if M < 64 or (M & (M - 1)) != 0:
        raise ValueError(f"M must be a power of two >= 64, got {M}")
    tiles = []
    for j1 in range(M):
        for j2 in range(M):
            d = min(abs(j1 - j2), M - abs(j1 - j2))
            if d <= 16:
                tiles.append((M, j1, j2))
    for A in dyadic_scales(M):
        if A < 64:
            continue
        for j1 in range(A):
            for j2 in range(A):
                d = min(abs(j1 - j2), A - abs(j1 - j2))
                if 16 <= d <= 32:
                    tiles.append((A, j1, j2))
    return tiles
