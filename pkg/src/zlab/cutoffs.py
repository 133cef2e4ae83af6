"""Smooth dyadic and angular cutoff functions.

All localization operators in the package are built from a single fixed
smooth bump ``psi``: an even C-infinity function equal to 1 on [-1, 1] and
supported in (-2, 2), realized by the standard exponential gluing

    psi(r) = h(2 - |r|) / (h(2 - |r|) + h(|r| - 1)),   h(s) = exp(-1/s) 1_{s>0}.

From it we derive the dyadic ring cutoffs ``psi_n`` (a partition of unity
subordinate to dyadic annuli), the equidistant 1D cutoffs ``beta_j``, and the
angular sector cutoffs ``beta_a_j`` on the circle (each sector consists of a
wedge and its antipodal wedge).
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "psi",
    "psi_n",
    "beta_j",
    "beta_a_j",
    "dyadic_scales",
    "sector_support",
]


def _h(s):
    """exp(-1/s) for s > 0, exactly 0 otherwise (elementwise)."""
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    pos = s > 0
    out[pos] = np.exp(-1.0 / s[pos])
    return out


def psi(r):
    """Even smooth bump: 1 on [-1, 1], 0 outside (-2, 2), values in [0, 1]."""
    r = np.abs(np.asarray(r, dtype=float))
    num = _h(2.0 - r)
    den = num + _h(r - 1.0)
    out = np.zeros_like(r)
    # den == 0 only where r >= 2 (num is 0 there as well)
    good = den > 0
    out[good] = num[good] / den[good]
    if out.ndim == 0:
        return float(out)
    return out


def psi_n(N, r):
    """Dyadic ring cutoff: psi(r/N) - psi(2r/N) for N >= 2, psi itself for N = 1.

    Supported in [-2N, -N/2] union [N/2, 2N] for N >= 2; the family
    {psi_n(N, .) : N = 1, 2, 4, ...} sums to 1 on [-Nmax, Nmax].
    """
    N = int(N)
    if N < 1 or (N & (N - 1)) != 0:
        raise ValueError(f"N must be a power of two >= 1, got {N}")
    r = np.asarray(r, dtype=float)
    if N == 1:
        return psi(r)
    return psi(r / N) - psi(2.0 * r / N)


def dyadic_scales(max_value):
    """All dyadic numbers 1, 2, 4, ... <= max_value (at least [1])."""
    scales = [1]
    while 2 * scales[-1] <= max_value:
        scales.append(2 * scales[-1])
    return scales


def beta_j(j, s):
    """Equidistant partition of unity on the line: psi(s - j) / sum_k psi(s - k)."""
    s = np.asarray(s, dtype=float)
    num = psi(s - j)
    # only neighbours within distance < 2 contribute to the normalizer
    base = np.floor(s)
    den = np.zeros_like(s)
    for off in (-2, -1, 0, 1, 2):
        den = den + psi(s - (base + off))
    return num / den


def beta_a_j(A, j, theta):
    """Angular sector cutoff on the circle for sector j of A.

    Sector j covers angles near pi*j/A and the antipodal angles near
    pi*j/A - pi; the A sectors form a partition of unity on the circle.
    Angles are taken mod 2*pi, so the partition is exact also at the seam
    theta = +-pi.
    """
    A = int(A)
    if A < 1 or (A & (A - 1)) != 0:
        raise ValueError(f"A must be a power of two >= 1, got {A}")
    j = int(j)
    if not 0 <= j < A:
        raise ValueError(f"sector index j={j} out of range [0, {A})")
    theta = np.asarray(theta, dtype=float)
    # wrap into (-pi, pi]
    theta = theta - 2.0 * np.pi * np.ceil((theta - np.pi) / (2.0 * np.pi))
    s = A * theta / np.pi  # in (-A, A]
    scalar = s.ndim == 0
    s = np.atleast_1d(s)
    # the sector repeats with period A in s (antipodal wedge) and the seam at
    # s = +-A needs the wrapped copies, so sum shifted copies of beta_j; only
    # points within distance 2 of j mod A can contribute
    d = np.remainder(s - j, A)
    d = np.minimum(d, A - d)
    near = d < 2.0
    out = np.zeros_like(s)
    sn = s[near]
    acc = np.zeros_like(sn)
    for m in (-2, -1, 0, 1, 2):
        acc = acc + beta_j(j + m * A, sn)
    out[near] = acc
    if scalar:
        return float(out[0])
    return out


def sector_support(A, j, theta):
    """Boolean mask: theta lies in the (closed) support wedges of sector (A, j).

    The support is [pi/A (j-2), pi/A (j+2)] together with its antipodal copy,
    interpreted on the circle.
    """
    A = int(A)
    theta = np.asarray(theta, dtype=float)
    # distance (mod pi) between the direction angle and the sector center
    center = np.pi * j / A
    d = np.remainder(theta - center, np.pi)
    d = np.minimum(d, np.pi - d)
    return d <= 2.0 * np.pi / A
