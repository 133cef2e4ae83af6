"""Sparse samplers for dyadically localized space-time fields.

A field supported on P_N intersect S_L has tau within ~L of -|xi|^2, with
|xi| ~ N. For large N a dense (xi, tau) lattice cannot resolve this (tau
spans ~N^2), so fields are stored sparsely: lattice points xi with spacing
dxi, a per-point modulation offset c with spacing dc, and the parametrization

    tau = base(xi) + c,  base = -|xi|^2 (Schrodinger) or -+|xi| (half-wave).

Each point represents a cell of measure dxi^2 * dc on which the field is
constant, so L2 norms and the trilinear pairing are plain quadratures.
Product (convolution) L2 norms are estimated by histogramming pair sums into
cells of the same size.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cutoffs import beta_a_j, psi, psi_n

__all__ = ["SparseBand", "sample_band", "sparse_trilinear", "sparse_product_l2"]


def _base_tau(kind: str, sign: int, absxi: np.ndarray) -> np.ndarray:
    # S_L localizes tau + |xi|^2, W^+- localizes tau +- |xi|
    if kind == "S":
        return -(absxi ** 2)
    return -sign * absxi


@dataclass
class SparseBand:
    """Sparse Fourier support: points (xi, c) with cell measure dxi^2 * dc."""

    kind: str  # "S" or "W"
    sign: int  # +1 or -1, used by the half-wave kinds
    xi: np.ndarray  # (m, 2) lattice frequencies
    c: np.ndarray  # (m,) modulation offsets
    vals: np.ndarray  # (m,) complex coefficients
    dxi: float
    dc: float

    @property
    def tau(self) -> np.ndarray:
        return _base_tau(self.kind, self.sign, np.hypot(self.xi[:, 0], self.xi[:, 1])) + self.c

    def l2_norm(self) -> float:
        return float(
            np.sqrt(np.sum(np.abs(self.vals) ** 2) * self.dxi ** 2 * self.dc)
        )

    def normalized(self) -> "SparseBand":
        nrm = self.l2_norm()
        if nrm == 0:
            raise ValueError("cannot normalize the zero band field")
        return SparseBand(
            self.kind, self.sign, self.xi, self.c, self.vals / nrm, self.dxi, self.dc
        )


def sample_band(
    kind: str,
    N: int,
    L: int,
    *,
    sign: int = 1,
    sector=None,
    dxi: float,
    nc: int = 8,
    seed: int = 0,
    aperture: float | None = None,
    cube_side: float | None = None,
    radial_window: tuple[float, float] | None = None,
) -> SparseBand:
    """Unit-L2 Gaussian field on the dyadic band P_N cap S_L (or W^+-_L).

    kind "S" or "W"; ``sector=(A, j)`` restricts to the angular sector;
    ``aperture`` (radians) restricts instead to |angle to the xi_1 axis| <=
    aperture (a support restriction, always admissible); ``cube_side`` keeps
    the cube [-d/2, d/2]^2 instead of the annulus (wave-cube estimates).
    Deterministic per seed.
    """
    if kind not in ("S", "W"):
        raise ValueError(f"kind must be 'S' or 'W', got {kind!r}")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    rng = np.random.default_rng(seed)

    if cube_side is not None:
        half = cube_side / 2.0
        k = np.arange(np.floor(-half / dxi), np.floor(half / dxi) + 1)
        x1, x2 = np.meshgrid(k * dxi, k * dxi, indexing="ij")
        keep = np.ones_like(x1, dtype=bool)
        weight = np.ones_like(x1)
    else:
        kmax = int(np.ceil(2 * N / dxi))
        k = np.arange(-kmax, kmax + 1)
        x1, x2 = np.meshgrid(k * dxi, k * dxi, indexing="ij")
        absxi = np.hypot(x1, x2)
        weight = psi_n(N, absxi)
        keep = weight > 0
        if radial_window is not None:
            r0, r1 = radial_window
            wrad = psi(2.0 * (2.0 * absxi - r0 - r1) / (2.0 * (r1 - r0)))
            weight = weight * wrad
            keep &= wrad > 0
        theta = np.arctan2(x2, x1)
        if sector is not None:
            A, j = sector
            wsec = beta_a_j(A, j, theta)
            weight = weight * wsec
            keep &= wsec > 0
        elif aperture is not None:
            # line angle to the xi_1 axis, both half-lines kept
            d = np.remainder(theta, np.pi)
            d = np.minimum(d, np.pi - d)
            keep &= d <= aperture
    xi = np.stack([x1[keep], x2[keep]], axis=1)
    wxi = weight[keep]
    if xi.shape[0] == 0:
        raise ValueError(f"empty band: N={N}, dxi={dxi}")

    # modulation offsets: cells covering the support of psi_L
    dc = 4.0 * L / nc
    c = (np.arange(nc) - nc / 2 + 0.5) * dc
    wc = psi_n(L, c)
    m, q = xi.shape[0], nc
    # random continuum field: plane-wave superposition with seed-determined
    # parameters, evaluated at cell centers; refining the lattice resamples
    # the same field instead of drawing new coefficients
    nmodes = 48
    amp = rng.standard_normal(nmodes) + 1j * rng.standard_normal(nmodes)
    scale_xi = 8.0 / (N if cube_side is None else max(cube_side, 1.0))
    omega_xi = rng.uniform(-scale_xi, scale_xi, size=(2, nmodes))
    omega_c = rng.uniform(-2.0 / L, 2.0 / L, size=nmodes)
    phase = (
        xi @ omega_xi
    )[:, None, :] + c[None, :, None] * omega_c[None, None, :]
    vals = np.tensordot(np.exp(1j * phase), amp, axes=(2, 0))
    vals *= wxi[:, None] * wc[None, :]
    flat = vals.ravel()
    nz = flat != 0
    band = SparseBand(
        kind,
        sign,
        np.repeat(xi, q, axis=0)[nz],
        np.tile(c, m)[nz],
        flat[nz],
        dxi,
        dc,
    )
    return band.normalized()


def _dense_lookup(band: SparseBand):
    """Dense (xi-box x c-bin) array for O(1) evaluation of a sparse band."""
    ix = np.round(band.xi / band.dxi).astype(np.int64)
    ic = np.round(band.c / band.dc - 0.5).astype(np.int64)
    ix0 = ix.min(axis=0)
    ic0 = ic.min()
    shape = (
        int(ix[:, 0].max() - ix0[0] + 1),
        int(ix[:, 1].max() - ix0[1] + 1),
        int(ic.max() - ic0 + 1),
    )
    arr = np.zeros(shape, dtype=complex)
    arr[ix[:, 0] - ix0[0], ix[:, 1] - ix0[1], ic - ic0] = band.vals
    return arr, ix0, ic0


def sparse_trilinear(f: SparseBand, g1: SparseBand, g2: SparseBand) -> complex:
    """I(f, g1, g2) = int f(z1 - z2) g1(z1) g2(z2) dz1 dz2 on sparse supports.

    g1 and g2 must share the lattice spacing dxi with f so that frequency
    differences land on f's lattice. The resonance offset

        c_f = tau_1 - tau_2 - base_f(|xi_1 - xi_2|)

    sweeps an interval much wider than f's modulation band across a single
    cell pair (the characteristic surfaces are curved), so instead of point
    sampling, f's modulation profile is averaged exactly over that interval
    via cumulative sums. This keeps the quadrature deterministic and
    consistent under lattice refinement.
    """
    if not np.isclose(g1.dxi, f.dxi) or not np.isclose(g2.dxi, f.dxi):
        raise ValueError("lattice spacings dxi must agree")
    arr, ix0, ic0 = _dense_lookup(f)
    nc = arr.shape[2]
    # cum[..., k] = integral of f's modulation profile up to bin edge k
    cum = np.concatenate(
        [np.zeros(arr.shape[:2] + (1,), dtype=complex), np.cumsum(arr, axis=2) * f.dc],
        axis=2,
    )
    tau1, tau2 = g1.tau, g2.tau
    ix1 = np.round(g1.xi / f.dxi).astype(np.int64)
    ix2 = np.round(g2.xi / f.dxi).astype(np.int64)
    # per-point l1 slope bounds of tau_i with respect to xi_i
    def _slopes(g):
        if g.kind == "S":
            return 2.0 * (np.abs(g.xi[:, 0]) + np.abs(g.xi[:, 1]))
        return 2.0 * np.ones(len(g.vals))

    s1, s2 = _slopes(g1), _slopes(g2)
    acc = 0.0 + 0.0j

    def cum_at(jx, jy, pos):
        """Cumulative integral at fractional bin position pos (clipped)."""
        p = np.clip(pos, 0.0, float(nc))
        k = np.minimum(np.floor(p).astype(np.int64), nc - 1)
        frac = p - k
        return cum[jx, jy, k] + frac * arr[jx, jy, k] * f.dc

    # cap the pair-array size per chunk to bound memory
    chunk = max(1, 4 * 10 ** 6 // max(len(g2.vals), 1))
    for a in range(0, len(g1.vals), chunk):
        sl = slice(a, a + chunk)
        jx = ix1[sl, None, 0] - ix2[None, :, 0] - ix0[0]
        jy = ix1[sl, None, 1] - ix2[None, :, 1] - ix0[1]
        # keep only pairs whose frequency difference lands in f's box
        ok = (jx >= 0) & (jx < arr.shape[0]) & (jy >= 0) & (jy < arr.shape[1])
        i1, i2 = np.nonzero(ok)
        if len(i1) == 0:
            continue
        i1g = i1 + a
        jxo, jyo = jx[ok], jy[ok]
        xd1 = g1.xi[i1g, 0] - g2.xi[i2, 0]
        xd2 = g1.xi[i1g, 1] - g2.xi[i2, 1]
        absd = np.hypot(xd1, xd2)
        cf = tau1[i1g] - tau2[i2] - _base_tau(f.kind, f.sign, absd)
        # span of cf across the 6-dimensional cell pair (l1 gradient bound);
        # the base-surface slope term is bounded by 2|xi_d| (S) or 1 (W)
        bslope = 2.0 * absd if f.kind == "S" else 1.0
        span = (s1[i1g] + s2[i2] + 2.0 * bslope) * f.dxi + g1.dc + g2.dc
        lo = (cf - span / 2.0) / f.dc - ic0
        hi = (cf + span / 2.0) / f.dc - ic0
        avg = (cum_at(jxo, jyo, hi) - cum_at(jxo, jyo, lo)) / span
        acc += np.sum(avg * g1.vals[i1g] * g2.vals[i2])
    return complex(acc * (g1.dxi ** 2 * g1.dc) * (g2.dxi ** 2 * g2.dc))


def sparse_product_l2(g1: SparseBand, g2: SparseBand, conjugate_second=False) -> float:
    """L2 norm of the physical-space product, i.e. of the convolution gh1 * gh2.

    The convolution mass of every support-cell pair is binned at the pair sum
    (difference if ``conjugate_second``) into cells of size dxi^2 x dc_bin;
    the L2 norm is estimated from the per-cell averages. The tau bin width is
    matched to the spread the curved characteristic surfaces produce across
    one xi cell, so the per-bin average tracks the local convolution density
    and refinement tightens the estimate.
    """
    if not np.isclose(g1.dxi, g2.dxi):
        raise ValueError("lattice spacings dxi must agree")
    dxi = g1.dxi

    def slope(g):
        absxi = np.hypot(g.xi[:, 0], g.xi[:, 1])
        return 2.0 * float(absxi.max()) if g.kind == "S" else 1.0

    dcb = max(g1.dc + g2.dc, (slope(g1) + slope(g2)) * dxi)
    sgn = -1 if conjugate_second else 1
    ix1 = np.round(g1.xi / dxi).astype(np.int64)
    ix2 = np.round(g2.xi / dxi).astype(np.int64)
    tau1, tau2 = g1.tau, g2.tau
    v2 = np.conj(g2.vals) if conjugate_second else g2.vals

    # dense bin space for the pair sums
    lo_x = ix1.min(axis=0) + (sgn * ix2).min(axis=0)
    hi_x = ix1.max(axis=0) + (sgn * ix2).max(axis=0)
    tmin = tau1.min() + min(sgn * tau2.min(), sgn * tau2.max())
    tmax = tau1.max() + max(sgn * tau2.min(), sgn * tau2.max())
    jt0 = int(np.floor(tmin / dcb))
    nbt = int(np.floor(tmax / dcb)) - jt0 + 1
    nx = int(hi_x[0] - lo_x[0] + 1)
    ny = int(hi_x[1] - lo_x[1] + 1)
    if nx * ny * nbt > 2 * 10 ** 8:
        raise ValueError("histogram bin space too large; coarsen the lattice")
    acc_re = np.zeros(nx * ny * nbt)
    acc_im = np.zeros(nx * ny * nbt)
    size = acc_re.size
    chunk = max(1, 4 * 10 ** 6 // max(len(g2.vals), 1))
    for a in range(0, len(g1.vals), chunk):
        sl = slice(a, a + chunk)
        sx = ix1[sl, None, :] + sgn * ix2[None, :, :]
        st = tau1[sl, None] + sgn * tau2[None, :]
        jt = np.floor(st / dcb).astype(np.int64) - jt0
        flat = (
            ((sx[:, :, 0] - lo_x[0]) * ny + (sx[:, :, 1] - lo_x[1])) * nbt + jt
        ).ravel()
        w = (g1.vals[sl, None] * v2[None, :]).ravel()
        acc_re += np.bincount(flat, weights=w.real, minlength=size)
        acc_im += np.bincount(flat, weights=w.imag, minlength=size)
    cellmass = g1.dxi ** 2 * g1.dc * g2.dxi ** 2 * g2.dc
    binvol = dxi ** 2 * dcb
    # |conv|^2 integral ~ sum over bins of (mass/binvol)^2 * binvol
    total = np.sum(acc_re ** 2 + acc_im ** 2) * cellmass ** 2 / binvol
    return float(np.sqrt(total))
