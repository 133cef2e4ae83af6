"""Sobolev, 1D Besov, and dyadic space-time norms on lattices.

The space-time norms weight dyadic frequency annuli by N^sigma and dyadic
modulation bands by L^b, combined in l^p over bands (p in {1, 2, inf}) and
l^2 over annuli. One-dimensional scaling checks for the time-cutoff and
time-integration operators live here as well; they return measured ratios
whose boundedness under parameter sweeps is the tested property.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cutoffs import dyadic_scales, psi, psi_n
from .grids import FrequencyGrid, SpaceTimeField, SpatialField

__all__ = [
    "NormSpec",
    "TimeSeries1D",
    "DataTriple",
    "sobolev_norm",
    "besov_norm_1d",
    "bourgain_norm",
    "product_norm",
    "data_scales",
    "xkl_trajectory_norm",
    "norm_equiv_check",
    "besov_scaling_check",
    "besov_duhamel_check",
]

_FLAVORS = ("S", "W+", "W-", "Wfull")


@dataclass(frozen=True)
class NormSpec:
    """Selects a space-time norm: modulation flavor, weights sigma/b, summability p."""

    flavor: str
    sigma: float
    b: float
    p: float

    def __post_init__(self):
        if self.flavor not in _FLAVORS:
            raise ValueError(f"flavor must be one of {_FLAVORS}, got {self.flavor!r}")
        if self.p not in (1, 2, math.inf):
            raise ValueError(f"p must be 1, 2 or inf, got {self.p}")


@dataclass
class TimeSeries1D:
    """Complex samples at uniformly spaced times (t_j = (j - n/2) * dt)."""

    dt: float
    values: np.ndarray

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.ndim != 1:
            raise ValueError("values must be a 1D array")

    @property
    def times(self) -> np.ndarray:
        n = len(self.values)
        return (np.arange(n) - n // 2) * self.dt

    def omega(self) -> np.ndarray:
        n = len(self.values)
        return np.fft.fftfreq(n, d=self.dt) * 2.0 * np.pi

    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.dt))


@dataclass
class DataTriple:
    """Initial data (u0, n0, n1) with real wave components."""

    u0: SpatialField
    n0: SpatialField
    n1: SpatialField

    def __post_init__(self):
        for name, f in (("n0", self.n0), ("n1", self.n1)):
            phys = f.to_physical()
            if float(np.max(np.abs(phys.imag))) > 1e-12 * max(
                1.0, float(np.max(np.abs(phys)))
            ):
                raise ValueError(f"{name} must be real-valued")


def sobolev_norm(u: SpatialField, s: float) -> float:
    """Inhomogeneous H^s norm from the Fourier coefficients."""
    w = (1.0 + u.grid.abs_xi() ** 2) ** (s / 2.0)
    return float(np.sqrt(np.sum(np.abs(w * u.values) ** 2) * u.grid.dxi ** 2))


def _dyadic_blocks_1d(g: TimeSeries1D):
    """(L, P_L g values) pairs covering the series' frequency content."""
    ghat = np.fft.fft(g.values)
    omega = np.abs(g.omega())
    omega_max = float(np.max(omega)) if len(omega) else 1.0
    blocks = []
    for L in dyadic_scales(max(2.0 * omega_max, 1.0)):
        vals = np.fft.ifft(ghat * psi_n(L, omega))
        blocks.append((L, vals))
    return blocks


def besov_norm_1d(g: TimeSeries1D, b: float, p) -> float:
    """Dyadic-frequency Besov norm: sum (p=1) or sup (p=inf) of L^b ||P_L g||."""
    if p not in (1, math.inf):
        raise ValueError(f"p must be 1 or inf, got {p}")
    terms = [
        L ** b * float(np.sqrt(np.sum(np.abs(vals) ** 2) * g.dt))
        for L, vals in _dyadic_blocks_1d(g)
    ]
    if p == 1:
        return float(sum(terms))
    return float(max(terms)) if terms else 0.0


def bourgain_norm(w: SpaceTimeField, spec: NormSpec) -> float:
    """Dyadic double sum over frequency annuli N and modulation bands L."""
    grid = w.grid
    absxi = grid.spatial.abs_xi()
    mod = grid.modulation(spec.flavor)
    mod_max = float(np.max(np.abs(mod)))
    vol = grid.cell_volume
    total = 0.0
    for N in grid.spatial.dyadic_bands():
        ring = psi_n(N, absxi)[:, :, None] * w.values
        if not np.any(ring):
            continue
        band_terms = []
        for L in dyadic_scales(max(2.0 * mod_max, 1.0)):
            block = psi_n(L, mod) * ring
            nrm = float(np.sqrt(np.sum(np.abs(block) ** 2) * vol))
            band_terms.append(L ** spec.b * nrm)
        if spec.p == 1:
            inner = sum(band_terms)
        elif spec.p == 2:
            inner = math.sqrt(sum(t * t for t in band_terms))
        else:
            inner = max(band_terms)
        total += N ** (2.0 * spec.sigma) * inner ** 2
    return math.sqrt(total)


def product_norm(d: DataTriple, k: float, ell: float) -> float:
    """Euclidean combination H^k x H^ell x H^(ell-1) of the data triple."""
    return math.sqrt(
        sobolev_norm(d.u0, k) ** 2
        + sobolev_norm(d.n0, ell) ** 2
        + sobolev_norm(d.n1, ell - 1.0) ** 2
    )


def data_scales(d: DataTriple, k: float, ell: float):
    """(R, r) = (full data norm, L2 norm of u0), the lifespan parameters."""
    return product_norm(d, k, ell), sobolev_norm(d.u0, 0.0)


def _gradient_bracket(grid: FrequencyGrid, power: float) -> np.ndarray:
    return (1.0 + grid.abs_xi() ** 2) ** (power / 2.0)


def xkl_trajectory_norm(traj, k: float, ell: float) -> float:
    """Max over snapshots of the combined (u, n, dt_n) Sobolev norm.

    ``traj`` needs a nonempty ``snapshots`` list of states with fields
    ``u`` and ``v`` (SpatialField); n = Re v, dt_n = <grad> Im v.
    """
    snaps = list(traj.snapshots)
    if not snaps:
        raise ValueError("trajectory has no snapshots")
    best = 0.0
    for st in snaps:
        grid = st.u.grid
        n_hat = 0.5 * (st.v.values + np.conj(st.v.values[_reflect_idx(grid), :][:, _reflect_idx(grid)]))
        dtn_hat = _gradient_bracket(grid, 1.0) * (st.v.values - n_hat) / 1j
        val = math.sqrt(
            sobolev_norm(st.u, k) ** 2
            + sobolev_norm(SpatialField(grid, n_hat), ell) ** 2
            + sobolev_norm(SpatialField(grid, dtn_hat), ell - 1.0) ** 2
        )
        best = max(best, val)
    return best


def _reflect_idx(grid: FrequencyGrid) -> np.ndarray:
    return (-np.arange(grid.points)) % grid.points


def _cutoff_series(g: TimeSeries1D, T: float) -> TimeSeries1D:
    return TimeSeries1D(g.dt, g.values * psi(g.times / T))


def norm_equiv_check(g: TimeSeries1D, T: float, b: float):
    """Both sides of the low/high frequency split of ||g psi_T||_{B^b_{2,1}}.

    lhs = full Besov sum; rhs = T^{-b} ||low part||_{L2} + high-frequency sum,
    where "low" collects dyadic blocks L <= 1/T.
    """
    if not 0.0 < b <= 0.5:
        raise ValueError(f"b must be in (0, 1/2], got {b}")
    if not 0.0 < T <= 1.0:
        raise ValueError(f"T must be in (0, 1], got {T}")
    gt = _cutoff_series(g, T)
    blocks = _dyadic_blocks_1d(gt)
    lhs = sum(
        L ** b * float(np.sqrt(np.sum(np.abs(v) ** 2) * gt.dt)) for L, v in blocks
    )
    low = np.zeros_like(gt.values)
    high = 0.0
    for L, v in blocks:
        if L <= 1.0 / T:
            low = low + v
        else:
            high += L ** b * float(np.sqrt(np.sum(np.abs(v) ** 2) * gt.dt))
    rhs = T ** (-b) * float(np.sqrt(np.sum(np.abs(low) ** 2) * gt.dt)) + high
    return float(lhs), float(rhs)


def besov_scaling_check(g: TimeSeries1D, T: float, b: float) -> float:
    """Ratio ||g psi_T||_{B^b_{2,1}} / (T^(1/2-b) ||g||_{B^(1/2)_{2,1}})."""
    if not 0.0 < b < 0.5:
        raise ValueError(f"b must be in (0, 1/2), got {b}")
    if not 0.0 < T <= 1.0:
        raise ValueError(f"T must be in (0, 1], got {T}")
    denom = T ** (0.5 - b) * besov_norm_1d(g, 0.5, 1)
    if denom == 0.0:
        return 0.0
    return besov_norm_1d(_cutoff_series(g, T), b, 1) / denom


def besov_duhamel_check(g: TimeSeries1D, T: float) -> float:
    """Ratio ||psi_T Int(g)||_{B^(1/2)_{2,1}} / (T^(1/12) ||g||_{B^(-5/12)_{2,inf}}).

    Int(g)(t) = integral of g from 0 to t, via cumulative trapezoid.
    """
    if not 0.0 < T <= 1.0:
        raise ValueError(f"T must be in (0, 1], got {T}")
    denom = T ** (1.0 / 12.0) * besov_norm_1d(g, -5.0 / 12.0, math.inf)
    if denom == 0.0:
        return 0.0
    t = g.times
    # antiderivative vanishing at t = 0 (which is a grid point)
    prim = np.concatenate(
        ([0.0], np.cumsum(0.5 * (g.values[1:] + g.values[:-1]) * g.dt))
    )
    i0 = int(np.argmin(np.abs(t)))
    prim = prim - prim[i0]
    lhs = besov_norm_1d(TimeSeries1D(g.dt, prim * psi(t / T)), 0.5, 1)
    return float(lhs / denom)
