"""Periodic lattices and Fourier-side field containers.

The plane is approximated by a periodic square of side ``2*pi*half_period``
with ``points`` samples per dimension, so the frequency lattice has spacing
``dxi = 1/half_period``. All fields are stored on the Fourier side in numpy
FFT (unshifted) index order.

Normalization: with physical samples u_j on the grid, the stored coefficients
are ``uhat = fft(u) * dx^2 / (2*pi)``.  This makes the two Riemann sums

    sum_j |u_j|^2 dx^2   and   sum_k |uhat_k|^2 dxi^2

exactly equal, i.e. Parseval holds without stray constants, and lattice
Sobolev norms can be read off directly from the coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "FrequencyGrid",
    "SpaceTimeGrid",
    "SpatialField",
    "SpaceTimeField",
    "conjugate_reflect",
]


def _check_power_of_two(n, name):
    if n < 8 or (n & (n - 1)) != 0:
        raise ValueError(f"{name} must be a power of two >= 8, got {n}")


@dataclass(frozen=True)
class FrequencyGrid:
    """Square periodic lattice: physical side 2*pi*half_period, points^2 samples."""

    half_period: float
    points: int

    def __post_init__(self):
        if self.half_period <= 0:
            raise ValueError("half_period must be positive")
        _check_power_of_two(self.points, "points")

    @property
    def dxi(self) -> float:
        return 1.0 / self.half_period

    @property
    def dx(self) -> float:
        return 2.0 * np.pi * self.half_period / self.points

    @property
    def nyquist(self) -> float:
        return self.points * self.dxi / 2.0

    def xi_1d(self) -> np.ndarray:
        """Frequency coordinates along one axis, FFT order."""
        return np.fft.fftfreq(self.points, d=1.0 / (self.points * self.dxi))

    def x_1d(self) -> np.ndarray:
        """Signed physical coordinates along one axis, FFT sample order."""
        n = self.points
        return np.fft.fftfreq(n, d=1.0 / (n * self.dx))

    def xi_mesh(self):
        xi = self.xi_1d()
        return np.meshgrid(xi, xi, indexing="ij")

    def abs_xi(self) -> np.ndarray:
        xi1, xi2 = self.xi_mesh()
        return np.hypot(xi1, xi2)

    def angle_xi(self) -> np.ndarray:
        xi1, xi2 = self.xi_mesh()
        return np.arctan2(xi2, xi1)

    def x_mesh(self):
        x = self.x_1d()
        return np.meshgrid(x, x, indexing="ij")

    def dyadic_bands(self):
        """Dyadic annuli needed to cover every lattice mode (corners included)."""
        from .cutoffs import dyadic_scales

        return dyadic_scales(2 * int(self.nyquist))

    def dealias_mask(self) -> np.ndarray:
        """2/3-rule mask: True on retained (low) modes."""
        k = np.abs(np.fft.fftfreq(self.points, d=1.0 / self.points))
        keep = k <= self.points / 3.0
        return np.logical_and.outer(keep, keep)


@dataclass(frozen=True)
class SpaceTimeGrid:
    """Product of a spatial lattice and a periodic time-frequency lattice."""

    spatial: FrequencyGrid
    time_window: float
    points_in_time: int

    def __post_init__(self):
        if self.time_window <= 0:
            raise ValueError("time_window must be positive")
        _check_power_of_two(self.points_in_time, "points_in_time")

    @property
    def dtau(self) -> float:
        return 2.0 * np.pi / self.time_window

    @property
    def tau_nyquist(self) -> float:
        return self.points_in_time * self.dtau / 2.0

    def tau_1d(self) -> np.ndarray:
        n = self.points_in_time
        return np.fft.fftfreq(n, d=1.0 / (n * self.dtau))

    @property
    def cell_volume(self) -> float:
        return self.spatial.dxi ** 2 * self.dtau

    def modulation(self, flavor: str) -> np.ndarray:
        """Distance-to-characteristic variable on the (xi, tau) lattice.

        flavor "S": tau + |xi|^2; "W+"/"W-": tau +- |xi|; "Wfull": |tau| - |xi|.
        """
        absxi = self.spatial.abs_xi()[:, :, None]
        tau = self.tau_1d()[None, None, :]
        if flavor == "S":
            return tau + absxi ** 2
        if flavor == "W+":
            return tau + absxi
        if flavor == "W-":
            return tau - absxi
        if flavor == "Wfull":
            return np.abs(tau) - absxi
        raise ValueError(f"unknown modulation flavor {flavor!r}")


@dataclass
class SpatialField:
    """Fourier coefficients of a function on the spatial lattice."""

    grid: FrequencyGrid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        n = self.grid.points
        if self.values.shape != (n, n):
            raise ValueError(f"values shape {self.values.shape} != {(n, n)}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field contains non-finite entries")

    def copy(self) -> "SpatialField":
        return SpatialField(self.grid, self.values.copy())

    def to_physical(self) -> np.ndarray:
        g = self.grid
        return np.fft.ifft2(self.values) * (2.0 * np.pi / g.dx ** 2)

    @classmethod
    def from_physical(cls, grid: FrequencyGrid, samples) -> "SpatialField":
        samples = np.asarray(samples, dtype=complex)
        vals = np.fft.fft2(samples) * (grid.dx ** 2 / (2.0 * np.pi))
        return cls(grid, vals)

    def l2_norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.grid.dxi ** 2))


@dataclass
class SpaceTimeField:
    """Fourier coefficients on the (xi1, xi2, tau) lattice."""

    grid: SpaceTimeGrid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        n = self.grid.spatial.points
        nt = self.grid.points_in_time
        if self.values.shape != (n, n, nt):
            raise ValueError(f"values shape {self.values.shape} != {(n, n, nt)}")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field contains non-finite entries")

    def copy(self) -> "SpaceTimeField":
        return SpaceTimeField(self.grid, self.values.copy())

    def l2_norm(self) -> float:
        return float(
            np.sqrt(np.sum(np.abs(self.values) ** 2) * self.grid.cell_volume)
        )

    def time_slices(self):
        """Spatial Fourier coefficients u_hat(t_m, xi) on the physical time grid."""
        nt = self.grid.points_in_time
        # inverse transform along tau with the 1D analogue of the normalization
        dt = self.grid.time_window / nt
        slices = np.fft.ifft(self.values, axis=-1) * (2.0 * np.pi / dt) / (2.0 * np.pi)
        times = np.fft.fftfreq(nt, d=1.0 / (nt * dt))
        return times, slices


def conjugate_reflect(values: np.ndarray) -> np.ndarray:
    """Fourier transform of the complex conjugate: conj(F u(-zeta)).

    Works in FFT index order on any number of axes.
    """
    out = values
    for ax in range(values.ndim):
        n = values.shape[ax]
        idx = (-np.arange(n)) % n
        out = np.take(out, idx, axis=ax)
    return np.conj(out)
