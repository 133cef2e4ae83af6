"""Trilinear interaction functional and estimate sweeps.

The central object is

    I(f, g1, g2) = int f(z1 - z2) g1(z1) g2(z2) dz1 dz2,   z = (xi, tau),

evaluated either densely (fast correlation on a space-time lattice, with a
direct-summation oracle) or sparsely for high-frequency regimes via the band
machinery. Each interaction-regime estimate is exercised as a bounded-ratio
property: sample unit-norm fields on the hypothesized supports, divide |I| by
the estimate's right-hand side, record the max over seeds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import fftconvolve

from .bands import sample_band, sparse_product_l2, sparse_trilinear
from .grids import SpaceTimeField, SpaceTimeGrid, conjugate_reflect
from .norms import NormSpec, bourgain_norm
from .projectors import project_dyadic  # noqa: F401  (re-exported convenience)

__all__ = [
    "TileSpec",
    "SweepResult",
    "trilinear_I",
    "trilinear_I_direct",
    "make_dyadic_random_field",
    "check_bilinear_strichartz",
    "check_regime",
    "check_trilinear_full",
    "fit_exponent",
]

_BILINEAR_CASES = ("SchSch", "WaveSchCube", "WaveSchAnnulus")
_REGIMES = ("TransLowMod", "TransHighMod", "ParallelHH", "HighLow", "SmallWave")


@dataclass(frozen=True)
class TileSpec:
    """Frequency/modulation/angle parameters of one interaction tile."""

    N: int = 1
    N1: int = 1
    N2: int = 1
    L: int = 1
    L1: int = 1
    L2: int = 1
    A: int | None = None
    j1: int | None = None
    j2: int | None = None
    sign: int = 1
    cube_side: float | None = None

    def angular_separation(self) -> int | None:
        if self.A is None or self.j1 is None or self.j2 is None:
            return None
        d = abs(self.j1 - self.j2) % self.A
        return min(d, self.A - d)


@dataclass
class SweepResult:
    parameters: object
    measured: list = field(default_factory=list)
    fitted_slope: float | None = None
    max_ratio: float = 0.0


def _require(cond: bool, what: str):
    if not cond:
        raise ValueError(f"regime hypothesis violated: {what}")


def _validate_regime(spec: TileSpec, regime: str):
    if regime in ("TransLowMod", "TransHighMod"):
        _require(spec.N >= 64, "64 <= N")
        _require(spec.N <= 2 * spec.N1, "N <~ N1")
        _require(spec.N1 <= 2 * spec.N2 and spec.N2 <= 2 * spec.N1, "N1 ~ N2")
        _require(spec.A is not None and spec.A >= 64, "64 <= A")
        if regime == "TransLowMod":
            _require(spec.A * 4 <= spec.N1, "A << N1")
            _require(
                max(spec.L, spec.L1, spec.L2) <= spec.N1 ** 2, "L, L1, L2 <~ N1^2"
            )
        else:
            _require(spec.A <= spec.N1, "A <= N1")
        sep = spec.angular_separation()
        _require(sep is not None and 16 <= sep <= 32, "16 <= |j1 - j2| <= 32")
    elif regime == "ParallelHH":
        _require(spec.N >= 4, "1 << N")
        _require(spec.N <= 2 * spec.N1, "N <~ N1")
        _require(spec.N1 <= 2 * spec.N2 and spec.N2 <= 2 * spec.N1, "N1 ~ N2")
        _require(
            spec.A is not None and spec.A in (spec.N1 // 2, spec.N1), "A ~ N1"
        )
        sep = spec.angular_separation()
        _require(sep is not None and sep <= 16, "|j1 - j2| <= 16")
    elif regime == "HighLow":
        _require(
            4 * spec.N1 <= spec.N2 or 4 * spec.N2 <= spec.N1, "N1 << N2 or N2 << N1"
        )
    elif regime == "SmallWave":
        _require(spec.N <= 2, "N <~ 1")
    else:
        raise ValueError(f"unknown regime {regime!r}")


def _regime_rhs(spec: TileSpec, regime: str) -> float:
    L, L1, L2 = spec.L, spec.L1, spec.L2
    if regime == "TransLowMod":
        return spec.N1 ** -0.5 * (spec.A / spec.N1) ** 0.5 * (L1 * L2 * L) ** 0.5
    if regime == "TransHighMod":
        return (
            (L1 * L2 * L) ** 0.5
            * spec.N ** -0.5
            * (spec.N1 / spec.A) ** 0.5
            / max(L, L1, L2) ** 0.5
        )
    if regime == "ParallelHH":
        return (
            (L1 * L2 * L) ** (5.0 / 12.0)
            * spec.N ** -0.5
            * (spec.N / spec.N1) ** 0.25
        )
    if regime == "HighLow":
        return (
            (L1 * L2 * L) ** (5.0 / 12.0)
            * spec.N ** -0.5
            * min(spec.N1 / spec.N2, spec.N2 / spec.N1) ** (1.0 / 6.0)
        )
    if regime == "SmallWave":
        return (L * L1 * L2) ** (1.0 / 3.0)
    raise ValueError(regime)


def _resonant_radial_window(spec: TileSpec):
    """Radial support restriction keeping every pair that can reach f's band.

    With angular separation ~ |j1 - j2| * pi / A, only radii up to
    ~ 2N / (2 sin(theta_min / 2)) produce |xi_1 - xi_2| <= 2N; larger radii
    cannot interact, so discarding them is a pure support restriction.
    """
    sep = spec.angular_separation()
    if sep is None or sep < 5:
        return None
    theta_min = (sep - 4) * math.pi / spec.A
    rmax = 2.0 * spec.N / (2.0 * math.sin(theta_min / 2.0))
    rmax = min(2.0 * spec.N1, 1.2 * rmax)
    if rmax <= spec.N1 / 2:
        return None
    return (spec.N1 / 2.0, rmax)


def _regime_fields(spec: TileSpec, regime: str, refine: int, seed: int):
    """Sample (f, g1, g2) for one regime instance.

    Support restrictions (sectors, radial windows, apertures) only shrink the
    hypothesized supports, so they are always admissible; they are chosen to
    keep the interacting pair counts tractable.
    """
    if regime in ("TransLowMod", "TransHighMod", "ParallelHH"):
        dxi = spec.N1 / 32.0 / refine
        if regime == "ParallelHH":
            # parallel sectors: any radii interact, keep a thin shell
            window = (float(spec.N1), spec.N1 + float(spec.N))
        else:
            window = _resonant_radial_window(spec)
        g1 = sample_band(
            "S", spec.N1, spec.L1, sector=(spec.A, spec.j1), dxi=dxi,
            seed=3 * seed + 1, radial_window=window,
        )
        g2 = sample_band(
            "S", spec.N2, spec.L2, sector=(spec.A, spec.j2), dxi=dxi,
            seed=3 * seed + 2, radial_window=window,
        )
    elif regime == "HighLow":
        dxi = min(spec.N1, spec.N2) / 2.0 / refine
        # thin the wide band: radial shell + aperture keep the pair count
        # tractable while the diffs still sweep f's annulus
        nw = max(spec.N1, spec.N2)
        kw = dict(
            aperture=math.pi / 8.0, radial_window=(float(nw), 1.5 * nw)
        )
        k1 = kw if spec.N1 > spec.N2 else {}
        k2 = kw if spec.N2 > spec.N1 else {}
        g1 = sample_band("S", spec.N1, spec.L1, dxi=dxi, seed=3 * seed + 1, **k1)
        g2 = sample_band("S", spec.N2, spec.L2, dxi=dxi, seed=3 * seed + 2, **k2)
    else:  # SmallWave
        dxi = spec.N / 2.0 / refine
        kw = dict(
            aperture=math.pi / 8.0,
            radial_window=(float(spec.N1), spec.N1 + 3.0 * spec.N),
        )
        g1 = sample_band("S", spec.N1, spec.L1, dxi=dxi, seed=3 * seed + 1, **kw)
        g2 = sample_band("S", spec.N2, spec.L2, dxi=dxi, seed=3 * seed + 2, **kw)
    f = sample_band("W", spec.N, spec.L, sign=spec.sign, dxi=dxi, seed=3 * seed)
    return f, g1, g2


def check_regime(spec: TileSpec, regime: str, seeds, refine: int = 1) -> SweepResult:
    """Max over seeds of |I| divided by the regime's right-hand side."""
    _validate_regime(spec, regime)
    rhs = _regime_rhs(spec, regime)
    res = SweepResult(parameters=(spec, regime, refine))
    for seed in seeds:
        f, g1, g2 = _regime_fields(spec, regime, refine, seed)
        ratio = abs(sparse_trilinear(f, g1, g2)) / rhs
        res.measured.append((seed, ratio))
        res.max_ratio = max(res.max_ratio, ratio)
    return res


def _validate_bilinear(spec: TileSpec, case: str):
    if case == "SchSch":
        _require(spec.N1 <= spec.N2, "N1 <= N2")
    elif case == "WaveSchCube":
        _require(spec.cube_side is not None and spec.cube_side >= 1, "d >= 1")
    elif case == "WaveSchAnnulus":
        pass
    else:
        raise ValueError(f"unknown bilinear case {case!r}")


def check_bilinear_strichartz(
    spec: TileSpec, case: str, seeds, refine: int = 1
) -> SweepResult:
    """Max over seeds of ||product||_L2 divided by the estimate's RHS."""
    _validate_bilinear(spec, case)
    res = SweepResult(parameters=(spec, case, refine))
    # when the second band is much wider, thin it (shell + aperture) so the
    # histogram pair count stays tractable; a support restriction only
    thin = dict(aperture=math.pi / 8.0)
    for seed in seeds:
        if case == "SchSch":
            dxi = min(spec.N1, spec.N2) / 4.0 / refine
            kw = (
                dict(radial_window=(float(spec.N2), 1.5 * spec.N2), **thin)
                if spec.N2 > spec.N1
                else {}
            )
            a = sample_band("S", spec.N1, spec.L1, dxi=dxi, seed=3 * seed + 1)
            b = sample_band("S", spec.N2, spec.L2, dxi=dxi, seed=3 * seed + 2, **kw)
            rhs = (spec.N1 / spec.N2) ** 0.5 * (spec.L1 * spec.L2) ** 0.5
        elif case == "WaveSchCube":
            dxi = min(spec.cube_side / 2.0, spec.N1 / 8.0) / refine
            a = sample_band(
                "W", spec.N1, spec.L, sign=spec.sign,
                cube_side=spec.cube_side, dxi=dxi, seed=3 * seed + 1,
            )
            b = sample_band(
                "S", spec.N1, spec.L1, dxi=dxi, seed=3 * seed + 2,
                radial_window=(float(spec.N1), 1.5 * spec.N1), **thin,
            )
            rhs = (min(spec.cube_side, spec.N1) / spec.N1) ** 0.5 * (
                spec.L * spec.L1
            ) ** 0.5
        else:
            dxi = min(spec.N, spec.N1 / 4.0) / refine
            a = sample_band(
                "W", spec.N, spec.L, sign=spec.sign, dxi=dxi, seed=3 * seed + 1
            )
            b = sample_band(
                "S", spec.N1, spec.L1, dxi=dxi, seed=3 * seed + 2,
                radial_window=(float(spec.N1), 1.5 * spec.N1), **thin,
            )
            rhs = (min(spec.N, spec.N1) / spec.N1) ** 0.5 * (spec.L * spec.L1) ** 0.5
        ratio = sparse_product_l2(a, b) / rhs
        res.measured.append((seed, ratio))
        res.max_ratio = max(res.max_ratio, ratio)
    return res


def _to_linear(values: np.ndarray) -> np.ndarray:
    return np.fft.fftshift(values)


def trilinear_I(f: SpaceTimeField, g1: SpaceTimeField, g2: SpaceTimeField) -> complex:
    """Dense lattice quadrature of I(f, g1, g2) via fast correlation.

    Frequency differences outside the lattice are treated as zero (all fields
    vanish there).
    """
    if f.grid != g1.grid or f.grid != g2.grid:
        raise ValueError("all three fields must share one grid")
    fl = _to_linear(f.values)
    a = _to_linear(g1.values)
    b = _to_linear(g2.values)
    # C[d] = sum_i g1[i] g2[i - d]; full correlation via convolution with
    # the index-reversed g2
    brev = b[::-1, ::-1, ::-1]
    corr = fftconvolve(a, brev, mode="full")
    # f's linear index j corresponds to the offset d = j - n/2 per axis
    n0, n1, n2 = fl.shape
    corr = corr[
        n0 // 2 - 1 : n0 // 2 - 1 + n0,
        n1 // 2 - 1 : n1 // 2 - 1 + n1,
        n2 // 2 - 1 : n2 // 2 - 1 + n2,
    ]
    vol = f.grid.cell_volume
    return complex(np.sum(fl * corr) * vol * vol)


def trilinear_I_direct(
    f: SpaceTimeField, g1: SpaceTimeField, g2: SpaceTimeField
) -> complex:
    """Direct-summation oracle for trilinear_I (small lattices only)."""
    if f.grid != g1.grid or f.grid != g2.grid:
        raise ValueError("all three fields must share one grid")
    fl = _to_linear(f.values)
    a = _to_linear(g1.values)
    b = _to_linear(g2.values)
    nx, ny, nt = fl.shape
    acc = 0.0 + 0.0j
    for i1 in range(nx):
        for j1 in range(ny):
            for k1 in range(nt):
                v1 = a[i1, j1, k1]
                if v1 == 0:
                    continue
                for i2 in range(nx):
                    di = i1 - i2 + nx // 2
                    if not 0 <= di < nx:
                        continue
                    for j2 in range(ny):
                        dj = j1 - j2 + ny // 2
                        if not 0 <= dj < ny:
                            continue
                        for k2 in range(nt):
                            dk = k1 - k2 + nt // 2
                            if not 0 <= dk < nt:
                                continue
                            acc += fl[di, dj, dk] * v1 * b[i2, j2, k2]
    vol = f.grid.cell_volume
    return complex(acc * vol * vol)


def make_dyadic_random_field(
    grid: SpaceTimeGrid, N: int, L: int, flavor: str, seed: int
) -> SpaceTimeField:
    """Unit-L2 complex Gaussian field supported exactly on the (N, L) band."""
    from .cutoffs import psi_n

    absxi = grid.spatial.abs_xi()
    ring = psi_n(N, absxi)
    mod = psi_n(L, grid.modulation(flavor))
    mask = ring[:, :, None] * mod
    if not np.any(mask > 0):
        raise ValueError(f"empty band N={N}, L={L}, flavor={flavor} on this grid")
    rng = np.random.default_rng(seed)
    shape = mask.shape
    vals = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) * mask
    w = SpaceTimeField(grid, vals)
    nrm = w.l2_norm()
    w.values /= nrm
    return w


def check_trilinear_full(
    seeds, grid: SpaceTimeGrid, variant: str = "direct"
) -> SweepResult:
    """Full-norm trilinear ratio on dense multiband random fields."""
    if variant not in ("direct", "conjugate"):
        raise ValueError(f"unknown variant {variant!r}")
    rng_spec_u = NormSpec("S", 0.0, 5.0 / 12.0, 1)
    res = SweepResult(parameters=("trilinear_full", variant))
    for seed in seeds:
        rng = np.random.default_rng(seed)

        def multiband():
            vals = rng.standard_normal(
                (grid.spatial.points, grid.spatial.points, grid.points_in_time)
            ) + 1j * rng.standard_normal(
                (grid.spatial.points, grid.spatial.points, grid.points_in_time)
            )
            # mild decay so the dyadic sums are dominated by resolved bands
            absxi = grid.spatial.abs_xi()[:, :, None]
            tau = grid.tau_1d()[None, None, :]
            vals /= (1.0 + absxi ** 2 + np.abs(tau)) ** 1.5
            f = SpaceTimeField(grid, vals)
            f.values /= f.l2_norm()
            return f

        u1, u2, v = multiband(), multiband(), multiband()
        if variant == "conjugate":
            vv = SpaceTimeField(grid, conjugate_reflect(v.values))
            wflavor = "W-"
        else:
            vv = v
            wflavor = "W+"
        num = abs(trilinear_I(vv, u1, u2))
        den = (
            bourgain_norm(u1, rng_spec_u)
            * bourgain_norm(u2, rng_spec_u)
            * bourgain_norm(vv, NormSpec(wflavor, -0.5, 5.0 / 12.0, 1))
        )
        ratio = num / den
        res.measured.append((seed, ratio))
        res.max_ratio = max(res.max_ratio, ratio)
    return res


def fit_exponent(points) -> tuple[float, float]:
    """Least-squares slope of log(value) against log(scale), with residual."""
    pts = list(points)
    if len(pts) < 3:
        raise ValueError("need at least 3 points for a slope fit")
    scales = np.array([p[0] for p in pts], dtype=float)
    values = np.array([p[1] for p in pts], dtype=float)
    if np.any(values <= 0) or np.any(scales <= 0):
        raise ValueError("slope fit requires positive scales and values")
    x, y = np.log(scales), np.log(values)
    coef, res_arr, *_ = np.polyfit(x, y, 1, full=True)
    residual = float(res_arr[0]) if len(res_arr) else 0.0
    return float(coef[0]), residual
